#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "galgeo/errors.hpp"

namespace galgeo {

// Chain indices for the tower F_p < F_q < F_{q^n} < F_{q^{nt}}.
enum class LayerId : int { fp = 0, fq = 1, fqn = 2, fqnt = 3 };

constexpr int kNumLayers = 4;

constexpr uint64_t kDefaultEnumCap = uint64_t{1} << 26;

struct TowerParams {
  uint32_t p = 2;  // prime characteristic
  uint32_t e = 1;  // [F_q : F_p]
  uint32_t n = 1;  // [F_{q^n} : F_q]
  uint32_t t = 1;  // [F_{q^{nt}} : F_{q^n}]
  uint64_t enum_cap = kDefaultEnumCap;
};

// An element is its layer plus the canonical little-endian radix encoding:
// enc = sum_i c_i * b^i where (c_0, c_1, ...) are the coefficients over the
// layer below (constant term first) and b is that layer's size. Encoding 0
// is the additive identity, 1 the multiplicative identity, in every layer.
struct Elt {
  LayerId layer;
  uint32_t enc;
  friend bool operator==(const Elt&, const Elt&) = default;
};

// Arithmetic for one field in the chain. Lookup tables (discrete log plus
// Zech logarithms in odd characteristic) are built bottom-up for layers of
// at most 2^20 elements; larger layers fall back to coefficient arithmetic
// over the layer below.
class Layer {
 public:
  // Prime field.
  explicit Layer(uint32_t p);
  // Extension of `base` by the lexicographically least monic irreducible of
  // the given degree. q_degree is this layer's degree over F_q = GF(q_size)
  // (0 when the layer sits at or below F_q); want_frob_tables additionally
  // precomputes all q-power Frobenius maps.
  Layer(const Layer* base, uint32_t degree, uint32_t q_degree, uint64_t q_size, bool want_frob_tables);

  uint64_t size() const { return size_; }
  uint32_t characteristic() const { return p_; }
  uint32_t degree() const { return deg_; }  // over the layer below
  uint32_t q_degree() const { return qdeg_; }
  const Layer* base() const { return base_; }
  // Modulus coefficients over the base layer, constant term first, monic
  // (degree+1 entries). Empty for the prime layer.
  const std::vector<uint32_t>& modulus() const { return modulus_; }
  bool has_tables() const { return tables_; }
  uint32_t generator() const { return gen_; }

  // The table-backed fast paths live in the header so the sweeps inline them.
  uint32_t add(uint32_t a, uint32_t b) const {
    if (char2_) return a ^ b;
    if (!tables_) return add_slow(a, b);
    if (!a) return b;
    if (!b) return a;
    uint64_t m = size_ - 1;
    uint32_t la = log_[a], lb = log_[b];
    uint32_t d = uint32_t((lb + m - la) % m);
    uint32_t z = zech_[d];
    if (z == kZechZero) return 0;
    return exp_[(la + z) % m];
  }
  uint32_t neg(uint32_t a) const {
    if (char2_) return a;
    if (!tables_) return neg_slow(a);
    if (!a) return 0;
    uint64_t m = size_ - 1;
    return exp_[(log_[a] + m / 2) % m];
  }
  uint32_t sub(uint32_t a, uint32_t b) const {
    if (char2_) return a ^ b;
    return add(a, neg(b));
  }
  uint32_t mul(uint32_t a, uint32_t b) const {
    if (!a || !b) return 0;
    if (!tables_) return mul_slow(a, b);
    return exp_[(uint64_t(log_[a]) + log_[b]) % (size_ - 1)];
  }
  uint32_t inv(uint32_t a) const {
    if (!a) fail(Errc::division_by_zero, "inverse of zero");
    if (!tables_) return pow_slow(a, size_ - 2);
    uint64_t m = size_ - 1;
    return exp_[(m - log_[a]) % m];
  }
  uint32_t pow(uint32_t a, uint64_t e) const {
    if (!a) return e ? 0 : 1;
    if (!tables_) return pow_slow(a, e);
    uint64_t m = size_ - 1;
    return exp_[(uint64_t(log_[a]) * (e % m)) % m];
  }
  // a^{q^i}; valid on layers with q_degree >= 1, i reduced mod q_degree.
  uint32_t frob_q(uint32_t a, uint64_t i) const {
    if (qdeg_ == 0) return a;  // at or below F_q every q-power map is trivial
    i %= qdeg_;
    if (!frob_.empty()) return frob_[i][a];
    return frob_q_slow(a, i);
  }
  // Trace down to F_q (layers above F_q only): sum of all q-conjugates.
  uint32_t trace_q(uint32_t a) const;
  uint32_t norm_q(uint32_t a) const;

  // Base-layer digits of the canonical encoding.
  uint32_t digit(uint32_t a, uint32_t i) const {
    if (prime_) return a;
    return uint32_t((a / base_pow_[i]) % base_size_);
  }
  void to_digits(uint32_t a, uint32_t* out) const;  // deg_ entries
  uint32_t from_digits(const uint32_t* digits) const;

  static constexpr uint32_t kZechZero = 0xffffffffu;

 private:
  void build_tables();
  uint32_t mul_slow(uint32_t a, uint32_t b) const;
  uint32_t add_slow(uint32_t a, uint32_t b) const;
  uint32_t neg_slow(uint32_t a) const;
  uint32_t pow_slow(uint32_t a, uint64_t e) const;
  uint32_t frob_q_slow(uint32_t a, uint64_t i) const;

  const Layer* base_ = nullptr;
  uint32_t p_ = 2;
  uint32_t deg_ = 1;
  uint32_t qdeg_ = 0;
  uint64_t qsize_ = 0;
  uint64_t size_ = 2;
  uint64_t base_size_ = 1;
  bool char2_ = false;
  bool prime_ = false;
  std::vector<uint32_t> modulus_;
  std::vector<uint64_t> base_pow_;  // base_size_^i for digit extraction

  bool tables_ = false;
  uint32_t gen_ = 0;
  std::vector<uint32_t> exp_, log_, zech_;  // zech_ only in odd characteristic
  std::vector<std::vector<uint32_t>> frob_;
  std::vector<uint32_t> trace_;
};

class FieldTower {
 public:
  explicit FieldTower(const TowerParams& params);
  FieldTower(const FieldTower&) = delete;
  FieldTower& operator=(const FieldTower&) = delete;

  const TowerParams& params() const { return params_; }
  uint64_t q() const { return layer(LayerId::fq).size(); }
  const Layer& layer(LayerId id) const { return *layers_[int(id)]; }
  uint64_t size(LayerId id) const { return layer(id).size(); }

  Elt zero(LayerId id) const { return {id, 0}; }
  Elt one(LayerId id) const { return {id, 1}; }
  Elt elt(LayerId id, uint32_t enc) const;

  Elt add(Elt a, Elt b) const;
  Elt sub(Elt a, Elt b) const;
  Elt neg(Elt a) const;
  Elt mul(Elt a, Elt b) const;
  Elt inv(Elt a) const;
  Elt pow(Elt a, uint64_t e) const;
  // a^{q^i}. Layers at or below F_q are fixed elementwise; above, i is
  // reduced mod the layer's degree over F_q.
  Elt frobenius(Elt a, int64_t i) const;
  Elt trace_to_base(Elt a) const;  // F_{q^n} -> F_q
  Elt norm_to_base(Elt a) const;
  Elt embed(Elt a, LayerId target) const;
  std::optional<Elt> try_restrict(Elt a, LayerId target) const;

  // All elements of the layer in canonical-encoding order (cap-checked).
  std::vector<Elt> enumerate(LayerId id) const;

 private:
  const Layer& require_layer(Elt a, LayerId id, const char* op) const;

  TowerParams params_;
  std::unique_ptr<Layer> layers_[kNumLayers];
};

}  // namespace galgeo
