#include "galgeo/tower.hpp"

#include <algorithm>
#include <string>

namespace galgeo {

namespace {

constexpr uint64_t kTableLimit = uint64_t{1} << 20;

bool is_prime(uint64_t v) {
  if (v < 2) return false;
  for (uint64_t d = 2; d * d <= v; ++d)
    if (v % d == 0) return false;
  return true;
}

std::vector<uint64_t> prime_factors(uint64_t v) {
  std::vector<uint64_t> out;
  for (uint64_t d = 2; d * d <= v; ++d) {
    if (v % d == 0) {
      out.push_back(d);
      while (v % d == 0) v /= d;
    }
  }
  if (v > 1) out.push_back(v);
  return out;
}

// Dense polynomials over a layer, little-endian coefficients. Used only for
// modulus search and verification; runtime arithmetic never touches these.
using Poly = std::vector<uint32_t>;

int poly_deg(const Poly& f) {
  for (int i = int(f.size()) - 1; i >= 0; --i)
    if (f[size_t(i)]) return i;
  return -1;
}

void poly_trim(Poly& f) { f.resize(size_t(poly_deg(f) + 1)); }

Poly poly_mod(const Layer& k, Poly a, const Poly& m) {
  int dm = poly_deg(m);
  uint32_t lead_inv = k.inv(m[size_t(dm)]);
  for (int i = poly_deg(a); i >= dm; --i) {
    uint32_t c = a[size_t(i)];
    if (!c) continue;
    uint32_t f = k.mul(c, lead_inv);
    for (int j = 0; j <= dm; ++j)
      a[size_t(i - dm + j)] = k.sub(a[size_t(i - dm + j)], k.mul(f, m[size_t(j)]));
  }
  poly_trim(a);
  return a;
}

Poly poly_mulmod(const Layer& k, const Poly& a, const Poly& b, const Poly& m) {
  if (poly_deg(a) < 0 || poly_deg(b) < 0) return {};
  Poly acc(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (size_t j = 0; j < b.size(); ++j)
      if (b[j]) acc[i + j] = k.add(acc[i + j], k.mul(a[i], b[j]));
  }
  return poly_mod(k, std::move(acc), m);
}

Poly poly_powmod(const Layer& k, Poly base, uint64_t e, const Poly& m) {
  Poly result{1};
  base = poly_mod(k, std::move(base), m);
  while (e) {
    if (e & 1) result = poly_mulmod(k, result, base, m);
    e >>= 1;
    if (e) base = poly_mulmod(k, base, base, m);
  }
  return result;
}

Poly poly_gcd(const Layer& k, Poly a, Poly b) {
  poly_trim(a);
  poly_trim(b);
  while (poly_deg(b) >= 0) {
    Poly r = poly_mod(k, a, b);
    a = std::move(b);
    b = std::move(r);
  }
  int d = poly_deg(a);
  if (d >= 0) {
    uint32_t li = k.inv(a[size_t(d)]);
    for (auto& c : a) c = k.mul(c, li);
  }
  return a;
}

// Rabin's criterion: f (monic, degree d) is irreducible over the base field
// iff x^{b^d} = x mod f and gcd(x^{b^{d/l}} - x, f) = 1 for every prime l|d.
bool poly_irreducible(const Layer& k, const Poly& f) {
  int d = poly_deg(f);
  if (d <= 0) return false;
  if (d == 1) return true;
  uint64_t b = k.size();
  Poly x{0, 1};
  for (uint64_t l : prime_factors(uint64_t(d))) {
    uint64_t exp = 1;
    for (uint64_t i = 0; i < uint64_t(d) / l; ++i) exp *= b;
    Poly xp = poly_powmod(k, x, exp, f);
    // xp - x
    Poly diff = xp;
    if (diff.size() < 2) diff.resize(2, 0);
    diff[1] = k.sub(diff[1], 1);
    if (poly_deg(poly_gcd(k, diff, f)) != 0) return false;
  }
  uint64_t exp = 1;
  for (int i = 0; i < d; ++i) exp *= b;
  Poly xq = poly_powmod(k, x, exp, f);
  poly_trim(xq);
  return xq == Poly{0, 1};
}

// Lexicographically least monic irreducible of the given degree, comparing
// coefficient sequences constant term first, entries ordered by encoding.
Poly find_modulus(const Layer& base, uint32_t degree) {
  uint64_t b = base.size();
  Poly f(degree + 1, 0);
  f[degree] = 1;
  uint64_t count = 1;
  for (uint32_t i = 0; i < degree; ++i) count *= b;  // fits: layer size capped
  for (uint64_t idx = 0; idx < count; ++idx) {
    // idx enumerates (c_0,...,c_{d-1}) in lex order: c_0 most significant.
    uint64_t rest = idx;
    for (uint32_t i = 0; i < degree; ++i) {
      uint64_t place = 1;
      for (uint32_t j = i + 1; j < degree; ++j) place *= b;
      f[i] = uint32_t(rest / place);
      rest %= place;
    }
    if (poly_irreducible(base, f)) return f;
  }
  fail(Errc::bad_input, "no irreducible modulus found (unreachable for valid degrees)");
}

}  // namespace

Layer::Layer(uint32_t p) {
  if (!is_prime(p)) fail(Errc::non_prime_characteristic, "characteristic " + std::to_string(p) + " is not prime");
  p_ = p;
  prime_ = true;
  deg_ = 1;
  size_ = p;
  base_size_ = 1;
  char2_ = (p == 2);
  base_pow_ = {1};
  if (size_ <= kTableLimit) build_tables();
}

Layer::Layer(const Layer* base, uint32_t degree, uint32_t q_degree, uint64_t q_size, bool want_frob_tables) {
  base_ = base;
  p_ = base->characteristic();
  deg_ = degree;
  qdeg_ = q_degree;
  qsize_ = q_size;
  base_size_ = base->size();
  char2_ = (p_ == 2);
  size_ = 1;
  for (uint32_t i = 0; i < degree; ++i) size_ *= base_size_;
  base_pow_.resize(degree);
  uint64_t pw = 1;
  for (uint32_t i = 0; i < degree; ++i) {
    base_pow_[i] = pw;
    pw *= base_size_;
  }
  modulus_ = find_modulus(*base, degree);
  if (size_ <= kTableLimit) {
    build_tables();
    if (want_frob_tables && qdeg_ >= 1) {
      frob_.assign(qdeg_, std::vector<uint32_t>(size_));
      for (uint64_t a = 0; a < size_; ++a) frob_[0][a] = uint32_t(a);
      if (qdeg_ > 1) {
        std::vector<uint32_t> f1(size_);
        for (uint64_t a = 0; a < size_; ++a) f1[a] = pow(uint32_t(a), qsize_);
        frob_[1] = f1;
        for (uint32_t i = 2; i < qdeg_; ++i)
          for (uint64_t a = 0; a < size_; ++a) frob_[i][a] = f1[frob_[i - 1][a]];
      }
      trace_.resize(size_);
      for (uint64_t a = 0; a < size_; ++a) {
        uint32_t s = 0;
        for (uint32_t i = 0; i < qdeg_; ++i) s = add(s, frob_[i][uint32_t(a)]);
        trace_[a] = s;
      }
    }
  }
}

void Layer::to_digits(uint32_t a, uint32_t* out) const {
  uint64_t rest = a;
  for (uint32_t i = 0; i < deg_; ++i) {
    out[i] = uint32_t(rest % base_size_);
    rest /= base_size_;
  }
}

uint32_t Layer::from_digits(const uint32_t* digits) const {
  uint64_t acc = 0;
  for (uint32_t i = deg_; i-- > 0;) acc = acc * base_size_ + digits[i];
  return uint32_t(acc);
}

uint32_t Layer::add_slow(uint32_t a, uint32_t b) const {
  if (prime_) return uint32_t((uint64_t(a) + b) % size_);
  uint32_t da[64], db[64];
  to_digits(a, da);
  to_digits(b, db);
  for (uint32_t i = 0; i < deg_; ++i) da[i] = base_->add(da[i], db[i]);
  return from_digits(da);
}

uint32_t Layer::neg_slow(uint32_t a) const {
  if (prime_) return a ? uint32_t(size_ - a) : 0;
  uint32_t da[64];
  to_digits(a, da);
  for (uint32_t i = 0; i < deg_; ++i) da[i] = base_->neg(da[i]);
  return from_digits(da);
}

uint32_t Layer::mul_slow(uint32_t a, uint32_t b) const {
  if (prime_) return uint32_t((uint64_t(a) * b) % size_);
  uint32_t da[64], db[64];
  to_digits(a, da);
  to_digits(b, db);
  uint32_t acc[127] = {0};
  for (uint32_t i = 0; i < deg_; ++i) {
    if (!da[i]) continue;
    for (uint32_t j = 0; j < deg_; ++j)
      if (db[j]) acc[i + j] = base_->add(acc[i + j], base_->mul(da[i], db[j]));
  }
  for (uint32_t i = 2 * deg_ - 2 + 1; i-- > deg_;) {
    uint32_t c = acc[i];
    if (!c) continue;
    acc[i] = 0;
    for (uint32_t j = 0; j < deg_; ++j)
      acc[i - deg_ + j] = base_->sub(acc[i - deg_ + j], base_->mul(c, modulus_[j]));
  }
  return from_digits(acc);
}

uint32_t Layer::frob_q_slow(uint32_t a, uint64_t i) const {
  uint64_t ex = 1;
  for (uint64_t k = 0; k < i; ++k) ex *= qsize_;
  return pow(a, ex);
}

uint32_t Layer::pow_slow(uint32_t a, uint64_t e) const {
  uint32_t result = 1, base = a;
  while (e) {
    if (e & 1) result = mul_slow(result, base);
    e >>= 1;
    if (e) base = mul_slow(base, base);
  }
  return result;
}

void Layer::build_tables() {
  uint64_t m = size_ - 1;
  // Least-encoding primitive element.
  uint32_t g = 1;
  auto factors = prime_factors(m);
  for (uint64_t cand = m == 1 ? 1 : 2; cand < size_; ++cand) {
    bool ok = true;
    for (uint64_t l : factors)
      if (pow_slow(uint32_t(cand), m / l) == 1) {
        ok = false;
        break;
      }
    if (ok) {
      g = uint32_t(cand);
      break;
    }
  }
  gen_ = g;
  exp_.resize(m);
  log_.assign(size_, 0);
  uint32_t v = 1;
  for (uint64_t i = 0; i < m; ++i) {
    exp_[i] = v;
    log_[v] = uint32_t(i);
    v = mul_slow(v, g);
  }
  if (!char2_) {
    zech_.resize(m);
    for (uint64_t l = 0; l < m; ++l) {
      uint32_t s = add_slow(1, exp_[l]);
      zech_[l] = s ? log_[s] : Layer::kZechZero;
    }
  }
  tables_ = true;
}


uint32_t Layer::trace_q(uint32_t a) const {
  if (!trace_.empty()) return trace_[a];
  uint32_t s = 0;
  for (uint32_t i = 0; i < qdeg_; ++i) s = add(s, frob_q(a, i));
  return s;
}

uint32_t Layer::norm_q(uint32_t a) const {
  uint32_t s = 1;
  for (uint32_t i = 0; i < qdeg_; ++i) s = mul(s, frob_q(a, i));
  return s;
}

FieldTower::FieldTower(const TowerParams& params) : params_(params) {
  if (!is_prime(params.p)) fail(Errc::non_prime_characteristic, "p must be prime");
  if (params.e < 1 || params.n < 1 || params.t < 1) fail(Errc::bad_input, "degrees must be >= 1");
  // Reject towers whose top layer would blow past the enumeration cap.
  long double total = 1;
  for (uint32_t i = 0; i < params.e * params.n * params.t; ++i) {
    total *= params.p;
    if (total > (long double)params.enum_cap)
      fail(Errc::size_cap_exceeded, "tower size q^{nt} exceeds the enumeration cap");
  }
  layers_[0] = std::make_unique<Layer>(params.p);
  uint64_t qsz = 1;
  for (uint32_t i = 0; i < params.e; ++i) qsz *= params.p;
  layers_[1] = std::make_unique<Layer>(layers_[0].get(), params.e, 0, qsz, false);
  layers_[2] = std::make_unique<Layer>(layers_[1].get(), params.n, params.n, qsz, true);
  layers_[3] = std::make_unique<Layer>(layers_[2].get(), params.t, params.n * params.t, qsz, false);
}

Elt FieldTower::elt(LayerId id, uint32_t enc) const {
  if (enc >= size(id)) fail(Errc::bad_input, "encoding out of range for layer");
  return {id, enc};
}

const Layer& FieldTower::require_layer(Elt a, LayerId id, const char* op) const {
  if (a.layer != id) fail(Errc::layer_mismatch, std::string(op) + ": element in wrong layer");
  return layer(id);
}

Elt FieldTower::add(Elt a, Elt b) const {
  if (a.layer != b.layer) fail(Errc::layer_mismatch, "add: layers differ");
  return {a.layer, layer(a.layer).add(a.enc, b.enc)};
}

Elt FieldTower::sub(Elt a, Elt b) const {
  if (a.layer != b.layer) fail(Errc::layer_mismatch, "sub: layers differ");
  return {a.layer, layer(a.layer).sub(a.enc, b.enc)};
}

Elt FieldTower::neg(Elt a) const { return {a.layer, layer(a.layer).neg(a.enc)}; }

Elt FieldTower::mul(Elt a, Elt b) const {
  if (a.layer != b.layer) fail(Errc::layer_mismatch, "mul: layers differ");
  return {a.layer, layer(a.layer).mul(a.enc, b.enc)};
}

Elt FieldTower::inv(Elt a) const { return {a.layer, layer(a.layer).inv(a.enc)}; }

Elt FieldTower::pow(Elt a, uint64_t e) const { return {a.layer, layer(a.layer).pow(a.enc, e)}; }

Elt FieldTower::frobenius(Elt a, int64_t i) const {
  const Layer& l = layer(a.layer);
  if (l.q_degree() == 0) return a;  // F_p, F_q: x -> x^{q^i} is the identity
  int64_t d = l.q_degree();
  int64_t r = ((i % d) + d) % d;
  return {a.layer, l.frob_q(a.enc, uint64_t(r))};
}

Elt FieldTower::trace_to_base(Elt a) const {
  require_layer(a, LayerId::fqn, "trace_to_base");
  uint32_t tr = layer(LayerId::fqn).trace_q(a.enc);
  if (tr >= q()) fail(Errc::bad_input, "internal: trace left F_q");
  return {LayerId::fq, tr};
}

Elt FieldTower::norm_to_base(Elt a) const {
  require_layer(a, LayerId::fqn, "norm_to_base");
  uint32_t nm = layer(LayerId::fqn).norm_q(a.enc);
  if (nm >= q()) fail(Errc::bad_input, "internal: norm left F_q");
  return {LayerId::fq, nm};
}

Elt FieldTower::embed(Elt a, LayerId target) const {
  if (int(target) < int(a.layer)) fail(Errc::layer_mismatch, "embed: target below element layer");
  // Chain layers are nested extensions, so the subfield image is exactly the
  // constant-digit elements: the encoding carries over unchanged.
  return {target, a.enc};
}

std::optional<Elt> FieldTower::try_restrict(Elt a, LayerId target) const {
  if (int(target) > int(a.layer)) fail(Errc::layer_mismatch, "try_restrict: target above element layer");
  if (a.enc >= size(target)) return std::nullopt;
  // enc < |target| is necessary; sufficiency needs all higher digits zero,
  // which for nested radix encodings is the same condition.
  return Elt{target, a.enc};
}

std::vector<Elt> FieldTower::enumerate(LayerId id) const {
  uint64_t sz = size(id);
  if (sz > params_.enum_cap) fail(Errc::size_cap_exceeded, "layer too large to enumerate");
  std::vector<Elt> out;
  out.reserve(sz);
  for (uint64_t v = 0; v < sz; ++v) out.push_back({id, uint32_t(v)});
  return out;
}

}  // namespace galgeo
