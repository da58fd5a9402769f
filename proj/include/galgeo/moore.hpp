#pragma once

#include <optional>

#include "galgeo/rankcodes.hpp"

namespace galgeo {

// Normalized exponent set: sorted distinct residues mod n with minimum 0
// (Moore-ness is shift-invariant, so the normalized form is canonical).
struct ExponentSet {
  uint32_t n = 0;
  std::vector<uint32_t> exps;

  uint32_t k() const { return uint32_t(exps.size()); }
  friend bool operator==(const ExponentSet&, const ExponentSet&) = default;
};

ExponentSet make_exponent_set(uint32_t n, std::vector<uint32_t> exps);

enum class MooreMethod { det_oracle, mrd_criterion, both };

struct ProgressionInfo {
  bool is_progression = false;
  uint32_t d = 0;
  uint32_t shift = 0;
};

// Whether I is a cyclic shift of {0, d, ..., (k-1)d} with gcd(d,n)=1;
// reports the least such d and its least shift.
ProgressionInfo classify_progression(const ExponentSet& I);

struct MooreVerdict {
  ExponentSet I;
  uint64_t q = 0;
  bool is_moore = false;
  MooreMethod method = MooreMethod::mrd_criterion;
  bool complement_fastpath = false;
  // An F_q-independent tuple A with det M_{A,I} = 0, when not Moore.
  std::optional<std::vector<uint32_t>> witness;
  ProgressionInfo progression;
};

// k x k matrix with entry (row j, col l) = A[j]^{q^{exps[l]}}.
Mat moore_matrix(const FieldTower& tw, const std::vector<uint32_t>& A,
                 const std::vector<uint32_t>& exps);
Elt moore_det(const FieldTower& tw, const std::vector<uint32_t>& A,
              const std::vector<uint32_t>& exps);

// Brute-force oracle: sweeps every F_q-independent tuple (dependent tuples
// have identically vanishing determinant and are skipped).
MooreVerdict is_moore_det(const FieldTower& tw, const ExponentSet& I, const ExecPolicy& policy = {});

// MRD criterion: delegates to the monomial-code kernel sweep. When
// allow_complement is set and the direct sweep would blow the cap, the
// validated complement reduction is used instead.
MooreVerdict is_moore_mrd(const FieldTower& tw, const ExponentSet& I, const ExecPolicy& policy = {},
                          bool allow_complement = false);

struct MooreOptions {
  // Largest q^{nk} for which the determinant oracle also runs (and is
  // cross-checked) when the method is chosen automatically.
  uint64_t oracle_cap = uint64_t{1} << 22;
  std::optional<MooreMethod> method;  // forced method; unset = auto
  bool allow_complement = true;
};

MooreVerdict is_moore(const FieldTower& tw, const ExponentSet& I, const MooreOptions& opts = {},
                      const ExecPolicy& policy = {});

// Every normalized exponent set of size k (one representative per cyclic
// shift class when up_to_shift), classified and checked against the
// structural necessary conditions.
std::vector<MooreVerdict> search_all(const FieldTower& tw, uint32_t k, bool up_to_shift,
                                     const MooreOptions& opts = {}, const ExecPolicy& policy = {});

// gcd(I \ {0} union {n}) == 1: the intersection of the fixed fields of the
// companion automorphisms is exactly F_q.
bool check_fix_intersection(const ExponentSet& I);
// For |I| = 3: gcd(i1, n) == 1 or gcd(i2, n) == 1.
bool check_gcd_pair(const ExponentSet& I);

}  // namespace galgeo
