#pragma once

#include <optional>

#include "galgeo/exec.hpp"
#include "galgeo/qpoly.hpp"

namespace galgeo {

// F_{q^n}-linear rank-metric code presented by independent q-polynomial
// generators; dim() is the F_{q^n}-dimension r <= n.
struct RankCode {
  const FieldTower* tower = nullptr;
  std::vector<QPoly> gens;

  uint32_t dim() const { return uint32_t(gens.size()); }
};

RankCode make_code(const FieldTower& tw, std::vector<QPoly> gens);
RankCode monomial_code(const FieldTower& tw, const std::vector<uint32_t>& exps);

// Canonical generator matrix (RREF of the coefficient rows over F_{q^n}).
Mat code_coeff_rref(const RankCode& c);
bool same_code(const RankCode& a, const RankCode& b);

struct MrdReport {
  bool is_mrd = false;
  uint32_t min_distance = 0;
  std::vector<uint64_t> kernel_spectrum;  // projective codeword counts per kernel dim 0..n
  std::optional<QPoly> witness;           // lexicographically least violating codeword
  bool via_complement = false;            // is_mrd transported from the complementary code
};

// Enumerates one representative per F_{q^n}-scalar class of nonzero
// codewords and classifies kernel dimensions.
MrdReport mrd_check(const RankCode& c, const ExecPolicy& policy = {});

// Complement reduction for monomial codes: the code on I is declared MRD iff
// the code on {0..n-1} \ I is. Usable only after the rule itself has passed
// the exhaustive q=2, n<=5 validation sweep.
bool complement_rule_validated();
MrdReport mrd_check_via_complement(const FieldTower& tw, const std::vector<uint32_t>& exps,
                                   const ExecPolicy& policy = {});

RankCode adjoint_code(const RankCode& c);

struct IdealiserReport {
  uint32_t dim = 0;             // F_q-dimension
  std::vector<QPoly> basis;     // canonical kernel basis
  bool is_scalar_field = false;  // span equals {a x : a in F_{q^n}}
};

IdealiserReport left_idealiser(const RankCode& c);
IdealiserReport right_idealiser(const RankCode& c);

// Cyclic-shift equivalence of monomial exponent sets; returns the least
// witnessing shift s with I1 = I2 + s (mod n).
std::optional<uint32_t> monomial_shift_equivalent(std::vector<uint32_t> i1, std::vector<uint32_t> i2,
                                                  uint32_t n);

struct ProgressionWitness {
  uint32_t length = 0;
  uint32_t diff = 0;             // common difference, coprime to n (0 for length <= 1)
  std::vector<uint32_t> exps;    // the subprogression in walk order
};

// Longest subset of I of the form {a, a+d, ..., a+(L-1)d} mod n with
// gcd(d,n)=1: a lower bound for the Gabidulin index of the monomial code.
ProgressionWitness gabidulin_subprogression(const std::vector<uint32_t>& exps, uint32_t n);

}  // namespace galgeo
