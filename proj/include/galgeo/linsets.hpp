#pragma once

#include <optional>

#include "galgeo/exec.hpp"
#include "galgeo/linalg.hpp"

namespace galgeo {

// Invertible F_{q^n}-semilinear map on F_{q^{nt}}: v -> M * v^{q^exponent},
// acting on coordinates over the fixed power basis of F_{q^{nt}} over
// F_{q^n}. Strictly semilinear means exponent != 0.
struct SemilinearMap {
  Mat matrix;         // t x t over F_{q^n}, invertible
  uint32_t exponent;  // companion automorphism x -> x^{q^exponent}
};

// Defining data of U = {(x, f_2(x), ..., f_{h+1}(x))}: maps f_2..f_{h+1}
// with pairwise distinct nonzero companion exponents (f_1 = identity).
struct LinearSetSpec {
  const FieldTower* tower = nullptr;
  uint32_t h = 0;
  std::vector<SemilinearMap> maps;

  uint32_t t() const { return tower->params().t; }
  uint32_t r() const { return (h + 1) * t(); }
  // {0, i_2, ..., i_{h+1}} in map order
  std::vector<uint32_t> exponent_set() const;
};

LinearSetSpec spec_from_exponents(const FieldTower& tw, const std::vector<uint32_t>& exps);
void validate_spec(const LinearSetSpec& spec);

// Deduplicated point list with weights, sorted lexicographically by the
// canonical coordinate vector.
struct PointSet {
  uint32_t dim = 0;  // coordinates per point
  std::vector<uint32_t> coords;
  std::vector<uint32_t> weights;

  uint64_t count() const { return dim ? coords.size() / dim : 0; }
  const uint32_t* at(uint64_t i) const { return coords.data() + i * dim; }
  std::optional<uint64_t> find(const FieldTower& tw, const uint32_t* v) const;
};

struct LinearSet {
  const FieldTower* tower = nullptr;
  uint32_t r = 0;  // ambient vector dimension over F_{q^n}
  FqSubspace U;    // rank = dim over F_q
  PointSet pts;
  // Ambient F_{q^n}-linear maps validated to preserve U; used to cut point
  // sweeps down to orbit representatives.
  std::vector<Mat> stabilizers;

  uint32_t rank() const { return U.dim(); }
};

LinearSet build_from_spec(const LinearSetSpec& spec);
// Materialize a linear set directly from an F_q-subspace (enumerates all
// q^dim - 1 nonzero vectors; cap-checked).
LinearSet linear_set_from_subspace(const FieldTower& tw, uint32_t r, FqSubspace u);

uint32_t weight(const LinearSet& ls, const ProjSubspace& omega);
// Weight spectrum {weight -> point count}.
std::vector<std::pair<uint32_t, uint64_t>> weight_spectrum(const LinearSet& ls);
bool spans_ambient(const LinearSet& ls);

struct ScatterednessViolation {
  uint32_t span_dim = 0;                // vector dimension of the violating span
  std::vector<uint64_t> point_indices;  // defining points in ls.pts order
  uint32_t weight = 0;
};

struct ScatterednessReport {
  bool scattered = false;
  bool spans = false;
  std::optional<ScatterednessViolation> violation;
};

// h-scatteredness: <L> = Lambda and no span of up to h points of L carries
// weight h+1 or more (equivalent to the (h-1)-subspace weight definition).
ScatterednessReport is_h_scattered(const LinearSet& ls, uint32_t h, const ExecPolicy& policy = {});

// The h-subspaces Pi_x, one per projective point of PG(t-1, q^{nt} over
// F_{q^n}), spanned by the per-block images of x.
std::vector<ProjSubspace> pseudoregulus_elements_from_spec(const LinearSetSpec& spec);

struct PseudoregulusReport {
  std::vector<ProjSubspace> elements;
  std::vector<ProjSubspace> transversals;
  uint64_t expected_count = 0;
  bool def_a = false;             // count + disjointness + weight n
  bool def_b = false;             // transversal count, span, K_i misses L
  bool subgeometry_branch = false;  // n = h+1: uniqueness refused
  bool unique = false;
};

// Blind detection from the point set: weight-n h-subspaces spanned by
// (h+1)-subsets of points, deduplicated, then verified against the
// definition. In strict mode a census that cannot pass verification throws
// not_pseudoregulus_type (the subgeometry branch n = h+1 never throws);
// lenient mode reports the flags instead.
PseudoregulusReport detect_pseudoregulus(const LinearSet& ls, uint32_t h,
                                         const ExecPolicy& policy = {}, bool strict = true);

// Transversal search over one point per block of t independent elements;
// asserts the count is exactly h+1 and that each K_i misses L.
std::vector<ProjSubspace> find_transversals(const LinearSet& ls,
                                            const std::vector<ProjSubspace>& elements,
                                            const ExecPolicy& policy = {});

struct OffPseudoWeightReport {
  uint32_t max_weight = 0;        // max over h-subspaces outside the family
  uint64_t weight_n_count = 0;    // subspaces of weight exactly n (family included)
  bool weight_n_equals_family = false;
  uint32_t bound = 0;             // floor(hn/(h+1)) + 1
  bool bound_ok = false;
  uint64_t swept = 0;
};

OffPseudoWeightReport max_weight_off_pseudoregulus(const LinearSet& ls,
                                                   const std::vector<ProjSubspace>& family,
                                                   const ExecPolicy& policy = {});

// Block decomposition U = (U cap W_{x_1}) + ... + (U cap W_{x_t}) over t
// independent pseudoregulus elements: returns true when the intersections
// are independent and sum to U.
bool direct_sum_decomposes(const LinearSet& ls, const std::vector<ProjSubspace>& elements);

}  // namespace galgeo
