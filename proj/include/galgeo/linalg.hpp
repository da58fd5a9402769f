#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "galgeo/tower.hpp"

namespace galgeo {

// Dense row-major matrix over one tower layer.
struct Mat {
  LayerId layer = LayerId::fq;
  uint32_t rows = 0, cols = 0;
  std::vector<uint32_t> a;

  Mat() = default;
  Mat(LayerId l, uint32_t r, uint32_t c) : layer(l), rows(r), cols(c), a(size_t(r) * c, 0) {}

  uint32_t& at(uint32_t r, uint32_t c) { return a[size_t(r) * cols + c]; }
  uint32_t at(uint32_t r, uint32_t c) const { return a[size_t(r) * cols + c]; }
  const uint32_t* row(uint32_t r) const { return a.data() + size_t(r) * cols; }
  uint32_t* row(uint32_t r) { return a.data() + size_t(r) * cols; }

  static Mat identity(LayerId l, uint32_t n);
  friend bool operator==(const Mat&, const Mat&) = default;
};

// Canonical reduced row echelon form; zero rows dropped.
Mat rref(const FieldTower& tw, Mat m);
// As above but also reports pivot columns.
Mat rref(const FieldTower& tw, Mat m, std::vector<uint32_t>& pivots);
uint32_t rank(const FieldTower& tw, const Mat& m);
Elt det(const FieldTower& tw, const Mat& m);
Mat mat_mul(const FieldTower& tw, const Mat& a, const Mat& b);
// RREF basis of the right kernel {x : m x = 0}.
Mat kernel_basis(const FieldTower& tw, const Mat& m);
// Coordinates of v in an RREF basis, or nullopt when v is outside the span.
std::optional<std::vector<uint32_t>> coords_in_rref(const FieldTower& tw, const Mat& basis,
                                                    const std::vector<uint32_t>& pivots,
                                                    const uint32_t* v);
bool in_rowspace(const FieldTower& tw, const Mat& rref_basis, const uint32_t* v);

// Projective subspace of PG(ambient-1, layer) as a canonical RREF basis.
// rank 0 (no rows) is the empty subspace.
struct ProjSubspace {
  uint32_t ambient = 0;
  Mat basis;

  uint32_t dim() const { return basis.rows; }          // vector-space dimension
  int proj_dim() const { return int(basis.rows) - 1; }  // -1 for empty
  friend bool operator==(const ProjSubspace&, const ProjSubspace&) = default;
};

ProjSubspace proj_span(const FieldTower& tw, LayerId layer, uint32_t ambient, const Mat& gens);
ProjSubspace proj_sum(const FieldTower& tw, const ProjSubspace& a, const ProjSubspace& b);
ProjSubspace proj_intersect(const FieldTower& tw, const ProjSubspace& a, const ProjSubspace& b);
bool proj_contains(const FieldTower& tw, const ProjSubspace& s, const uint32_t* v);

// F_q-subspace of an F_{q^n}-space of vector dimension r, stored in blown-up
// coordinates (each F_{q^n} coordinate expanded to n F_q digits).
struct FqSubspace {
  uint32_t ambient_upper = 0;  // r
  Mat basis;                   // over F_q, cols = r * n, canonical RREF

  uint32_t dim() const { return basis.rows; }
  friend bool operator==(const FqSubspace&, const FqSubspace&) = default;
};

FqSubspace fq_span(const FieldTower& tw, uint32_t ambient_upper, const Mat& gens);
FqSubspace fq_sum(const FieldTower& tw, const FqSubspace& a, const FqSubspace& b);
FqSubspace fq_intersect(const FieldTower& tw, const FqSubspace& a, const FqSubspace& b);

// One-step blowup of a vector over `upper` into digits over the layer below.
std::vector<uint32_t> blowup_vec(const FieldTower& tw, LayerId upper, const uint32_t* v, uint32_t len);
std::vector<uint32_t> blowdown_vec(const FieldTower& tw, LayerId upper, const uint32_t* v, uint32_t len);
// The F_q-subspace underlying a projective subspace over F_{q^n}.
FqSubspace blowup_subspace(const FieldTower& tw, const ProjSubspace& s);

// dim_Fq(U cap W) realized as a subspace: the weight machinery.
FqSubspace fq_intersect_with_subspace(const FieldTower& tw, const FqSubspace& u, const ProjSubspace& w);

uint64_t num_proj_points(uint64_t field_size, uint32_t rank);
uint64_t gaussian_binomial(uint64_t field_size, uint32_t r, uint32_t k);

// Canonical points of a projective subspace: ambient vectors whose first
// nonzero coordinate is 1, in the order induced by coefficient tuples over
// the RREF basis.
void for_each_point(const FieldTower& tw, const ProjSubspace& s,
                    const std::function<void(const uint32_t*)>& fn);
// All k-dimensional (vector dimension) subspaces of layer^ambient, one canonical
// RREF each. Order: pivot-column sets lexicographically, then free entries in
// row-major odometer order. The Mat reference is reused between calls.
void for_each_subspace(const FieldTower& tw, LayerId layer, uint32_t ambient, uint32_t k,
                       uint64_t cap, const std::function<void(const Mat&)>& fn);

}  // namespace galgeo
