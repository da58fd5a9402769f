#pragma once

#include <string>

#include "galgeo/linalg.hpp"

namespace galgeo {

// (n-1)-spread data: a point universe (an F_q-subspace of the blown-up
// ambient, typically the rational points of a subgeometry) partitioned by
// the elements.
struct Spread {
  const FieldTower* tower = nullptr;
  uint32_t ambient_upper = 0;       // vector dimension of the F_{q^n} ambient
  FqSubspace universe;
  std::vector<FqSubspace> elements;
};

struct SpreadCheck {
  bool ok = false;
  std::string violation;  // empty when ok
  uint64_t points_covered = 0;
};

// Disjointness + cover + cardinality, via point bitsets over the universe.
SpreadCheck verify_spread(const Spread& s);

// Director-space conditions for H (a t-row matrix over F_{q^n} spanning a
// (t-1)-subspace of the big ambient): the n Frobenius conjugates of H span
// everything and every extended element <X>_{F_{q^n}} meets H.
bool verify_director(const Spread& s, const Mat& h_basis, uint32_t n);

}  // namespace galgeo
