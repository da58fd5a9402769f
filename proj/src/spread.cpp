#include "galgeo/spread.hpp"

#include <map>

namespace galgeo {

namespace {

// Canonical F_q-projective points of a subspace, indexed for bitset work.
std::map<std::vector<uint32_t>, uint64_t> index_points(const FieldTower& tw, const FqSubspace& s,
                                                       uint64_t cap) {
  const Layer& fq = tw.layer(LayerId::fq);
  uint32_t k = s.dim(), cols = s.basis.cols;
  uint64_t q = tw.q();
  uint64_t total = num_proj_points(q, k);
  if (total > cap) fail(Errc::size_cap_exceeded, "spread universe too large");
  std::map<std::vector<uint32_t>, uint64_t> out;
  std::vector<uint32_t> v(cols);
  std::vector<uint32_t> coef(k);
  for (uint32_t lead = 0; lead < k; ++lead) {
    uint64_t cnt = 1;
    for (uint32_t i = 0; i < k - lead - 1; ++i) cnt *= q;
    for (uint64_t idx = 0; idx < cnt; ++idx) {
      std::fill(coef.begin(), coef.end(), 0u);
      coef[lead] = 1;
      uint64_t rest = idx;
      for (uint32_t i = lead + 1; i < k; ++i) {
        coef[i] = uint32_t(rest % q);
        rest /= q;
      }
      std::fill(v.begin(), v.end(), 0u);
      for (uint32_t r = lead; r < k; ++r) {
        if (!coef[r]) continue;
        const uint32_t* row = s.basis.row(r);
        for (uint32_t j = 0; j < cols; ++j)
          if (row[j]) v[j] = fq.add(v[j], fq.mul(coef[r], row[j]));
      }
      out.emplace(v, out.size());
    }
  }
  return out;
}

}  // namespace

SpreadCheck verify_spread(const Spread& s) {
  const FieldTower& tw = *s.tower;
  SpreadCheck check;
  auto universe = index_points(tw, s.universe, tw.params().enum_cap);
  uint64_t q = tw.q();

  uint64_t expected_elements =
      num_proj_points(tw.size(LayerId::fqn), tw.params().t);
  if (s.elements.size() != expected_elements) {
    check.violation = "element count " + std::to_string(s.elements.size()) + " != " +
                      std::to_string(expected_elements);
    return check;
  }

  std::vector<uint8_t> covered(universe.size(), 0);
  for (size_t e = 0; e < s.elements.size(); ++e) {
    auto pts = index_points(tw, s.elements[e], tw.params().enum_cap);
    for (const auto& [v, unused] : pts) {
      (void)unused;
      auto it = universe.find(v);
      if (it == universe.end()) {
        check.violation = "element " + std::to_string(e) + " leaves the universe";
        return check;
      }
      if (covered[it->second]) {
        check.violation = "point covered twice (element " + std::to_string(e) + ")";
        return check;
      }
      covered[it->second] = 1;
      ++check.points_covered;
    }
    (void)q;
  }
  if (check.points_covered != universe.size()) {
    check.violation = "cover incomplete: " + std::to_string(check.points_covered) + " of " +
                      std::to_string(universe.size());
    return check;
  }
  check.ok = true;
  return check;
}

bool verify_director(const Spread& s, const Mat& h_basis, uint32_t n) {
  const FieldTower& tw = *s.tower;
  const Layer& l2 = tw.layer(LayerId::fqn);
  uint32_t t = h_basis.rows;
  uint32_t amb = h_basis.cols;
  if (h_basis.layer != LayerId::fqn) fail(Errc::layer_mismatch, "director basis must be over F_{q^n}");
  if (t != tw.params().t) fail(Errc::dimension_mismatch, "director space must have t rows");

  // conjugates span the whole space
  Mat stack(LayerId::fqn, t * n, amb);
  for (uint32_t i = 0; i < n; ++i)
    for (uint32_t r = 0; r < t; ++r)
      for (uint32_t j = 0; j < amb; ++j)
        stack.at(i * t + r, j) = l2.frob_q(h_basis.at(r, j), i);
  if (rank(tw, stack) != amb) return false;

  // every extended element meets H
  ProjSubspace h = proj_span(tw, LayerId::fqn, amb, h_basis);
  for (const auto& x : s.elements) {
    // X* = F_{q^n}-span of the element's F_q-vectors
    Mat rows(LayerId::fqn, x.basis.rows, amb);
    for (uint32_t i = 0; i < x.basis.rows; ++i) {
      auto down = blowdown_vec(tw, LayerId::fqn, x.basis.row(i), x.basis.cols);
      std::copy(down.begin(), down.end(), rows.row(i));
    }
    ProjSubspace xstar = proj_span(tw, LayerId::fqn, amb, rows);
    if (proj_intersect(tw, xstar, h).dim() == 0) return false;
  }
  return true;
}

}  // namespace galgeo
