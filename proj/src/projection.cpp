#include "galgeo/projection.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace galgeo {

Mat psi_apply(const FieldTower& tw, const Mat& m, uint32_t power) {
  const Layer& l2 = tw.layer(LayerId::fqn);
  Mat out = m;
  for (auto& v : out.a) v = l2.frob_q(v, power);
  return out;
}

namespace {

// Stack the conjugates theta^{Psi^i} for i in `which`.
Mat stack_conjugates(const FieldTower& tw, const Mat& theta, const std::vector<uint32_t>& which) {
  uint32_t t = theta.rows, amb = theta.cols;
  Mat out(LayerId::fqn, uint32_t(which.size()) * t, amb);
  uint32_t at = 0;
  for (uint32_t i : which) {
    Mat conj = psi_apply(tw, theta, i);
    std::copy(conj.a.begin(), conj.a.end(), out.row(at));
    at += t;
  }
  return out;
}

FqSubspace rational_points_subspace(const FieldTower& tw, uint32_t amb) {
  // S = F_q^{amb} inside (F_{q^n})^{amb}: basis e_i blown up
  uint32_t n = tw.layer(LayerId::fqn).degree();
  Mat gens(LayerId::fq, amb, amb * n);
  for (uint32_t i = 0; i < amb; ++i) gens.at(i, i * n) = 1;
  return fq_span(tw, amb, gens);
}

}  // namespace

SubgeometryFrame build_subgeometry_frame(const FieldTower& tw, std::vector<uint32_t> index_set,
                                         uint64_t seed) {
  uint32_t n = tw.params().n, t = tw.params().t;
  uint32_t amb = n * t;
  std::set<uint32_t> uniq(index_set.begin(), index_set.end());
  if (uniq.size() != index_set.size()) fail(Errc::duplicate_exponent, "index set has duplicates");
  if (!uniq.count(0)) fail(Errc::bad_input, "index set must contain 0");
  for (uint32_t i : index_set)
    if (i >= n) fail(Errc::exponent_out_of_range, "index >= n");
  if (index_set.size() > n) fail(Errc::bad_input, "index set larger than n");
  std::sort(index_set.begin(), index_set.end());

  SubgeometryFrame frame;
  frame.tower = &tw;
  frame.index_set = index_set;
  frame.seed = seed;
  frame.sigma = rational_points_subspace(tw, amb);

  std::vector<uint32_t> all(n);
  std::iota(all.begin(), all.end(), 0);

  // Seeded search for theta: random t x nt matrices until the n conjugates
  // decompose the ambient. Deterministic via the fixed PRNG stream.
  SplitMix64 rng(seed);
  const uint64_t S2 = tw.size(LayerId::fqn);
  Mat cand(LayerId::fqn, t, amb);
  bool ok = false;
  constexpr uint32_t kMaxTries = 2000;
  for (frame.tries = 1; frame.tries <= kMaxTries; ++frame.tries) {
    for (auto& v : cand.a) v = uint32_t(rng.below(S2));
    if (rank(tw, cand) != t) continue;
    Mat stacked = stack_conjugates(tw, cand, all);
    if (rank(tw, stacked) == amb) {
      ok = true;
      break;
    }
  }
  if (!ok) {
    // exhaustive fallback over canonical t-subspaces (tiny ambients only)
    try {
      for_each_subspace(tw, LayerId::fqn, amb, t, tw.params().enum_cap, [&](const Mat& m) {
        if (ok) return;
        Mat stacked = stack_conjugates(tw, m, all);
        if (rank(tw, stacked) == amb) {
          cand = m;
          ok = true;
        }
      });
    } catch (const Error&) {
      // fall through to the failure below
    }
  }
  if (!ok) fail(Errc::no_valid_theta, "no direct-sum transversal subspace found");
  frame.theta = rref(tw, cand);

  std::vector<uint32_t> outside;
  for (uint32_t i : all)
    if (!uniq.count(i)) outside.push_back(i);
  frame.gamma = proj_span(tw, LayerId::fqn, amb, stack_conjugates(tw, frame.theta, outside));
  frame.lambda = proj_span(tw, LayerId::fqn, amb, stack_conjugates(tw, frame.theta, index_set));
  uint32_t hp1 = uint32_t(index_set.size());
  if (frame.gamma.dim() != (n - hp1) * t || frame.lambda.dim() != hp1 * t)
    fail(Errc::cross_check_disagreement, "conjugate spans have unexpected dimensions");
  // gamma cap lambda empty (dimension count) and gamma cap sigma empty
  if (proj_intersect(tw, frame.gamma, frame.lambda).dim() != 0)
    fail(Errc::cross_check_disagreement, "center meets the axis");
  FqSubspace gamma_q = blowup_subspace(tw, frame.gamma);
  if (fq_intersect(tw, gamma_q, frame.sigma).dim() != 0)
    fail(Errc::cross_check_disagreement, "center meets the subgeometry");
  return frame;
}

ProjectionResult project_subgeometry(const SubgeometryFrame& frame) {
  const FieldTower& tw = *frame.tower;
  const Layer& l2 = tw.layer(LayerId::fqn);
  uint32_t n = tw.params().n, t = tw.params().t;
  uint32_t amb = n * t;
  uint32_t hp1 = uint32_t(frame.index_set.size());

  // U = (S + H) cap V in blown-up F_q coordinates
  FqSubspace h_q = blowup_subspace(tw, frame.gamma);
  FqSubspace v_q = blowup_subspace(tw, frame.lambda);
  FqSubspace sum = fq_sum(tw, frame.sigma, h_q);
  FqSubspace u_ambient = fq_intersect(tw, sum, v_q);
  if (u_ambient.dim() != n * t)
    fail(Errc::cross_check_disagreement, "projected subspace has wrong rank");

  // Direct formula: U = span_Fq{ sum_{i in I} psi^i(w) : w over an F_q-basis
  // of theta's vector space }.
  {
    Mat gens(LayerId::fq, t * n, amb * n);
    std::vector<uint32_t> w(amb), img(amb);
    for (uint32_t r = 0; r < t; ++r) {
      uint32_t beta = 1;
      for (uint32_t m = 0; m < n; ++m) {
        for (uint32_t j = 0; j < amb; ++j) w[j] = l2.mul(beta, frame.theta.at(r, j));
        std::fill(img.begin(), img.end(), 0u);
        for (uint32_t i : frame.index_set)
          for (uint32_t j = 0; j < amb; ++j) img[j] = l2.add(img[j], l2.frob_q(w[j], i));
        auto blown = blowup_vec(tw, LayerId::fqn, img.data(), amb);
        std::copy(blown.begin(), blown.end(), gens.row(r * n + m));
        if (m + 1 < n) beta = uint32_t(uint64_t(beta) * tw.q());
      }
    }
    FqSubspace u_direct = fq_span(tw, amb, gens);
    if (!(u_direct == u_ambient))
      fail(Errc::cross_check_disagreement, "projection formulas disagree");
  }

  // transport to axis coordinates via the lambda RREF pivots
  std::vector<uint32_t> lpivots;
  Mat lbasis = rref(tw, frame.lambda.basis, lpivots);
  uint32_t r_axis = hp1 * t;
  Mat axis_rows(LayerId::fq, u_ambient.dim(), r_axis * n);
  for (uint32_t i = 0; i < u_ambient.dim(); ++i) {
    auto down = blowdown_vec(tw, LayerId::fqn, u_ambient.basis.row(i), amb * n);
    auto coords = coords_in_rref(tw, lbasis, lpivots, down.data());
    if (!coords) fail(Errc::cross_check_disagreement, "projected vector escapes the axis");
    auto blown = blowup_vec(tw, LayerId::fqn, coords->data(), r_axis);
    std::copy(blown.begin(), blown.end(), axis_rows.row(i));
  }

  ProjectionResult out;
  out.frame = frame;
  out.u_ambient = u_ambient;
  out.lambda_pivots_basis = lbasis;
  out.ls = linear_set_from_subspace(tw, r_axis, fq_span(tw, r_axis, axis_rows));
  return out;
}

Spread desarguesian_spread(const SubgeometryFrame& frame) {
  const FieldTower& tw = *frame.tower;
  uint32_t n = tw.params().n, t = tw.params().t;
  uint32_t amb = n * t;
  Spread spread;
  spread.tower = &tw;
  spread.ambient_upper = amb;
  spread.universe = frame.sigma;
  ProjSubspace theta_sub = proj_span(tw, LayerId::fqn, amb, frame.theta);
  for_each_point(tw, theta_sub, [&](const uint32_t* pt) {
    Mat rows(LayerId::fqn, n, amb);
    for (uint32_t i = 0; i < n; ++i)
      for (uint32_t j = 0; j < amb; ++j)
        rows.at(i, j) = tw.layer(LayerId::fqn).frob_q(pt[j], i);
    ProjSubspace xstar = proj_span(tw, LayerId::fqn, amb, rows);
    if (xstar.dim() != n) fail(Errc::cross_check_disagreement, "conjugate orbit span degenerated");
    FqSubspace xq = blowup_subspace(tw, xstar);
    FqSubspace elem = fq_intersect(tw, xq, frame.sigma);
    if (elem.dim() != n) fail(Errc::cross_check_disagreement, "spread element has wrong dimension");
    spread.elements.push_back(std::move(elem));
  });
  return spread;
}

SpreadRecovery recover_spread_from_linset(const ProjectionResult& proj,
                                          const std::vector<ProjSubspace>& pseudoregulus,
                                          const std::vector<ProjSubspace>& transversals) {
  const FieldTower& tw = *proj.frame.tower;
  const Layer& l2 = tw.layer(LayerId::fqn);
  uint32_t n = tw.params().n, t = tw.params().t;
  uint32_t amb = n * t;
  const SubgeometryFrame& frame = proj.frame;

  SpreadRecovery rec;
  rec.spread.tower = &tw;
  rec.spread.ambient_upper = amb;
  rec.spread.universe = frame.sigma;

  // lift axis-coordinate subspaces back into the big ambient
  auto lift = [&](const ProjSubspace& axis_sub) {
    Mat rows(LayerId::fqn, axis_sub.basis.rows, amb);
    for (uint32_t i = 0; i < axis_sub.basis.rows; ++i) {
      for (uint32_t j = 0; j < amb; ++j) {
        uint32_t acc = 0;
        for (uint32_t c = 0; c < proj.lambda_pivots_basis.rows; ++c)
          if (axis_sub.basis.at(i, c))
            acc = l2.add(acc, l2.mul(axis_sub.basis.at(i, c), proj.lambda_pivots_basis.at(c, j)));
        rows.at(i, j) = acc;
      }
    }
    return proj_span(tw, LayerId::fqn, amb, rows);
  };

  for (const auto& pi : pseudoregulus) {
    ProjSubspace lifted = lift(pi);
    ProjSubspace joined = proj_sum(tw, frame.gamma, lifted);
    FqSubspace jq = blowup_subspace(tw, joined);
    FqSubspace elem = fq_intersect(tw, jq, frame.sigma);
    if (elem.dim() != n) fail(Errc::spread_axiom_violation, "recovered element has wrong dimension");
    rec.spread.elements.push_back(std::move(elem));
  }

  SpreadCheck check = verify_spread(rec.spread);
  if (!check.ok) fail(Errc::spread_axiom_violation, "recovered spread fails axioms: " + check.violation);
  rec.verified = true;

  // set comparison with the constructed spread
  Spread built = desarguesian_spread(frame);
  std::set<std::vector<uint32_t>> a, b;
  for (const auto& e : built.elements) a.insert(e.basis.a);
  for (const auto& e : rec.spread.elements) b.insert(e.basis.a);
  rec.equals_construction = (a == b);

  // director data: theta_bar = theta^{Psi^m} with m = min(index set),
  // ell_j = i_j - m; verify the gamma equation and the transversal formula.
  uint32_t m0 = frame.index_set.front();
  rec.theta_bar_power = m0;
  Mat theta_bar = psi_apply(tw, frame.theta, m0);
  for (uint32_t i : frame.index_set) rec.ell.push_back((i + n - m0) % n);
  // theta_bar^{Psi^j} = theta^{Psi^{m0+j}}, so j sits outside the ell-set
  // exactly when m0+j is outside the index set.
  std::vector<uint32_t> outside;
  std::set<uint32_t> iset(frame.index_set.begin(), frame.index_set.end());
  for (uint32_t j = 0; j < n; ++j)
    if (!iset.count((m0 + j) % n)) outside.push_back(j);
  // gamma = <theta_bar^{Psi^j} : j not in ell-set>
  {
    Mat rows(LayerId::fqn, uint32_t(outside.size()) * t, amb);
    uint32_t at = 0;
    for (uint32_t j : outside) {
      Mat conj = psi_apply(tw, theta_bar, j);
      std::copy(conj.a.begin(), conj.a.end(), rows.row(at));
      at += t;
    }
    rec.gamma_matches = (proj_span(tw, LayerId::fqn, amb, rows) == frame.gamma);
  }
  // T_i = <gamma, theta_bar^{Psi^{ell_i}}> cap lambda, matched as sets
  {
    std::set<std::vector<uint32_t>> formula, given;
    for (uint32_t l : rec.ell) {
      Mat conj = psi_apply(tw, theta_bar, l);
      ProjSubspace joined = proj_sum(tw, frame.gamma, proj_span(tw, LayerId::fqn, amb, conj));
      ProjSubspace ti = proj_intersect(tw, joined, frame.lambda);
      formula.insert(ti.basis.a);
    }
    for (const auto& tr : transversals) given.insert(lift(tr).basis.a);
    rec.transversals_match = (formula == given);
  }
  return rec;
}

std::optional<uint32_t> equivalent_pseudoregulus_type(const LinearSetSpec& a, const LinearSetSpec& b,
                                                      const ExecPolicy& policy) {
  const FieldTower& ta = *a.tower;
  const FieldTower& tb = *b.tower;
  if (ta.params().p != tb.params().p || ta.params().e != tb.params().e ||
      ta.params().n != tb.params().n || ta.params().t != tb.params().t || a.h != b.h)
    fail(Errc::bad_input, "equivalence needs matching parameters q, n, t, h");
  ExponentSet ia = make_exponent_set(ta.params().n, a.exponent_set());
  ExponentSet ib = make_exponent_set(tb.params().n, b.exponent_set());
  if (!is_moore(ta, ia, {}, policy).is_moore || !is_moore(tb, ib, {}, policy).is_moore)
    fail(Errc::not_maximum_h_scattered,
         "equivalence by exponent shift applies to maximum h-scattered sets only");
  return monomial_shift_equivalent(a.exponent_set(), b.exponent_set(), ta.params().n);
}

uint64_t euler_phi(uint64_t n) {
  uint64_t result = n;
  uint64_t v = n;
  for (uint64_t d = 2; d * d <= v; ++d) {
    if (v % d == 0) {
      result -= result / d;
      while (v % d == 0) v /= d;
    }
  }
  if (v > 1) result -= result / v;
  return result;
}

AsympClassification asymp_classify(const LinearSetSpec& spec, const ExecPolicy& policy) {
  const FieldTower& tw = *spec.tower;
  uint32_t n = tw.params().n;
  ExponentSet I = make_exponent_set(n, spec.exponent_set());
  if (!is_moore(tw, I, {}, policy).is_moore)
    fail(Errc::not_maximum_h_scattered, "classification applies to Moore exponent sets only");
  AsympClassification out;
  out.progression = classify_progression(I);
  if (spec.h == 1 && n >= 3) {
    auto verdicts = search_all(tw, 2, true, MooreOptions{.method = MooreMethod::mrd_criterion}, policy);
    uint64_t census = 0;
    for (const auto& v : verdicts)
      if (v.is_moore) ++census;
    out.orbit_census = census;
    out.phi_n_half = euler_phi(n) / 2;
  }
  return out;
}

}  // namespace galgeo
