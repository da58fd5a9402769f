#include "galgeo/linsets.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>

namespace galgeo {

namespace {

void canonicalize_point(const Layer& l2, uint32_t* v, uint32_t len) {
  uint32_t lead = 0;
  while (lead < len && !v[lead]) ++lead;
  if (lead == len) fail(Errc::bad_input, "cannot canonicalize the zero vector");
  uint32_t inv = l2.inv(v[lead]);
  if (inv != 1)
    for (uint32_t j = lead; j < len; ++j) v[j] = l2.mul(v[j], inv);
}

// f(x) as a t-vector of F_{q^n} coordinates (digits in, digits out).
void apply_semilinear(const FieldTower& tw, const SemilinearMap& f, const uint32_t* xdig,
                      uint32_t* out) {
  const Layer& l2 = tw.layer(LayerId::fqn);
  uint32_t t = tw.params().t;
  uint32_t frobbed[64];
  for (uint32_t i = 0; i < t; ++i) frobbed[i] = l2.frob_q(xdig[i], f.exponent);
  for (uint32_t i = 0; i < t; ++i) {
    uint32_t acc = 0;
    for (uint32_t j = 0; j < t; ++j)
      if (f.matrix.at(i, j)) acc = l2.add(acc, l2.mul(f.matrix.at(i, j), frobbed[j]));
    out[i] = acc;
  }
}

// u(x) = (x, f_2(x), ..., f_{h+1}(x)) in ambient F_{q^n} coordinates.
void u_of_x(const LinearSetSpec& spec, uint32_t x, uint32_t* out) {
  const FieldTower& tw = *spec.tower;
  const Layer& l3 = tw.layer(LayerId::fqnt);
  uint32_t t = tw.params().t;
  uint32_t xdig[64];
  l3.to_digits(x, xdig);
  for (uint32_t i = 0; i < t; ++i) out[i] = xdig[i];
  for (uint32_t j = 0; j < spec.maps.size(); ++j)
    apply_semilinear(tw, spec.maps[j], xdig, out + size_t(j + 1) * t);
}

// Quotient coordinates modulo U: per point, the F_q-matrix of
// a -> [a * v_P] in F_q^{amb}/U, n rows by quot_dim columns. For q = 2 and
// q = 3 with at most 64 quotient columns the rows are additionally bitsliced
// (digit d = hi*2 + lo), which is what the big pair sweeps run on.
struct WeightContext {
  uint32_t n = 0, quot_dim = 0;
  uint32_t q = 0;
  bool packed = false;
  std::vector<uint32_t> nonpivot;
  std::vector<uint32_t> pivots;
  std::vector<uint32_t> rows;       // count * n * quot_dim
  std::vector<uint64_t> plo, phi;   // count * n bit planes (when packed)

  const uint32_t* point_rows(uint64_t p) const { return rows.data() + p * size_t(n) * quot_dim; }
};

WeightContext build_weight_context(const LinearSet& ls) {
  const FieldTower& tw = *ls.tower;
  const Layer& l2 = tw.layer(LayerId::fqn);
  const Layer& fq = tw.layer(LayerId::fq);
  uint32_t n = l2.degree();
  uint32_t amb = ls.r * n;
  WeightContext ctx;
  ctx.n = n;
  Mat ubasis = ls.U.basis;
  std::vector<uint32_t> pivots;
  Mat re = rref(tw, ubasis, pivots);
  if (!(re == ls.U.basis)) fail(Errc::bad_input, "linear set subspace is not canonical");
  ctx.pivots = pivots;
  std::vector<bool> is_piv(amb, false);
  for (uint32_t p : pivots) is_piv[p] = true;
  for (uint32_t c = 0; c < amb; ++c)
    if (!is_piv[c]) ctx.nonpivot.push_back(c);
  ctx.quot_dim = uint32_t(ctx.nonpivot.size());

  uint64_t count = ls.pts.count();
  ctx.rows.assign(count * size_t(n) * ctx.quot_dim, 0);
  std::vector<uint32_t> scaled(ls.r), resid;
  for (uint64_t p = 0; p < count; ++p) {
    const uint32_t* v = ls.pts.at(p);
    uint32_t beta = 1;
    for (uint32_t m = 0; m < n; ++m) {
      for (uint32_t j = 0; j < ls.r; ++j) scaled[j] = l2.mul(beta, v[j]);
      resid = blowup_vec(tw, LayerId::fqn, scaled.data(), ls.r);
      for (uint32_t i = 0; i < ls.U.basis.rows; ++i) {
        uint32_t f = resid[pivots[i]];
        if (!f) continue;
        const uint32_t* row = ls.U.basis.row(i);
        for (uint32_t j = 0; j < amb; ++j)
          if (row[j]) resid[j] = fq.sub(resid[j], fq.mul(f, row[j]));
      }
      uint32_t* out = ctx.rows.data() + (p * n + m) * size_t(ctx.quot_dim);
      for (uint32_t j = 0; j < ctx.quot_dim; ++j) out[j] = resid[ctx.nonpivot[j]];
      if (m + 1 < n) beta = uint32_t(uint64_t(beta) * tw.q());
    }
  }
  ctx.q = uint32_t(tw.q());
  ctx.packed = (ctx.q == 2 || ctx.q == 3) && ctx.quot_dim <= 64;
  if (ctx.packed) {
    ctx.plo.assign(count * size_t(n), 0);
    ctx.phi.assign(count * size_t(n), 0);
    for (size_t r = 0; r < count * size_t(n); ++r) {
      const uint32_t* row = ctx.rows.data() + r * ctx.quot_dim;
      uint64_t lo = 0, hi = 0;
      for (uint32_t j = 0; j < ctx.quot_dim; ++j) {
        lo |= uint64_t(row[j] & 1u) << j;
        hi |= uint64_t((row[j] >> 1) & 1u) << j;
      }
      ctx.plo[r] = lo;
      ctx.phi[r] = hi;
    }
  }
  return ctx;
}

// Bitsliced elimination over F_2 / F_3. Digits are hi*2 + lo per bit lane;
// mod-3 addition uses the standard two-plane gadget, and scaling by 2
// (= -1) swaps the planes.
struct PackedScratch {
  uint64_t lo[64], hi[64];
  uint32_t piv[64];
  uint32_t committed = 0;
  bool char3 = false;

  void reset(bool c3) {
    committed = 0;
    char3 = c3;
  }

  static void add3(uint64_t& a0, uint64_t& a1, uint64_t b0, uint64_t b1) {
    uint64_t s0 = (a0 & ~b0 & ~b1) | (~a0 & ~a1 & b0) | (a1 & b1);
    uint64_t s1 = (a1 & ~b0 & ~b1) | (~a0 & ~a1 & b1) | (a0 & b0);
    a0 = s0;
    a1 = s1;
  }

  // Reduce (rl, rh) against the committed rows and commit when nonzero.
  bool add_row(uint64_t rl, uint64_t rh) {
    if (!char3) {
      for (uint32_t i = 0; i < committed; ++i)
        if ((rl >> piv[i]) & 1) rl ^= lo[i];
      if (!rl) return false;
      piv[committed] = uint32_t(__builtin_ctzll(rl));
      lo[committed] = rl;
      hi[committed] = 0;
      ++committed;
      return true;
    }
    for (uint32_t i = 0; i < committed; ++i) {
      uint32_t p = piv[i];
      uint32_t f = uint32_t(((rl >> p) & 1) | (((rh >> p) & 1) << 1));
      if (!f) continue;
      // subtract f * row_i: -1*r adds swapped planes, -2*r adds r itself
      if (f == 1)
        add3(rl, rh, hi[i], lo[i]);
      else
        add3(rl, rh, lo[i], hi[i]);
    }
    uint64_t mask = rl | rh;
    if (!mask) return false;
    uint32_t p = uint32_t(__builtin_ctzll(mask));
    if ((rh >> p) & 1) std::swap(rl, rh);  // normalize pivot 2 -> 1
    piv[committed] = p;
    lo[committed] = rl;
    hi[committed] = rh;
    ++committed;
    return true;
  }
};

// Packed variant of weight_of_point_span; same bail-out contract.
uint32_t weight_of_point_span_packed(const WeightContext& ctx, PackedScratch& scratch,
                                     const uint64_t* idx, uint32_t d, uint32_t min_weight,
                                     uint32_t skip_first_points = 0, uint32_t seeded_rank = 0) {
  uint32_t total_rows = d * ctx.n;
  uint32_t bail_rank = min_weight ? total_rows - min_weight + 1 : total_rows + 1;
  uint32_t r = seeded_rank;
  for (uint32_t i = skip_first_points; i < d; ++i) {
    size_t base = idx[i] * size_t(ctx.n);
    for (uint32_t m = 0; m < ctx.n; ++m) {
      if (scratch.add_row(ctx.plo[base + m], ctx.phi[base + m])) ++r;
      if (r >= bail_rank) return 0;
    }
  }
  return total_rows - r;
}

// Incremental row elimination over F_q used by the weight sweeps.
struct RankScratch {
  std::vector<uint32_t> rows;
  std::vector<uint32_t> pivot;
  uint32_t committed = 0;
  uint32_t quot = 0;

  void reset(uint32_t quot_dim) {
    quot = quot_dim;
    committed = 0;
  }

  bool add_row(const Layer& fq, const uint32_t* src) {
    if (rows.size() < size_t(committed + 1) * quot) rows.resize(size_t(committed + 1) * quot);
    if (pivot.size() < size_t(committed) + 1) pivot.resize(committed + 1);
    uint32_t* w = rows.data() + size_t(committed) * quot;
    std::copy(src, src + quot, w);
    for (uint32_t i = 0; i < committed; ++i) {
      uint32_t f = w[pivot[i]];
      if (!f) continue;
      const uint32_t* r = rows.data() + size_t(i) * quot;
      for (uint32_t j = 0; j < quot; ++j)
        if (r[j]) w[j] = fq.sub(w[j], fq.mul(f, r[j]));
    }
    uint32_t p = 0;
    while (p < quot && !w[p]) ++p;
    if (p == quot) return false;
    uint32_t inv = fq.inv(w[p]);
    if (inv != 1)
      for (uint32_t j = p; j < quot; ++j) w[j] = fq.mul(w[j], inv);
    pivot[committed] = p;
    ++committed;
    return true;
  }
};

// weight of the span of d points = d*n - rank of their stacked quotient
// rows. min_weight > 0 enables the bail-out: returns 0 as soon as the
// weight provably stays below it.
uint32_t weight_of_point_span_generic(const WeightContext& ctx, const Layer& fq, RankScratch& scratch,
                                      const uint64_t* idx, uint32_t d, uint32_t min_weight) {
  scratch.reset(ctx.quot_dim);
  uint32_t total_rows = d * ctx.n;
  uint32_t bail_rank = min_weight ? total_rows - min_weight + 1 : total_rows + 1;
  uint32_t r = 0;
  for (uint32_t i = 0; i < d; ++i) {
    const uint32_t* rows = ctx.point_rows(idx[i]);
    for (uint32_t m = 0; m < ctx.n; ++m) {
      if (scratch.add_row(fq, rows + size_t(m) * ctx.quot_dim)) ++r;
      if (r >= bail_rank) return 0;
    }
  }
  return total_rows - r;
}

uint32_t weight_of_point_span(const WeightContext& ctx, const Layer& fq, RankScratch& scratch,
                              const uint64_t* idx, uint32_t d, uint32_t min_weight) {
  if (ctx.packed) {
    PackedScratch ps;
    ps.reset(ctx.q == 3);
    return weight_of_point_span_packed(ctx, ps, idx, d, min_weight);
  }
  return weight_of_point_span_generic(ctx, fq, scratch, idx, d, min_weight);
}

int compare_points(const uint32_t* a, const uint32_t* b, uint32_t dim) {
  for (uint32_t i = 0; i < dim; ++i) {
    if (a[i] < b[i]) return -1;
    if (a[i] > b[i]) return 1;
  }
  return 0;
}

std::vector<uint64_t> orbit_representatives(const LinearSet& ls) {
  uint64_t count = ls.pts.count();
  std::vector<uint64_t> reps;
  if (ls.stabilizers.empty()) {
    reps.resize(count);
    std::iota(reps.begin(), reps.end(), 0);
    return reps;
  }
  const FieldTower& tw = *ls.tower;
  const Layer& l2 = tw.layer(LayerId::fqn);
  std::vector<bool> seen(count, false);
  std::vector<uint32_t> img(ls.r);
  for (uint64_t i = 0; i < count; ++i) {
    if (seen[i]) continue;
    reps.push_back(i);
    std::vector<uint64_t> frontier{i};
    seen[i] = true;
    while (!frontier.empty()) {
      uint64_t cur = frontier.back();
      frontier.pop_back();
      for (const Mat& g : ls.stabilizers) {
        const uint32_t* v = ls.pts.at(cur);
        for (uint32_t a = 0; a < ls.r; ++a) {
          uint32_t acc = 0;
          for (uint32_t b = 0; b < ls.r; ++b)
            if (g.at(a, b)) acc = l2.add(acc, l2.mul(g.at(a, b), v[b]));
          img[a] = acc;
        }
        canonicalize_point(l2, img.data(), ls.r);
        auto at = ls.pts.find(tw, img.data());
        if (!at) fail(Errc::cross_check_disagreement, "stabilizer left the point set");
        if (!seen[*at]) {
          seen[*at] = true;
          frontier.push_back(*at);
        }
      }
    }
  }
  return reps;
}

Mat points_as_rows(const LinearSet& ls, const uint64_t* idx, uint32_t d) {
  Mat m(LayerId::fqn, d, ls.r);
  for (uint32_t i = 0; i < d; ++i)
    std::copy(ls.pts.at(idx[i]), ls.pts.at(idx[i]) + ls.r, m.row(i));
  return m;
}

// Shared point materialization: canonicalize, sort, weight by multiplicity.
struct PointAccumulator {
  const FieldTower& tw;
  uint32_t dim;
  std::vector<uint32_t> flat;
  uint64_t total = 0;

  PointAccumulator(const FieldTower& t, uint32_t d) : tw(t), dim(d) {}

  void add(uint32_t* v) {
    canonicalize_point(tw.layer(LayerId::fqn), v, dim);
    flat.insert(flat.end(), v, v + dim);
    ++total;
  }

  PointSet finish() {
    uint64_t count = total;
    std::vector<uint64_t> order(count);
    std::iota(order.begin(), order.end(), 0);
    const uint32_t* data = flat.data();
    uint32_t d = dim;
    std::sort(order.begin(), order.end(), [data, d](uint64_t a, uint64_t b) {
      return compare_points(data + a * d, data + b * d, d) < 0;
    });
    PointSet out;
    out.dim = d;
    uint64_t q = tw.q();
    uint64_t i = 0;
    uint64_t accounted = 0;
    while (i < count) {
      uint64_t j = i;
      while (j < count && compare_points(data + order[i] * d, data + order[j] * d, d) == 0) ++j;
      uint64_t mult = j - i;  // q^w - 1 vectors of U lie over this point
      uint64_t want = q;
      uint32_t w = 1;
      while (want - 1 < mult) {
        want *= q;
        ++w;
      }
      if (want - 1 != mult)
        fail(Errc::cross_check_disagreement, "point multiplicity is not of the form q^w - 1");
      out.coords.insert(out.coords.end(), data + order[i] * d, data + order[i] * d + d);
      out.weights.push_back(w);
      accounted += mult;
      i = j;
    }
    if (accounted != total)
      fail(Errc::cross_check_disagreement, "vector accounting mismatch in point build");
    return out;
  }
};

}  // namespace

std::vector<uint32_t> LinearSetSpec::exponent_set() const {
  std::vector<uint32_t> exps{0};
  for (const auto& f : maps) exps.push_back(f.exponent);
  return exps;
}

LinearSetSpec spec_from_exponents(const FieldTower& tw, const std::vector<uint32_t>& exps) {
  if (exps.empty() || exps.front() != 0)
    fail(Errc::bad_input, "exponent list must start with 0 (the identity map)");
  LinearSetSpec spec;
  spec.tower = &tw;
  spec.h = uint32_t(exps.size()) - 1;
  uint32_t t = tw.params().t;
  for (size_t j = 1; j < exps.size(); ++j)
    spec.maps.push_back(SemilinearMap{Mat::identity(LayerId::fqn, t), exps[j]});
  validate_spec(spec);
  return spec;
}

void validate_spec(const LinearSetSpec& spec) {
  const FieldTower& tw = *spec.tower;
  uint32_t n = tw.params().n, t = tw.params().t;
  if (t < 2) fail(Errc::bad_input, "pseudoregulus constructions need t >= 2");
  if (spec.maps.size() != spec.h) fail(Errc::bad_input, "expected h maps f_2..f_{h+1}");
  if (n < spec.h + 1) fail(Errc::bad_input, "n >= h+1 is required");
  std::vector<uint32_t> seen{0};
  for (const auto& f : spec.maps) {
    if (f.exponent == 0 || f.exponent >= n)
      fail(Errc::bad_input, "companion exponents must be strictly semilinear and < n");
    if (std::find(seen.begin(), seen.end(), f.exponent) != seen.end())
      fail(Errc::duplicate_exponent, "companion exponents must be pairwise distinct");
    seen.push_back(f.exponent);
    if (f.matrix.rows != t || f.matrix.cols != t || f.matrix.layer != LayerId::fqn)
      fail(Errc::dimension_mismatch, "semilinear matrix must be t x t over F_{q^n}");
    if (rank(tw, f.matrix) != t) fail(Errc::non_invertible_map, "semilinear matrix not invertible");
  }
}

std::optional<uint64_t> PointSet::find(const FieldTower&, const uint32_t* v) const {
  uint64_t lo = 0, hi = count();
  while (lo < hi) {
    uint64_t mid = (lo + hi) / 2;
    int c = compare_points(at(mid), v, dim);
    if (c == 0) return mid;
    if (c < 0)
      lo = mid + 1;
    else
      hi = mid;
  }
  return std::nullopt;
}

LinearSet build_from_spec(const LinearSetSpec& spec) {
  validate_spec(spec);
  const FieldTower& tw = *spec.tower;
  const Layer& l2 = tw.layer(LayerId::fqn);
  const Layer& l3 = tw.layer(LayerId::fqnt);
  uint32_t n = tw.params().n, t = tw.params().t;
  uint32_t r = spec.r();
  uint64_t vectors = l3.size();
  if (vectors > tw.params().enum_cap) fail(Errc::size_cap_exceeded, "point sweep exceeds the cap");

  LinearSet ls;
  ls.tower = &tw;
  ls.r = r;

  uint32_t nt = n * t;
  Mat gens(LayerId::fq, nt, r * n);
  std::vector<uint32_t> u(r);
  for (uint32_t i = 0; i < t; ++i)
    for (uint32_t m = 0; m < n; ++m) {
      uint64_t enc = 1;
      for (uint32_t a = 0; a < i; ++a) enc *= l2.size();
      for (uint32_t b = 0; b < m; ++b) enc *= tw.q();
      u_of_x(spec, uint32_t(enc), u.data());
      auto blown = blowup_vec(tw, LayerId::fqn, u.data(), r);
      std::copy(blown.begin(), blown.end(), gens.row(i * n + m));
    }
  ls.U = fq_span(tw, r, gens);
  if (ls.U.dim() != nt) fail(Errc::cross_check_disagreement, "construction lost rank");

  PointAccumulator acc(tw, r);
  for (uint64_t x = 1; x < vectors; ++x) {
    u_of_x(spec, uint32_t(x), u.data());
    acc.add(u.data());
  }
  ls.pts = acc.finish();

  // Blockwise scalar map v_j -> g^{q^{i_j}} v_j with g a generator of
  // F_{q^n}^*: sends u(x) to u(g x), hence permutes the points of L.
  uint32_t g = l2.generator();
  if (g > 1) {
    Mat psi(LayerId::fqn, r, r);
    std::vector<uint32_t> exps = spec.exponent_set();
    for (uint32_t j = 0; j < exps.size(); ++j) {
      uint32_t scalar = l2.frob_q(g, exps[j]);
      for (uint32_t i = 0; i < t; ++i) psi.at(j * t + i, j * t + i) = scalar;
    }
    bool ok = true;
    std::vector<uint32_t> row2(r);
    for (uint32_t i = 0; i < ls.U.basis.rows && ok; ++i) {
      auto down = blowdown_vec(tw, LayerId::fqn, ls.U.basis.row(i), r * n);
      for (uint32_t a = 0; a < r; ++a) row2[a] = l2.mul(psi.at(a, a), down[a]);
      auto blown = blowup_vec(tw, LayerId::fqn, row2.data(), r);
      ok = in_rowspace(tw, ls.U.basis, blown.data());
    }
    if (!ok) fail(Errc::cross_check_disagreement, "block-scalar stabilizer failed validation");
    ls.stabilizers.push_back(std::move(psi));
  }
  return ls;
}

LinearSet linear_set_from_subspace(const FieldTower& tw, uint32_t r, FqSubspace u) {
  const Layer& l2 = tw.layer(LayerId::fqn);
  const Layer& fq = tw.layer(LayerId::fq);
  uint32_t n = l2.degree();
  if (u.basis.cols != r * n) fail(Errc::ambient_mismatch, "subspace columns must be r*n");
  uint32_t k = u.dim();
  uint64_t vectors = 1;
  for (uint32_t i = 0; i < k; ++i) {
    vectors *= tw.q();
    if (vectors > tw.params().enum_cap)
      fail(Errc::size_cap_exceeded, "point materialization exceeds the cap");
  }
  LinearSet ls;
  ls.tower = &tw;
  ls.r = r;
  ls.U = std::move(u);
  PointAccumulator acc(tw, r);
  std::vector<uint32_t> blown(r * n), v(r), digits(k);
  for (uint64_t idx = 1; idx < vectors; ++idx) {
    uint64_t rest = idx;
    for (uint32_t i = 0; i < k; ++i) {
      digits[i] = uint32_t(rest % tw.q());
      rest /= tw.q();
    }
    std::fill(blown.begin(), blown.end(), 0u);
    for (uint32_t i = 0; i < k; ++i) {
      uint32_t c = digits[i];
      if (!c) continue;
      const uint32_t* row = ls.U.basis.row(i);
      for (uint32_t j = 0; j < r * n; ++j)
        if (row[j]) blown[j] = fq.add(blown[j], fq.mul(c, row[j]));
    }
    auto down = blowdown_vec(tw, LayerId::fqn, blown.data(), r * n);
    std::copy(down.begin(), down.end(), v.begin());
    acc.add(v.data());
  }
  ls.pts = acc.finish();
  return ls;
}

uint32_t weight(const LinearSet& ls, const ProjSubspace& omega) {
  if (omega.ambient != ls.r) fail(Errc::ambient_mismatch, "weight: ambient mismatch");
  return fq_intersect_with_subspace(*ls.tower, ls.U, omega).dim();
}

std::vector<std::pair<uint32_t, uint64_t>> weight_spectrum(const LinearSet& ls) {
  std::map<uint32_t, uint64_t> spec;
  for (uint64_t i = 0; i < ls.pts.count(); ++i) ++spec[ls.pts.weights[i]];
  return {spec.begin(), spec.end()};
}

bool spans_ambient(const LinearSet& ls) {
  const FieldTower& tw = *ls.tower;
  uint32_t n = tw.layer(LayerId::fqn).degree();
  Mat m(LayerId::fqn, ls.U.basis.rows, ls.r);
  for (uint32_t i = 0; i < ls.U.basis.rows; ++i) {
    auto down = blowdown_vec(tw, LayerId::fqn, ls.U.basis.row(i), ls.r * n);
    std::copy(down.begin(), down.end(), m.row(i));
  }
  return rank(tw, m) == ls.r;
}

ScatterednessReport is_h_scattered(const LinearSet& ls, uint32_t h, const ExecPolicy& policy) {
  const FieldTower& tw = *ls.tower;
  const Layer& fq = tw.layer(LayerId::fq);
  ScatterednessReport rep;
  rep.spans = spans_ambient(ls);
  if (!rep.spans) {
    rep.scattered = false;
    return rep;
  }
  if (h == 0) {
    rep.scattered = true;
    return rep;
  }
  for (uint64_t i = 0; i < ls.pts.count(); ++i)
    if (ls.pts.weights[i] >= h + 1) {
      rep.violation = ScatterednessViolation{1, {i}, ls.pts.weights[i]};
      rep.scattered = false;
      return rep;
    }
  if (h == 1) {
    rep.scattered = true;
    return rep;
  }

  WeightContext ctx = build_weight_context(ls);
  uint64_t count = ls.pts.count();
  std::vector<uint64_t> reps = orbit_representatives(ls);

  for (uint32_t d = 2; d <= h && d <= count; ++d) {
    long double est = (long double)reps.size();
    for (uint32_t i = 0; i < d - 1; ++i) est *= (long double)(count - 1 - i) / (i + 1);
    if (est > (long double)tw.params().enum_cap)
      fail(Errc::size_cap_exceeded, "point-span sweep exceeds the cap");

    std::vector<std::optional<ScatterednessViolation>> found(policy.resolved_threads());
    if (d == 2 && ctx.packed) {
      // dominant case: commit the representative's quotient rows once, then
      // rewind to that checkpoint for every partner
      parallel_ranges(reps.size(), policy, [&](unsigned chunk, uint64_t rb, uint64_t re) {
        PackedScratch ps;
        std::optional<ScatterednessViolation>& best = found[chunk];
        uint64_t step = (re - rb) / 20 + 1;
        uint64_t idx[2];
        for (uint64_t ri = rb; ri < re && !best; ++ri) {
          if (chunk == 0 && policy.progress && (ri - rb) % step == 0)
            policy.progress(double(ri - rb) / double(re - rb));
          idx[0] = reps[ri];
          ps.reset(ctx.q == 3);
          uint32_t rep_rank = 0;
          size_t base = idx[0] * size_t(ctx.n);
          for (uint32_t m = 0; m < ctx.n; ++m)
            if (ps.add_row(ctx.plo[base + m], ctx.phi[base + m])) ++rep_rank;
          uint32_t mark = ps.committed;
          for (uint64_t c = 0; c < count && !best; ++c) {
            if (c == idx[0]) continue;
            idx[1] = c;
            ps.committed = mark;
            uint32_t w = weight_of_point_span_packed(ctx, ps, idx, 2, h + 1, 1, rep_rank);
            if (w >= h + 1)
              best = ScatterednessViolation{2, {idx[0], idx[1]}, w};
          }
        }
      });
      std::optional<ScatterednessViolation> best2;
      for (const auto& f : found)
        if (f && (!best2 || f->point_indices < best2->point_indices)) best2 = f;
      if (best2) {
        rep.violation = best2;
        rep.scattered = false;
        return rep;
      }
      continue;
    }
    parallel_ranges(reps.size(), policy, [&](unsigned chunk, uint64_t rb, uint64_t re) {
      RankScratch scratch;
      std::vector<uint64_t> idx(d);
      std::optional<ScatterednessViolation>& best = found[chunk];
      uint64_t step = (re - rb) / 20 + 1;
      for (uint64_t ri = rb; ri < re && !best; ++ri) {
        if (chunk == 0 && policy.progress && (ri - rb) % step == 0)
          policy.progress(double(ri - rb) / double(re - rb));
        idx[0] = reps[ri];
        std::vector<uint64_t> comb(d - 1);
        std::function<bool(uint32_t, uint64_t)> rec = [&](uint32_t pos, uint64_t from) -> bool {
          if (pos == d - 1) {
            for (uint32_t i = 0; i + 1 < d; ++i) idx[i + 1] = comb[i];
            if (d >= 3) {
              Mat rows = points_as_rows(ls, idx.data(), d);
              if (rank(tw, rows) < d) return false;  // covered at smaller d
            }
            uint32_t w = weight_of_point_span(ctx, fq, scratch, idx.data(), d, h + 1);
            if (w >= h + 1) {
              best = ScatterednessViolation{d, idx, w};
              return true;
            }
            return false;
          }
          for (uint64_t c = from; c < count; ++c) {
            if (c == idx[0]) continue;
            comb[pos] = c;
            if (rec(pos + 1, c + 1)) return true;
          }
          return false;
        };
        rec(0, 0);
      }
    });
    std::optional<ScatterednessViolation> best;
    for (const auto& f : found)
      if (f && (!best || f->point_indices < best->point_indices)) best = f;
    if (best) {
      rep.violation = best;
      rep.scattered = false;
      return rep;
    }
  }
  rep.scattered = true;
  return rep;
}

std::vector<ProjSubspace> pseudoregulus_elements_from_spec(const LinearSetSpec& spec) {
  validate_spec(spec);
  const FieldTower& tw = *spec.tower;
  const Layer& l2 = tw.layer(LayerId::fqn);
  uint32_t t = tw.params().t;
  uint32_t r = spec.r();
  uint64_t S2 = l2.size();
  uint64_t total = num_proj_points(S2, t);
  if (total > tw.params().enum_cap) fail(Errc::size_cap_exceeded, "too many pseudoregulus elements");
  std::vector<ProjSubspace> out;
  out.reserve(total);
  std::vector<uint32_t> xdig(t);
  for (uint32_t lead = 0; lead < t; ++lead) {
    uint32_t free_ct = t - lead - 1;
    uint64_t cnt = 1;
    for (uint32_t i = 0; i < free_ct; ++i) cnt *= S2;
    for (uint64_t idx = 0; idx < cnt; ++idx) {
      std::fill(xdig.begin(), xdig.end(), 0u);
      xdig[lead] = 1;
      uint64_t rest = idx;
      for (uint32_t i = 0; i < free_ct; ++i) {
        xdig[lead + 1 + i] = uint32_t(rest % S2);
        rest /= S2;
      }
      Mat rows(LayerId::fqn, spec.h + 1, r);
      for (uint32_t i = 0; i < t; ++i) rows.at(0, i) = xdig[i];
      for (uint32_t j = 0; j < spec.maps.size(); ++j)
        apply_semilinear(tw, spec.maps[j], xdig.data(), rows.row(j + 1) + size_t(j + 1) * t);
      out.push_back(proj_span(tw, LayerId::fqn, r, rows));
      if (out.back().dim() != spec.h + 1)
        fail(Errc::cross_check_disagreement, "pseudoregulus element degenerated");
    }
  }
  return out;
}

std::vector<ProjSubspace> find_transversals(const LinearSet& ls,
                                            const std::vector<ProjSubspace>& elements,
                                            const ExecPolicy& policy) {
  (void)policy;
  const FieldTower& tw = *ls.tower;
  uint32_t t = tw.params().t;
  if (elements.empty()) fail(Errc::bad_input, "no pseudoregulus elements supplied");
  uint32_t hp1 = elements[0].dim();
  std::vector<uint32_t> chosen;
  Mat acc(LayerId::fqn, 0, ls.r);
  for (uint32_t i = 0; i < elements.size() && chosen.size() < t; ++i) {
    Mat trial(LayerId::fqn, acc.rows + hp1, ls.r);
    std::copy(acc.a.begin(), acc.a.end(), trial.a.begin());
    std::copy(elements[i].basis.a.begin(), elements[i].basis.a.end(),
              trial.a.begin() + ptrdiff_t(acc.a.size()));
    if (rank(tw, trial) == trial.rows) {
      acc = rref(tw, trial);
      chosen.push_back(i);
    }
  }
  if (chosen.size() < t || acc.rows != ls.r)
    fail(Errc::not_pseudoregulus_type, "could not find t independent elements spanning the ambient");

  std::vector<std::vector<std::vector<uint32_t>>> pts(t);
  uint64_t prod = 1;
  for (uint32_t i = 0; i < t; ++i) {
    for_each_point(tw, elements[chosen[i]], [&](const uint32_t* v) {
      pts[i].push_back(std::vector<uint32_t>(v, v + ls.r));
    });
    prod *= pts[i].size();
    if (prod > tw.params().enum_cap)
      fail(Errc::size_cap_exceeded, "transversal candidate product exceeds the cap");
  }

  std::map<std::vector<uint32_t>, ProjSubspace> found;
  std::vector<uint32_t> pick(t, 0);
  while (true) {
    Mat rows(LayerId::fqn, t, ls.r);
    for (uint32_t i = 0; i < t; ++i)
      std::copy(pts[i][pick[i]].begin(), pts[i][pick[i]].end(), rows.row(i));
    ProjSubspace cand = proj_span(tw, LayerId::fqn, ls.r, rows);
    if (cand.dim() == t) {
      bool meets_all = true;
      for (const auto& e : elements) {
        Mat stack(LayerId::fqn, cand.basis.rows + e.basis.rows, ls.r);
        std::copy(cand.basis.a.begin(), cand.basis.a.end(), stack.a.begin());
        std::copy(e.basis.a.begin(), e.basis.a.end(),
                  stack.a.begin() + ptrdiff_t(cand.basis.a.size()));
        if (rank(tw, stack) == cand.dim() + e.dim()) {
          meets_all = false;
          break;
        }
      }
      if (meets_all) found.emplace(cand.basis.a, cand);
    }
    uint32_t i = 0;
    while (i < t && ++pick[i] == pts[i].size()) {
      pick[i] = 0;
      ++i;
    }
    if (i == t) break;
  }

  if (found.size() != hp1)
    fail(Errc::transversal_count_mismatch, "expected exactly " + std::to_string(hp1) +
                                               " transversals, found " + std::to_string(found.size()));

  std::vector<ProjSubspace> transversals;
  for (auto& [key, sub] : found) transversals.push_back(sub);

  {
    Mat stack(LayerId::fqn, uint32_t(transversals.size()) * t, ls.r);
    uint32_t at = 0;
    for (const auto& tr : transversals) {
      std::copy(tr.basis.a.begin(), tr.basis.a.end(), stack.row(at));
      at += t;
    }
    if (rank(tw, stack) != ls.r)
      fail(Errc::transversal_count_mismatch, "transversals do not span the ambient space");
  }

  for (uint32_t skip = 0; skip < transversals.size(); ++skip) {
    Mat stack(LayerId::fqn, (uint32_t(transversals.size()) - 1) * t, ls.r);
    uint32_t at = 0;
    for (uint32_t i = 0; i < transversals.size(); ++i) {
      if (i == skip) continue;
      std::copy(transversals[i].basis.a.begin(), transversals[i].basis.a.end(), stack.row(at));
      at += t;
    }
    Mat k_basis = rref(tw, stack);
    for (uint64_t pidx = 0; pidx < ls.pts.count(); ++pidx)
      if (in_rowspace(tw, k_basis, ls.pts.at(pidx)))
        fail(Errc::not_pseudoregulus_type, "a K_i meets the linear set");
  }
  return transversals;
}

PseudoregulusReport detect_pseudoregulus(const LinearSet& ls, uint32_t h, const ExecPolicy& policy,
                                         bool strict) {
  const FieldTower& tw = *ls.tower;
  const Layer& fq = tw.layer(LayerId::fq);
  const Layer& l2 = tw.layer(LayerId::fqn);
  uint32_t n = tw.params().n;
  uint32_t t = tw.params().t;
  uint64_t count = ls.pts.count();
  uint32_t d = h + 1;

  long double est = 1;
  for (uint32_t i = 0; i < d; ++i) est *= (long double)(count - i) / (i + 1);
  if (est > (long double)tw.params().enum_cap)
    fail(Errc::size_cap_exceeded, "blind pseudoregulus detection exceeds the cap");

  WeightContext ctx = build_weight_context(ls);
  std::map<std::vector<uint32_t>, uint32_t> seen;  // RREF key -> weight
  RankScratch scratch;
  std::vector<uint64_t> idx(d);
  std::function<void(uint32_t, uint64_t)> rec = [&](uint32_t pos, uint64_t from) {
    if (pos == d) {
      Mat rows = points_as_rows(ls, idx.data(), d);
      Mat span = rref(tw, rows);
      if (span.rows < d) return;
      if (seen.count(span.a)) return;
      uint32_t w = weight_of_point_span(ctx, fq, scratch, idx.data(), d, 0);
      seen.emplace(std::move(span.a), w);
      return;
    }
    for (uint64_t c = from; c < count; ++c) {
      idx[pos] = c;
      rec(pos + 1, c + 1);
    }
  };
  rec(0, 0);

  PseudoregulusReport rep;
  rep.expected_count = num_proj_points(l2.size(), t);
  for (auto& [key, w] : seen) {
    if (w != n) continue;
    Mat basis(LayerId::fqn, d, ls.r);
    basis.a = key;
    rep.elements.push_back(ProjSubspace{ls.r, basis});
  }
  rep.subgeometry_branch = (n == h + 1);
  if (rep.elements.size() == rep.expected_count) {
    bool disjoint = true;
    for (size_t i = 0; i < rep.elements.size() && disjoint; ++i)
      for (size_t j = i + 1; j < rep.elements.size() && disjoint; ++j) {
        Mat stack(LayerId::fqn, 2 * d, ls.r);
        std::copy(rep.elements[i].basis.a.begin(), rep.elements[i].basis.a.end(), stack.a.begin());
        std::copy(rep.elements[j].basis.a.begin(), rep.elements[j].basis.a.end(),
                  stack.a.begin() + ptrdiff_t(size_t(d) * ls.r));
        disjoint = rank(tw, stack) == 2 * d;
      }
    rep.def_a = disjoint;
    if (disjoint) {
      rep.transversals = find_transversals(ls, rep.elements, policy);
      rep.def_b = true;
      rep.unique = !rep.subgeometry_branch;
    }
  } else if (!rep.subgeometry_branch && strict) {
    fail(Errc::not_pseudoregulus_type,
         "found " + std::to_string(rep.elements.size()) + " weight-n subspaces, expected " +
             std::to_string(rep.expected_count));
  }
  return rep;
}

OffPseudoWeightReport max_weight_off_pseudoregulus(const LinearSet& ls,
                                                   const std::vector<ProjSubspace>& family,
                                                   const ExecPolicy& policy) {
  (void)policy;
  const FieldTower& tw = *ls.tower;
  uint32_t n = tw.params().n;
  if (family.empty()) fail(Errc::bad_input, "empty pseudoregulus family");
  uint32_t d = family[0].dim();
  uint32_t h = d - 1;
  std::set<std::vector<uint32_t>> family_keys;
  for (const auto& e : family) family_keys.insert(e.basis.a);

  OffPseudoWeightReport rep;
  rep.bound = (h * n) / (h + 1) + 1;
  for_each_subspace(tw, LayerId::fqn, ls.r, d, tw.params().enum_cap, [&](const Mat& m) {
    ++rep.swept;
    uint32_t w = fq_intersect_with_subspace(tw, ls.U, ProjSubspace{ls.r, m}).dim();
    bool in_family = family_keys.count(m.a) > 0;
    if (w == n) ++rep.weight_n_count;
    if (in_family) {
      if (w != n) fail(Errc::cross_check_disagreement, "family member without weight n");
      return;
    }
    rep.max_weight = std::max(rep.max_weight, w);
  });
  rep.weight_n_equals_family = (rep.weight_n_count == family_keys.size());
  rep.bound_ok = n <= h + 1 || rep.max_weight <= rep.bound;
  return rep;
}

bool direct_sum_decomposes(const LinearSet& ls, const std::vector<ProjSubspace>& elements) {
  const FieldTower& tw = *ls.tower;
  uint32_t t = tw.params().t;
  if (elements.empty()) return false;
  uint32_t hp1 = elements[0].dim();
  std::vector<uint32_t> chosen;
  Mat acc(LayerId::fqn, 0, ls.r);
  for (uint32_t i = 0; i < elements.size() && chosen.size() < t; ++i) {
    Mat trial(LayerId::fqn, acc.rows + hp1, ls.r);
    std::copy(acc.a.begin(), acc.a.end(), trial.a.begin());
    std::copy(elements[i].basis.a.begin(), elements[i].basis.a.end(),
              trial.a.begin() + ptrdiff_t(acc.a.size()));
    if (rank(tw, trial) == trial.rows) {
      acc = rref(tw, trial);
      chosen.push_back(i);
    }
  }
  if (chosen.size() < t) return false;
  FqSubspace sum{ls.r, Mat(LayerId::fq, 0, ls.U.basis.cols)};
  uint32_t dim_total = 0;
  for (uint32_t i : chosen) {
    FqSubspace block = fq_intersect_with_subspace(tw, ls.U, elements[i]);
    dim_total += block.dim();
    sum = fq_sum(tw, sum, block);
  }
  return dim_total == ls.rank() && sum == ls.U;
}

}  // namespace galgeo
