#include "galgeo/linalg.hpp"

#include <algorithm>

namespace galgeo {

Mat Mat::identity(LayerId l, uint32_t n) {
  Mat m(l, n, n);
  for (uint32_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

Mat rref(const FieldTower& tw, Mat m, std::vector<uint32_t>& pivots) {
  const Layer& k = tw.layer(m.layer);
  pivots.clear();
  uint32_t r = 0;
  for (uint32_t c = 0; c < m.cols && r < m.rows; ++c) {
    uint32_t p = r;
    while (p < m.rows && m.at(p, c) == 0) ++p;
    if (p == m.rows) continue;
    if (p != r)
      for (uint32_t j = c; j < m.cols; ++j) std::swap(m.at(p, j), m.at(r, j));
    uint32_t piv_inv = k.inv(m.at(r, c));
    if (piv_inv != 1)
      for (uint32_t j = c; j < m.cols; ++j) m.at(r, j) = k.mul(m.at(r, j), piv_inv);
    for (uint32_t i = 0; i < m.rows; ++i) {
      if (i == r) continue;
      uint32_t f = m.at(i, c);
      if (!f) continue;
      for (uint32_t j = c; j < m.cols; ++j) m.at(i, j) = k.sub(m.at(i, j), k.mul(f, m.at(r, j)));
    }
    pivots.push_back(c);
    ++r;
  }
  m.a.resize(size_t(r) * m.cols);
  m.rows = r;
  return m;
}

Mat rref(const FieldTower& tw, Mat m) {
  std::vector<uint32_t> pivots;
  return rref(tw, std::move(m), pivots);
}

uint32_t rank(const FieldTower& tw, const Mat& m) { return rref(tw, m).rows; }

Elt det(const FieldTower& tw, const Mat& m) {
  if (m.rows != m.cols) fail(Errc::dimension_mismatch, "det: matrix not square");
  const Layer& k = tw.layer(m.layer);
  Mat w = m;
  uint32_t n = m.rows;
  uint32_t d = 1;
  bool flip = false;
  for (uint32_t c = 0; c < n; ++c) {
    uint32_t p = c;
    while (p < n && w.at(p, c) == 0) ++p;
    if (p == n) return tw.zero(m.layer);
    if (p != c) {
      for (uint32_t j = c; j < n; ++j) std::swap(w.at(p, j), w.at(c, j));
      flip = !flip;
    }
    uint32_t piv = w.at(c, c);
    d = k.mul(d, piv);
    uint32_t piv_inv = k.inv(piv);
    for (uint32_t i = c + 1; i < n; ++i) {
      uint32_t f = w.at(i, c);
      if (!f) continue;
      f = k.mul(f, piv_inv);
      for (uint32_t j = c; j < n; ++j) w.at(i, j) = k.sub(w.at(i, j), k.mul(f, w.at(c, j)));
    }
  }
  if (flip) d = k.neg(d);
  return {m.layer, d};
}

Mat mat_mul(const FieldTower& tw, const Mat& a, const Mat& b) {
  if (a.layer != b.layer) fail(Errc::layer_mismatch, "mat_mul: layers differ");
  if (a.cols != b.rows) fail(Errc::dimension_mismatch, "mat_mul: shape mismatch");
  const Layer& k = tw.layer(a.layer);
  Mat c(a.layer, a.rows, b.cols);
  for (uint32_t i = 0; i < a.rows; ++i)
    for (uint32_t l = 0; l < a.cols; ++l) {
      uint32_t v = a.at(i, l);
      if (!v) continue;
      for (uint32_t j = 0; j < b.cols; ++j)
        if (b.at(l, j)) c.at(i, j) = k.add(c.at(i, j), k.mul(v, b.at(l, j)));
    }
  return c;
}

Mat kernel_basis(const FieldTower& tw, const Mat& m) {
  std::vector<uint32_t> pivots;
  Mat r = rref(tw, m, pivots);
  const Layer& k = tw.layer(m.layer);
  std::vector<bool> is_pivot(m.cols, false);
  for (uint32_t c : pivots) is_pivot[c] = true;
  Mat out(m.layer, 0, m.cols);
  for (uint32_t fc = 0; fc < m.cols; ++fc) {
    if (is_pivot[fc]) continue;
    std::vector<uint32_t> v(m.cols, 0);
    v[fc] = 1;
    for (uint32_t i = 0; i < r.rows; ++i) v[pivots[i]] = k.neg(r.at(i, fc));
    out.a.insert(out.a.end(), v.begin(), v.end());
    ++out.rows;
  }
  return rref(tw, std::move(out));
}

std::optional<std::vector<uint32_t>> coords_in_rref(const FieldTower& tw, const Mat& basis,
                                                    const std::vector<uint32_t>& pivots,
                                                    const uint32_t* v) {
  const Layer& k = tw.layer(basis.layer);
  std::vector<uint32_t> c(basis.rows, 0);
  std::vector<uint32_t> resid(v, v + basis.cols);
  for (uint32_t i = 0; i < basis.rows; ++i) {
    uint32_t f = resid[pivots[i]];
    c[i] = f;
    if (!f) continue;
    for (uint32_t j = 0; j < basis.cols; ++j)
      if (basis.at(i, j)) resid[j] = k.sub(resid[j], k.mul(f, basis.at(i, j)));
  }
  for (uint32_t j = 0; j < basis.cols; ++j)
    if (resid[j]) return std::nullopt;
  return c;
}

bool in_rowspace(const FieldTower& tw, const Mat& rref_basis, const uint32_t* v) {
  const Layer& k = tw.layer(rref_basis.layer);
  std::vector<uint32_t> resid(v, v + rref_basis.cols);
  uint32_t start = 0;
  for (uint32_t i = 0; i < rref_basis.rows; ++i) {
    uint32_t pc = start;
    while (pc < rref_basis.cols && rref_basis.at(i, pc) == 0) ++pc;
    start = pc;
    if (pc == rref_basis.cols) break;
    uint32_t f = resid[pc];
    if (!f) continue;
    for (uint32_t j = pc; j < rref_basis.cols; ++j)
      if (rref_basis.at(i, j)) resid[j] = k.sub(resid[j], k.mul(f, rref_basis.at(i, j)));
  }
  for (uint32_t x : resid)
    if (x) return false;
  return true;
}

ProjSubspace proj_span(const FieldTower& tw, LayerId layer, uint32_t ambient, const Mat& gens) {
  if (gens.rows && gens.cols != ambient) fail(Errc::ambient_mismatch, "proj_span: column count");
  Mat b = gens;
  b.layer = layer;
  b.cols = ambient;
  return {ambient, rref(tw, std::move(b))};
}

static void require_same_ambient(const ProjSubspace& a, const ProjSubspace& b) {
  if (a.ambient != b.ambient || a.basis.layer != b.basis.layer)
    fail(Errc::ambient_mismatch, "subspaces live in different ambients");
}

ProjSubspace proj_sum(const FieldTower& tw, const ProjSubspace& a, const ProjSubspace& b) {
  require_same_ambient(a, b);
  Mat stack(a.basis.layer, a.basis.rows + b.basis.rows, a.ambient);
  std::copy(a.basis.a.begin(), a.basis.a.end(), stack.a.begin());
  std::copy(b.basis.a.begin(), b.basis.a.end(),
            stack.a.begin() + ptrdiff_t(a.basis.a.size()));
  return {a.ambient, rref(tw, std::move(stack))};
}

// Zassenhaus: rows [A|A] and [B|0]; rows with zero left half carry the
// intersection in the right half.
static Mat intersect_rows(const FieldTower& tw, const Mat& a, const Mat& b) {
  uint32_t m = a.cols;
  Mat big(a.layer, a.rows + b.rows, 2 * m);
  for (uint32_t i = 0; i < a.rows; ++i)
    for (uint32_t j = 0; j < m; ++j) {
      big.at(i, j) = a.at(i, j);
      big.at(i, m + j) = a.at(i, j);
    }
  for (uint32_t i = 0; i < b.rows; ++i)
    for (uint32_t j = 0; j < m; ++j) big.at(a.rows + i, j) = b.at(i, j);
  Mat r = rref(tw, std::move(big));
  Mat out(a.layer, 0, m);
  for (uint32_t i = 0; i < r.rows; ++i) {
    bool left_zero = true;
    for (uint32_t j = 0; j < m && left_zero; ++j) left_zero = (r.at(i, j) == 0);
    if (left_zero) {
      out.a.insert(out.a.end(), r.row(i) + m, r.row(i) + 2 * m);
      ++out.rows;
    }
  }
  return rref(tw, std::move(out));
}

ProjSubspace proj_intersect(const FieldTower& tw, const ProjSubspace& a, const ProjSubspace& b) {
  require_same_ambient(a, b);
  return {a.ambient, intersect_rows(tw, a.basis, b.basis)};
}

bool proj_contains(const FieldTower& tw, const ProjSubspace& s, const uint32_t* v) {
  return in_rowspace(tw, s.basis, v);
}

FqSubspace fq_span(const FieldTower& tw, uint32_t ambient_upper, const Mat& gens) {
  Mat b = gens;
  b.layer = LayerId::fq;
  return {ambient_upper, rref(tw, std::move(b))};
}

static void require_same_fq_ambient(const FqSubspace& a, const FqSubspace& b) {
  if (a.ambient_upper != b.ambient_upper || a.basis.cols != b.basis.cols)
    fail(Errc::ambient_mismatch, "F_q subspaces live in different ambients");
}

FqSubspace fq_sum(const FieldTower& tw, const FqSubspace& a, const FqSubspace& b) {
  require_same_fq_ambient(a, b);
  Mat stack(LayerId::fq, a.basis.rows + b.basis.rows, a.basis.cols);
  std::copy(a.basis.a.begin(), a.basis.a.end(), stack.a.begin());
  std::copy(b.basis.a.begin(), b.basis.a.end(),
            stack.a.begin() + ptrdiff_t(a.basis.a.size()));
  return {a.ambient_upper, rref(tw, std::move(stack))};
}

FqSubspace fq_intersect(const FieldTower& tw, const FqSubspace& a, const FqSubspace& b) {
  require_same_fq_ambient(a, b);
  return {a.ambient_upper, intersect_rows(tw, a.basis, b.basis)};
}

std::vector<uint32_t> blowup_vec(const FieldTower& tw, LayerId upper, const uint32_t* v, uint32_t len) {
  const Layer& lu = tw.layer(upper);
  uint32_t d = lu.degree();
  std::vector<uint32_t> out(size_t(len) * d);
  for (uint32_t i = 0; i < len; ++i) lu.to_digits(v[i], out.data() + size_t(i) * d);
  return out;
}

std::vector<uint32_t> blowdown_vec(const FieldTower& tw, LayerId upper, const uint32_t* v, uint32_t len) {
  const Layer& lu = tw.layer(upper);
  uint32_t d = lu.degree();
  if (len % d) fail(Errc::dimension_mismatch, "blowdown: length not a multiple of the degree");
  std::vector<uint32_t> out(len / d);
  for (uint32_t i = 0; i < out.size(); ++i) out[i] = lu.from_digits(v + size_t(i) * d);
  return out;
}

FqSubspace blowup_subspace(const FieldTower& tw, const ProjSubspace& s) {
  if (s.basis.layer != LayerId::fqn)
    fail(Errc::layer_mismatch, "blowup_subspace expects an F_{q^n} subspace");
  const Layer& l2 = tw.layer(LayerId::fqn);
  uint32_t n = l2.degree();
  Mat rows(LayerId::fq, s.basis.rows * n, s.ambient * n);
  std::vector<uint32_t> scaled(s.ambient);
  for (uint32_t i = 0; i < s.basis.rows; ++i) {
    uint32_t beta = 1;  // runs over the power basis 1, Z, Z^2, ...
    for (uint32_t m = 0; m < n; ++m) {
      for (uint32_t j = 0; j < s.ambient; ++j) scaled[j] = l2.mul(beta, s.basis.at(i, j));
      auto blown = blowup_vec(tw, LayerId::fqn, scaled.data(), s.ambient);
      std::copy(blown.begin(), blown.end(), rows.row(i * n + m));
      if (m + 1 < n) beta = uint32_t(uint64_t(beta) * tw.q());
    }
  }
  return fq_span(tw, s.ambient, rows);
}

FqSubspace fq_intersect_with_subspace(const FieldTower& tw, const FqSubspace& u, const ProjSubspace& w) {
  if (u.ambient_upper != w.ambient) fail(Errc::ambient_mismatch, "weight: ambient mismatch");
  FqSubspace wq = blowup_subspace(tw, w);
  return fq_intersect(tw, u, wq);
}

uint64_t num_proj_points(uint64_t field_size, uint32_t rank) {
  // (field_size^rank - 1)/(field_size - 1), saturating on overflow
  unsigned __int128 total = 0, pw = 1;
  for (uint32_t i = 0; i < rank; ++i) {
    total += pw;
    if (total > (unsigned __int128)UINT64_MAX) return UINT64_MAX;
    pw *= field_size;
  }
  return uint64_t(total);
}

uint64_t gaussian_binomial(uint64_t field_size, uint32_t r, uint32_t k) {
  if (k > r) return 0;
  // Magnitude estimate first: saturate to UINT64_MAX when the count cannot
  // fit, so cap checks stay meaningful without overflow.
  long double approx = 1;
  for (uint32_t i = 1; i <= k; ++i) {
    long double num = 1, den = 1;
    for (uint32_t j = 0; j < r - k + i; ++j) num *= (long double)field_size;
    for (uint32_t j = 0; j < i; ++j) den *= (long double)field_size;
    approx *= (num - 1) / (den - 1);
  }
  if (approx > 9.0e17L) return UINT64_MAX;
  // Exact: prod_{i=1}^{k} (q^{r-k+i}-1)/(q^i-1); each prefix is the integer
  // [r-k+i, i]_q, so the interleaved division is exact.
  unsigned __int128 acc = 1;
  for (uint32_t i = 1; i <= k; ++i) {
    unsigned __int128 num = 1;
    for (uint32_t j = 0; j < r - k + i; ++j) num *= field_size;
    uint64_t den = 1;
    for (uint32_t j = 0; j < i; ++j) den *= field_size;
    acc *= (num - 1);
    acc /= (den - 1);
  }
  return uint64_t(acc);
}

void for_each_point(const FieldTower& tw, const ProjSubspace& s,
                    const std::function<void(const uint32_t*)>& fn) {
  const Layer& k = tw.layer(s.basis.layer);
  uint32_t d = s.basis.rows;
  if (d == 0) return;
  uint64_t sz = k.size();
  std::vector<uint32_t> v(s.ambient);
  std::vector<uint32_t> coef(d, 0);
  for (uint32_t lead = 0; lead < d; ++lead) {
    uint32_t free_ct = d - lead - 1;
    uint64_t count = 1;
    for (uint32_t i = 0; i < free_ct; ++i) count *= sz;
    for (uint64_t idx = 0; idx < count; ++idx) {
      std::fill(coef.begin(), coef.end(), 0);
      coef[lead] = 1;
      uint64_t rest = idx;
      for (uint32_t i = 0; i < free_ct; ++i) {
        coef[lead + 1 + i] = uint32_t(rest % sz);
        rest /= sz;
      }
      std::fill(v.begin(), v.end(), 0);
      for (uint32_t r = lead; r < d; ++r) {
        uint32_t c = coef[r];
        if (!c) continue;
        for (uint32_t j = 0; j < s.ambient; ++j)
          if (s.basis.at(r, j)) v[j] = k.add(v[j], k.mul(c, s.basis.at(r, j)));
      }
      fn(v.data());
    }
  }
}

void for_each_subspace(const FieldTower& tw, LayerId layer, uint32_t ambient, uint32_t k,
                       uint64_t cap, const std::function<void(const Mat&)>& fn) {
  if (k > ambient) return;
  const Layer& fld = tw.layer(layer);
  uint64_t total = gaussian_binomial(fld.size(), ambient, k);
  if (total > cap) fail(Errc::size_cap_exceeded, "subspace enumeration exceeds the cap");
  if (k == 0) {
    Mat empty(layer, 0, ambient);
    fn(empty);
    return;
  }
  uint64_t sz = fld.size();
  std::vector<uint32_t> piv(k);
  for (uint32_t i = 0; i < k; ++i) piv[i] = i;
  Mat m(layer, k, ambient);
  std::vector<std::pair<uint32_t, uint32_t>> free_pos;
  std::vector<bool> is_piv(ambient);
  while (true) {
    free_pos.clear();
    std::fill(is_piv.begin(), is_piv.end(), false);
    for (uint32_t c : piv) is_piv[c] = true;
    // free entries sit right of the row's pivot in non-pivot columns
    for (uint32_t i = 0; i < k; ++i)
      for (uint32_t j = piv[i] + 1; j < ambient; ++j)
        if (!is_piv[j]) free_pos.push_back({i, j});
    uint64_t count = 1;
    for (size_t i = 0; i < free_pos.size(); ++i) count *= sz;
    for (uint64_t idx = 0; idx < count; ++idx) {
      std::fill(m.a.begin(), m.a.end(), 0);
      for (uint32_t i = 0; i < k; ++i) m.at(i, piv[i]) = 1;
      uint64_t rest = idx;
      for (auto [ri, cj] : free_pos) {
        m.at(ri, cj) = uint32_t(rest % sz);
        rest /= sz;
      }
      fn(m);
    }
    int i = int(k) - 1;
    while (i >= 0 && piv[size_t(i)] == ambient - k + uint32_t(i)) --i;
    if (i < 0) break;
    ++piv[size_t(i)];
    for (uint32_t j = uint32_t(i) + 1; j < k; ++j) piv[j] = piv[j - 1] + 1;
  }
}

}  // namespace galgeo
