#include "galgeo/moore.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace galgeo {

ExponentSet make_exponent_set(uint32_t n, std::vector<uint32_t> exps) {
  if (n == 0) fail(Errc::bad_input, "modulus n must be positive");
  if (exps.empty()) fail(Errc::bad_input, "exponent set must be nonempty");
  std::set<uint32_t> seen;
  for (uint32_t e : exps) {
    if (e >= n) fail(Errc::exponent_out_of_range, "exponent >= n");
    if (!seen.insert(e).second) fail(Errc::duplicate_exponent, "duplicate exponent");
  }
  std::sort(exps.begin(), exps.end());
  uint32_t mn = exps.front();
  if (mn) {
    for (auto& e : exps) e = (e + n - mn) % n;
    std::sort(exps.begin(), exps.end());
  }
  return {n, std::move(exps)};
}

ProgressionInfo classify_progression(const ExponentSet& I) {
  uint32_t n = I.n, k = I.k();
  if (k == 1) return {true, 1, 0};
  for (uint32_t d = 1; d < n; ++d) {
    if (std::gcd(d, n) != 1) continue;
    std::vector<uint32_t> prog;
    prog.reserve(k);
    for (uint32_t j = 0; j < k; ++j) prog.push_back((uint64_t(j) * d) % n);
    for (uint32_t s = 0; s < n; ++s) {
      std::vector<uint32_t> shifted;
      shifted.reserve(k);
      for (uint32_t v : prog) shifted.push_back((v + s) % n);
      std::sort(shifted.begin(), shifted.end());
      if (shifted == I.exps) return {true, d, s};
    }
  }
  return {};
}

Mat moore_matrix(const FieldTower& tw, const std::vector<uint32_t>& A,
                 const std::vector<uint32_t>& exps) {
  if (A.size() != exps.size()) fail(Errc::arity_mismatch, "tuple arity must match |I|");
  const Layer& l2 = tw.layer(LayerId::fqn);
  uint32_t k = uint32_t(A.size());
  Mat m(LayerId::fqn, k, k);
  for (uint32_t j = 0; j < k; ++j)
    for (uint32_t l = 0; l < k; ++l) m.at(j, l) = l2.frob_q(A[j], exps[l]);
  return m;
}

Elt moore_det(const FieldTower& tw, const std::vector<uint32_t>& A,
              const std::vector<uint32_t>& exps) {
  return det(tw, moore_matrix(tw, A, exps));
}

namespace {

uint64_t saturating_pow(uint64_t base, uint32_t e) {
  unsigned __int128 acc = 1;
  for (uint32_t i = 0; i < e; ++i) {
    acc *= base;
    if (acc > (unsigned __int128)UINT64_MAX) return UINT64_MAX;
  }
  return uint64_t(acc);
}

// One chunk of the independent-tuple sweep with incremental elimination of
// the Moore rows. A tuple prefix whose rows become dependent certifies a
// vanishing determinant for every completion, so the chunk records
// prefix + least independent completion and stops: later prefixes in the
// DFS are lexicographically greater.
struct DetSweep {
  const FieldTower& tw;
  const Layer& l2;
  const Layer& fq;
  const std::vector<uint32_t>& exps;
  uint32_t k;
  uint64_t S;
  uint64_t qsz;

  std::vector<uint8_t> in_span;       // membership bitmap for the prefix span
  std::vector<uint32_t> span_elems;   // the span as a flat list (0 first)
  std::vector<size_t> span_mark;      // span_elems size before each push
  std::vector<uint32_t> prefix;
  std::vector<std::vector<uint32_t>> elim;  // eliminated rows per level
  std::vector<uint32_t> elim_pivot;
  std::optional<std::vector<uint32_t>> found;

  DetSweep(const FieldTower& t, const std::vector<uint32_t>& e)
      : tw(t),
        l2(t.layer(LayerId::fqn)),
        fq(t.layer(LayerId::fq)),
        exps(e),
        k(uint32_t(e.size())),
        S(t.size(LayerId::fqn)),
        qsz(t.q()) {
    in_span.assign(S, 0);
    in_span[0] = 1;
    span_elems = {0};
    span_mark.assign(k, 1);
    prefix.assign(k, 0);
    elim.assign(k, std::vector<uint32_t>(k, 0));
    elim_pivot.assign(k, 0);
  }

  void push_span(uint32_t level, uint32_t alpha) {
    span_mark[level] = span_elems.size();
    size_t old = span_elems.size();
    for (uint32_t c = 1; c < qsz; ++c) {
      uint32_t ca = l2.mul(c, alpha);
      for (size_t i = 0; i < old; ++i) {
        uint32_t u = l2.add(span_elems[i], ca);
        if (!in_span[u]) {
          in_span[u] = 1;
          span_elems.push_back(u);
        }
      }
    }
  }

  void pop_span(uint32_t level) {
    for (size_t i = span_mark[level]; i < span_elems.size(); ++i) in_span[span_elems[i]] = 0;
    span_elems.resize(span_mark[level]);
  }

  // Reduce the Moore row of alpha against the eliminated prefix rows;
  // returns false if it vanishes (dependent rows).
  bool reduce_row(uint32_t level, uint32_t alpha, std::vector<uint32_t>& row) {
    for (uint32_t l = 0; l < k; ++l) row[l] = l2.frob_q(alpha, exps[l]);
    for (uint32_t j = 0; j < level; ++j) {
      uint32_t p = elim_pivot[j];
      uint32_t f = row[p];
      if (!f) continue;
      const auto& er = elim[j];
      for (uint32_t l = 0; l < k; ++l)
        if (er[l]) row[l] = l2.sub(row[l], l2.mul(f, er[l]));
    }
    for (uint32_t l = 0; l < k; ++l)
      if (row[l]) return true;
    return false;
  }

  void commit_row(uint32_t level, std::vector<uint32_t>& row) {
    uint32_t p = 0;
    while (!row[p]) ++p;
    uint32_t inv = l2.inv(row[p]);
    if (inv != 1)
      for (uint32_t l = 0; l < k; ++l) row[l] = l2.mul(row[l], inv);
    elim[level] = row;
    elim_pivot[level] = p;
  }

  // Extend the current prefix (levels < level filled) with the least
  // independent completion.
  std::vector<uint32_t> least_completion(uint32_t level) {
    std::vector<uint32_t> out(prefix.begin(), prefix.begin() + level);
    std::vector<uint32_t> pushed;
    for (uint32_t m = level; m < k; ++m) {
      uint32_t a = 0;
      while (in_span[a]) ++a;
      out.push_back(a);
      if (m + 1 < k) {
        push_span(m, a);
        pushed.push_back(m);
      }
    }
    for (auto it = pushed.rbegin(); it != pushed.rend(); ++it) pop_span(*it);
    return out;
  }

  void recurse(uint32_t level) {
    if (found) return;
    std::vector<uint32_t> row(k);
    for (uint64_t a = 1; a < S; ++a) {
      if (in_span[a]) continue;
      prefix[level] = uint32_t(a);
      if (!reduce_row(level, uint32_t(a), row)) {
        // dependent rows: prefix + (a) completes to the least violation
        push_span(level, uint32_t(a));
        found = least_completion(level + 1);
        // prepend handled inside least_completion via prefix
        pop_span(level);
        return;
      }
      if (level + 1 == k) continue;
      commit_row(level, row);
      push_span(level, uint32_t(a));
      recurse(level + 1);
      pop_span(level);
      if (found) return;
    }
  }

  // Runs alpha_0 in [a_begin, a_end).
  void run_range(uint64_t a_begin, uint64_t a_end) {
    std::vector<uint32_t> row(k);
    for (uint64_t a = std::max<uint64_t>(a_begin, 1); a < a_end; ++a) {
      prefix[0] = uint32_t(a);
      if (!reduce_row(0, uint32_t(a), row)) {
        push_span(0, uint32_t(a));
        found = least_completion(1);
        pop_span(0);
        return;
      }
      if (k == 1) continue;
      commit_row(0, row);
      push_span(0, uint32_t(a));
      recurse(1);
      pop_span(0);
      if (found) return;
    }
  }
};

MooreVerdict base_verdict(const FieldTower& tw, const ExponentSet& I) {
  MooreVerdict v;
  v.I = I;
  v.q = tw.q();
  v.progression = classify_progression(I);
  return v;
}

}  // namespace

MooreVerdict is_moore_det(const FieldTower& tw, const ExponentSet& I, const ExecPolicy& policy) {
  if (I.n != tw.params().n) fail(Errc::bad_input, "exponent set modulus differs from tower n");
  uint64_t S = tw.size(LayerId::fqn);
  uint64_t work = saturating_pow(S, I.k());
  if (work > tw.params().enum_cap)
    fail(Errc::size_cap_exceeded, "determinant oracle sweep exceeds the cap");

  unsigned nchunks = policy.resolved_threads();
  uint64_t range = S - 1;
  if (nchunks > range) nchunks = unsigned(range);
  std::vector<std::optional<std::vector<uint32_t>>> results(std::max(1u, nchunks));
  parallel_ranges(range, policy, [&](unsigned chunk, uint64_t begin, uint64_t end) {
    DetSweep sweep(tw, I.exps);
    sweep.run_range(begin + 1, end + 1);
    results[chunk] = sweep.found;
  });

  MooreVerdict v = base_verdict(tw, I);
  v.method = MooreMethod::det_oracle;
  std::optional<std::vector<uint32_t>> best;
  for (const auto& r : results)
    if (r && (!best || *r < *best)) best = r;
  v.is_moore = !best.has_value();
  if (best) {
    v.witness = best;
    if (moore_det(tw, *best, I.exps).enc != 0)
      fail(Errc::cross_check_disagreement, "det-oracle witness has nonzero determinant");
  }
  return v;
}

namespace {

// Witness tuple from a violating codeword: any k independent kernel
// elements of f give a vanishing Moore determinant.
std::vector<uint32_t> witness_from_codeword(const FieldTower& tw, const QPoly& f, uint32_t k) {
  const Layer& l2 = tw.layer(LayerId::fqn);
  Mat kern = kernel_basis(tw, fq_matrix(f));
  if (kern.rows < k) fail(Errc::cross_check_disagreement, "witness codeword kernel too small");
  std::vector<uint32_t> tuple(k);
  for (uint32_t i = 0; i < k; ++i) {
    uint32_t digits[64];
    for (uint32_t m = 0; m < kern.cols; ++m) digits[m] = kern.at(i, m);
    tuple[i] = l2.from_digits(digits);
  }
  return tuple;
}

}  // namespace

MooreVerdict is_moore_mrd(const FieldTower& tw, const ExponentSet& I, const ExecPolicy& policy,
                          bool allow_complement) {
  if (I.n != tw.params().n) fail(Errc::bad_input, "exponent set modulus differs from tower n");
  uint64_t S = tw.size(LayerId::fqn);
  uint64_t words = num_proj_points(S, I.k());
  MooreVerdict v = base_verdict(tw, I);
  v.method = MooreMethod::mrd_criterion;
  if (words <= tw.params().enum_cap) {
    MrdReport rep = mrd_check(monomial_code(tw, I.exps), policy);
    v.is_moore = rep.is_mrd;
    if (rep.witness) {
      auto wt = witness_from_codeword(tw, *rep.witness, I.k());
      if (moore_det(tw, wt, I.exps).enc != 0)
        fail(Errc::cross_check_disagreement, "kernel-derived witness has nonzero determinant");
      v.witness = std::move(wt);
    }
    return v;
  }
  if (allow_complement) {
    uint64_t comp_words = num_proj_points(S, tw.params().n - I.k());
    if (tw.params().n > I.k() && comp_words <= tw.params().enum_cap) {
      MrdReport rep = mrd_check_via_complement(tw, I.exps, policy);
      v.is_moore = rep.is_mrd;
      v.complement_fastpath = true;
      return v;
    }
  }
  fail(Errc::size_cap_exceeded, "MRD criterion sweep exceeds the cap");
}

MooreVerdict is_moore(const FieldTower& tw, const ExponentSet& I, const MooreOptions& opts,
                      const ExecPolicy& policy) {
  if (opts.method == MooreMethod::det_oracle) return is_moore_det(tw, I, policy);
  if (opts.method == MooreMethod::mrd_criterion) return is_moore_mrd(tw, I, policy, opts.allow_complement);

  uint64_t S = tw.size(LayerId::fqn);
  uint64_t words = num_proj_points(S, I.k());
  uint64_t det_work = saturating_pow(S, I.k());
  bool mrd_fits = words <= tw.params().enum_cap ||
                  (opts.allow_complement && complement_rule_validated() && I.k() < tw.params().n &&
                   num_proj_points(S, tw.params().n - I.k()) <= tw.params().enum_cap);
  bool det_fits = det_work <= tw.params().enum_cap;
  bool want_both = opts.method == MooreMethod::both;
  if (!mrd_fits && !det_fits) fail(Errc::size_cap_exceeded, "both Moore criteria exceed the cap");
  if (want_both && (!mrd_fits || !det_fits))
    fail(Errc::size_cap_exceeded, "requested both criteria but one exceeds the cap");

  if (!mrd_fits) return is_moore_det(tw, I, policy);
  MooreVerdict mrd = is_moore_mrd(tw, I, policy, opts.allow_complement);
  bool run_det = det_fits && (want_both || det_work <= opts.oracle_cap);
  if (!run_det) return mrd;
  MooreVerdict det = is_moore_det(tw, I, policy);
  if (det.is_moore != mrd.is_moore)
    fail(Errc::cross_check_disagreement, "det-oracle and MRD criterion disagree");
  MooreVerdict v = mrd;
  v.method = MooreMethod::both;
  // the oracle's lexicographically least tuple is the canonical witness
  if (det.witness) v.witness = det.witness;
  return v;
}

std::vector<MooreVerdict> search_all(const FieldTower& tw, uint32_t k, bool up_to_shift,
                                     const MooreOptions& opts, const ExecPolicy& policy) {
  uint32_t n = tw.params().n;
  if (k < 1 || k > n) fail(Errc::bad_input, "subset size must be in 1..n");
  std::vector<MooreVerdict> out;
  // normalized sets: {0} union (k-1)-subsets of {1..n-1}
  std::vector<uint32_t> pick(k - 1);
  for (uint32_t i = 0; i + 1 < k; ++i) pick[i] = i + 1;
  auto shift_canonical = [&](const std::vector<uint32_t>& exps) {
    std::vector<uint32_t> best = exps;
    for (uint32_t s = 1; s < n; ++s) {
      std::vector<uint32_t> sh;
      sh.reserve(exps.size());
      for (uint32_t v : exps) sh.push_back((v + s) % n);
      std::sort(sh.begin(), sh.end());
      if (sh.front() != 0) continue;
      if (sh < best) best = sh;
    }
    return best;
  };
  while (true) {
    std::vector<uint32_t> exps{0};
    exps.insert(exps.end(), pick.begin(), pick.end());
    bool take = true;
    if (up_to_shift) take = (shift_canonical(exps) == exps);
    if (take) {
      ExponentSet I = make_exponent_set(n, exps);
      MooreVerdict v = is_moore(tw, I, opts, policy);
      if (v.is_moore) {
        // necessary conditions every Moore set satisfies; a failure here is
        // an internal inconsistency, not a mathematical outcome
        if (I.k() >= 2 && !check_fix_intersection(I))
          fail(Errc::cross_check_disagreement, "Moore set fails the fixed-field gcd condition");
        if (I.k() == 3 && !check_gcd_pair(I))
          fail(Errc::cross_check_disagreement, "size-3 Moore set fails the pairwise gcd condition");
      }
      out.push_back(std::move(v));
    }
    if (k == 1) break;
    int i = int(k) - 2;
    while (i >= 0 && pick[size_t(i)] == n - (k - 1) + uint32_t(i)) --i;
    if (i < 0) break;
    ++pick[size_t(i)];
    for (uint32_t j = uint32_t(i) + 1; j + 1 < k; ++j) pick[j] = pick[j - 1] + 1;
  }
  std::sort(out.begin(), out.end(),
            [](const MooreVerdict& a, const MooreVerdict& b) { return a.I.exps < b.I.exps; });
  return out;
}

bool check_fix_intersection(const ExponentSet& I) {
  if (I.exps.empty() || I.exps.front() != 0) fail(Errc::bad_input, "expected a normalized set containing 0");
  uint64_t g = I.n;
  for (uint32_t e : I.exps)
    if (e) g = std::gcd(g, uint64_t(e));
  return g == 1;
}

bool check_gcd_pair(const ExponentSet& I) {
  if (I.k() != 3) fail(Errc::arity_mismatch, "pairwise gcd condition needs |I| = 3");
  if (I.exps.front() != 0) fail(Errc::bad_input, "expected a normalized set containing 0");
  return std::gcd(I.exps[1], I.n) == 1 || std::gcd(I.exps[2], I.n) == 1;
}

}  // namespace galgeo
