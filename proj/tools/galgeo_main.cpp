// galgeo: Moore exponent sets, monomial rank-metric codes, and linear sets
// of pseudoregulus type over small field towers. Reports are deterministic
// JSON on stdout; diagnostics and progress go to stderr.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "galgeo/json_io.hpp"

using namespace galgeo;

namespace {

struct GlobalOpts {
  std::string format = "json";
  unsigned parallel = 0;
  uint64_t cap = 0;  // 0: default / environment
  bool quiet = false;
};

uint64_t default_cap() {
  if (const char* env = std::getenv("GALGEO_ENUM_CAP")) {
    char* end = nullptr;
    uint64_t v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
  }
  return kDefaultEnumCap;
}

std::pair<uint32_t, uint32_t> factor_prime_power(uint64_t q) {
  if (q < 2) fail(Errc::bad_input, "q must be a prime power >= 2");
  uint64_t p = q;
  for (uint64_t d = 2; d * d <= q; ++d)
    if (q % d == 0) {
      p = d;
      break;
    }
  uint32_t e = 0;
  uint64_t v = q;
  while (v > 1) {
    if (v % p) fail(Errc::bad_input, "q must be a prime power");
    v /= p;
    ++e;
  }
  return {uint32_t(p), e};
}

TowerParams tower_params(uint64_t q, uint32_t n, uint32_t t, const GlobalOpts& g) {
  auto [p, e] = factor_prime_power(q);
  TowerParams pr;
  pr.p = p;
  pr.e = e;
  pr.n = n;
  pr.t = t;
  pr.enum_cap = g.cap ? g.cap : default_cap();
  return pr;
}

std::vector<uint32_t> parse_set(const std::string& s) {
  std::vector<uint32_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(uint32_t(std::stoul(item)));
  }
  if (out.empty()) fail(Errc::bad_input, "empty exponent set");
  return out;
}

ExecPolicy make_policy(const GlobalOpts& g) {
  ExecPolicy policy;
  policy.threads = g.parallel;
  if (!g.quiet) {
    auto last = std::make_shared<int>(-1);
    policy.progress = [last](double frac) {
      int decile = int(frac * 10);
      if (decile > *last) {
        *last = decile;
        std::cerr << "progress: " << decile * 10 << "%\n";
      }
    };
  }
  return policy;
}

void emit_json(const ojson& j) { std::cout << j.dump(2) << "\n"; }

void emit_pretty_kv(const ojson& j, const std::string& title) {
  std::cout << title << "\n";
  for (auto it = j.begin(); it != j.end(); ++it)
    std::cout << "  " << it.key() << ": " << it.value().dump() << "\n";
}

std::string csv_quote_set(const std::vector<uint32_t>& exps) {
  std::string s = "\"";
  for (size_t i = 0; i < exps.size(); ++i) {
    if (i) s += " ";
    s += std::to_string(exps[i]);
  }
  return s + "\"";
}

// ---- report builders ------------------------------------------------------

ojson moore_check_report(uint64_t q, uint32_t n, const std::vector<uint32_t>& set,
                         const std::string& method, uint64_t oracle_cap, bool no_complement,
                         const GlobalOpts& g) {
  FieldTower tw(tower_params(q, n, 1, g));
  ExponentSet I = make_exponent_set(n, set);
  MooreOptions opts;
  opts.allow_complement = !no_complement;
  if (oracle_cap) opts.oracle_cap = oracle_cap;
  if (method == "det")
    opts.method = MooreMethod::det_oracle;
  else if (method == "mrd")
    opts.method = MooreMethod::mrd_criterion;
  else if (method == "both")
    opts.method = MooreMethod::both;
  else if (method != "auto")
    fail(Errc::bad_input, "unknown method '" + method + "'");
  MooreVerdict v = is_moore(tw, I, opts, make_policy(g));
  return to_json(v);
}

ojson moore_search_report(uint64_t q, uint32_t n, uint32_t k, bool up_to_shift,
                          const std::string& method, const GlobalOpts& g) {
  FieldTower tw(tower_params(q, n, 1, g));
  MooreOptions opts;
  if (method == "det")
    opts.method = MooreMethod::det_oracle;
  else if (method == "mrd")
    opts.method = MooreMethod::mrd_criterion;
  else if (method == "both")
    opts.method = MooreMethod::both;
  auto verdicts = search_all(tw, k, up_to_shift, opts, make_policy(g));
  ojson j;
  j["q"] = q;
  j["n"] = n;
  j["k"] = k;
  j["up_to_shift"] = up_to_shift;
  j["count"] = verdicts.size();
  ojson arr = ojson::array();
  for (const auto& v : verdicts) arr.push_back(to_json(v));
  j["verdicts"] = arr;
  return j;
}

RankCode code_from_args(const FieldTower& tw, const std::vector<uint32_t>& set,
                        const std::string& gens_text) {
  if (!gens_text.empty()) {
    std::vector<QPoly> gens;
    std::stringstream ss(gens_text);
    std::string item;
    while (std::getline(ss, item, ',')) gens.push_back(qpoly_from_text(tw, item));
    return make_code(tw, std::move(gens));
  }
  return monomial_code(tw, set);
}

ojson code_mrd_report(uint64_t q, uint32_t n, const std::vector<uint32_t>& set,
                      const std::string& gens_text, bool complement, const GlobalOpts& g) {
  FieldTower tw(tower_params(q, n, 1, g));
  ojson j;
  j["q"] = q;
  j["n"] = n;
  if (gens_text.empty()) j["exps"] = set;
  MrdReport rep;
  if (complement) {
    if (!gens_text.empty()) fail(Errc::bad_input, "--complement applies to monomial codes only");
    rep = mrd_check_via_complement(tw, set, make_policy(g));
  } else {
    RankCode c = code_from_args(tw, set, gens_text);
    ojson gens = ojson::array();
    for (const auto& f : c.gens) gens.push_back(to_text(f));
    j["gens"] = gens;
    rep = mrd_check(c, make_policy(g));
  }
  ojson inner = to_json(rep);
  for (auto it = inner.begin(); it != inner.end(); ++it) j[it.key()] = it.value();
  return j;
}

ojson code_adjoint_report(uint64_t q, uint32_t n, const std::vector<uint32_t>& set,
                          const std::string& gens_text, const GlobalOpts& g) {
  FieldTower tw(tower_params(q, n, 1, g));
  RankCode c = code_from_args(tw, set, gens_text);
  RankCode adj = adjoint_code(c);
  ojson j;
  j["q"] = q;
  j["n"] = n;
  ojson in = ojson::array(), out = ojson::array();
  for (const auto& f : c.gens) in.push_back(to_text(f));
  for (const auto& f : adj.gens) out.push_back(to_text(f));
  j["gens"] = in;
  j["adjoint_gens"] = out;
  if (gens_text.empty()) {
    std::vector<uint32_t> aexps;
    for (uint32_t e : set) aexps.push_back((n - e) % n);
    std::sort(aexps.begin(), aexps.end());
    j["adjoint_exps"] = aexps;
  } else {
    j["adjoint_exps"] = nullptr;
  }
  return j;
}

ojson code_idealisers_report(uint64_t q, uint32_t n, const std::vector<uint32_t>& set,
                             const std::string& gens_text, const GlobalOpts& g) {
  FieldTower tw(tower_params(q, n, 1, g));
  RankCode c = code_from_args(tw, set, gens_text);
  ojson j;
  j["q"] = q;
  j["n"] = n;
  ojson gens = ojson::array();
  for (const auto& f : c.gens) gens.push_back(to_text(f));
  j["gens"] = gens;
  j["left"] = to_json(left_idealiser(c));
  j["right"] = to_json(right_idealiser(c));
  return j;
}

ojson code_equiv_report(uint32_t n, const std::vector<uint32_t>& set1,
                        const std::vector<uint32_t>& set2) {
  auto s = monomial_shift_equivalent(set1, set2, n);
  ojson j;
  j["n"] = n;
  j["set1"] = set1;
  j["set2"] = set2;
  j["equivalent"] = s.has_value();
  if (s)
    j["shift"] = *s;
  else
    j["shift"] = nullptr;
  return j;
}

LinearSetSpec load_spec(const FieldTower& tw, const std::vector<uint32_t>& exps,
                        const std::string& spec_file) {
  if (!spec_file.empty()) {
    std::ifstream in(spec_file);
    if (!in) fail(Errc::bad_input, "cannot open spec file " + spec_file);
    ojson doc = ojson::parse(in, nullptr, true);
    return spec_from_json(tw, doc);
  }
  return spec_from_exponents(tw, exps);
}

ojson linset_summary(const FieldTower& tw, const LinearSetSpec& spec, const LinearSet& ls,
                     const ExecPolicy& policy) {
  ojson j;
  uint64_t q = 1;
  for (uint32_t i = 0; i < tw.params().e; ++i) q *= tw.params().p;
  j["q"] = q;
  j["n"] = tw.params().n;
  j["t"] = tw.params().t;
  j["h"] = spec.h;
  j["exponents"] = spec.exponent_set();
  j["rank"] = ls.rank();
  j["num_points"] = ls.pts.count();
  ojson spectrum;
  for (auto [w, c] : weight_spectrum(ls)) spectrum[std::to_string(w)] = c;
  j["weight_spectrum"] = spectrum;
  j["spans_ambient"] = spans_ambient(ls);

  auto elements = pseudoregulus_elements_from_spec(spec);
  bool disjoint = true;
  for (size_t a = 0; a < elements.size() && disjoint; ++a)
    for (size_t b = a + 1; b < elements.size() && disjoint; ++b)
      disjoint = proj_intersect(tw, elements[a], elements[b]).dim() == 0;
  bool all_weight_n = true;
  for (const auto& e : elements)
    if (weight(ls, e) != tw.params().n) all_weight_n = false;
  ojson pj;
  pj["count"] = elements.size();
  pj["expected"] = num_proj_points(tw.size(LayerId::fqn), tw.params().t);
  pj["all_weight_n"] = all_weight_n;
  pj["pairwise_disjoint"] = disjoint;
  j["pseudoregulus"] = pj;

  auto trs = find_transversals(ls, elements, policy);
  ojson tj;
  tj["count"] = trs.size();
  tj["k_spaces_miss_l"] = true;  // find_transversals would have thrown otherwise
  j["transversals"] = tj;
  return j;
}

ojson linset_build_report(uint64_t q, uint32_t n, uint32_t t, const std::vector<uint32_t>& exps,
                          const std::string& spec_file, bool with_points, const GlobalOpts& g) {
  FieldTower tw(tower_params(q, n, t, g));
  LinearSetSpec spec = load_spec(tw, exps, spec_file);
  LinearSet ls = build_from_spec(spec);
  ojson j = linset_summary(tw, spec, ls, make_policy(g));
  if (with_points) {
    ojson pts = ojson::array();
    for (uint64_t i = 0; i < ls.pts.count(); ++i) {
      ojson row = ojson::array();
      for (uint32_t c = 0; c < ls.pts.dim; ++c) row.push_back(ls.pts.at(i)[c]);
      row.push_back(ls.pts.weights[i]);
      pts.push_back(row);
    }
    j["points"] = pts;
  }
  return j;
}

ojson linset_analyze_report(uint64_t q, uint32_t n, uint32_t t, const std::vector<uint32_t>& exps,
                            const std::string& spec_file, int h_override, bool off_sweep,
                            const GlobalOpts& g) {
  FieldTower tw(tower_params(q, n, t, g));
  LinearSetSpec spec = load_spec(tw, exps, spec_file);
  LinearSet ls = build_from_spec(spec);
  ExecPolicy policy = make_policy(g);
  ojson j = linset_summary(tw, spec, ls, policy);
  uint32_t h = h_override >= 0 ? uint32_t(h_override) : spec.h;
  auto sc = is_h_scattered(ls, h, policy);
  ojson sj;
  sj["h"] = h;
  sj["scattered"] = sc.scattered;
  sj["spans"] = sc.spans;
  if (sc.violation) {
    ojson vj;
    vj["span_dim"] = sc.violation->span_dim;
    vj["weight"] = sc.violation->weight;
    ojson pts = ojson::array();
    for (uint64_t idx : sc.violation->point_indices) {
      ojson row = ojson::array();
      for (uint32_t c = 0; c < ls.pts.dim; ++c) row.push_back(ls.pts.at(idx)[c]);
      pts.push_back(row);
    }
    vj["points"] = pts;
    sj["violation"] = vj;
  } else {
    sj["violation"] = nullptr;
  }
  j["h_scattered"] = sj;

  ojson dj;
  auto rep = detect_pseudoregulus(ls, spec.h, policy, /*strict=*/false);
  dj["found"] = rep.elements.size();
  dj["expected"] = rep.expected_count;
  dj["def_a"] = rep.def_a;
  dj["def_b"] = rep.def_b;
  dj["subgeometry_branch"] = rep.subgeometry_branch;
  dj["unique"] = rep.unique;
  j["detect"] = dj;

  if (off_sweep) {
    auto elements = pseudoregulus_elements_from_spec(spec);
    auto off = max_weight_off_pseudoregulus(ls, elements, policy);
    ojson oj;
    oj["max_weight"] = off.max_weight;
    oj["bound"] = off.bound;
    oj["bound_ok"] = off.bound_ok;
    oj["weight_n_count"] = off.weight_n_count;
    oj["weight_n_equals_family"] = off.weight_n_equals_family;
    oj["swept"] = off.swept;
    j["off_pseudoregulus"] = oj;
  } else {
    j["off_pseudoregulus"] = nullptr;
  }
  return j;
}

ojson linset_project_report(uint64_t q, uint32_t n, uint32_t t, const std::vector<uint32_t>& iset,
                            uint64_t seed, const GlobalOpts& g) {
  FieldTower tw(tower_params(q, n, t, g));
  ExecPolicy policy = make_policy(g);
  SubgeometryFrame frame = build_subgeometry_frame(tw, iset, seed);
  ProjectionResult proj = project_subgeometry(frame);
  ojson j;
  j["q"] = q;
  j["n"] = n;
  j["t"] = t;
  j["index_set"] = frame.index_set;
  j["seed"] = frame.seed;
  j["theta_tries"] = frame.tries;
  j["rank"] = proj.ls.rank();
  j["formulas_agree"] = true;  // project_subgeometry cross-checks internally
  j["num_points"] = proj.ls.pts.count();
  ojson spectrum;
  for (auto [w, c] : weight_spectrum(proj.ls)) spectrum[std::to_string(w)] = c;
  j["weight_spectrum"] = spectrum;
  uint32_t h = uint32_t(frame.index_set.size()) - 1;
  auto rep = detect_pseudoregulus(proj.ls, h, policy);
  j["pseudoregulus_count"] = rep.elements.size();
  j["transversal_count"] = rep.transversals.size();
  SpreadRecovery rec = recover_spread_from_linset(proj, rep.elements, rep.transversals);
  ojson sj;
  sj["elements"] = rec.spread.elements.size();
  sj["verified"] = rec.verified;
  sj["equals_construction"] = rec.equals_construction;
  sj["director_power"] = rec.theta_bar_power;
  sj["ell"] = rec.ell;
  sj["gamma_matches"] = rec.gamma_matches;
  sj["transversals_match"] = rec.transversals_match;
  j["spread"] = sj;
  return j;
}

ojson linset_equiv_report(uint64_t q, uint32_t n, uint32_t t, const std::vector<uint32_t>& set1,
                          const std::vector<uint32_t>& set2, const std::string& file1,
                          const std::string& file2, const GlobalOpts& g) {
  FieldTower tw(tower_params(q, n, t, g));
  LinearSetSpec a = load_spec(tw, set1, file1);
  LinearSetSpec b = load_spec(tw, set2, file2);
  auto s = equivalent_pseudoregulus_type(a, b, make_policy(g));
  ojson j;
  j["q"] = q;
  j["n"] = n;
  j["t"] = t;
  j["h"] = a.h;
  j["set1"] = a.exponent_set();
  j["set2"] = b.exponent_set();
  j["equivalent"] = s.has_value();
  if (s)
    j["shift"] = *s;
  else
    j["shift"] = nullptr;
  return j;
}

ojson linset_classify_report(uint64_t q, uint32_t n, uint32_t t, const std::vector<uint32_t>& exps,
                             const GlobalOpts& g) {
  FieldTower tw(tower_params(q, n, t, g));
  LinearSetSpec spec = spec_from_exponents(tw, exps);
  AsympClassification cls = asymp_classify(spec, make_policy(g));
  ojson j;
  j["q"] = q;
  j["n"] = n;
  j["t"] = t;
  j["h"] = spec.h;
  j["exponents"] = spec.exponent_set();
  j["progression"] = to_json(cls.progression);
  if (cls.orbit_census)
    j["orbit_census"] = *cls.orbit_census;
  else
    j["orbit_census"] = nullptr;
  if (cls.phi_n_half)
    j["phi_n_half"] = *cls.phi_n_half;
  else
    j["phi_n_half"] = nullptr;
  return j;
}

// ---- output formatting ----------------------------------------------------

void emit_moore_search_csv(const ojson& j) {
  std::cout << "exps,n,q,is_moore,method,complement_fastpath,is_progression,d,shift\n";
  for (const auto& v : j["verdicts"]) {
    std::cout << csv_quote_set(v["exps"].get<std::vector<uint32_t>>()) << "," << v["n"] << ","
              << v["q"] << "," << (v["is_moore"].get<bool>() ? 1 : 0) << ","
              << v["method"].get<std::string>() << ","
              << (v["complement_fastpath"].get<bool>() ? 1 : 0) << ","
              << (v["progression"]["is_progression"].get<bool>() ? 1 : 0) << ","
              << v["progression"]["d"] << "," << v["progression"]["shift"] << "\n";
  }
}

void emit_points_csv(const ojson& j) {
  if (!j.contains("points")) fail(Errc::bad_input, "csv output needs --points");
  size_t dim = j["points"].empty() ? 0 : j["points"][0].size() - 1;
  std::cout << "index";
  for (size_t c = 0; c < dim; ++c) std::cout << ",c" << c;
  std::cout << ",weight\n";
  size_t idx = 0;
  for (const auto& row : j["points"]) {
    std::cout << idx++;
    for (const auto& v : row) std::cout << "," << v;
    std::cout << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Moore exponent sets, monomial MRD codes and pseudoregulus-type linear sets"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalOpts g;
  app.add_option("--format", g.format, "Output format: json, csv or pretty")
      ->check(CLI::IsMember({"json", "csv", "pretty"}));
  app.add_option("--parallel", g.parallel, "Worker threads (0 = hardware)");
  app.add_option("--cap", g.cap, "Enumeration cap override (default GALGEO_ENUM_CAP or 2^26)");
  app.add_flag("--quiet", g.quiet, "Suppress progress output on stderr");

  uint64_t q = 2;
  uint32_t n = 2, t = 2, k = 2;
  std::string set_str, set1_str, set2_str, gens_str, spec_file, file1, file2;
  std::string method = "auto";
  uint64_t oracle_cap = 0;
  bool no_complement = false, up_to_shift = false, complement = false;
  bool with_points = false, off_sweep = false;
  int h_override = -1;
  uint64_t seed = kDefaultThetaSeed;

  auto* moore = app.add_subcommand("moore", "Moore exponent set verification and search");
  auto* mcheck = moore->add_subcommand("check", "Classify one exponent set");
  mcheck->add_option("--q", q, "Field size q (prime power)")->required();
  mcheck->add_option("--n", n, "Extension degree n")->required();
  mcheck->add_option("--set", set_str, "Comma-separated exponents")->required();
  mcheck->add_option("--method", method, "auto, det, mrd or both");
  mcheck->add_option("--oracle-cap", oracle_cap, "Max q^{nk} for the auto det-oracle cross-check");
  mcheck->add_flag("--no-complement", no_complement, "Disable the complement fast path");
  auto* msearch = moore->add_subcommand("search", "Classify every size-k set");
  msearch->add_option("--q", q)->required();
  msearch->add_option("--n", n)->required();
  msearch->add_option("--k", k, "Subset size")->required();
  msearch->add_flag("--up-to-shift", up_to_shift, "One representative per shift class");
  msearch->add_option("--method", method, "auto, det, mrd or both");

  auto* code = app.add_subcommand("code", "Rank-metric codes spanned by q-monomials");
  auto* cmrd = code->add_subcommand("mrd", "MRD verification via the kernel sweep");
  cmrd->add_option("--q", q)->required();
  cmrd->add_option("--n", n)->required();
  cmrd->add_option("--set", set_str, "Monomial exponents");
  cmrd->add_option("--gens", gens_str, "Comma-separated q-polynomials");
  cmrd->add_flag("--complement", complement, "Use the validated complement reduction");
  auto* cadj = code->add_subcommand("adjoint", "Adjoint code");
  cadj->add_option("--q", q)->required();
  cadj->add_option("--n", n)->required();
  cadj->add_option("--set", set_str);
  cadj->add_option("--gens", gens_str);
  auto* cide = code->add_subcommand("idealisers", "Left and right idealisers");
  cide->add_option("--q", q)->required();
  cide->add_option("--n", n)->required();
  cide->add_option("--set", set_str);
  cide->add_option("--gens", gens_str);
  auto* ceq = code->add_subcommand("equiv", "Monomial code equivalence by cyclic shift");
  ceq->add_option("--n", n)->required();
  ceq->add_option("--set1", set1_str)->required();
  ceq->add_option("--set2", set2_str)->required();

  auto* linset = app.add_subcommand("linset", "Linear sets of pseudoregulus type");
  auto* lbuild = linset->add_subcommand("build", "Construct and summarize");
  lbuild->add_option("--q", q)->required();
  lbuild->add_option("--n", n)->required();
  lbuild->add_option("--t", t)->required();
  lbuild->add_option("--exponents", set_str, "Identity-matrix shorthand 0,i2,...");
  lbuild->add_option("--spec-file", spec_file, "JSON spec document");
  lbuild->add_flag("--points", with_points, "Include the point list");
  auto* lanalyze = linset->add_subcommand("analyze", "Scatteredness and blind detection");
  lanalyze->add_option("--q", q)->required();
  lanalyze->add_option("--n", n)->required();
  lanalyze->add_option("--t", t)->required();
  lanalyze->add_option("--exponents", set_str);
  lanalyze->add_option("--spec-file", spec_file);
  lanalyze->add_option("--h-level", h_override, "Scatteredness level (default: the spec's h)");
  lanalyze->add_flag("--off-sweep", off_sweep, "Sweep all h-subspaces off the pseudoregulus");
  auto* lproject = linset->add_subcommand("project", "Subgeometry projection round trip");
  lproject->add_option("--q", q)->required();
  lproject->add_option("--n", n)->required();
  lproject->add_option("--t", t)->required();
  lproject->add_option("--set", set_str, "Index set, must contain 0")->required();
  lproject->add_option("--seed", seed, "Seed for the transversal-subspace search");
  auto* lequiv = linset->add_subcommand("equiv", "Equivalence of two specs");
  lequiv->add_option("--q", q)->required();
  lequiv->add_option("--n", n)->required();
  lequiv->add_option("--t", t)->required();
  lequiv->add_option("--set1", set1_str);
  lequiv->add_option("--set2", set2_str);
  lequiv->add_option("--spec-file1", file1);
  lequiv->add_option("--spec-file2", file2);
  auto* lclassify = linset->add_subcommand("classify", "Progression classification + orbit census");
  lclassify->add_option("--q", q)->required();
  lclassify->add_option("--n", n)->required();
  lclassify->add_option("--t", t)->required();
  lclassify->add_option("--exponents", set_str)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    ojson report;
    std::string pretty_title;
    if (mcheck->parsed()) {
      report = moore_check_report(q, n, parse_set(set_str), method, oracle_cap, no_complement, g);
      pretty_title = "moore check";
    } else if (msearch->parsed()) {
      report = moore_search_report(q, n, k, up_to_shift, method, g);
      pretty_title = "moore search";
      if (g.format == "csv") {
        emit_moore_search_csv(report);
        return 0;
      }
    } else if (cmrd->parsed()) {
      report = code_mrd_report(q, n, set_str.empty() ? std::vector<uint32_t>{} : parse_set(set_str),
                               gens_str, complement, g);
      pretty_title = "code mrd";
    } else if (cadj->parsed()) {
      report = code_adjoint_report(q, n, set_str.empty() ? std::vector<uint32_t>{} : parse_set(set_str),
                                   gens_str, g);
      pretty_title = "code adjoint";
    } else if (cide->parsed()) {
      report = code_idealisers_report(
          q, n, set_str.empty() ? std::vector<uint32_t>{} : parse_set(set_str), gens_str, g);
      pretty_title = "code idealisers";
    } else if (ceq->parsed()) {
      report = code_equiv_report(n, parse_set(set1_str), parse_set(set2_str));
      pretty_title = "code equiv";
    } else if (lbuild->parsed()) {
      report = linset_build_report(q, n, t, set_str.empty() ? std::vector<uint32_t>{} : parse_set(set_str),
                                   spec_file, with_points || g.format == "csv", g);
      pretty_title = "linset build";
      if (g.format == "csv") {
        emit_points_csv(report);
        return 0;
      }
    } else if (lanalyze->parsed()) {
      report = linset_analyze_report(
          q, n, t, set_str.empty() ? std::vector<uint32_t>{} : parse_set(set_str), spec_file,
          h_override, off_sweep, g);
      pretty_title = "linset analyze";
    } else if (lproject->parsed()) {
      report = linset_project_report(q, n, t, parse_set(set_str), seed, g);
      pretty_title = "linset project";
    } else if (lequiv->parsed()) {
      report = linset_equiv_report(q, n, t,
                                   set1_str.empty() ? std::vector<uint32_t>{} : parse_set(set1_str),
                                   set2_str.empty() ? std::vector<uint32_t>{} : parse_set(set2_str),
                                   file1, file2, g);
      pretty_title = "linset equiv";
    } else if (lclassify->parsed()) {
      report = linset_classify_report(q, n, t, parse_set(set_str), g);
      pretty_title = "linset classify";
    } else {
      std::cerr << "no verb selected\n";
      return 2;
    }
    if (g.format == "csv") fail(Errc::bad_input, "csv output is not defined for this verb");
    if (g.format == "pretty")
      emit_pretty_kv(report, pretty_title);
    else
      emit_json(report);
    return 0;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.code()) {
      case Errc::size_cap_exceeded:
        return 3;
      case Errc::cross_check_disagreement:
        return 4;
      default:
        return 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
