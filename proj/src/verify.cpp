#include "grflag/verify.hpp"

#include "grflag/kres.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <set>
#include <sstream>

namespace grflag {

using ojson = nlohmann::ordered_json;

std::string status_name(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::NotCheckable: return "not-checkable";
  }
  return "?";
}

bool VerificationReport::failed() const { return count(Status::Fail) > 0; }

std::size_t VerificationReport::count(Status s) const {
  return static_cast<std::size_t>(
      std::count_if(checks.begin(), checks.end(), [&](const Check& c) { return c.status == s; }));
}

namespace {

ojson report_json(const VerificationReport& r, bool timing) {
  ojson j;
  j["case"] = r.case_name;
  j["suite"] = r.suite;
  j["engine_version"] = r.engine_version;
  j["status"] = r.failed() ? "fail" : "pass";
  ojson checks = ojson::array();
  for (const auto& c : r.checks) {
    ojson cj;
    cj["id"] = c.id;
    cj["status"] = status_name(c.status);
    cj["expected"] = c.expected;
    cj["actual"] = c.actual;
    cj["anchor"] = c.anchor;
    checks.push_back(cj);
  }
  j["checks"] = checks;
  if (timing) j["wall_time"] = r.wall_time;
  return j;
}

}  // namespace

std::string VerificationReport::to_json(bool include_timing) const {
  return report_json(*this, include_timing).dump(2);
}

std::string VerificationReport::to_text() const {
  std::ostringstream os;
  os << case_name << " [" << suite << "] " << (failed() ? "FAIL" : "PASS") << " (" << count(Status::Pass)
     << " pass, " << count(Status::Fail) << " fail, " << count(Status::NotCheckable) << " not-checkable)\n";
  for (const auto& c : checks) {
    os << "  " << status_name(c.status) << "  " << c.id << "\n";
    if (c.status != Status::Pass) {
      if (!c.expected.empty()) os << "      expected: " << c.expected << "\n";
      if (!c.actual.empty()) os << "      actual:   " << c.actual << "\n";
    }
  }
  return os.str();
}

std::string reports_to_json(const std::vector<VerificationReport>& reports, bool include_timing) {
  ojson arr = ojson::array();
  for (const auto& r : reports) arr.push_back(report_json(r, include_timing));
  return arr.dump(2);
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"gr", "groebner", "kres", "milnor", "torsion", "all"};
  return names;
}

namespace {

Check make(std::string id, bool ok, std::string expected, std::string actual, std::string anchor) {
  return {std::move(id), ok ? Status::Pass : Status::Fail, std::move(expected), std::move(actual), std::move(anchor)};
}

Check not_checkable(std::string id, std::string why, std::string actual = "") {
  return {std::move(id), Status::NotCheckable, why, std::move(actual), ""};
}

std::string join(const std::vector<std::string>& v, const std::string& sep = ", ") {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : sep) + x;
  return s;
}

std::string series_string(const std::vector<std::int64_t>& s) { return poly_string(s); }

std::string gr_table(const GrResult& r) {
  std::string s;
  for (const auto& w : r.weights) {
    s += (s.empty() ? "" : "; ") + std::string("w") + std::to_string(w.weight) + " ";
    std::vector<std::string> parts;
    for (const auto& x : w.summands) parts.push_back((x.factor == 0 ? std::string("Z") : "Z/" + x.factor.get_str()) +
                                                     "{" + x.rep_label + "}");
    s += join(parts, " + ");
  }
  return s;
}

std::string expected_table(const ExpectedGr& e) {
  std::map<int, std::vector<std::string>> by;
  for (const auto& c : e.classes)
    by[c.weight].push_back((c.factor == 0 ? std::string("Z") : "Z/" + std::to_string(c.factor)) + "{" + c.rep + "}");
  std::string s;
  for (const auto& [w, v] : by) s += (s.empty() ? "" : "; ") + std::string("w") + std::to_string(w) + " " + join(v, " + ");
  return s;
}

std::string totals_string(long f, long t, long m) {
  return "free " + std::to_string(f) + ", torsion " + std::to_string(t) + ", mod-p dim " + std::to_string(m);
}

void gr_suite(const GroupCase& c, Exec exec, std::vector<Check>& out) {
  GrResult r = gr_invariants(c, exec);
  long rank = static_cast<long>(c.py->free_rank());
  out.push_back(make("gr.rank_telescoping", r.totals.free == rank, std::to_string(rank),
                     std::to_string(r.totals.free), "sum of free ranks of gr equals the rank of P(y)"));
  auto f0 = r.factors_at(0);
  bool w0 = f0.size() == 1 && f0[0] == 0;
  out.push_back(make("gr.weight0", w0, "[0]", factors_string(f0), "gr^0 = Z{1}"));
  auto errs = validate_case(c);
  std::vector<std::string> deficit;
  for (const auto& e : errs)
    if (e.find("weight-deficit") != std::string::npos) deficit.push_back(e);
  out.push_back(make("gr.weight_deficit", deficit.empty(), "every b-model deficit is a multiple of p-1",
                     deficit.empty() ? "ok" : join(deficit, "; "), "b = sum v_i y(i)"));
  if (!c.gr) {
    out.push_back(not_checkable("gr.classes", "no expected gr data", gr_table(r)));
    return;
  }
  const ExpectedGr& e = *c.gr;
  if (!e.exact) {
    if (e.min_mod_p_dim)
      out.push_back(make("gr.mod_p_dim_lower_bound", r.totals.mod_p_dim >= *e.min_mod_p_dim,
                         ">= " + std::to_string(*e.min_mod_p_dim), std::to_string(r.totals.mod_p_dim), e.anchor));
    else
      out.push_back(not_checkable("gr.classes", "expected data is not exact", gr_table(r)));
    return;
  }
  ExpectedGr classes_only = e;
  classes_only.deeper_words.clear();
  GrDiff diff = compare_expected(r, classes_only);
  out.push_back(make("gr.classes", diff.equal, expected_table(e),
                     diff.equal ? gr_table(r) : gr_table(r) + " | " + diff.summary(), e.anchor));
  long ef = 0, et = 0, em = 0;
  for (const auto& cl : e.classes) {
    if (cl.factor == 0) ++ef, ++em;
    else {
      ++et;
      if (cl.factor % static_cast<long>(c.prime) == 0) ++em;
    }
  }
  bool tot = ef == r.totals.free && et == r.totals.torsion && em == r.totals.mod_p_dim;
  out.push_back(make("gr.totals", tot, totals_string(ef, et, em),
                     totals_string(r.totals.free, r.totals.torsion, r.totals.mod_p_dim), e.anchor));
  for (const auto& dw : e.deeper_words) {
    auto word = parse_word(r.spec, dw);
    if (!word) {
      out.push_back(make("gr.deeper." + dw, false, "a product word", "unknown word", e.anchor));
      continue;
    }
    int natural = word_weight(r.spec, *word);
    int lv = r.chain.level(word_value(r.spec, *word));
    out.push_back(make("gr.deeper." + dw, lv > natural, "filtration > " + std::to_string(natural),
                       "filtration " + std::to_string(lv), e.anchor));
  }
}

void groebner_suite(const GroupCase& c, Exec exec, std::vector<Check>& out) {
  if (!c.flag_ideal) {
    out.push_back(not_checkable("groebner.dimension", "no explicit S(t)-ideal for this case"));
    return;
  }
  const FlagIdeal& f = *c.flag_ideal;
  BuchbergerOptions opts;
  opts.exec = exec;
  GroebnerBasis gb = buchberger(f.ideal.generators, opts);
  HilbertSeries hs = quotient_hilbert_series(gb);
  auto total = hs.total();
  std::uint64_t want = f.expected_dim.value_or(c.weyl_order);
  out.push_back(make("groebner.dimension", total && static_cast<std::uint64_t>(*total) == want, std::to_string(want),
                     total ? std::to_string(*total) + " (" + hs.to_string() + ")" : "infinite", f.anchor));
  if (f.b_sequence.empty()) {
    out.push_back(not_checkable("groebner.regular_sequence", "no b-sequence given"));
    return;
  }
  RegularSequenceReport rs = regular_sequence_check(f.b_sequence, opts);
  out.push_back(make("groebner.regular_sequence", rs.regular, poly_string(rs.expected_numerator),
                     poly_string(rs.actual.numerator), "b_1,...,b_l is a regular sequence in S(t)/p"));
  std::vector<int> ds;
  for (const auto& b : f.b_sequence) ds.push_back(b.degree().value_or(0));
  std::uint64_t prod = c.py->free_rank() * complete_intersection_dim(ds);
  out.push_back(make("groebner.weyl_product", prod == c.weyl_order, std::to_string(c.weyl_order),
                     std::to_string(prod), "rank P(y) times the complete-intersection dimension is |W|"));
  PresentationComparison pc = assemble_flag_presentation(c, exec);
  std::string detail = "ideal " + series_string(pc.ideal_series) + "; gr x CI " + series_string(pc.product_series);
  if (!pc.mismatched_degrees.empty()) {
    std::vector<std::string> ds2;
    for (int d : pc.mismatched_degrees) ds2.push_back(std::to_string(d));
    detail += "; differ in degrees " + join(ds2);
  }
  out.push_back(make("groebner.presentation", pc.equal, "series of S(t)/ideal = (gr mod p) x S(t)/(b)", detail,
                     "CH(F) = CH(R(G)) (x) S(t)/(b)"));
}

void kres_suite(const GroupCase& c, Exec exec, std::vector<Check>& out) {
  std::vector<std::string> bad;
  for (const auto& b : c.b_models)
    if (!(b.v1_form.evaluate_at_one() == b.value)) bad.push_back(b.label);
  out.push_back(make("kres.v1_forms", bad.empty(), "every v1-form evaluates to its element at v1 = 1",
                     bad.empty() ? "ok" : join(bad), "v1 is a unit of filtration weight 0"));
  ImageReport img = image_with_stability(c, true, exec);
  std::vector<std::string> exps;
  for (const auto& e : img.entries)
    exps.push_back(e.label + ":" + (e.exponent ? std::to_string(*e.exponent) : (e.determined ? "inf" : "?")));
  std::string actual = "rank " + std::to_string(img.rank_after_inverting_v1) + "/" + std::to_string(img.full_rank) +
                       "; " + join(exps, " ");
  out.push_back(make("kres.image_stability", img.stabilized.value_or(false), "minimal exponents stable under cap doubling",
                     "caps " + std::to_string(img.degree_cap) + "/" + std::to_string(img.v1_cap) +
                         (img.stabilized.value_or(false) ? " stable" : " not stable"),
                     "caps default to top/(p-1)+2"));
  if (!c.image_shape) {
    out.push_back(not_checkable("kres.image", "no expected image shape", actual));
  } else if (*c.image_shape == ImageShape::Full) {
    out.push_back(make("kres.image", img.rank_after_inverting_v1 == img.full_rank,
                       "full rank " + std::to_string(img.full_rank) + " after inverting v1", actual,
                       "res_{K/p} is surjective"));
  } else {
    std::vector<std::string> want = y2_multiples(c), got = img.missing;
    std::sort(want.begin(), want.end());
    std::sort(got.begin(), got.end());
    bool ok = want == got && img.rank_after_inverting_v1 == img.full_rank - static_cast<long>(want.size());
    out.push_back(make("kres.image", ok, "missing exactly the y2-multiples {" + join(want) + "}",
                       actual + "; missing {" + join(got) + "}", "Im(res_{K/2}) = K (x) Lambda(y_{2i} | 2i >= 4)"));
  }
  if (c.family == Family::Spin) {
    for (int k = 0; (2 << k) < c.rank; ++k) {
      TelescopeReport tr = telescope_check(c, k);
      bool rec = tr.base_holds && std::all_of(tr.recursion.begin(), tr.recursion.end(),
                                               [](const TelescopeStep& s) { return s.holds; });
      std::vector<std::string> steps;
      for (const auto& s : tr.recursion) steps.push_back("i=" + std::to_string(s.i) + (s.holds ? " ok" : " residual " + s.residual));
      std::string ks = std::to_string(k);
      out.push_back(make("kres.telescope.k" + ks + ".recursion", rec, "Y_i = c'_{a+i} - 2 v1^-1 Y_{i-1} with Y_i = v1 y_{2(a+i+1)}",
                         tr.base + (steps.empty() ? "" : "; " + join(steps)), "telescoping recursion for c'_{2^k}"));
      std::vector<std::string> pr, rg;
      for (const auto& s : tr.closed_form)
        pr.push_back("i=" + std::to_string(s.i) + (s.holds ? " equal" : " residual " + s.residual));
      for (const auto& r : tr.ranges)
        rg.push_back("i=1.." + std::to_string(r.last) + (r.equal ? " equal" : " residual " + r.residual));
      out.push_back(not_checkable("kres.telescope.k" + ks + ".identity",
                                  "summation range not stated; both ranges reported",
                                  "closed form as stated: " + (pr.empty() ? std::string("no steps") : join(pr)) +
                                      "; identity: " + join(rg)));
    }
    ConventionReport cv = spin_generator_conventions(c);
    std::vector<std::string> desc;
    for (const auto& r : cv.conventions) {
      std::vector<std::string> g;
      for (std::size_t i = 0; i < r.generators.size(); ++i) g.push_back(r.generators[i] + "->" + r.images[i]);
      desc.push_back(r.name + (r.isomorphic ? " [iso]: " : " [not iso]: ") + join(g));
    }
    out.push_back(make("kres.generator_convention", cv.matching != "none", "some index convention gives an isomorphism",
                       "matching: " + cv.matching + "; " + join(desc, "; "),
                       "K(R(G))/2 = K/2 (x) Lambda(c'_i)"));
  }
  if (c.rost) {
    auto [n, p] = *c.rost;
    RostCounts rc = rost_counts(n, p);
    long want_count = 1 + static_cast<long>(n) * (static_cast<long>(p) - 1);
    long want_killed = n >= 3 ? (n - 2) * (static_cast<long>(p) - 1) : 0;
    bool ok = rc.chow_basis_count == want_count && rc.killed_count == want_killed && rc.relation_verified;
    out.push_back(make("kres.rost", ok,
                       "count " + std::to_string(want_count) + ", killed " + std::to_string(want_killed),
                       "count " + std::to_string(rc.chow_basis_count) + ", killed " + std::to_string(rc.killed_count) +
                           (rc.relation_verified ? ", v1 c_j = v_j c_1 verified" : ", relation fails"),
                       "CH(R_n)/p basis 1, c_j(y^i)"));
  }
}

void milnor_suite(const GroupCase& c, std::vector<Check>& out) {
  std::vector<std::string> qerr;
  for (const auto& e : validate_case(c))
    if (e.find("Q") != std::string::npos || e.find("x-generator") != std::string::npos) qerr.push_back(e);
  out.push_back(make("milnor.table_consistency", qerr.empty(),
                     "tabled Q_n(x) have degree |x| + 2p^n - 1 and match the b-model leading terms",
                     qerr.empty() ? "ok" : join(qerr, "; "), "b = sum v_n y(n)"));
  if (c.q_table.empty()) {
    out.push_back(not_checkable("milnor.anticommute", "no Q-table"));
    return;
  }
  std::vector<std::string> ynonzero;
  const int nmax = q_table_max(c);
  for (int n = 0; n <= nmax; ++n)
    for (std::size_t v = 0; v < c.py->num_vars(); ++v) {
      ExtElement e = ExtElement::y(c, Element::variable(c.py, v));
      if (!apply_q(n, e, c).is_zero()) ynonzero.push_back("Q" + std::to_string(n) + "(" + c.py->variables()[v].label + ")");
    }
  out.push_back(make("milnor.vanish_on_y", ynonzero.empty(), "Q_n(y) = 0", ynonzero.empty() ? "ok" : join(ynonzero),
                     "Q_n y = 0"));
  for (int i = 0; i <= nmax; ++i)
    for (int j = i; j <= nmax; ++j) {
      AnticommuteReport rep = q_anticommute_check(c, i, j);
      std::size_t zero = 0, nc = 0;
      std::vector<std::string> bad;
      for (const auto& e : rep.entries) {
        if (e.status == "zero") ++zero;
        else if (e.status == "not checkable") ++nc;
        else bad.push_back(e.input + " -> " + e.value);
      }
      std::string id = "milnor.anticommute.Q" + std::to_string(i) + "Q" + std::to_string(j);
      std::string actual = std::to_string(zero) + " zero, " + std::to_string(nc) + " not checkable" +
                           (bad.empty() ? "" : ", nonzero: " + join(bad, "; "));
      if (zero == 0 && bad.empty())
        out.push_back({id, Status::NotCheckable, "no input fully tabled", actual, ""});
      else
        out.push_back(make(id, bad.empty(), i == j ? "Q_i^2 = 0" : "Q_iQ_j + Q_jQ_i = 0", actual,
                           "Q_{i+1} = [P^{p^i}, Q_i]"));
    }
}

void torsion_suite(const GroupCase& c, std::vector<Check>& out) {
  TorsionBound tb = torsion_bound(c);
  std::string actual = tb.exponent ? "p^" + std::to_string(*tb.exponent) + " via " + tb.witness + " (coefficient " +
                                         tb.coefficient.get_str() + ")"
                                   : tb.note;
  const std::string anchor = "t(G)_(p) <= p^s when a product of b's is p^s y_top";
  if (!c.torsion_exponent) {
    out.push_back(not_checkable("torsion.exponent", "no expected torsion exponent", actual));
  } else {
    out.push_back(make("torsion.exponent", tb.exponent == c.torsion_exponent,
                       "p^" + std::to_string(*c.torsion_exponent), actual, anchor));
  }
  if (c.torsion_witness) {
    FiltrationSpec spec = FiltrationSpec::from_case(c);
    auto want = parse_word(spec, *c.torsion_witness);
    auto got = parse_word(spec, tb.witness);
    out.push_back(make("torsion.witness", want && got && *want == *got, *c.torsion_witness,
                       tb.witness.empty() ? "none" : tb.witness, anchor));
  }
  if (tb.exponent) {
    bool unit = !mpz_divisible_ui_p(tb.cofactor.get_mpz_t(), c.prime);
    out.push_back(make("torsion.unit_cofactor", unit, "coefficient p^s times a p-local unit",
                       tb.coefficient.get_str() + " = p^" + std::to_string(*tb.exponent) + " * " + tb.cofactor.get_str(),
                       anchor));
  }
}

}  // namespace

VerificationReport run_suite(const GroupCase& c, const std::string& suite, Exec exec) {
  const auto& names = suite_names();
  if (std::find(names.begin(), names.end(), suite) == names.end())
    throw SuiteError("unknown suite '" + suite + "' (expected one of " + join(names) + ")");
  auto t0 = std::chrono::steady_clock::now();
  VerificationReport r;
  r.case_name = c.name;
  r.suite = suite;
  bool all = suite == "all";
  if (all || suite == "gr") gr_suite(c, exec, r.checks);
  if (all || suite == "groebner") groebner_suite(c, exec, r.checks);
  if (all || suite == "kres") kres_suite(c, exec, r.checks);
  if (all || suite == "milnor") milnor_suite(c, r.checks);
  if (all || suite == "torsion") torsion_suite(c, r.checks);
  r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::vector<VerificationReport> run_suites(const std::vector<std::string>& cases, const std::string& suite,
                                           Exec exec) {
  const auto& names = suite_names();
  if (std::find(names.begin(), names.end(), suite) == names.end())
    throw SuiteError("unknown suite '" + suite + "' (expected one of " + join(names) + ")");
  std::vector<VerificationReport> out(cases.size());
  const long n = static_cast<long>(cases.size());
#pragma omp parallel for schedule(dynamic, 1) if (exec == Exec::Parallel)
  for (long i = 0; i < n; ++i) {
    try {
      out[i] = run_suite(load_case(cases[i]), suite, Exec::Serial);
    } catch (const std::exception& e) {
      out[i].case_name = cases[i];
      out[i].suite = suite;
      out[i].checks.push_back({"case.run", Status::Fail, "suite completes", e.what(), ""});
    }
  }
  return out;
}

PresentationComparison assemble_flag_presentation(const GroupCase& c, Exec exec) {
  PresentationComparison pc;
  if (!c.flag_ideal) {
    pc.reason = "no explicit S(t)-ideal";
    return pc;
  }
  const FlagIdeal& f = *c.flag_ideal;
  if (f.b_sequence.empty()) {
    pc.reason = "no b-sequence";
    return pc;
  }
  BuchbergerOptions opts;
  opts.exec = exec;
  HilbertSeries ideal = quotient_hilbert_series(buchberger(f.ideal.generators, opts));
  RegularSequenceReport rs = regular_sequence_check(f.b_sequence, opts);
  if (!ideal.dense || !rs.actual.dense) {
    pc.reason = "a quotient is not finite";
    return pc;
  }
  pc.checkable = true;
  pc.ideal_series = *ideal.dense;
  pc.ci_series = *rs.actual.dense;
  GrResult gr = gr_invariants(c, exec);
  for (const auto& w : gr.weights) {
    std::int64_t n = 0;
    for (const auto& s : w.summands)
      if (s.factor == 0 || mpz_divisible_ui_p(s.factor.get_mpz_t(), c.prime)) ++n;
    if (n == 0) continue;
    if (pc.gr_series.size() <= static_cast<std::size_t>(w.weight)) pc.gr_series.resize(w.weight + 1, 0);
    pc.gr_series[w.weight] += n;
  }
  pc.product_series = poly_mul(pc.gr_series, pc.ci_series);
  poly_trim(pc.product_series);
  std::size_t len = std::max(pc.ideal_series.size(), pc.product_series.size());
  for (std::size_t d = 0; d < len; ++d) {
    std::int64_t a = d < pc.ideal_series.size() ? pc.ideal_series[d] : 0;
    std::int64_t b = d < pc.product_series.size() ? pc.product_series[d] : 0;
    if (a != b) pc.mismatched_degrees.push_back(static_cast<int>(d));
  }
  for (auto x : pc.ideal_series) pc.ideal_dim += x;
  for (auto x : pc.product_series) pc.product_dim += x;
  pc.equal = pc.mismatched_degrees.empty();
  return pc;
}

}  // namespace grflag
