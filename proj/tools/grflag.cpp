#include "grflag/filtration.hpp"
#include "grflag/groebner.hpp"
#include "grflag/kres.hpp"
#include "grflag/lie_data.hpp"
#include "grflag/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace grflag;
using ojson = nlohmann::ordered_json;

namespace {

constexpr int kFail = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ojson series_json(const HilbertSeries& h) {
  ojson j;
  j["numerator"] = h.numerator;
  j["denominator_degrees"] = h.denominator_degrees;
  if (h.dense) j["dense"] = *h.dense;
  if (auto t = h.total()) j["total"] = *t;
  j["text"] = h.to_string();
  return j;
}

std::vector<std::string> bigints(const std::vector<mpz_class>& v) {
  std::vector<std::string> s;
  for (const auto& x : v) s.push_back(x.get_str());
  return s;
}

int cmd_list(bool json) {
  auto names = list_cases();
  if (json) {
    ojson arr = ojson::array();
    for (const auto& n : names) {
      const auto& c = load_case(n);
      arr.push_back({{"name", n}, {"prime", c.prime}, {"rank", c.rank}, {"family", family_name(c.family)}});
    }
    std::cout << arr.dump(2) << "\n";
  } else {
    for (const auto& n : names) std::cout << n << "\n";
  }
  return 0;
}

int cmd_verify(const std::string& name, const std::string& suite, bool json, const std::string& out, bool serial) {
  std::vector<std::string> cases = name == "all" ? list_cases() : std::vector<std::string>{name};
  if (name != "all") load_case(name);
  auto reports = run_suites(cases, suite, serial ? Exec::Serial : Exec::Parallel);
  std::string text;
  if (json) text = reports.size() == 1 ? reports[0].to_json() : reports_to_json(reports);
  else
    for (const auto& r : reports) text += r.to_text();
  if (!out.empty()) {
    std::ofstream f(out);
    if (!f) throw UsageError("cannot write " + out);
    f << text << (json ? "\n" : "");
  } else {
    std::cout << text << (json ? "\n" : "");
  }
  for (const auto& r : reports)
    if (r.failed()) return kFail;
  return 0;
}

int cmd_hilbert(const std::string& file, bool json, const std::string& order, std::optional<int> cap) {
  IdealSpec spec = load_ideal_file(file);
  BuchbergerOptions opts;
  if (order == "lex") opts.order = MonomialOrder::Lex;
  opts.degree_cap = cap;
  GroebnerBasis gb = buchberger(spec.generators, opts);
  HilbertSeries h = quotient_hilbert_series(gb);
  if (json) {
    ojson j;
    j["ideal_file"] = file;
    j["prime"] = spec.ring->ring().characteristic();
    j["order"] = order_name(opts.order);
    j["basis_size"] = gb.polynomials().size();
    j["pairs_processed"] = gb.pairs_processed();
    if (auto v = gb.verified_up_to()) j["verified_up_to"] = *v;
    j["series"] = series_json(h);
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "basis size: " << gb.polynomials().size() << "\n";
    std::cout << "series: " << h.to_string() << "\n";
    if (auto t = h.total()) std::cout << "dimension: " << *t << "\n";
    if (auto v = gb.verified_up_to()) std::cout << "complete below degree " << *v << "\n";
  }
  return 0;
}

int cmd_snf(const std::string& file, bool json) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(file));
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("matrix file is not JSON: ") + e.what());
  }
  if (!j.is_array()) throw UsageError("matrix file must be an array of arrays");
  IntMatrix m;
  std::size_t cols = 0;
  for (const auto& row : j) {
    if (!row.is_array()) throw UsageError("matrix file must be an array of arrays");
    IntRow r;
    for (const auto& x : row) {
      if (x.is_number_integer()) r.emplace_back(mpz_class(x.dump()));
      else if (x.is_string()) r.emplace_back(mpz_class(x.get<std::string>()));
      else throw UsageError("matrix entries must be integers");
    }
    if (!m.empty() && r.size() != cols) throw UsageError("matrix rows have different lengths");
    cols = r.size();
    m.push_back(std::move(r));
  }
  SmithForm s = smith_normal_form(m, cols);
  std::vector<mpz_class> d(s.diagonal.begin(), s.diagonal.begin() + static_cast<std::ptrdiff_t>(s.rank));
  if (json) {
    ojson o;
    o["rows"] = m.size();
    o["cols"] = cols;
    o["rank"] = s.rank;
    o["invariant_factors"] = bigints(d);
    std::cout << o.dump(2) << "\n";
  } else {
    std::cout << "rank: " << s.rank << "\n";
    std::cout << "invariant factors: " << factors_string(d) << "\n";
  }
  return 0;
}

int cmd_gr(const std::string& name, bool json) {
  const GroupCase& c = load_case(name);
  GrResult r = gr_invariants(c);
  if (json) {
    ojson o;
    o["case"] = c.name;
    ojson ws = ojson::array();
    for (const auto& w : r.weights) {
      std::vector<std::string> reps;
      for (const auto& s : w.summands) reps.push_back(s.rep_label);
      ojson wj;
      wj["w"] = w.weight;
      wj["factors"] = ojson::array();
      for (const auto& s : w.summands) wj["factors"].push_back(s.factor.get_si());
      wj["reps"] = reps;
      ws.push_back(wj);
    }
    o["weights"] = ws;
    o["totals"] = {{"free", r.totals.free}, {"torsion", r.totals.torsion}, {"mod_p_dim", r.totals.mod_p_dim}};
    o["products"] = r.product_count;
    std::cout << o.dump(2) << "\n";
  } else {
    for (const auto& w : r.weights) {
      std::cout << "w" << w.weight << ":";
      for (const auto& s : w.summands)
        std::cout << " " << (s.factor == 0 ? std::string("Z") : "Z/" + s.factor.get_str()) << "{" << s.rep_label << "}";
      std::cout << "\n";
    }
    std::cout << "free " << r.totals.free << ", torsion " << r.totals.torsion << ", mod-p dim " << r.totals.mod_p_dim
              << "\n";
  }
  return 0;
}

int cmd_kres(const std::string& name, const std::string& op, int k, bool json, bool integral, int n, unsigned p) {
  ojson o;
  std::ostringstream text;
  if (op == "rost") {
    RostCounts r = rost_counts(n, p);
    o = {{"n", n}, {"p", p}, {"chow_basis_count", r.chow_basis_count}, {"killed_count", r.killed_count},
         {"basis", r.basis}, {"killed", r.killed}, {"relation_verified", r.relation_verified}};
    text << "R_" << n << " at p=" << p << ": " << r.chow_basis_count << " Chow classes, " << r.killed_count
         << " killed; v1 c_j = v_j c_1 " << (r.relation_verified ? "verified" : "FAILS") << "\n";
  } else {
    if (name.empty()) throw UsageError("--case is required for --op " + op);
    const GroupCase& c = load_case(name);
    o["case"] = c.name;
    if (op == "image") {
      ImageReport r = image_with_stability(c, !integral);
      o["mod_p"] = r.mod_p;
      o["degree_cap"] = r.degree_cap;
      o["v1_cap"] = r.v1_cap;
      ojson es = ojson::array();
      for (const auto& e : r.entries) {
        ojson ej;
        ej["monomial"] = e.label;
        ej["chow"] = e.chow;
        if (e.exponent) ej["min_v1_exponent"] = *e.exponent;
        else ej["min_v1_exponent"] = e.determined ? "inf" : "undetermined";
        es.push_back(ej);
      }
      o["entries"] = es;
      o["rank_after_inverting_v1"] = r.rank_after_inverting_v1;
      o["full_rank"] = r.full_rank;
      o["missing"] = r.missing;
      o["stabilized"] = r.stabilized.value_or(false);
      text << "image of res (" << (r.mod_p ? "mod p" : "integral") << "), caps " << r.degree_cap << "/" << r.v1_cap
           << "\n";
      for (const auto& e : r.entries)
        text << "  " << e.label << ": "
             << (e.exponent ? std::to_string(*e.exponent) : (e.determined ? "inf" : "undetermined")) << "\n";
      text << "rank after inverting v1: " << r.rank_after_inverting_v1 << "/" << r.full_rank
           << (r.stabilized.value_or(false) ? ", stable" : ", not stable") << "\n";
    } else if (op == "telescope") {
      TelescopeReport r = telescope_check(c, k);
      o["k"] = r.k;
      o["base_holds"] = r.base_holds;
      o["base"] = r.base;
      auto steps = [](const std::vector<TelescopeStep>& v) {
        ojson a = ojson::array();
        for (const auto& s : v) a.push_back({{"i", s.i}, {"lhs", s.lhs}, {"rhs", s.rhs}, {"holds", s.holds}, {"residual", s.residual}});
        return a;
      };
      o["recursion"] = steps(r.recursion);
      o["closed_form"] = steps(r.closed_form);
      ojson rg = ojson::array();
      for (const auto& x : r.ranges)
        rg.push_back({{"range", "1.." + std::to_string(x.last)}, {"lhs", x.lhs}, {"rhs", x.rhs}, {"equal", x.equal},
                      {"residual", x.residual}});
      o["ranges"] = rg;
      ConventionReport cv = spin_generator_conventions(c);
      o["generator_convention"] = cv.matching;
      text << "base: " << (r.base_holds ? "holds" : "fails") << " (" << r.base << ")\n";
      for (const auto& s : r.recursion)
        text << "recursion i=" << s.i << ": " << (s.holds ? "holds" : "residual " + s.residual) << "\n";
      for (const auto& s : r.closed_form)
        text << "stated closed form i=" << s.i << ": " << (s.holds ? "holds" : "residual " + s.residual) << "\n";
      for (const auto& x : r.ranges)
        text << "identity, i=1.." << x.last << ": " << (x.equal ? "equal" : "residual " + x.residual) << "\n";
      text << "generator convention matching: " << cv.matching << "\n";
    } else if (op == "torsion") {
      TorsionBound t = torsion_bound(c);
      if (t.exponent) {
        o["exponent"] = *t.exponent;
        o["witness"] = t.witness;
        o["coefficient"] = t.coefficient.get_str();
        o["cofactor"] = t.cofactor.get_str();
        text << "t(G)_(p) <= " << c.prime << "^" << *t.exponent << ", witness " << t.witness << " (coefficient "
             << t.coefficient << ")\n";
      } else {
        text << t.note << "\n";
      }
      o["note"] = t.note;
    } else {
      throw UsageError("unknown op " + op);
    }
  }
  std::cout << (json ? o.dump(2) + "\n" : text.str());
  return 0;
}

int cmd_presentation(const std::string& name, bool json) {
  const GroupCase& c = load_case(name);
  PresentationComparison pc = assemble_flag_presentation(c);
  if (json) {
    ojson o;
    o["case"] = c.name;
    o["checkable"] = pc.checkable;
    if (!pc.checkable) o["reason"] = pc.reason;
    o["ideal_series"] = pc.ideal_series;
    o["gr_series"] = pc.gr_series;
    o["ci_series"] = pc.ci_series;
    o["product_series"] = pc.product_series;
    o["mismatched_degrees"] = pc.mismatched_degrees;
    o["equal"] = pc.equal;
    std::cout << o.dump(2) << "\n";
  } else if (!pc.checkable) {
    std::cout << "not checkable: " << pc.reason << "\n";
  } else {
    std::cout << "ideal:    " << poly_string(pc.ideal_series) << " (" << pc.ideal_dim << ")\n";
    std::cout << "gr x CI:  " << poly_string(pc.product_series) << " (" << pc.product_dim << ")\n";
    std::cout << (pc.equal ? "equal" : "differ") << "\n";
  }
  if (!pc.checkable) return kUsage;
  return pc.equal ? 0 : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gamma-filtration graded rings of versal flag varieties"};
  app.require_subcommand(1);

  bool json = false;
  auto* list = app.add_subcommand("list-cases", "list registered cases");
  list->add_flag("--json", json);

  std::string case_name, suite, out_file;
  bool serial = false;
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("--case", case_name, "case name or 'all'")->required();
  verify->add_option("--suite", suite, "gr, groebner, kres, milnor, torsion or all")->required();
  verify->add_flag("--json", json);
  verify->add_option("--out", out_file, "write the report to a file");
  verify->add_flag("--serial", serial, "run cases one at a time");

  std::string ideal_file, order = "grevlex";
  std::optional<int> degree_cap;
  auto* hilbert = app.add_subcommand("hilbert", "Hilbert series of an ideal file");
  hilbert->add_option("--ideal-file", ideal_file)->required();
  hilbert->add_flag("--json", json);
  hilbert->add_option("--order", order)->check(CLI::IsMember({"grevlex", "lex"}));
  hilbert->add_option("--degree-cap", degree_cap);

  std::string matrix_file;
  auto* snf = app.add_subcommand("snf", "Smith normal form of a matrix file");
  snf->add_option("--matrix-file", matrix_file)->required();
  snf->add_flag("--json", json);

  auto* gr = app.add_subcommand("gr", "associated graded of the gamma filtration");
  gr->add_option("--case", case_name)->required();
  gr->add_flag("--json", json);

  std::string op;
  int k = 1, n = 2;
  unsigned p = 2;
  bool integral = false;
  auto* kres = app.add_subcommand("kres", "v1-explicit computations");
  kres->add_option("--case", case_name);
  kres->add_option("--op", op)->required()->check(CLI::IsMember({"image", "telescope", "torsion", "rost"}));
  kres->add_option("--k", k, "telescope index");
  kres->add_option("--n", n, "Rost motive index");
  kres->add_option("--p", p, "Rost motive prime");
  kres->add_flag("--integral", integral, "image over Z_(p) instead of mod p");
  kres->add_flag("--json", json);

  auto* pres = app.add_subcommand("presentation", "compare the flag ideal with gr x complete intersection");
  pres->add_option("--case", case_name)->required();
  pres->add_flag("--json", json);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (*list) return cmd_list(json);
    if (*verify) return cmd_verify(case_name, suite, json, out_file, serial);
    if (*hilbert) return cmd_hilbert(ideal_file, json, order, degree_cap);
    if (*snf) return cmd_snf(matrix_file, json);
    if (*gr) return cmd_gr(case_name, json);
    if (*kres) return cmd_kres(case_name, op, k, json, integral, n, p);
    if (*pres) return cmd_presentation(case_name, json);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
