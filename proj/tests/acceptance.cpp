// Acceptance run: one PASS/FAIL line per criterion.  Derived values are
// checked against the brute-force oracles first, then the engine is checked
// against both the oracle and the published values.

#include "grflag/filtration.hpp"
#include "grflag/groebner.hpp"
#include "grflag/kres.hpp"
#include "grflag/lattice.hpp"
#include "grflag/lie_data.hpp"
#include "grflag/verify.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace grflag;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// Collects failed sub-checks for one criterion.
struct Criterion {
  std::vector<std::string> problems;
  void require(bool ok, const std::string& what) {
    if (!ok) problems.push_back(what);
  }
  void within(double secs, double limit, const std::string& what) {
    std::ostringstream os;
    os << what << " took " << secs << " s (limit " << limit << " s)";
    require(secs < limit, os.str());
  }
};

std::vector<long long> factors(const GrResult& r, int w) {
  std::vector<long long> out;
  for (const auto& f : r.factors_at(w)) out.push_back(f.get_si());
  return out;
}

std::string join(const std::vector<long long>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + "]";
}

// Oracle and engine agree weight by weight.
void compare_with_oracle(Criterion& k, const GroupCase& c, const GrResult& r, const oracle::GrOracle& o) {
  std::set<int> ws;
  for (const auto& [w, f] : o.factors) ws.insert(w);
  for (const auto& gw : r.weights) ws.insert(gw.weight);
  for (int w : ws) {
    auto it = o.factors.find(w);
    auto want = it == o.factors.end() ? std::vector<long long>{} : it->second;
    auto got = factors(r, w);
    k.require(got == want, c.name + " w" + std::to_string(w) + ": oracle " + join(want) + " engine " + join(got));
  }
}

bool realizes(const GrResult& r, const std::string& word, int w, long factor) {
  auto parsed = parse_word(r.spec, word);
  return parsed && realizes_summand(r, w, word_value(r.spec, *parsed), factor);
}

void criterion1(Criterion& k) {
  for (unsigned p : {3u, 5u}) {
    const GroupCase& c = load_case("typeI(p=" + std::to_string(p) + ")");
    oracle::GrOracle o = oracle::gr_bruteforce(c);
    auto t0 = Clock::now();
    GrResult r = gr_invariants(c, Exec::Serial);
    k.within(seconds_since(t0), 1.0, c.name);
    compare_with_oracle(k, c, r, o);
    // Z{1} + sum_i Z/p{b_{2i-1}} + Z{b_{2i}}
    std::map<int, std::vector<long long>> want{{0, {0}}};
    std::vector<std::pair<std::string, std::pair<int, long>>> reps{{"1", {0, 0}}};
    for (unsigned i = 1; i <= p - 1; ++i) {
      int wo = static_cast<int>(i * (p + 1) - (p - 1)), we = static_cast<int>(i * (p + 1));
      want[wo] = {static_cast<long long>(p)};
      want[we] = {0};
      reps.push_back({"b" + std::to_string(2 * i - 1), {wo, static_cast<long>(p)}});
      reps.push_back({"b" + std::to_string(2 * i), {we, 0}});
    }
    for (const auto& [w, f] : want) k.require(factors(r, w) == f, c.name + " w" + std::to_string(w) + " " + join(factors(r, w)));
    k.require(r.weights.size() == want.size(), c.name + ": unexpected extra weights");
    for (const auto& [word, wf] : reps)
      k.require(realizes(r, word, wf.first, wf.second), c.name + ": " + word + " does not generate its summand");
    k.require(r.totals.free == static_cast<long>(p) && o.free == static_cast<long>(p), c.name + ": free rank");
    k.require(r.totals.torsion == static_cast<long>(p - 1) && o.torsion == static_cast<long>(p - 1), c.name + ": torsion count");
  }
}

void criterion2(Criterion& k) {
  const GroupCase& c = load_case("spin11");
  oracle::GrOracle o = oracle::gr_bruteforce(c);
  auto t0 = Clock::now();
  GrResult r = gr_invariants(c, Exec::Serial);
  k.within(seconds_since(t0), 1.0, c.name);
  compare_with_oracle(k, c, r, o);
  struct Cls {
    const char* rep;
    int w;
    long f;
  };
  const std::vector<Cls> want{{"1", 0, 0}, {"c2'", 2, 2}, {"c3'", 3, 0}, {"c4'", 4, 2},
                              {"c5'", 5, 0}, {"c2'*c4'", 6, 2}, {"c1^8", 8, 0}};
  k.require(r.weights.size() == want.size(), "spin11: expected 7 nonzero weights");
  for (const auto& cl : want) {
    k.require(factors(r, cl.w) == std::vector<long long>{cl.f}, std::string("spin11 w") + std::to_string(cl.w));
    k.require(realizes(r, cl.rep, cl.w, cl.f), std::string("spin11: ") + cl.rep + " does not generate its summand");
  }
  k.require(r.totals.mod_p_dim == 7 && o.mod_p == 7, "spin11: mod-2 dimension " + std::to_string(r.totals.mod_p_dim));
}

void criterion3(Criterion& k) {
  const GroupCase& c = load_case("e8p3");
  oracle::GrOracle o = oracle::gr_bruteforce(c);
  k.require(o.free == 9, "oracle free rank " + std::to_string(o.free) + " (want 9)");
  k.require(o.torsion == 10, "oracle torsion count " + std::to_string(o.torsion) + " (want 10)");
  k.require(o.mod_p == 19, "oracle mod-3 dimension " + std::to_string(o.mod_p) + " (want 19)");
  for (const char* w : {"b1*b3^2", "b1^2*b3^2"}) {
    std::vector<std::string> labels;
    std::string s = w;
    // expand b1^2*b3^2 into labels
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, '*')) {
      auto hat = part.find('^');
      int e = hat == std::string::npos ? 1 : std::stoi(part.substr(hat + 1));
      for (int i = 0; i < e; ++i) labels.push_back(part.substr(0, hat));
    }
    int natural = 0;
    for (const auto& l : labels) natural += c.b(l).weight;
    k.require(oracle::in_level(c, labels, natural + 1), std::string("oracle: ") + w + " is not deeper");
  }
  auto t0 = Clock::now();
  GrResult r = gr_invariants(c, Exec::Serial);
  k.within(seconds_since(t0), 10.0, c.name);
  compare_with_oracle(k, c, r, o);
  k.require(r.totals.free == 9, "engine free rank " + std::to_string(r.totals.free));
  k.require(r.totals.torsion == 10, "engine torsion count " + std::to_string(r.totals.torsion) + " (want 10)");
  k.require(r.totals.mod_p_dim == 19, "engine mod-3 dimension " + std::to_string(r.totals.mod_p_dim) + " (want 19)");
  k.require(realizes(r, "b1*b6", 20, 3), "b1*b6 does not generate a Z/3 at weight 20");
  k.require(realizes(r, "b1^2*b6", 22, 3), "b1^2*b6 does not generate a Z/3 at weight 22");
  for (const char* w : {"b1*b3^2", "b1^2*b3^2"}) {
    auto word = parse_word(r.spec, w);
    k.require(word && r.chain.level(word_value(r.spec, *word)) > word_weight(r.spec, *word),
              std::string("engine: ") + w + " is not deeper");
  }
  if (c.gr) {
    GrDiff d = compare_expected(r, *c.gr);
    if (!d.equal) k.problems.push_back("diff: " + d.summary());
  }
}

void criterion4(Criterion& k) {
  for (int ell : {2, 3}) {
    const GroupCase& c = load_case("so" + std::to_string(2 * ell + 1));
    const auto& ideal = c.flag_ideal->ideal;
    auto o = oracle::ideal_series(ideal.ring, ideal.generators, ell * ell + 1);
    long long osum = 0;
    for (auto x : o) osum += x;
    auto h = quotient_hilbert_series(buchberger(ideal.generators, {MonomialOrder::Grevlex, std::nullopt, Exec::Serial}));
    std::int64_t want = (std::int64_t{1} << ell) * (ell == 2 ? 2 : 6);
    k.require(osum == want, c.name + ": oracle dimension " + std::to_string(osum));
    k.require(h.total() == want, c.name + ": engine dimension");
    auto e = h.expand(ell * ell + 1);
    for (int d = 0; d <= ell * ell + 1; ++d) k.require(e[d] == o[d], c.name + ": degree " + std::to_string(d) + " differs from oracle");
  }
  const GroupCase& c = load_case("spin11");
  const auto& ideal = c.flag_ideal->ideal;
  const int low = 8;
  auto o = oracle::ideal_series(ideal.ring, ideal.generators, low);
  auto t0 = Clock::now();
  auto h = quotient_hilbert_series(buchberger(ideal.generators, {MonomialOrder::Grevlex, std::nullopt, Exec::Serial}));
  k.within(seconds_since(t0), 60.0, "spin11 ideal");
  k.require(h.total() == 6720, "spin11: engine dimension");
  auto e = h.expand(low);
  for (int d = 0; d <= low; ++d) k.require(e[d] == o[d], "spin11: degree " + std::to_string(d) + " differs from oracle");
  // 7-class series times the complete-intersection series of degrees 2,3,4,5,8.
  std::vector<std::int64_t> classes(9, 0);
  for (int w : {0, 2, 3, 4, 5, 6, 8}) classes[w] = 1;
  std::vector<std::int64_t> ci{1};
  for (int d : {2, 3, 4, 5, 8}) {
    std::vector<std::int64_t> f(d, 1);
    ci = poly_mul(ci, f);
  }
  auto prod = poly_mul(classes, ci);
  auto full = h.expand(static_cast<int>(prod.size()) + 2);
  prod.resize(full.size(), 0);
  k.require(full == prod, "spin11: series differs from class series times complete-intersection series");
  PresentationComparison pc = assemble_flag_presentation(c, Exec::Serial);
  k.require(pc.checkable && pc.equal, "spin11: engine presentation comparison");
}

void criterion5(Criterion& k) {
  struct Want {
    const char* name;
    int s;
    const char* witness;
  };
  for (const Want& w : {Want{"spin11", 1, "c1^8"}, Want{"e7p2", 2, "b2*b7"}, Want{"e8p3", 2, "b2*b8"}}) {
    const GroupCase& c = load_case(w.name);
    oracle::TorsionOracle o = oracle::torsion_bruteforce(c);
    k.require(o.exponent == w.s, std::string(w.name) + ": oracle exponent");
    k.require(std::find(o.witnesses.begin(), o.witnesses.end(), w.witness) != o.witnesses.end(),
              std::string(w.name) + ": oracle does not find witness " + w.witness);
    auto t0 = Clock::now();
    TorsionBound t = torsion_bound(c);
    k.within(seconds_since(t0), 1.0, w.name);
    k.require(t.exponent == w.s, std::string(w.name) + ": engine exponent");
    k.require(t.witness == w.witness, std::string(w.name) + ": engine witness " + t.witness);
    k.require(p_valuation(t.cofactor, c.prime) == 0, std::string(w.name) + ": cofactor not a unit");
  }
}

void criterion6(Criterion& k) {
  for (const char* n : {"so7", "spin11", "e8p2"}) {
    const GroupCase& c = load_case(n);
    auto o = oracle::image_min_exponents(c);
    auto t0 = Clock::now();
    ImageReport r = image_with_stability(c, true, Exec::Serial);
    k.within(seconds_since(t0), 5.0, n);
    k.require(r.stabilized == true, std::string(n) + ": minimal exponents did not stabilize");
    k.require(r.complete, std::string(n) + ": undetermined exponents");
    std::vector<std::string> oracle_missing;
    for (const auto& e : r.entries) {
      std::string key = c.py->monomial_string(e.monomial);
      k.require(o.count(key) && o.at(key) == e.exponent, std::string(n) + ": " + key + " differs from oracle");
      if (!o[key]) oracle_missing.push_back(e.label);
    }
    auto missing = r.missing;
    std::sort(missing.begin(), missing.end());
    std::sort(oracle_missing.begin(), oracle_missing.end());
    k.require(missing == oracle_missing, std::string(n) + ": missing set differs from oracle");
    if (std::string(n) == "so7") {
      auto want = y2_multiples(c);
      std::sort(want.begin(), want.end());
      k.require(missing == want, "so7: missing set is not the y2-multiples");
    } else {
      k.require(missing.empty() && r.rank_after_inverting_v1 == r.full_rank, std::string(n) + ": image not full");
    }
  }
}

void criterion7(Criterion& k) {
  RostCounts a = rost_counts(2, 5), b = rost_counts(3, 2);
  k.require(a.chow_basis_count == 9 && a.killed_count == 0, "(2,5): " + std::to_string(a.chow_basis_count) + "/" +
                                                                 std::to_string(a.killed_count));
  k.require(b.chow_basis_count == 4 && b.killed_count == 1, "(3,2): " + std::to_string(b.chow_basis_count) + "/" +
                                                                 std::to_string(b.killed_count));
  k.require(a.relation_verified && b.relation_verified, "relation v1 c_j(y) = v_j c_1(y) not verified");
}

void criterion8(Criterion& k) {
  for (const auto& n : list_cases()) {
    const GroupCase& c = load_case(n);
    GrResult r = gr_invariants(c);
    k.require(static_cast<std::size_t>(r.totals.free) == c.py->free_rank(), n + ": rank telescoping");
    for (const auto& b : c.b_models)
      for (const auto& [m, coef] : b.value.terms()) {
        int d = c.py->chow_degree(m) - b.weight;
        k.require(d >= 0 && d % static_cast<int>(c.prime - 1) == 0, n + ": weight deficit of " + b.label);
      }
    int top = q_table_max(c);
    for (int i = 0; i <= top; ++i)
      for (int j = i; j <= top; ++j)
        k.require(q_anticommute_check(c, i, j).ok(), n + ": Q" + std::to_string(i) + "Q" + std::to_string(j));
    if (c.gr && !c.gr->exact && c.gr->min_mod_p_dim)
      k.require(r.totals.mod_p_dim >= *c.gr->min_mod_p_dim,
                n + ": mod-p dimension " + std::to_string(r.totals.mod_p_dim) + " below " +
                    std::to_string(*c.gr->min_mod_p_dim));
  }
  for (const char* n : {"e7p2", "e8p2"}) {
    const GroupCase& c = load_case(n);
    k.require(c.gr && c.gr->min_mod_p_dim, std::string(n) + ": no lower bound recorded");
  }
  std::mt19937 rng(8);
  std::uniform_int_distribution<int> dist(-9, 9);
  for (int t = 0; t < 1000; ++t) {
    oracle::Mat o(5, oracle::Vec(5));
    IntMatrix m(5, IntRow(5));
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j) {
        o[i][j] = dist(rng);
        m[i][j] = static_cast<long>(o[i][j]);
      }
    SmithForm s = smith_normal_form(m, 5, Exec::Serial);
    mpz_class prod = 1;
    bool chain = true;
    for (std::size_t i = 0; i < s.diagonal.size(); ++i) {
      prod *= s.diagonal[i];
      if (i + 1 < s.rank && !mpz_divisible_p(s.diagonal[i + 1].get_mpz_t(), s.diagonal[i].get_mpz_t())) chain = false;
    }
    long long det = oracle::det_bareiss(o);
    bool det_ok = abs(prod) == mpz_class(static_cast<long>(std::llabs(det)));
    auto od = oracle::snf_diagonal(o);
    bool agree = od.size() == s.rank;
    for (std::size_t i = 0; agree && i < od.size(); ++i) agree = s.diagonal[i] == mpz_class(static_cast<long>(od[i]));
    if (!chain || !det_ok || !agree) {
      k.problems.push_back("SNF trial " + std::to_string(t) + " failed");
      break;
    }
  }
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Criterion&)>>> criteria{
      {"type (I) gr for p = 3, 5", criterion1},
      {"Spin(11) gr", criterion2},
      {"(E8, 3) gr", criterion3},
      {"Groebner dimensions", criterion4},
      {"torsion index bounds", criterion5},
      {"restriction images", criterion6},
      {"Rost counts", criterion7},
      {"property suites", criterion8}};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Criterion k;
    auto t0 = Clock::now();
    try {
      criteria[i].second(k);
    } catch (const std::exception& e) {
      k.problems.push_back(std::string("exception: ") + e.what());
    }
    double secs = seconds_since(t0);
    bool ok = k.problems.empty();
    failed += !ok;
    std::printf("%s criterion %zu: %s (%.2f s)\n", ok ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), secs);
    for (const auto& p : k.problems) {
      std::istringstream lines(p);
      for (std::string line; std::getline(lines, line);)
        if (!line.empty()) std::printf("    %s\n", line.c_str());
    }
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
