#include "grflag/filtration.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace grflag;

namespace {

std::vector<long long> engine_factors(const GrResult& r, int w) {
  std::vector<long long> out;
  for (const auto& f : r.factors_at(w)) out.push_back(f.get_si());
  return out;
}

void expect_matches_oracle(const std::string& name) {
  const GroupCase& c = load_case(name);
  GrResult r = gr_invariants(c, Exec::Serial);
  oracle::GrOracle o = oracle::gr_bruteforce(c);
  std::set<int> weights;
  for (const auto& [w, f] : o.factors) weights.insert(w);
  for (const auto& gw : r.weights) weights.insert(gw.weight);
  for (int w : weights) {
    auto it = o.factors.find(w);
    std::vector<long long> want = it == o.factors.end() ? std::vector<long long>{} : it->second;
    EXPECT_EQ(engine_factors(r, w), want) << name << " weight " << w;
  }
  EXPECT_EQ(r.totals.free, o.free) << name;
  EXPECT_EQ(r.totals.torsion, o.torsion) << name;
  EXPECT_EQ(r.totals.mod_p_dim, o.mod_p) << name;
}

}  // namespace

class GrOracleTest : public ::testing::TestWithParam<std::string> {};

TEST_P(GrOracleTest, EngineMatchesBruteForce) { expect_matches_oracle(GetParam()); }

INSTANTIATE_TEST_SUITE_P(Cases, GrOracleTest,
                         ::testing::Values("so5", "so7", "so9", "spin7", "spin9", "spin11", "typeI(p=3)", "typeI(p=5)",
                                           "e8p3"),
                         [](const auto& info) {
                           std::string s;
                           for (char ch : info.param)
                             if (std::isalnum(static_cast<unsigned char>(ch))) s += ch;
                           return s;
                         });

TEST(Gr, RankTelescopesOnEveryCase) {
  for (const auto& n : list_cases()) {
    const GroupCase& c = load_case(n);
    GrResult r = gr_invariants(c);
    EXPECT_EQ(static_cast<std::size_t>(r.totals.free), c.py->free_rank()) << n;
    ASSERT_NE(r.at(0), nullptr);
    EXPECT_EQ(engine_factors(r, 0), (std::vector<long long>{0})) << n;
  }
}

TEST(Gr, TypeIExact) {
  for (unsigned p : {3u, 5u}) {
    const GroupCase& c = load_case("typeI(p=" + std::to_string(p) + ")");
    GrResult r = gr_invariants(c);
    EXPECT_EQ(r.totals.free, static_cast<long>(p));
    EXPECT_EQ(r.totals.torsion, static_cast<long>(p - 1));
    EXPECT_TRUE(compare_expected(r, *c.gr).equal) << compare_expected(r, *c.gr).summary();
  }
}

TEST(Gr, Spin11Classes) {
  const GroupCase& c = load_case("spin11");
  GrResult r = gr_invariants(c);
  std::vector<std::pair<int, long long>> want{{0, 0}, {2, 2}, {3, 0}, {4, 2}, {5, 0}, {6, 2}, {8, 0}};
  ASSERT_EQ(r.weights.size(), want.size());
  for (const auto& [w, f] : want) EXPECT_EQ(engine_factors(r, w), (std::vector<long long>{f})) << w;
  EXPECT_EQ(r.totals.mod_p_dim, 7);
  EXPECT_TRUE(compare_expected(r, *c.gr).equal);
}

TEST(Gr, RepresentativesRealizeSummands) {
  const GroupCase& c = load_case("spin11");
  GrResult r = gr_invariants(c);
  for (const auto& gw : r.weights)
    for (const auto& s : gw.summands) {
      std::string why;
      EXPECT_TRUE(realizes_summand(r, gw.weight, word_value(r.spec, s.rep), s.factor.get_si(), &why))
          << s.rep_label << ": " << why;
    }
  // 2*c2' generates nothing of order 2 at weight 2.
  Element twice = word_value(r.spec, *parse_word(r.spec, "c2'")) * mpz_class(2);
  EXPECT_FALSE(realizes_summand(r, 2, twice, 2));
}

TEST(Gr, SabotagedWeightIsDetected) {
  GroupCase c = load_case("spin11");
  ExpectedGr bad = *c.gr;
  for (auto& cl : bad.classes)
    if (cl.rep == "c1^8") cl.weight = 7;
  GrDiff d = compare_expected(gr_invariants(c), bad);
  EXPECT_FALSE(d.equal);
  std::set<int> ws;
  for (const auto& w : d.weights) ws.insert(w.weight);
  EXPECT_EQ(ws, (std::set<int>{7, 8}));
}

TEST(Gr, E8p3DeeperWords) {
  const GroupCase& c = load_case("e8p3");
  GrResult r = gr_invariants(c);
  for (const auto& w : c.gr->deeper_words) {
    auto word = parse_word(r.spec, w);
    ASSERT_TRUE(word) << w;
    EXPECT_GT(r.chain.level(word_value(r.spec, *word)), word_weight(r.spec, *word)) << w;
    std::vector<std::string> labels;
    for (int g : *word) labels.push_back(r.spec.generators[g].label);
    EXPECT_TRUE(oracle::in_level(c, labels, word_weight(r.spec, *word) + 1)) << w;
  }
  EXPECT_EQ(r.totals.free, 9);
}

// The SO(2l+1) model has extra 2-torsion compared with the exterior algebra on
// the c_i; so5 agrees, so7 has Z/2{c1^2} at weight 2 and Z/2{c1^2*c2} at weight 4.
TEST(Gr, SoDiscrepancyIsStable) {
  EXPECT_TRUE(compare_expected(gr_invariants(load_case("so5")), *load_case("so5").gr).equal);
  GrResult r = gr_invariants(load_case("so7"));
  EXPECT_EQ(engine_factors(r, 2), (std::vector<long long>{2, 0}));
  EXPECT_EQ(engine_factors(r, 4), (std::vector<long long>{2, 0}));
  EXPECT_EQ(r.at(2)->summands[0].rep_label, "c1^2");
  EXPECT_EQ(r.totals.free, 8);
  EXPECT_EQ(r.totals.torsion, 2);
  GrDiff d = compare_expected(r, *load_case("so7").gr);
  ASSERT_EQ(d.weights.size(), 2u);
  EXPECT_EQ(d.weights[0].weight, 2);
  EXPECT_EQ(d.weights[1].weight, 4);
}

TEST(Gr, SerialAndParallelAgree) {
  const GroupCase& c = load_case("e7p2");
  GrResult a = gr_invariants(c, Exec::Serial), b = gr_invariants(c, Exec::Parallel);
  ASSERT_EQ(a.weights.size(), b.weights.size());
  for (std::size_t i = 0; i < a.weights.size(); ++i) {
    EXPECT_EQ(a.factors_at(a.weights[i].weight), b.factors_at(b.weights[i].weight));
    ASSERT_EQ(a.weights[i].summands.size(), b.weights[i].summands.size());
    for (std::size_t k = 0; k < a.weights[i].summands.size(); ++k)
      EXPECT_EQ(a.weights[i].summands[k].rep_label, b.weights[i].summands[k].rep_label);
  }
}

TEST(Words, ParseAndLabel) {
  FiltrationSpec spec = FiltrationSpec::from_case(load_case("e8p3"));
  auto w = parse_word(spec, "b1^2*b6");
  ASSERT_TRUE(w);
  EXPECT_EQ(word_label(spec, *w), "b1^2*b6");
  EXPECT_EQ(parse_word(spec, "1"), Word{});
  EXPECT_FALSE(parse_word(spec, "b99"));
  EXPECT_EQ(word_weight(spec, *parse_word(spec, "b1*b6")), 20);
}

TEST(Products, RejectUnitPart) {
  auto py = AlgebraPresentation::create({{"y", 2, 2}}, CoefficientRing::integers());
  FiltrationSpec spec{py, {{"b", 1, parse_element(py, "1 + y")}}};
  EXPECT_THROW(enumerate_products(spec), std::invalid_argument);
}

TEST(Factors, StringForm) {
  EXPECT_EQ(factors_string({mpz_class(2), mpz_class(0)}), "[2,0]");
}
