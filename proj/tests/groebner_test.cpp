#include "grflag/groebner.hpp"
#include "grflag/lie_data.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <string>

using namespace grflag;

namespace {

PresentationPtr poly_ring(int n, unsigned p) {
  std::vector<Variable> vars;
  for (int i = 1; i <= n; ++i) vars.push_back({"t" + std::to_string(i), 1, std::nullopt});
  return AlgebraPresentation::create(vars, CoefficientRing::prime_field(p));
}

std::string data_file(const std::string& rel) { return std::string(GRFLAG_DATA_DIR) + "/" + rel; }

void expect_series_match(const IdealSpec& ideal, int max_degree) {
  GroebnerBasis gb = buchberger(ideal.generators);
  auto h = quotient_hilbert_series(gb).expand(max_degree);
  auto o = oracle::ideal_series(ideal.ring, ideal.generators, max_degree);
  for (int d = 0; d <= max_degree; ++d) EXPECT_EQ(h[d], o[d]) << "degree " << d;
}

}  // namespace

TEST(Buchberger, PrincipalAndMembership) {
  auto s = poly_ring(2, 2);
  Element f = parse_element(s, "t1^2 + t1*t2");
  GroebnerBasis gb = buchberger({f});
  ASSERT_EQ(gb.polynomials().size(), 1u);
  EXPECT_TRUE(gb.contains(parse_element(s, "t1^3 + t1^2*t2")));
  EXPECT_FALSE(gb.contains(parse_element(s, "t1^2")));
}

TEST(Buchberger, RejectsBadInput) {
  auto s = poly_ring(2, 2);
  EXPECT_THROW(buchberger({parse_element(s, "t1^2 + t2")}), std::invalid_argument);
  auto z = AlgebraPresentation::create({{"t", 1, std::nullopt}}, CoefficientRing::integers());
  EXPECT_THROW(buchberger({Element::variable(z, 0)}), std::invalid_argument);
  auto tr = AlgebraPresentation::create({{"t", 1, 3}}, CoefficientRing::prime_field(2));
  EXPECT_THROW(buchberger({Element::variable(tr, 0)}), std::invalid_argument);
}

TEST(Buchberger, OrdersAgreeOnSeries) {
  auto s = poly_ring(3, 3);
  std::vector<Element> gens{parse_element(s, "t1^2 - t2*t3"), parse_element(s, "t1*t2 + t3^2"),
                            parse_element(s, "t2^3")};
  auto a = quotient_hilbert_series(buchberger(gens, {MonomialOrder::Grevlex})).expand(10);
  auto b = quotient_hilbert_series(buchberger(gens, {MonomialOrder::Lex})).expand(10);
  EXPECT_EQ(a, b);
  auto o = oracle::ideal_series(s, gens, 10);
  for (int d = 0; d <= 10; ++d) EXPECT_EQ(a[d], o[d]);
}

TEST(Buchberger, SerialAndParallelAgree) {
  const auto& ideal = load_case("spin11").flag_ideal->ideal;
  BuchbergerOptions ser{MonomialOrder::Grevlex, std::nullopt, Exec::Serial};
  BuchbergerOptions par{MonomialOrder::Grevlex, std::nullopt, Exec::Parallel};
  auto a = buchberger(ideal.generators, ser), b = buchberger(ideal.generators, par);
  EXPECT_EQ(a.leading_monomials(), b.leading_monomials());
}

TEST(Buchberger, DegreeCapMarksVerifiedRange) {
  const auto& ideal = load_case("so7").flag_ideal->ideal;
  GroebnerBasis gb = buchberger(ideal.generators, {MonomialOrder::Grevlex, 3});
  ASSERT_TRUE(gb.verified_up_to());
  EXPECT_LE(*gb.verified_up_to(), 4);
}

TEST(Hilbert, MonomialQuotient) {
  auto h = monomial_quotient_series({{2, 0}, {0, 3}}, {1, 1});
  ASSERT_TRUE(h.dense);
  EXPECT_EQ(*h.dense, (std::vector<std::int64_t>{1, 2, 2, 1}));
  auto inf = monomial_quotient_series({{2, 0}}, {1, 1});
  EXPECT_FALSE(inf.dense);
  EXPECT_EQ(inf.expand(4), (std::vector<std::int64_t>{1, 2, 2, 2, 2}));
}

TEST(Hilbert, SoIdealDimensions) {
  for (int ell = 2; ell <= 4; ++ell) {
    const auto& f = *load_case("so" + std::to_string(2 * ell + 1)).flag_ideal;
    auto h = quotient_hilbert_series(buchberger(f.ideal.generators));
    ASSERT_TRUE(h.total());
    EXPECT_EQ(static_cast<std::uint64_t>(*h.total()), f.expected_dim.value());
  }
}

TEST(Hilbert, AgreesWithOracleOnFlagIdeals) {
  expect_series_match(load_case("so5").flag_ideal->ideal, 8);
  expect_series_match(load_case("so7").flag_ideal->ideal, 8);
  expect_series_match(load_case("spin11").flag_ideal->ideal, 7);
}

TEST(Hilbert, Spin11IdealTotal) {
  auto h = quotient_hilbert_series(buchberger(load_case("spin11").flag_ideal->ideal.generators));
  EXPECT_EQ(h.total(), 6720);
}

TEST(RegularSequence, ElementarySymmetricIsRegular) {
  auto s = poly_ring(3, 2);
  std::vector<Element> ts{Element::variable(s, 0), Element::variable(s, 1), Element::variable(s, 2)};
  std::vector<Element> es;
  for (int k = 1; k <= 3; ++k) es.push_back(elementary_symmetric(ts, k, s));
  auto r = regular_sequence_check(es);
  EXPECT_TRUE(r.regular) << r.detail;
  EXPECT_EQ(r.actual.total(), 6);
  EXPECT_FALSE(regular_sequence_check({es[0], es[0] * es[1], es[2]}).regular);
}

TEST(IdealFile, ShippedFilesLoad) {
  auto so5 = load_ideal_file(data_file("ideals/so5.json"));
  EXPECT_EQ(quotient_hilbert_series(buchberger(so5.generators)).total(), 8);
  auto spin = load_ideal_file(data_file("ideals/spin11.json"));
  EXPECT_EQ(quotient_hilbert_series(buchberger(spin.generators)).total(), 6720);
}

TEST(IdealFile, Errors) {
  EXPECT_THROW(parse_ideal_json("not json"), ParseError);
  EXPECT_THROW(parse_ideal_json(R"({"prime":2})"), ParseError);
  EXPECT_THROW(parse_ideal_json(R"({"prime":2,"variables":[{"label":"t"}],"generators":["u"]})"), ParseError);
  EXPECT_THROW(load_ideal_file("/nonexistent/ideal.json"), ParseError);
  auto ok = parse_ideal_json(
      R"({"prime":3,"variables":[{"label":"a"},{"label":"b"}],"definitions":[{"label":"s","expr":"a+b"}],"generators":["s^2","a*b"]})");
  EXPECT_EQ(ok.generators.size(), 2u);
  EXPECT_EQ(quotient_hilbert_series(buchberger(ok.generators)).total(), 4);
}
