#include "grflag/ring_core.hpp"

#include <gtest/gtest.h>

using namespace grflag;

namespace {

PresentationPtr typeI3() { return AlgebraPresentation::create({{"y", 4, 3}}, CoefficientRing::integers()); }

PresentationPtr spin11_py() {
  return AlgebraPresentation::create({{"y6", 3, 2}, {"y10", 5, 2}}, CoefficientRing::integers());
}

}  // namespace

TEST(CoefficientRing, ReducesModP) {
  auto f = CoefficientRing::prime_field(3);
  EXPECT_EQ(f.reduce(7), 1);
  EXPECT_EQ(f.reduce(-1), 2);
  EXPECT_EQ(CoefficientRing::integers().reduce(-5), -5);
  EXPECT_THROW(CoefficientRing::prime_field(4), std::invalid_argument);
  EXPECT_TRUE(is_prime(2));
  EXPECT_FALSE(is_prime(1));
  EXPECT_FALSE(is_prime(9));
}

TEST(Presentation, BasisAndDegrees) {
  auto p = spin11_py();
  EXPECT_TRUE(p->finite());
  EXPECT_EQ(p->free_rank(), 4u);
  EXPECT_EQ(p->top_degree(), 8);
  auto b = p->basis();
  ASSERT_EQ(b.size(), 4u);
  EXPECT_TRUE(std::is_sorted(b.begin(), b.end()));
  EXPECT_EQ(p->monomial_string({1, 1}), "y6*y10");
  EXPECT_EQ(p->monomial_string({0, 0}), "1");
}

TEST(Element, TruncationKillsMonomials) {
  auto p = typeI3();
  Element y = Element::variable(p, "y");
  EXPECT_FALSE(y.pow(2).is_zero());
  EXPECT_TRUE(y.pow(3).is_zero());
  EXPECT_TRUE((y * y.pow(2)).is_zero());
}

TEST(Element, ArithmeticAndDegrees) {
  auto p = spin11_py();
  Element a = parse_element(p, "2*y6 + y10");
  Element b = parse_element(p, "y6 - y10");
  Element prod = a * b;
  // squares vanish, leaving -2*y6*y10 + y10*y6
  EXPECT_EQ(prod, parse_element(p, "-y6*y10"));
  EXPECT_FALSE(a.is_homogeneous());
  EXPECT_EQ(a.min_degree(), 3);
  Element c = parse_element(p, "3*y6*y10");
  EXPECT_EQ(c.degree(), 8);
  EXPECT_EQ((a - a).is_zero(), true);
  EXPECT_EQ((a * mpz_class(0)).is_zero(), true);
}

TEST(Element, ModPCoefficients) {
  auto p = typeI3()->with_ring(CoefficientRing::prime_field(3));
  Element y = Element::variable(p, "y");
  EXPECT_TRUE((y * mpz_class(3)).is_zero());
  EXPECT_EQ(parse_element(p, "4*y"), y);
}

TEST(Element, MixedPresentationsThrow) {
  Element a = Element::variable(typeI3(), "y");
  Element b = Element::variable(spin11_py(), "y6");
  EXPECT_THROW(a + b, std::invalid_argument);
}

TEST(Element, SubstituteAndSymmetric) {
  auto s = AlgebraPresentation::create({{"t1", 1, std::nullopt}, {"t2", 1, std::nullopt}, {"t3", 1, std::nullopt}},
                                       CoefficientRing::integers());
  std::vector<Element> ts{Element::variable(s, 0), Element::variable(s, 1), Element::variable(s, 2)};
  EXPECT_EQ(elementary_symmetric(ts, 2, s), parse_element(s, "t1*t2 + t1*t3 + t2*t3"));
  EXPECT_EQ(elementary_symmetric(ts, 0, s), Element::constant(s, 1));
  EXPECT_TRUE(elementary_symmetric(ts, 4, s).is_zero());
  Element f = parse_element(s, "t1^2 + t2");
  Element g = substitute(f, {ts[1], ts[2], ts[0]});
  EXPECT_EQ(g, parse_element(s, "t2^2 + t3"));
}

TEST(Parse, GrammarAndErrors) {
  auto p = spin11_py();
  EXPECT_EQ(parse_element(p, "(y6 + y10)^2"), parse_element(p, "2*y6*y10"));
  EXPECT_EQ(parse_element(p, "-(y6)"), Element::variable(p, "y6") * mpz_class(-1));
  EXPECT_THROW(parse_element(p, "y7"), ParseError);
  EXPECT_THROW(parse_element(p, "y6 +"), ParseError);
  EXPECT_THROW(parse_element(p, "(y6"), ParseError);
  std::map<std::string, Element> sym{{"c", parse_element(p, "y6 + y10")}};
  EXPECT_EQ(parse_element(p, "c*y6", sym), parse_element(p, "y6*y10"));
}

TEST(Hilbert, TruncatedPolynomialSeries) {
  auto h = hilbert_series(*typeI3());
  ASSERT_TRUE(h.dense);
  EXPECT_EQ(h.total(), 3);
  auto e = h.expand(8);
  EXPECT_EQ(e[0], 1);
  EXPECT_EQ(e[4], 1);
  EXPECT_EQ(e[8], 1);
  EXPECT_EQ(e[2], 0);
}

TEST(Poly, Helpers) {
  std::vector<std::int64_t> a{1, 1}, b{1, -1};
  EXPECT_EQ(poly_mul(a, b), (std::vector<std::int64_t>{1, 0, -1}));
  auto q = poly_div_one_minus({1, 0, -1}, 1);
  ASSERT_TRUE(q);
  EXPECT_EQ(*q, (std::vector<std::int64_t>{1, 1}));
  EXPECT_FALSE(poly_div_one_minus({1, 1}, 1));
  EXPECT_EQ(poly_string({1, 2, 0, -1}), "1 + 2t - t^3");
}
