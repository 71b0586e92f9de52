#include "grflag/lie_data.hpp"

#include <gtest/gtest.h>

#include <string>

using namespace grflag;

namespace {

std::string data_file(const std::string& rel) { return std::string(GRFLAG_DATA_DIR) + "/" + rel; }

}  // namespace

TEST(Registry, BuiltinCasesValidate) {
  auto names = list_cases();
  ASSERT_GE(names.size(), 12u);
  for (const auto& n : names) {
    const GroupCase& c = load_case(n);
    EXPECT_EQ(c.name, n);
    EXPECT_TRUE(validate_case(c).empty()) << n;
  }
  EXPECT_THROW(load_case("g2p5"), CaseError);
}

TEST(Registry, WeylOrdersAndRanks) {
  EXPECT_EQ(load_case("so7").weyl_order, 48u);
  EXPECT_EQ(load_case("spin11").weyl_order, 3840u);
  EXPECT_EQ(load_case("e8p3").rank, 8);
  EXPECT_EQ(load_case("typeI(p=3)").weyl_order, 1152u);
}

TEST(Models, WeightDeficitInvariant) {
  // Each term of a b-model has chow degree >= weight, with the deficit a
  // multiple of p - 1, and the v1-form evaluates back to the value.
  for (const auto& n : list_cases()) {
    const GroupCase& c = load_case(n);
    for (const auto& b : c.b_models) {
      for (const auto& [m, coef] : b.value.terms()) {
        int deficit = c.py->chow_degree(m) - b.weight;
        EXPECT_GE(deficit, 0) << n << " " << b.label;
        EXPECT_EQ(deficit % static_cast<int>(c.prime - 1), 0) << n << " " << b.label;
      }
      EXPECT_EQ(b.v1_form.evaluate_at_one(), b.value) << n << " " << b.label;
      EXPECT_TRUE(b.v1_form.in_connective()) << n << " " << b.label;
    }
  }
}

TEST(Models, SpinKillsPowerOfTwoClasses) {
  const GroupCase& c = load_case("spin11");
  EXPECT_TRUE(c.y_even.at(1).is_zero());
  EXPECT_TRUE(c.y_even.at(2).is_zero());
  EXPECT_TRUE(c.y_even.at(4).is_zero());
  EXPECT_FALSE(c.y_even.at(3).is_zero());
  EXPECT_FALSE(c.y_even.at(5).is_zero());
  EXPECT_EQ(c.py->free_rank(), 4u);
}

TEST(Models, SoRingShape) {
  const GroupCase& c = load_case("so7");
  EXPECT_EQ(c.py->free_rank(), 8u);
  EXPECT_EQ(c.b_models.size(), 3u);
  EXPECT_EQ(c.exterior_label(c.y_top), "y2*y4*y6");
}

TEST(Milnor, QVanishesOnYAndIsDerivation) {
  const GroupCase& c = load_case("so7");
  ExtElement y = ExtElement::y(c, Element::variable(c.py_mod_p, "y2"));
  EXPECT_TRUE(apply_q(0, y, c).is_zero());
  ExtElement x1 = ExtElement::x(c, "x1"), x3 = ExtElement::x(c, "x3");
  ExtElement lhs = apply_q(0, x1 * x3, c);
  ExtElement rhs = apply_q(0, x1, c) * x3 + x1 * apply_q(0, x3, c);
  EXPECT_EQ(lhs, rhs);
  EXPECT_TRUE((x1 * x1).is_zero());
}

TEST(Milnor, AnticommuteOnTabledPairs) {
  for (const auto& n : list_cases()) {
    const GroupCase& c = load_case(n);
    int top = q_table_max(c);
    for (int i = 0; i <= top; ++i)
      for (int j = i; j <= top; ++j) {
        auto r = q_anticommute_check(c, i, j);
        EXPECT_TRUE(r.ok()) << n << " Q" << i << "Q" << j;
      }
  }
}

TEST(Milnor, MissingEntryThrows) {
  const GroupCase& c = load_case("typeI(p=3)");
  EXPECT_THROW(apply_q(q_table_max(c) + 1, ExtElement::x(c, "x2"), c), QError);
  GroupCase sparse = c;
  sparse.q_table.erase({1, "x1"});
  EXPECT_THROW(apply_q(1, ExtElement::x(sparse, "x1"), sparse), QError);
}

TEST(Dimension, CompleteIntersection) {
  EXPECT_EQ(complete_intersection_dim({1, 2, 3}), 6u);
  EXPECT_EQ(complete_intersection_dim({2, 3, 4, 5, 8}), 960u);
}

TEST(CaseFile, ShippedSampleLoads) {
  GroupCase c = load_case_file(data_file("cases/toy_p3.json"));
  EXPECT_EQ(c.name, "toy_p3");
  EXPECT_EQ(c.prime, 3u);
  ASSERT_TRUE(c.gr);
  EXPECT_EQ(c.gr->classes.size(), 5u);
  EXPECT_EQ(c.b("b2").value, Element::variable(c.py, "y") * mpz_class(3));
}

TEST(CaseFile, RejectsBadInput) {
  EXPECT_THROW(parse_case_json("{"), CaseError);
  EXPECT_THROW(parse_case_json(R"({"name":"x","prime":4,"py":[]})"), CaseError);
  // Weight above the chow degree breaks the deficit invariant.
  EXPECT_THROW(parse_case_json(R"({"name":"x","prime":3,"py":[{"label":"y","chow_degree":4,"trunc":3}],
    "b_models":[{"label":"b1","weight":6,"value":"y"}],"y_top":"y^2"})"),
               CaseError);
  EXPECT_THROW(load_case_file("/nonexistent.json"), CaseError);
}
