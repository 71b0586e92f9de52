#include "grflag/kres.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace grflag;

namespace {

void expect_image_matches_oracle(const std::string& name) {
  const GroupCase& c = load_case(name);
  ImageReport r = image_subalgebra(c, true, std::nullopt, std::nullopt, Exec::Serial);
  auto o = oracle::image_min_exponents(c);
  ASSERT_TRUE(r.complete) << name;
  for (const auto& e : r.entries) {
    std::string key = c.py->monomial_string(e.monomial);
    ASSERT_TRUE(o.count(key)) << name << " " << key;
    EXPECT_EQ(e.exponent, o.at(key)) << name << " " << key;
  }
}

}  // namespace

TEST(Image, MatchesOracle) {
  for (const char* n : {"so5", "so7", "spin7", "spin9", "spin11", "typeI(p=3)", "typeI(p=5)"})
    expect_image_matches_oracle(n);
}

TEST(Image, So7MissesExactlyY2Multiples) {
  const GroupCase& c = load_case("so7");
  ImageReport r = image_with_stability(c);
  auto want = y2_multiples(c);
  auto got = r.missing;
  std::sort(want.begin(), want.end());
  std::sort(got.begin(), got.end());
  EXPECT_EQ(got, want);
  EXPECT_EQ(r.rank_after_inverting_v1, 4);
  EXPECT_EQ(r.full_rank, 8);
  EXPECT_EQ(r.stabilized, true);
}

TEST(Image, FullCases) {
  for (const char* n : {"spin11", "e8p2"}) {
    ImageReport r = image_with_stability(load_case(n));
    EXPECT_TRUE(r.missing.empty()) << n;
    EXPECT_EQ(r.rank_after_inverting_v1, r.full_rank) << n;
    EXPECT_EQ(r.stabilized, true) << n;
  }
  ImageReport s = image_subalgebra(load_case("spin11"));
  ASSERT_NE(s.find("y6"), nullptr);
  EXPECT_EQ(s.find("y6")->exponent, 1);
  EXPECT_EQ(s.find("y6*y10")->exponent, 2);
}

TEST(Image, TinyCapIsUndetermined) {
  ImageReport r = image_subalgebra(load_case("spin11"), true, std::nullopt, 0);
  EXPECT_FALSE(r.complete);
}

TEST(Image, IntegralContainsModP) {
  ImageReport z = image_subalgebra(load_case("spin11"), false);
  ImageReport f = image_subalgebra(load_case("spin11"), true);
  ASSERT_EQ(z.entries.size(), f.entries.size());
  for (std::size_t i = 0; i < z.entries.size(); ++i)
    if (z.entries[i].exponent && f.entries[i].exponent) EXPECT_GE(*z.entries[i].exponent, *f.entries[i].exponent);
}

TEST(Telescope, RecursionHoldsClosedFormDoesNot) {
  TelescopeReport r = telescope_check(load_case("spin11"), 1);
  EXPECT_TRUE(r.base_holds);
  ASSERT_FALSE(r.recursion.empty());
  for (const auto& s : r.recursion) EXPECT_TRUE(s.holds) << s.i << " " << s.residual;
  ASSERT_FALSE(r.closed_form.empty());
  EXPECT_TRUE(std::any_of(r.closed_form.begin(), r.closed_form.end(),
                          [](const TelescopeStep& s) { return !s.holds; }));
  ASSERT_EQ(r.ranges.size(), 2u);
  for (const auto& g : r.ranges) EXPECT_FALSE(g.equal) << g.residual;
}

TEST(Telescope, Preconditions) {
  EXPECT_THROW(telescope_check(load_case("so7"), 1), KresError);
  EXPECT_THROW(telescope_check(load_case("spin7"), 1), KresError);
  EXPECT_NO_THROW(telescope_check(load_case("spin11"), 0));
}

TEST(Conventions, OnlyShiftedIndexingIsIsomorphic) {
  ConventionReport r = spin_generator_conventions(load_case("spin11"));
  ASSERT_EQ(r.conventions.size(), 2u);
  EXPECT_NE(r.conventions[0].isomorphic, r.conventions[1].isomorphic);
  EXPECT_FALSE(r.matching.empty());
}

TEST(Torsion, Bounds) {
  struct Want {
    const char* name;
    int s;
    const char* witness;
  };
  for (const Want& w : {Want{"spin11", 1, "c1^8"}, Want{"e7p2", 2, "b2*b7"}, Want{"e8p3", 2, "b2*b8"}}) {
    const GroupCase& c = load_case(w.name);
    TorsionBound t = torsion_bound(c);
    EXPECT_EQ(t.exponent, w.s) << w.name;
    EXPECT_EQ(t.witness, w.witness) << w.name;
    EXPECT_EQ(p_valuation(t.cofactor, c.prime), 0) << w.name;
    mpz_class pp;
    mpz_ui_pow_ui(pp.get_mpz_t(), c.prime, static_cast<unsigned long>(w.s));
    EXPECT_EQ(t.coefficient, t.cofactor * pp) << w.name;
  }
}

TEST(Rost, Counts) {
  RostCounts a = rost_counts(2, 5);
  EXPECT_EQ(a.chow_basis_count, 9);
  EXPECT_EQ(a.killed_count, 0);
  EXPECT_TRUE(a.relation_verified);
  RostCounts b = rost_counts(3, 2);
  EXPECT_EQ(b.chow_basis_count, 4);
  EXPECT_EQ(b.killed_count, 1);
  EXPECT_TRUE(b.relation_verified);
  EXPECT_EQ(rost_counts(2, 3).chow_basis_count, 5);
}
