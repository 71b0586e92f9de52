#pragma once

#include "grflag/lattice.hpp"
#include "grflag/laurent.hpp"
#include "grflag/lie_data.hpp"

#include <optional>
#include <string>
#include <vector>

namespace grflag {

// Minimal s with v1^s * monomial in the image.  exponent is nullopt when the
// monomial is absent (exact) or when the caps ran out first (!determined).
struct MinimalExponent {
  Exponents monomial;
  std::string label;  // exterior word for SO/Spin, plain monomial otherwise
  int chow;
  std::optional<int> exponent;
  bool determined = true;
};

// Image generated by the v1-explicit b-models in degree D: rows span
// {v1^j P : deg P - (p-1) j = D} in monomial coordinates (v1 exponent implied).
struct DegreePiece {
  int degree;
  IntMatrix basis;  // echelon over F_p, or Hermite over Z
};

struct ImageReport {
  std::string name;
  bool mod_p = true;
  int degree_cap = 0;
  int v1_cap = 0;
  std::vector<MinimalExponent> entries;  // P(y) basis order
  std::vector<DegreePiece> pieces;
  long rank_after_inverting_v1 = 0;
  long full_rank = 0;
  std::vector<std::string> missing;  // entries with infinite exponent
  bool complete = true;              // every entry determined
  std::optional<bool> stabilized;    // set by image_with_stability
  std::size_t product_count = 0;

  const MinimalExponent* find(const std::string& label) const;
};

int default_v1_cap(const GroupCase& c);

ImageReport image_subalgebra(const GroupCase& c, bool mod_p = true, std::optional<int> degree_cap = std::nullopt,
                             std::optional<int> v1_cap = std::nullopt, Exec exec = default_exec());
// Runs at the given caps and at doubled caps; stabilized when the minimal
// exponents agree.
ImageReport image_with_stability(const GroupCase& c, bool mod_p = true, Exec exec = default_exec());

// Monomials whose exterior word contains y2.
std::vector<std::string> y2_multiples(const GroupCase& c);

struct TelescopeStep {
  int i;
  std::string lhs, rhs;
  bool holds;
  std::string residual;
};

struct TelescopeRange {
  int last;  // sum over i = 1..last
  std::string lhs, rhs, residual;
  bool equal;
};

struct TelescopeReport {
  std::string name;
  int k = 0;
  bool base_holds = false;  // c'' = c' - 2y = v1 y
  std::string base;
  std::vector<TelescopeStep> recursion;          // Y_i = c'_{a+i} - 2 v1^{-1} Y_{i-1}
  std::vector<TelescopeStep> closed_form;  // the closed form as stated
  std::vector<TelescopeRange> ranges;            // 2^k - 1 and 2^k
};

class KresError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Spin(2l+1) only, with 2^{k+1} < l.  c1-power classes are zero in the model.
TelescopeReport telescope_check(const GroupCase& c, int k);

struct ConventionResult {
  std::string name;
  std::vector<std::string> generators;
  std::vector<std::string> images;  // mod 2
  bool isomorphic;                  // products of images form a basis of P(y)' mod 2
};

struct ConventionReport {
  std::vector<ConventionResult> conventions;
  std::string matching;  // names of conventions that match, comma separated
};

// Compares Lambda(c'_i | i != 2^j - 1) against Lambda(c'_{i-1} | i != 2^j, 3 <= i <= l).
ConventionReport spin_generator_conventions(const GroupCase& c);

struct TorsionBound {
  std::optional<int> exponent;
  std::string witness;
  mpz_class coefficient;  // of y_top in the witness
  mpz_class cofactor;     // coefficient / p^s, a p-local unit
  std::vector<std::pair<std::string, int>> candidates;  // word, valuation
  std::string note;
};

TorsionBound torsion_bound(const GroupCase& c);

struct RostCounts {
  int n;
  unsigned p;
  long chow_basis_count;
  long killed_count;
  std::vector<std::string> basis;
  std::vector<std::string> killed;
  bool relation_verified;  // v1 c_j(y^i) = v_j c_1(y^i) for all j, i
  std::vector<std::string> relation_failures;
};

RostCounts rost_counts(int n, unsigned p);

}  // namespace grflag
