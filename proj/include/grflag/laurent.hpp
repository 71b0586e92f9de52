#pragma once

#include "grflag/ring_core.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>

namespace grflag {

// Element of Z[v1, v1^-1] (x) P(y), or its reduction mod p.  The degree of
// v1^e * m is chow(m) - (p-1) e.
class LaurentElement {
 public:
  using Key = std::pair<int, Exponents>;  // (v1 exponent, monomial)
  using Terms = std::map<Key, mpz_class>;

  LaurentElement(PresentationPtr py, unsigned p, bool mod_p = false);
  // Attach v1 exponents so every term has degree `weight`; throws if some
  // term cannot be placed (deficit not divisible by p-1).
  static LaurentElement from_weighted(const Element& e, int weight, unsigned p);
  static LaurentElement monomial(PresentationPtr py, unsigned p, int v1_exp, Exponents m, const mpz_class& c = 1);
  static LaurentElement one(PresentationPtr py, unsigned p);

  const PresentationPtr& presentation() const { return py_; }
  unsigned prime() const { return p_; }
  bool mod_p() const { return mod_p_; }
  const Terms& terms() const { return terms_; }
  mpz_class coefficient(int v1_exp, const Exponents& m) const;

  bool is_zero() const { return terms_.empty(); }
  int degree_of(const Key& k) const;
  std::optional<int> degree() const;  // nullopt if zero or inhomogeneous
  bool in_connective() const;         // no negative v1 exponents
  int min_v1_exponent() const;

  LaurentElement operator+(const LaurentElement& o) const;
  LaurentElement operator-(const LaurentElement& o) const;
  LaurentElement operator*(const LaurentElement& o) const;
  LaurentElement operator*(const mpz_class& c) const;
  LaurentElement shift(int k) const;  // times v1^k
  LaurentElement reduce_mod_p() const;
  bool operator==(const LaurentElement& o) const;

  Element evaluate_at_one() const;
  Element v1_free_part() const;  // terms with v1 exponent 0

  std::string to_string() const;

 private:
  void add_term(const Key& k, const mpz_class& c);
  void check_same(const LaurentElement& o) const;
  PresentationPtr py_;
  unsigned p_;
  bool mod_p_;
  Terms terms_;
};

}  // namespace grflag
