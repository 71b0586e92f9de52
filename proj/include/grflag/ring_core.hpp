#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace grflag {

// Either the integers or a prime field F_p.
class CoefficientRing {
 public:
  static CoefficientRing integers() { return CoefficientRing(0); }
  static CoefficientRing prime_field(unsigned p);

  bool is_field() const { return p_ != 0; }
  unsigned characteristic() const { return p_; }
  mpz_class reduce(const mpz_class& c) const;
  std::string name() const;

  bool operator==(const CoefficientRing&) const = default;

 private:
  explicit CoefficientRing(unsigned p) : p_(p) {}
  unsigned p_;
};

bool is_prime(unsigned n);

struct Variable {
  std::string label;
  int chow_degree = 1;
  std::optional<int> truncation;  // y^t = 0 when set
};

using Exponents = std::vector<int>;

// Commutative algebra over a CoefficientRing on generators with pure-power
// truncations.  Immutable; elements hold a shared pointer to it.
class AlgebraPresentation {
 public:
  static std::shared_ptr<const AlgebraPresentation> create(std::vector<Variable> vars,
                                                           CoefficientRing ring);

  const std::vector<Variable>& variables() const { return vars_; }
  const CoefficientRing& ring() const { return ring_; }
  std::size_t num_vars() const { return vars_.size(); }
  std::optional<std::size_t> index_of(std::string_view label) const;

  bool finite() const;
  bool in_bounds(const Exponents& e) const;
  int chow_degree(const Exponents& e) const;
  int top_degree() const;            // finite only
  std::size_t free_rank() const;     // finite only
  std::vector<Exponents> basis() const;  // finite only, lexicographic
  std::string monomial_string(const Exponents& e) const;

  // Same variables and ring, different coefficients.
  std::shared_ptr<const AlgebraPresentation> with_ring(CoefficientRing ring) const;

 private:
  AlgebraPresentation(std::vector<Variable> vars, CoefficientRing ring)
      : vars_(std::move(vars)), ring_(ring) {}
  std::vector<Variable> vars_;
  CoefficientRing ring_;
};

using PresentationPtr = std::shared_ptr<const AlgebraPresentation>;

// Polynomial in a presentation, kept in normal form: no zero coefficients,
// coefficients reduced, no monomial past a truncation.
class Element {
 public:
  using Terms = std::map<Exponents, mpz_class>;

  explicit Element(PresentationPtr pres);
  static Element constant(PresentationPtr pres, const mpz_class& c);
  static Element variable(PresentationPtr pres, std::string_view label);
  static Element variable(PresentationPtr pres, std::size_t index);
  static Element monomial(PresentationPtr pres, Exponents e, const mpz_class& c = 1);
  // Raw terms; call normal_form() to clean up.
  static Element from_terms(PresentationPtr pres, Terms terms);

  const PresentationPtr& presentation() const { return pres_; }
  const Terms& terms() const { return terms_; }
  mpz_class coefficient(const Exponents& e) const;

  Element normal_form() const;
  bool is_zero() const { return terms_.empty(); }
  bool is_homogeneous() const;
  std::optional<int> degree() const;  // chow degree if homogeneous and nonzero
  int min_degree() const;             // of the support, 0 for zero

  Element operator+(const Element& o) const;
  Element operator-(const Element& o) const;
  Element operator-() const;
  Element operator*(const Element& o) const;
  Element operator*(const mpz_class& c) const;
  Element& operator+=(const Element& o);
  Element& operator-=(const Element& o);
  Element pow(unsigned k) const;
  bool operator==(const Element& o) const;

  // Same terms viewed in another presentation with the same variables.
  Element recast(PresentationPtr pres) const;
  std::string to_string() const;

 private:
  void check_same(const Element& o) const;
  PresentationPtr pres_;
  Terms terms_;
};

// Evaluates f with variable i replaced by images[i].
Element substitute(const Element& f, const std::vector<Element>& images);

// e_k of the given elements.
Element elementary_symmetric(const std::vector<Element>& xs, int k, PresentationPtr pres);

struct HilbertSeries {
  // Dense coefficients when the quotient is finite (index = degree).
  std::optional<std::vector<std::int64_t>> dense;
  // numerator / prod (1 - t^d) over denominator_degrees.
  std::vector<std::int64_t> numerator;
  std::vector<int> denominator_degrees;

  std::vector<std::int64_t> expand(int upto) const;
  std::optional<std::int64_t> total() const;
  std::string to_string() const;
};

HilbertSeries hilbert_series(const AlgebraPresentation& a);

// Polynomial helpers on coefficient vectors (index = degree).
std::vector<std::int64_t> poly_mul(const std::vector<std::int64_t>& a,
                                   const std::vector<std::int64_t>& b);
// Exact division by (1 - t^d); nullopt if not divisible.
std::optional<std::vector<std::int64_t>> poly_div_one_minus(std::vector<std::int64_t> a, int d);
void poly_trim(std::vector<std::int64_t>& a);
std::string poly_string(const std::vector<std::int64_t>& a);

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Grammar: integers, labels, + - * ^ and parentheses.  Labels may contain
// letters, digits, '_' and '\''.  Extra symbols shadow variables.
Element parse_element(PresentationPtr pres, std::string_view text,
                      const std::map<std::string, Element>& symbols = {});

}  // namespace grflag
