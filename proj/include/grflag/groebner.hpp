#pragma once

#include "grflag/lattice.hpp"
#include "grflag/ring_core.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace grflag {

enum class MonomialOrder { Grevlex, Lex };

std::string order_name(MonomialOrder o);

struct BuchbergerOptions {
  MonomialOrder order = MonomialOrder::Grevlex;
  std::optional<int> degree_cap;  // S-pairs above this degree are left unprocessed
  Exec exec = default_exec();
};

// Reduced Groebner basis of a homogeneous ideal of a polynomial ring over F_p
// (a presentation without truncations).
class GroebnerBasis {
 public:
  const PresentationPtr& ring() const { return ring_; }
  MonomialOrder order() const { return order_; }
  const std::vector<Element>& polynomials() const { return polys_; }
  std::vector<Exponents> leading_monomials() const;
  // Complete below this degree; nullopt when no pair was skipped.
  std::optional<int> verified_up_to() const { return verified_up_to_; }
  std::size_t pairs_processed() const { return pairs_processed_; }

  Element normal_form(const Element& f) const;
  bool contains(const Element& f) const { return normal_form(f).is_zero(); }

 private:
  friend GroebnerBasis buchberger(const std::vector<Element>&, const BuchbergerOptions&);
  PresentationPtr ring_;
  MonomialOrder order_ = MonomialOrder::Grevlex;
  std::vector<Element> polys_;  // monic, sorted by leading monomial
  std::optional<int> verified_up_to_;
  std::size_t pairs_processed_ = 0;
};

// Throws std::invalid_argument for non-homogeneous input, a coefficient ring
// that is not a prime field, or a truncated presentation.
GroebnerBasis buchberger(const std::vector<Element>& gens, const BuchbergerOptions& opts = {});

// Hilbert series of S / (leading monomials).  Dense when the quotient is finite.
HilbertSeries quotient_hilbert_series(const GroebnerBasis& gb);
HilbertSeries monomial_quotient_series(const std::vector<Exponents>& gens, const std::vector<int>& var_degrees);

struct RegularSequenceReport {
  bool regular = false;
  HilbertSeries actual;
  std::vector<std::int64_t> expected_numerator;  // prod (1 - t^deg g)
  std::string detail;
};

RegularSequenceReport regular_sequence_check(const std::vector<Element>& gens, const BuchbergerOptions& opts = {});

// Ideal described by a JSON file: {variables:[{label,degree}], prime,
// generators:[expr], definitions?:[{label, expr}]}.  Definitions name
// auxiliary polynomials usable in later expressions.
struct IdealSpec {
  PresentationPtr ring;
  std::vector<Element> generators;
  std::vector<std::string> generator_text;
};

IdealSpec parse_ideal_json(const std::string& json_text);
IdealSpec load_ideal_file(const std::string& path);

}  // namespace grflag
