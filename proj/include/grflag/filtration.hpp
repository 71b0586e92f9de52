#pragma once

#include "grflag/lattice.hpp"
#include "grflag/lie_data.hpp"
#include "grflag/ring_core.hpp"

#include <optional>
#include <string>
#include <vector>

namespace grflag {

struct FiltrationGenerator {
  std::string label;
  int weight;
  Element value;
};

struct FiltrationSpec {
  PresentationPtr ambient;  // finite, over Z
  std::vector<FiltrationGenerator> generators;

  static FiltrationSpec from_case(const GroupCase& c);
};

// Nondecreasing generator indices; empty means the unit.
using Word = std::vector<int>;

struct Product {
  Word word;
  int weight;
  Element value;
};

std::vector<Product> enumerate_products(const FiltrationSpec& spec);
std::string word_label(const FiltrationSpec& spec, const Word& w);
// Accepts "1", "b1*b6", "b1^2*b6"; labels are matched before powers.
std::optional<Word> parse_word(const FiltrationSpec& spec, const std::string& s);
int word_weight(const FiltrationSpec& spec, const Word& w);
Element word_value(const FiltrationSpec& spec, const Word& w);

// Rows of L[m] are a Hermite basis of L_m in monomial coordinates.
// L_0 = Z*1 + L_1.
struct LatticeChain {
  std::vector<Exponents> basis;
  std::vector<IntMatrix> L;  // m = 0 .. max_weight + 1
  int max_weight = 0;

  IntRow coordinates(const Element& e) const;
  // Largest m with e in L_m; max_weight + 1 for zero; -1 if not in L_0.
  int level(const Element& e) const;
};

LatticeChain build_lattice_chain(const FiltrationSpec& spec, const std::vector<Product>& products,
                                 Exec exec = default_exec());

struct GrSummand {
  mpz_class factor;  // 0 free, else order
  Word rep;
  std::string rep_label;
};

struct GrWeight {
  int weight;
  std::vector<GrSummand> summands;  // invariant-factor order, free last
  // Quotient coordinates: a = coords_{L_m}(x) * V; component i is taken mod d[i].
  IntMatrix V;
  std::vector<mpz_class> d;  // d[i] = 0 for free components
  std::vector<std::size_t> summand_index;  // component of each summand
};

struct GrTotals {
  long free = 0;
  long torsion = 0;
  long mod_p_dim = 0;
};

struct GrResult {
  std::string name;
  unsigned prime = 0;
  FiltrationSpec spec;
  LatticeChain chain;
  std::vector<GrWeight> weights;  // nonzero pieces only
  GrTotals totals;
  std::size_t product_count = 0;

  const GrWeight* at(int w) const;
  std::vector<mpz_class> factors_at(int w) const;
  // Image of x in L_w / L_{w+1}, or nullopt if x is not in L_w.
  std::optional<IntRow> quotient_image(int w, const Element& x) const;
};

GrResult gr_invariants(const FiltrationSpec& spec, unsigned p, const std::string& name = "",
                       Exec exec = default_exec());
GrResult gr_invariants(const GroupCase& c, Exec exec = default_exec());

struct WeightDiff {
  int weight;
  std::vector<mpz_class> expected;
  std::vector<mpz_class> actual;
  std::vector<std::string> issues;
};

struct GrDiff {
  bool equal = true;
  std::vector<WeightDiff> weights;
  std::vector<std::string> notes;
  std::string summary() const;
};

// Per-weight factor comparison; expected representatives must generate a
// summand of the right order (same coset convention, not string equality).
GrDiff compare_expected(const GrResult& result, const ExpectedGr& expected);

// Does the image of `word` generate a cyclic summand of order `factor` at weight w?
bool realizes_summand(const GrResult& r, int w, const Element& x, long factor, std::string* why = nullptr);

std::string factors_string(const std::vector<mpz_class>& f);

}  // namespace grflag
