#pragma once

#include "grflag/groebner.hpp"
#include "grflag/laurent.hpp"
#include "grflag/ring_core.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace grflag {

enum class Family { SO, Spin, TypeI, Exceptional, Custom };
std::string family_name(Family f);

struct XGen {
  std::string label;
  int degree;  // odd topological degree
};

struct BModel {
  std::string label;
  int weight;
  Element value;            // v1 = 1, over Z
  LaurentElement v1_form;   // v1-explicit form
  std::optional<std::string> transgresses;  // x-generator whose Q-images it encodes
  std::vector<std::string> dropped_terms;   // v_n terms (n >= 2) set to zero
};

struct ExpectedClass {
  int weight;
  long factor;      // 0 for a free summand, else the order of a cyclic summand
  std::string rep;  // product word, e.g. "b1^2*b6" or "1"
};

struct ExpectedGr {
  // exact: per-weight factors must agree.  Otherwise only min_mod_p_dim is a bound.
  bool exact = true;
  std::vector<ExpectedClass> classes;
  std::optional<long> min_mod_p_dim;
  // Words expected to lie strictly deeper than their own weight.
  std::vector<std::string> deeper_words;
  std::string anchor;
};

enum class ImageShape { Full, MissingY2Multiples };

struct FlagIdeal {
  IdealSpec ideal;                  // over F_p
  std::vector<Element> b_sequence;  // regular sequence in S(t)
  std::optional<std::uint64_t> expected_dim;
  std::string anchor;
};

struct GroupCase {
  std::string name;
  unsigned prime = 2;
  int rank = 0;
  std::uint64_t weyl_order = 0;
  Family family = Family::Custom;
  PresentationPtr py;       // over Z
  PresentationPtr py_mod_p;
  std::vector<XGen> x_gens;
  std::map<std::pair<int, std::string>, Element> q_table;  // values over F_p
  std::vector<BModel> b_models;
  Exponents y_top;

  // Expectations; absent means not checkable.
  std::optional<int> torsion_exponent;
  std::optional<std::string> torsion_witness;
  std::optional<ExpectedGr> gr;
  std::optional<FlagIdeal> flag_ideal;
  std::optional<ImageShape> image_shape;
  std::optional<std::string> presentation_file;
  std::optional<std::pair<int, unsigned>> rost;  // (n, p) when the case is a Rost-motive case

  // y_{2j} classes (SO/Spin), keyed by j; zero where the model kills them.
  std::map<int, Element> y_even;
  std::vector<std::string> notes;

  const BModel& b(std::string_view label) const;
  std::optional<std::size_t> b_index(std::string_view label) const;
  std::string y_top_label() const { return py->monomial_string(y_top); }
  // Monomial as a word in exterior generators y_{2j} (SO/Spin ring models).
  std::string exterior_label(const Exponents& m) const;
};

class CaseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Registered names, builtin first, then files from GRFLAG_CASE_DIR.
std::vector<std::string> list_cases();
// Validated; throws CaseError for unknown names or invariant violations.
const GroupCase& load_case(const std::string& name);
GroupCase load_case_file(const std::string& path);
GroupCase parse_case_json(const std::string& text, const std::string& base_dir = ".");

// Invariant violations (empty when valid).
std::vector<std::string> validate_case(const GroupCase& c);

// Individual builders, exposed for tests.
GroupCase make_so_case(int ell);
GroupCase make_spin_case(int ell);
GroupCase make_type_i_case(unsigned p);
GroupCase make_e8p3_case();
GroupCase make_e7p2_case();
GroupCase make_e8p2_case();

// Lambda(x) (x) P(y) over F_p.  Key: sorted x-indices.
class ExtElement {
 public:
  using Terms = std::map<std::vector<int>, Element>;
  explicit ExtElement(const GroupCase& c) : case_(&c) {}
  static ExtElement x(const GroupCase& c, std::string_view label);
  static ExtElement y(const GroupCase& c, const Element& e);

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  void add(std::vector<int> xs, const Element& e);
  ExtElement operator+(const ExtElement& o) const;
  ExtElement operator*(const ExtElement& o) const;
  bool operator==(const ExtElement& o) const { return terms_ == o.terms_; }
  std::string to_string() const;

 private:
  const GroupCase* case_;
  Terms terms_;
};

class QError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Q_n extended as an odd derivation; vanishes on P(y).  Throws QError when a
// needed table entry is missing.
ExtElement apply_q(int n, const ExtElement& e, const GroupCase& c);
int q_table_max(const GroupCase& c);

struct AnticommuteEntry {
  std::string input;
  std::string status;  // "zero", "nonzero", "not checkable"
  std::string value;
};

struct AnticommuteReport {
  int i, j;
  std::vector<AnticommuteEntry> entries;
  bool ok() const;
};

// Checks Q_iQ_j + Q_jQ_i on products of at most `max_factors` x-generators.
AnticommuteReport q_anticommute_check(const GroupCase& c, int i, int j, int max_factors = 2);

// Complete-intersection dimension of degrees ds in |ds| variables of degree 1.
std::uint64_t complete_intersection_dim(const std::vector<int>& ds);

}  // namespace grflag
