#include "grflag/lie_data.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <mutex>
#include <numeric>
#include <set>

namespace grflag {

std::string family_name(Family f) {
  switch (f) {
    case Family::SO: return "SO";
    case Family::Spin: return "Spin";
    case Family::TypeI: return "typeI";
    case Family::Exceptional: return "exceptional";
    case Family::Custom: return "custom";
  }
  return "custom";
}

const BModel& GroupCase::b(std::string_view label) const {
  auto i = b_index(label);
  if (!i) throw CaseError(name + ": no b-model labelled " + std::string(label));
  return b_models[*i];
}

std::optional<std::size_t> GroupCase::b_index(std::string_view label) const {
  for (std::size_t i = 0; i < b_models.size(); ++i)
    if (b_models[i].label == label) return i;
  return std::nullopt;
}

std::string GroupCase::exterior_label(const Exponents& m) const {
  if (family != Family::SO && family != Family::Spin) return py->monomial_string(m);
  // y_{2k} with exponent a splits into y_{2k 2^j} over the bits of a.
  std::vector<std::pair<int, std::string>> parts;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const std::string& lab = py->variables()[i].label;
    int base = std::stoi(lab.substr(1));
    for (int bit = 0; (m[i] >> bit) > 0; ++bit)
      if ((m[i] >> bit) & 1) {
        int idx = base << bit;
        parts.emplace_back(idx, "y" + std::to_string(idx));
      }
  }
  if (parts.empty()) return "1";
  std::sort(parts.begin(), parts.end());
  std::string s;
  for (const auto& [k, lab] : parts) s += (s.empty() ? "" : "*") + lab;
  return s;
}

std::uint64_t complete_intersection_dim(const std::vector<int>& ds) {
  std::uint64_t r = 1;
  for (int d : ds) r *= static_cast<std::uint64_t>(d);
  return r;
}

namespace {

std::uint64_t factorial(int n) {
  std::uint64_t r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

int min_truncation_power(int m, int ell) {
  int t = 1;
  while (m * t <= ell) t *= 2;
  return t;
}

Exponents top_monomial(const PresentationPtr& p) {
  Exponents e(p->num_vars());
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = *p->variables()[i].truncation - 1;
  return e;
}

BModel make_b(const GroupCase& c, std::string label, int weight, const Element& value,
              std::optional<std::string> transgresses = std::nullopt) {
  BModel b{std::move(label), weight, value, LaurentElement::from_weighted(value, weight, c.prime),
           std::move(transgresses), {}};
  return b;
}

Element parse(const GroupCase& c, const std::string& s) { return parse_element(c.py, s); }
Element parse_mod_p(const GroupCase& c, const std::string& s) { return parse_element(c.py_mod_p, s); }

void set_q(GroupCase& c, int n, const std::string& x, const Element& v) {
  c.q_table.insert_or_assign({n, x}, v.recast(c.py_mod_p));
}

std::vector<ExpectedClass> classes(std::initializer_list<ExpectedClass> l) { return l; }

// y_{2j} in an SO/Spin ring model on generators y_{2m}, m odd.
void fill_y_even(GroupCase& c, int ell, int jmax, bool spin) {
  for (int j = 1; j <= jmax; ++j) {
    int m = j, k = 0;
    while (m % 2 == 0) m /= 2, ++k;
    bool zero = j > ell || (spin && m == 1);
    if (zero) {
      c.y_even.emplace(j, Element(c.py));
      continue;
    }
    Element y = Element::variable(c.py, "y" + std::to_string(2 * m));
    c.y_even.emplace(j, y.pow(1u << k));
  }
}

Element y_even(const GroupCase& c, int j) {
  auto it = c.y_even.find(j);
  return it == c.y_even.end() ? Element(c.py) : it->second;
}

FlagIdeal so_flag_ideal(int ell) {
  std::vector<Variable> vars;
  for (int i = 1; i <= ell; ++i) vars.push_back({"t" + std::to_string(i), 1, std::nullopt});
  auto s = AlgebraPresentation::create(vars, CoefficientRing::prime_field(2));
  std::vector<Element> ts;
  for (int i = 0; i < ell; ++i) ts.push_back(Element::variable(s, i));
  FlagIdeal f;
  f.ideal.ring = s;
  for (int i = 1; i <= ell; ++i) {
    Element ci = elementary_symmetric(ts, i, s);
    f.b_sequence.push_back(ci);
    f.ideal.generators.push_back(ci * ci);
    f.ideal.generator_text.push_back("c" + std::to_string(i) + "^2");
  }
  f.expected_dim = (std::uint64_t{1} << ell) * factorial(ell);
  f.anchor = "CH(F)/2 = S(t)/(2, c_i^2) for versal SO(2l+1)-flags";
  return f;
}

FlagIdeal spin11_flag_ideal() {
  std::vector<Variable> vars;
  for (int i = 1; i <= 5; ++i) vars.push_back({"t" + std::to_string(i), 1, std::nullopt});
  auto s = AlgebraPresentation::create(vars, CoefficientRing::prime_field(2));
  std::vector<Element> ts;
  for (int i = 0; i < 5; ++i) ts.push_back(Element::variable(s, i));
  Element c1 = elementary_symmetric(ts, 1, s);
  // pi^*(t_j) = c1 + t_j
  std::vector<Element> shifted;
  for (const auto& t : ts) shifted.push_back(c1 + t);
  std::map<int, Element> cp;
  for (int i = 2; i <= 5; ++i) cp.emplace(i, elementary_symmetric(shifted, i, s));
  Element c18 = c1.pow(8);
  FlagIdeal f;
  f.ideal.ring = s;
  for (int i = 2; i <= 5; ++i)
    for (int j = i; j <= 5; ++j) {
      if (i == 2 && j == 4) continue;
      f.ideal.generators.push_back(cp.at(i) * cp.at(j));
      f.ideal.generator_text.push_back("c" + std::to_string(i) + "'*c" + std::to_string(j) + "'");
    }
  for (int i = 2; i <= 5; ++i) {
    f.ideal.generators.push_back(cp.at(i) * c18);
    f.ideal.generator_text.push_back("c" + std::to_string(i) + "'*c1^8");
  }
  f.ideal.generators.push_back(c1.pow(16));
  f.ideal.generator_text.push_back("c1^16");
  for (int i = 2; i <= 5; ++i) f.b_sequence.push_back(cp.at(i));
  f.b_sequence.push_back(c18);
  f.expected_dim = 6720;
  f.anchor = "gr of the versal Spin(11) flag: S(t)/(2, c_i'c_j', c_i'c_1^8, c_1^16)";
  return f;
}

void fill_forced_zeros(GroupCase& c);

}  // namespace

GroupCase make_so_case(int ell) {
  if (ell < 1 || ell > 6) throw CaseError("SO(2l+1) supported for 1 <= l <= 6");
  GroupCase c;
  c.name = "so" + std::to_string(2 * ell + 1);
  c.prime = 2;
  c.rank = ell;
  c.weyl_order = (std::uint64_t{1} << ell) * factorial(ell);
  c.family = Family::SO;
  std::vector<Variable> vars;
  for (int m = 1; m <= ell; m += 2) vars.push_back({"y" + std::to_string(2 * m), m, min_truncation_power(m, ell)});
  c.py = AlgebraPresentation::create(vars, CoefficientRing::integers());
  c.py_mod_p = c.py->with_ring(CoefficientRing::prime_field(2));
  fill_y_even(c, ell, 4 * ell + 4, false);
  for (int i = 1; i <= ell; ++i) c.x_gens.push_back({"x" + std::to_string(2 * i - 1), 2 * i - 1});
  for (int n = 0; (1 << n) <= 2 * ell; ++n)
    for (int i = 1; i <= ell; ++i) set_q(c, n, "x" + std::to_string(2 * i - 1), y_even(c, i + (1 << n) - 1));
  for (int i = 1; i <= ell; ++i) {
    Element ci = y_even(c, i) * mpz_class(2) + y_even(c, i + 1);
    c.b_models.push_back(make_b(c, "c" + std::to_string(i), i, ci, "x" + std::to_string(2 * i - 1)));
  }
  c.y_top = top_monomial(c.py);
  ExpectedGr gr;
  gr.anchor = "CH(R(G))/2 = Lambda(c_1,...,c_l), torsion free";
  for (int mask = 0; mask < (1 << ell); ++mask) {
    int w = 0;
    std::string word;
    for (int i = 0; i < ell; ++i)
      if (mask >> i & 1) {
        w += i + 1;
        word += (word.empty() ? "" : "*") + std::string("c") + std::to_string(i + 1);
      }
    gr.classes.push_back({w, 0, word.empty() ? "1" : word});
  }
  c.gr = gr;
  c.flag_ideal = so_flag_ideal(ell);
  c.image_shape = ImageShape::MissingY2Multiples;
  c.notes.push_back("P(y) presented on y_{2m}, m odd, with y_{2m}^{2^k} = y_{2m 2^k}");
  c.notes.push_back("c_i = 2y_{2i} + v1 y_{2i+2}, y_{2j} = 0 for j > l");
  fill_forced_zeros(c);
  return c;
}

GroupCase make_spin_case(int ell) {
  if (ell < 3 || ell > 5) throw CaseError("Spin(2l+1) supported for 3 <= l <= 5");
  GroupCase c;
  c.name = "spin" + std::to_string(2 * ell + 1);
  c.prime = 2;
  c.rank = ell;
  c.weyl_order = (std::uint64_t{1} << ell) * factorial(ell);
  c.family = Family::Spin;
  int t = 0;
  while ((2 << t) <= ell) ++t;
  const int top_pow = 1 << (t + 1);
  std::vector<Variable> vars;
  for (int m = 3; m <= ell; m += 2) vars.push_back({"y" + std::to_string(2 * m), m, min_truncation_power(m, ell)});
  c.py = AlgebraPresentation::create(vars, CoefficientRing::integers());
  c.py_mod_p = c.py->with_ring(CoefficientRing::prime_field(2));
  fill_y_even(c, ell, 4 * ell + 8, true);
  for (int i = 2; i <= ell; ++i) c.x_gens.push_back({"x" + std::to_string(2 * i - 1), 2 * i - 1});
  std::string z = "z" + std::to_string((1 << (t + 2)) - 1);
  c.x_gens.push_back({z, (1 << (t + 2)) - 1});
  Element q0z(c.py);
  for (int n = 0; (1 << n) <= 2 * ell; ++n) {
    for (int i = 2; i <= ell; ++i) set_q(c, n, "x" + std::to_string(2 * i - 1), y_even(c, i + (1 << n) - 1));
    // Q_n(z) = sum over a+b = 2^{t+1} + 2^n - 1, a < b, of y_{2a} y_{2b}
    int s = top_pow + (1 << n) - 1;
    Element v(c.py);
    for (int a = 1; 2 * a < s; ++a) v += y_even(c, a) * y_even(c, s - a);
    if (n == 0) q0z = v;
    set_q(c, n, z, v);
  }
  for (int i = 2; i <= ell; ++i) {
    Element ci = y_even(c, i) * mpz_class(2) + y_even(c, i + 1);
    c.b_models.push_back(make_b(c, "c" + std::to_string(i) + "'", i, ci, "x" + std::to_string(2 * i - 1)));
  }
  c.b_models.push_back(make_b(c, "c1^" + std::to_string(top_pow), top_pow, q0z * mpz_class(2), z));
  c.y_top = top_monomial(c.py);
  c.torsion_exponent = 1;
  ExpectedGr gr;
  if (ell == 5) {
    c.torsion_witness = "c1^8";
    gr.classes = classes({{0, 0, "1"}, {2, 2, "c2'"}, {3, 0, "c3'"}, {4, 2, "c4'"}, {5, 0, "c5'"},
                          {6, 2, "c2'*c4'"}, {8, 0, "c1^8"}});
    gr.anchor = "gr of R(G) for Spin(11): Z/2{1,c2',c3',c4',c5',c2'c4',c1^8}";
    c.flag_ideal = spin11_flag_ideal();
  } else {
    c.torsion_witness = "c3'";
    gr.classes = classes({{0, 0, "1"}, {2, 2, "c2'"}, {3, 0, "c3'"}});
    gr.anchor = "Spin(7), Spin(9) are of type (I) at p=2";
  }
  c.gr = gr;
  c.image_shape = ImageShape::Full;
  c.notes.push_back("c1 = e1(t); pi^*(t_j) = c1 + t_j; c_i' = e_i(c1 + t_j)");
  c.notes.push_back("y_{2i} = 0 when i is a power of 2 or i > l (c1-powers vanish in the R(G)-model)");
  c.notes.push_back("Q_n(z) indices taken with a+b = 2^{t+1} + 2^n - 1 so that degrees match");
  fill_forced_zeros(c);
  return c;
}

GroupCase make_type_i_case(unsigned p) {
  if (p != 3 && p != 5) throw CaseError("typeI cases ship for p = 3 (F4) and p = 5 (E8)");
  GroupCase c;
  c.name = "typeI(p=" + std::to_string(p) + ")";
  c.prime = p;
  c.rank = p == 3 ? 4 : 8;
  c.weyl_order = p == 3 ? 1152 : 696729600;
  c.family = Family::TypeI;
  const int dy = static_cast<int>(p) + 1;
  c.py = AlgebraPresentation::create({{"y", dy, static_cast<int>(p)}}, CoefficientRing::integers());
  c.py_mod_p = c.py->with_ring(CoefficientRing::prime_field(p));
  Element y = Element::variable(c.py, "y");
  for (unsigned i = 1; i <= p - 1; ++i) {
    std::string xo = "x" + std::to_string(2 * i - 1), xe = "x" + std::to_string(2 * i);
    c.x_gens.push_back({xo, 3 + 2 * static_cast<int>(i - 1) * dy});
    c.x_gens.push_back({xe, 2 * static_cast<int>(i) * dy - 1});
    set_q(c, 1, xo, y.pow(i));
    set_q(c, 0, xe, y.pow(i));
  }
  for (unsigned i = 1; i <= p - 1; ++i) {
    Element yi = y.pow(i);
    int d = static_cast<int>(i) * dy;
    c.b_models.push_back(make_b(c, "b" + std::to_string(2 * i - 1), d - static_cast<int>(p - 1), yi,
                                "x" + std::to_string(2 * i - 1)));
    c.b_models.push_back(make_b(c, "b" + std::to_string(2 * i), d, yi * mpz_class(p), "x" + std::to_string(2 * i)));
  }
  c.y_top = top_monomial(c.py);
  c.torsion_exponent = 1;
  c.torsion_witness = "b" + std::to_string(2 * (p - 1));
  ExpectedGr gr;
  gr.anchor = "gr of R(G) for type (I): Z/p{b_1,b_3,...} + Z{1,b_2,b_4,...}";
  gr.classes.push_back({0, 0, "1"});
  for (const auto& b : c.b_models) {
    bool odd = (b.label.back() - '0') % 2 == 1;
    gr.classes.push_back({b.weight, odd ? static_cast<long>(p) : 0, b.label});
  }
  c.gr = gr;
  c.image_shape = ImageShape::Full;
  c.rost = std::make_pair(2, p);
  c.notes.push_back("b_{2i} = p*y^i; the coefficient p follows from Q0(x_{2i}) = y^i");
  c.notes.push_back("x-degrees |x_{2i-1}| = 3+2(i-1)(p+1), |x_{2i}| = 2i(p+1)-1");
  fill_forced_zeros(c);
  return c;
}

GroupCase make_e8p3_case() {
  GroupCase c;
  c.name = "e8p3";
  c.prime = 3;
  c.rank = 8;
  c.weyl_order = 696729600;
  c.family = Family::Exceptional;
  c.py = AlgebraPresentation::create({{"y", 4, 3}, {"y'", 10, 3}}, CoefficientRing::integers());
  c.py_mod_p = c.py->with_ring(CoefficientRing::prime_field(3));
  const int xdeg[] = {3, 7, 15, 19, 27, 35, 39, 47};
  for (int i = 0; i < 8; ++i) c.x_gens.push_back({"x" + std::to_string(i + 1), xdeg[i]});
  const std::pair<std::pair<int, const char*>, const char*> q[] = {
      {{1, "x1"}, "y"},    {{2, "x1"}, "y'"},    {{0, "x2"}, "y"},     {{0, "x3"}, "y^2"},
      {{1, "x3"}, "y'"},   {{0, "x4"}, "y'"},    {{0, "x5"}, "y*y'"},  {{0, "x6"}, "y^2*y'"},
      {{1, "x6"}, "y'^2"}, {{0, "x7"}, "y'^2"},  {{0, "x8"}, "y*y'^2"}};
  for (const auto& [k, v] : q) set_q(c, k.first, k.second, parse_mod_p(c, v));
  const std::tuple<const char*, int, const char*> bs[] = {
      {"b1", 2, "y"},           {"b2", 4, "3*y"},   {"b3", 8, "3*y^2 + y'"}, {"b4", 10, "3*y'"},
      {"b5", 14, "3*y*y'"},     {"b6", 18, "3*y^2*y' + y'^2"},
      {"b7", 20, "3*y'^2"},     {"b8", 24, "3*y*y'^2"}};
  int k = 1;
  for (const auto& [l, w, v] : bs) c.b_models.push_back(make_b(c, l, w, parse(c, v), "x" + std::to_string(k++)));
  c.b_models[0].dropped_terms.push_back("v2*y'");
  c.y_top = top_monomial(c.py);
  c.torsion_exponent = 2;
  c.torsion_witness = "b2*b8";
  ExpectedGr gr;
  gr.anchor = "gr(R(G))/3 = B1/(3,b1b3^2,b1^2b3^2) + Z/3{b1b6,b1^2b6} + B2/3 for (E8,3)";
  gr.classes = classes({{0, 0, "1"},          {2, 3, "b1"},          {4, 3, "b1^2"},      {4, 0, "b2"},
                        {6, 3, "b1*b2"},      {8, 3, "b3"},          {8, 0, "b2^2"},      {10, 3, "b1*b3"},
                        {10, 0, "b4"},        {12, 3, "b1^2*b3"},    {14, 0, "b5"},       {16, 3, "b3^2"},
                        {18, 0, "b6"},        {20, 3, "b1*b6"},      {20, 0, "b7"},       {22, 3, "b1^2*b6"},
                        {24, 0, "b8"},        {26, 3, "b1*b8"},      {28, 0, "b2*b8"}});
  gr.deeper_words = {"b1*b3^2", "b1^2*b3^2"};
  c.gr = gr;
  c.image_shape = ImageShape::Full;
  c.notes.push_back("b1 = v1*y + v2*y' with the v2 term dropped");
  c.notes.push_back("weight of b4 (10) derived from the x-degrees, not quoted");
  fill_forced_zeros(c);
  return c;
}

GroupCase make_e7p2_case() {
  GroupCase c;
  c.name = "e7p2";
  c.prime = 2;
  c.rank = 7;
  c.weyl_order = 2903040;
  c.family = Family::Exceptional;
  c.py = AlgebraPresentation::create({{"y1", 3, 2}, {"y2", 5, 2}, {"y3", 9, 2}}, CoefficientRing::integers());
  c.py_mod_p = c.py->with_ring(CoefficientRing::prime_field(2));
  const int xdeg[] = {3, 5, 9, 17, 15, 23, 27};
  for (int i = 0; i < 7; ++i) c.x_gens.push_back({"x" + std::to_string(i + 1), xdeg[i]});
  const std::pair<std::pair<int, const char*>, const char*> q[] = {
      {{1, "x1"}, "y1"}, {{2, "x1"}, "y2"},    {{3, "x1"}, "y3"},    {{0, "x2"}, "y1"},
      {{0, "x3"}, "y2"}, {{0, "x4"}, "y3"},    {{0, "x5"}, "y1*y2"}, {{1, "x5"}, "y3"},
      {{0, "x6"}, "y1*y3"}, {{0, "x7"}, "y2*y3"}};
  for (const auto& [k, v] : q) set_q(c, k.first, k.second, parse_mod_p(c, v));
  const std::tuple<const char*, int, const char*> bs[] = {
      {"b1", 2, "y1"},         {"b2", 3, "2*y1 + y2"},  {"b3", 5, "2*y2"},     {"b4", 9, "2*y3"},
      {"b5", 8, "2*y1*y2 + y3"}, {"b6", 12, "2*y1*y3"}, {"b7", 14, "2*y2*y3"}};
  int k = 1;
  for (const auto& [l, w, v] : bs) c.b_models.push_back(make_b(c, l, w, parse(c, v), "x" + std::to_string(k++)));
  c.b_models[0].dropped_terms = {"v2*y2", "v3*y3"};
  c.y_top = top_monomial(c.py);
  c.torsion_exponent = 2;
  c.torsion_witness = "b2*b7";
  ExpectedGr gr;
  gr.exact = false;
  // B1/(b1b2b5): Lambda(b1,b2,b5)/2 without b1b2b5, plus b1b7 -> 8.
  // B2/(2,2b1): {b3,b4,b1b3,b6,b7,b2b7} -> 6.
  gr.min_mod_p_dim = 14;
  gr.anchor = "injection B1/(b1b2b5) + B2/(2,2b1) into gr(R(G))/2 for (E7,2)";
  c.gr = gr;
  c.image_shape = ImageShape::Full;
  c.notes.push_back("b1 = v1*y1 + v2*y2 + v3*y3 with the v2, v3 terms dropped");
  fill_forced_zeros(c);
  return c;
}

GroupCase make_e8p2_case() {
  GroupCase c;
  c.name = "e8p2";
  c.prime = 2;
  c.rank = 8;
  c.weyl_order = 696729600;
  c.family = Family::Exceptional;
  c.py = AlgebraPresentation::create({{"y1", 3, 8}, {"y2", 5, 4}, {"y3", 9, 2}, {"y4", 15, 2}},
                                     CoefficientRing::integers());
  c.py_mod_p = c.py->with_ring(CoefficientRing::prime_field(2));
  const int xdeg[] = {3, 5, 9, 17, 15, 23, 27, 29};
  for (int i = 0; i < 8; ++i) c.x_gens.push_back({"x" + std::to_string(i + 1), xdeg[i]});
  const std::pair<std::pair<int, const char*>, const char*> q[] = {
      {{1, "x1"}, "y1"},    {{2, "x1"}, "y2"},    {{3, "x1"}, "y3"},    {{0, "x2"}, "y1"},
      {{0, "x3"}, "y2"},    {{0, "x4"}, "y3"},    {{0, "x5"}, "y1*y2"}, {{1, "x5"}, "y3"},
      {{0, "x6"}, "y1*y3"}, {{0, "x7"}, "y2*y3"}, {{1, "x7"}, "y4"},    {{0, "x8"}, "y4"}};
  for (const auto& [k, v] : q) set_q(c, k.first, k.second, parse_mod_p(c, v));
  const std::tuple<const char*, int, const char*> bs[] = {
      {"b1", 2, "y1"},           {"b2", 3, "2*y1 + y2"},     {"b3", 5, "2*y2"},     {"b4", 9, "2*y3"},
      {"b5", 8, "2*y1*y2 + y3"}, {"b6", 12, "2*y1*y3"},      {"b7", 14, "2*y2*y3 + y4"},
      {"b8", 15, "2*y4"}};
  int k = 1;
  for (const auto& [l, w, v] : bs) c.b_models.push_back(make_b(c, l, w, parse(c, v), "x" + std::to_string(k++)));
  c.b_models[0].dropped_terms = {"v2*y2", "v3*y3", "v4*y4"};
  c.y_top = top_monomial(c.py);
  ExpectedGr gr;
  gr.exact = false;
  gr.min_mod_p_dim = 128;
  gr.anchor = "K(R(G))/2 = K/2[b1,b2,b5,b7]/(b1^8,b2^4,b5^2,b7^2) for (E8,2); aggregate bound only";
  c.gr = gr;
  c.image_shape = ImageShape::Full;
  c.notes.push_back("integral b-models beyond b1,b2,b5,b7 mod 2 are extrapolated from the E7 relations");
  fill_forced_zeros(c);
  return c;
}

namespace {

// Q_n(x) is zero when P(y) has nothing in degree |x| + 2p^n - 1.
void fill_forced_zeros(GroupCase& c) {
  int nmax = q_table_max(c);
  std::set<int> degs;
  if (c.py->finite())
    for (const auto& m : c.py->basis()) degs.insert(2 * c.py->chow_degree(m));
  for (int n = 0; n <= nmax; ++n) {
    long qd = 2;
    for (int k = 0; k < n; ++k) qd *= c.prime;
    qd -= 1;
    for (const auto& x : c.x_gens) {
      if (c.q_table.count({n, x.label})) continue;
      if (!degs.count(static_cast<int>(x.degree + qd))) c.q_table.emplace(std::make_pair(n, x.label), Element(c.py_mod_p));
    }
  }
}

}  // namespace

int q_table_max(const GroupCase& c) {
  int m = -1;
  for (const auto& [k, v] : c.q_table) m = std::max(m, k.first);
  return std::max(m, 1);
}

std::vector<std::string> validate_case(const GroupCase& c) {
  std::vector<std::string> errs;
  if (!is_prime(c.prime)) errs.push_back("prime " + std::to_string(c.prime) + " is not prime");
  if (!c.py || !c.py->finite()) {
    errs.push_back("P(y) model must be finite");
    return errs;
  }
  const int pm1 = static_cast<int>(c.prime) - 1;
  for (const auto& b : c.b_models) {
    if (b.weight < 1) errs.push_back(b.label + ": weight must be >= 1");
    for (const auto& [m, coef] : b.value.terms()) {
      int d = c.py->chow_degree(m) - b.weight;
      if (d < 0 || d % pm1 != 0)
        errs.push_back(b.label + ": monomial " + c.py->monomial_string(m) + " (chow " +
                       std::to_string(c.py->chow_degree(m)) + ") violates the weight-deficit rule at weight " +
                       std::to_string(b.weight));
      if (std::all_of(m.begin(), m.end(), [](int e) { return e == 0; }))
        errs.push_back(b.label + ": has a unit part");
    }
    if (!(b.v1_form.evaluate_at_one() == b.value))
      errs.push_back(b.label + ": v1-form does not evaluate to the filtration element");
    if (!b.v1_form.is_zero() && b.v1_form.degree() != b.weight)
      errs.push_back(b.label + ": v1-form is not homogeneous of degree " + std::to_string(b.weight));
    if (!b.v1_form.in_connective()) errs.push_back(b.label + ": v1-form has negative v1 powers");
    if (b.transgresses) {
      const std::string& x = *b.transgresses;
      if (std::none_of(c.x_gens.begin(), c.x_gens.end(), [&](const XGen& g) { return g.label == x; }))
        errs.push_back(b.label + ": unknown x-generator " + x);
      Element v1part(c.py), v0part(c.py);
      for (const auto& [k, coef] : b.v1_form.terms()) {
        if (k.first == 1) v1part += Element::monomial(c.py, k.second, coef);
        if (k.first == 0) v0part += Element::monomial(c.py, k.second, coef);
      }
      if (auto it = c.q_table.find({1, x}); it != c.q_table.end()) {
        if (!(v1part.recast(c.py_mod_p) == it->second))
          errs.push_back(b.label + ": v1-part " + v1part.to_string() + " differs from Q1(" + x + ") = " +
                         it->second.to_string());
      }
      if (auto it = c.q_table.find({0, x}); it != c.q_table.end()) {
        bool divisible = true;
        Element quot(c.py);
        for (const auto& [m, coef] : v0part.terms()) {
          if (coef % c.prime != 0) divisible = false;
          else quot += Element::monomial(c.py, m, coef / c.prime);
        }
        if (!divisible || !(quot.recast(c.py_mod_p) == it->second))
          errs.push_back(b.label + ": weight-0 part " + v0part.to_string() + " is not p*Q0(" + x + ") = p*(" +
                         it->second.to_string() + ")");
      }
    }
  }
  // Q-table degrees.
  for (const auto& [k, v] : c.q_table) {
    auto xg = std::find_if(c.x_gens.begin(), c.x_gens.end(), [&](const XGen& g) { return g.label == k.second; });
    if (xg == c.x_gens.end()) {
      errs.push_back("Q-table refers to unknown generator " + k.second);
      continue;
    }
    if (v.is_zero()) continue;
    long qd = 2;
    for (int i = 0; i < k.first; ++i) qd *= c.prime;
    qd -= 1;
    auto d = v.degree();
    if (!d || 2 * *d != xg->degree + qd)
      errs.push_back("Q" + std::to_string(k.first) + "(" + k.second + ") = " + v.to_string() + " has the wrong degree");
  }
  // y_top: unique top-degree basis monomial.
  int top = c.py->top_degree();
  int count = 0;
  for (const auto& m : c.py->basis())
    if (c.py->chow_degree(m) == top) ++count;
  if (count != 1) errs.push_back("P(y) has " + std::to_string(count) + " monomials of top degree");
  if (c.y_top.size() != c.py->num_vars() || c.py->chow_degree(c.y_top) != top || !c.py->in_bounds(c.y_top))
    errs.push_back("y_top is not the top monomial");
  if (c.flag_ideal) {
    std::vector<int> ds;
    for (const auto& b : c.flag_ideal->b_sequence)
      if (auto d = b.degree()) ds.push_back(*d);
    if (!ds.empty() && c.weyl_order && c.py->free_rank() * complete_intersection_dim(ds) != c.weyl_order)
      errs.push_back("free rank of P(y) times the complete-intersection dimension is not the Weyl order");
  }
  return errs;
}

namespace {

struct Registry {
  std::vector<std::string> order;
  std::map<std::string, GroupCase> cases;
};

Registry build_registry() {
  Registry r;
  auto add = [&](GroupCase c) {
    auto errs = validate_case(c);
    if (!errs.empty()) throw CaseError(c.name + ": " + errs.front());
    r.order.push_back(c.name);
    r.cases.emplace(c.name, std::move(c));
  };
  for (int ell = 2; ell <= 5; ++ell) add(make_so_case(ell));
  for (int ell = 3; ell <= 5; ++ell) add(make_spin_case(ell));
  add(make_type_i_case(3));
  add(make_type_i_case(5));
  add(make_e8p3_case());
  add(make_e7p2_case());
  add(make_e8p2_case());
  if (const char* dir = std::getenv("GRFLAG_CASE_DIR"); dir && *dir) {
    std::vector<std::filesystem::path> files;
    std::error_code ec;
    for (const auto& e : std::filesystem::directory_iterator(dir, ec))
      if (e.path().extension() == ".json") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      GroupCase c = load_case_file(f.string());
      if (r.cases.count(c.name)) throw CaseError("case " + c.name + " from " + f.string() + " is already registered");
      add(std::move(c));
    }
  }
  return r;
}

const Registry& registry() {
  static const Registry r = build_registry();
  return r;
}

}  // namespace

std::vector<std::string> list_cases() { return registry().order; }

const GroupCase& load_case(const std::string& name) {
  const auto& r = registry();
  auto it = r.cases.find(name);
  if (it == r.cases.end()) throw CaseError("unknown case '" + name + "'");
  return it->second;
}

ExtElement ExtElement::x(const GroupCase& c, std::string_view label) {
  for (std::size_t i = 0; i < c.x_gens.size(); ++i)
    if (c.x_gens[i].label == label) {
      ExtElement e(c);
      e.add({static_cast<int>(i)}, Element::constant(c.py_mod_p, 1));
      return e;
    }
  throw CaseError("unknown x-generator " + std::string(label));
}

ExtElement ExtElement::y(const GroupCase& c, const Element& v) {
  ExtElement e(c);
  e.add({}, v.recast(c.py_mod_p));
  return e;
}

void ExtElement::add(std::vector<int> xs, const Element& e) {
  if (e.is_zero()) return;
  auto [it, ins] = terms_.emplace(std::move(xs), e);
  if (!ins) {
    it->second += e;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

ExtElement ExtElement::operator+(const ExtElement& o) const {
  ExtElement r = *this;
  for (const auto& [k, v] : o.terms_) r.add(k, v);
  return r;
}

ExtElement ExtElement::operator*(const ExtElement& o) const {
  ExtElement r(*case_);
  for (const auto& [a, va] : terms_)
    for (const auto& [b, vb] : o.terms_) {
      std::vector<int> all = a;
      all.insert(all.end(), b.begin(), b.end());
      // sign of the sorting permutation; repeated odd generators square to zero
      int inv = 0;
      for (std::size_t i = 0; i < all.size(); ++i)
        for (std::size_t j = i + 1; j < all.size(); ++j) {
          if (all[i] == all[j]) goto skip;
          if (all[i] > all[j]) ++inv;
        }
      std::sort(all.begin(), all.end());
      r.add(all, (va * vb) * mpz_class(inv % 2 ? -1 : 1));
    skip:;
    }
  return r;
}

std::string ExtElement::to_string() const {
  if (terms_.empty()) return "0";
  std::string s;
  for (const auto& [xs, v] : terms_) {
    std::string w;
    for (int i : xs) w += (w.empty() ? "" : "*") + case_->x_gens[i].label;
    std::string coef = v.to_string();
    std::string term = w.empty() ? coef : (coef == "1" ? w : "(" + coef + ")*" + w);
    s += (s.empty() ? "" : " + ") + term;
  }
  return s;
}

ExtElement apply_q(int n, const ExtElement& e, const GroupCase& c) {
  if (n < 0 || n > q_table_max(c)) throw QError("Q" + std::to_string(n) + " is outside the table for " + c.name);
  ExtElement out(c);
  for (const auto& [xs, v] : e.terms()) {
    for (std::size_t k = 0; k < xs.size(); ++k) {
      const std::string& lab = c.x_gens[xs[k]].label;
      auto it = c.q_table.find({n, lab});
      if (it == c.q_table.end()) throw QError("Q" + std::to_string(n) + "(" + lab + ") is not tabled");
      std::vector<int> rest = xs;
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(k));
      out.add(rest, v * it->second * mpz_class(k % 2 ? -1 : 1));
    }
  }
  return out;
}

bool AnticommuteReport::ok() const {
  return std::none_of(entries.begin(), entries.end(), [](const AnticommuteEntry& e) { return e.status == "nonzero"; });
}

AnticommuteReport q_anticommute_check(const GroupCase& c, int i, int j, int max_factors) {
  AnticommuteReport rep{i, j, {}};
  const int nx = static_cast<int>(c.x_gens.size());
  std::vector<std::vector<int>> inputs;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int start) -> void {
    if (!cur.empty()) inputs.push_back(cur);
    if (static_cast<int>(cur.size()) == max_factors) return;
    for (int k = start; k < nx; ++k) {
      cur.push_back(k);
      self(self, k + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  for (const auto& xs : inputs) {
    ExtElement e = ExtElement::y(c, Element::constant(c.py_mod_p, 1));
    std::string label;
    for (int k : xs) {
      e = e * ExtElement::x(c, c.x_gens[k].label);
      label += (label.empty() ? "" : "*") + c.x_gens[k].label;
    }
    AnticommuteEntry entry{label, "zero", "0"};
    try {
      ExtElement v = apply_q(i, apply_q(j, e, c), c);
      if (i != j) v = v + apply_q(j, apply_q(i, e, c), c);
      if (!v.is_zero()) {
        entry.status = "nonzero";
        entry.value = v.to_string();
      }
    } catch (const QError& err) {
      entry.status = "not checkable";
      entry.value = err.what();
    }
    rep.entries.push_back(entry);
  }
  return rep;
}

}  // namespace grflag
