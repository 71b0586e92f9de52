#include "grflag/ring_core.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace grflag {

bool is_prime(unsigned n) {
  if (n < 2) return false;
  for (unsigned d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

CoefficientRing CoefficientRing::prime_field(unsigned p) {
  if (!is_prime(p)) throw std::invalid_argument("not a prime: " + std::to_string(p));
  return CoefficientRing(p);
}

mpz_class CoefficientRing::reduce(const mpz_class& c) const {
  if (p_ == 0) return c;
  mpz_class r;
  mpz_fdiv_r_ui(r.get_mpz_t(), c.get_mpz_t(), p_);
  return r;
}

std::string CoefficientRing::name() const {
  return p_ == 0 ? "Z" : "F" + std::to_string(p_);
}

PresentationPtr AlgebraPresentation::create(std::vector<Variable> vars, CoefficientRing ring) {
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (vars[i].label.empty()) throw std::invalid_argument("empty variable label");
    if (vars[i].chow_degree <= 0)
      throw std::invalid_argument("variable " + vars[i].label + " needs positive degree");
    if (vars[i].truncation && *vars[i].truncation < 1)
      throw std::invalid_argument("variable " + vars[i].label + " has truncation < 1");
    for (std::size_t j = 0; j < i; ++j)
      if (vars[j].label == vars[i].label)
        throw std::invalid_argument("duplicate variable label " + vars[i].label);
  }
  return PresentationPtr(new AlgebraPresentation(std::move(vars), ring));
}

PresentationPtr AlgebraPresentation::with_ring(CoefficientRing ring) const {
  return create(vars_, ring);
}

std::optional<std::size_t> AlgebraPresentation::index_of(std::string_view label) const {
  for (std::size_t i = 0; i < vars_.size(); ++i)
    if (vars_[i].label == label) return i;
  return std::nullopt;
}

bool AlgebraPresentation::finite() const {
  return std::all_of(vars_.begin(), vars_.end(), [](const Variable& v) { return v.truncation.has_value(); });
}

bool AlgebraPresentation::in_bounds(const Exponents& e) const {
  for (std::size_t i = 0; i < vars_.size(); ++i)
    if (vars_[i].truncation && e[i] >= *vars_[i].truncation) return false;
  return true;
}

int AlgebraPresentation::chow_degree(const Exponents& e) const {
  int d = 0;
  for (std::size_t i = 0; i < vars_.size(); ++i) d += e[i] * vars_[i].chow_degree;
  return d;
}

int AlgebraPresentation::top_degree() const {
  if (!finite()) throw std::logic_error("top_degree of an infinite presentation");
  int d = 0;
  for (const auto& v : vars_) d += (*v.truncation - 1) * v.chow_degree;
  return d;
}

std::size_t AlgebraPresentation::free_rank() const {
  if (!finite()) throw std::logic_error("free_rank of an infinite presentation");
  std::size_t n = 1;
  for (const auto& v : vars_) n *= static_cast<std::size_t>(*v.truncation);
  return n;
}

std::vector<Exponents> AlgebraPresentation::basis() const {
  if (!finite()) throw std::logic_error("basis of an infinite presentation");
  std::vector<Exponents> out;
  Exponents e(vars_.size(), 0);
  while (true) {
    out.push_back(e);
    std::size_t i = vars_.size();
    while (i > 0) {
      --i;
      if (++e[i] < *vars_[i].truncation) break;
      e[i] = 0;
      if (i == 0) return out;
    }
    if (vars_.empty()) return out;
  }
}

std::string AlgebraPresentation::monomial_string(const Exponents& e) const {
  std::string s;
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    if (e[i] == 0) continue;
    if (!s.empty()) s += "*";
    s += vars_[i].label;
    if (e[i] > 1) s += "^" + std::to_string(e[i]);
  }
  return s.empty() ? "1" : s;
}

Element::Element(PresentationPtr pres) : pres_(std::move(pres)) {
  if (!pres_) throw std::invalid_argument("element without presentation");
}

Element Element::constant(PresentationPtr pres, const mpz_class& c) {
  Exponents e(pres->num_vars(), 0);
  return monomial(std::move(pres), e, c);
}

Element Element::variable(PresentationPtr pres, std::string_view label) {
  auto i = pres->index_of(label);
  if (!i) throw std::invalid_argument("unknown variable " + std::string(label));
  return variable(std::move(pres), *i);
}

Element Element::variable(PresentationPtr pres, std::size_t index) {
  Exponents e(pres->num_vars(), 0);
  e.at(index) = 1;
  return monomial(std::move(pres), e, 1);
}

Element Element::monomial(PresentationPtr pres, Exponents e, const mpz_class& c) {
  Terms t;
  t.emplace(std::move(e), c);
  return from_terms(std::move(pres), std::move(t)).normal_form();
}

Element Element::from_terms(PresentationPtr pres, Terms terms) {
  Element out(std::move(pres));
  for (const auto& [e, c] : terms)
    if (e.size() != out.pres_->num_vars()) throw std::invalid_argument("exponent length mismatch");
  out.terms_ = std::move(terms);
  return out;
}

mpz_class Element::coefficient(const Exponents& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? mpz_class(0) : it->second;
}

Element Element::normal_form() const {
  Element out(pres_);
  for (const auto& [e, c] : terms_) {
    if (!pres_->in_bounds(e)) continue;
    mpz_class r = pres_->ring().reduce(c);
    if (r != 0) out.terms_.emplace(e, r);
  }
  return out;
}

bool Element::is_homogeneous() const {
  if (terms_.empty()) return true;
  int d = pres_->chow_degree(terms_.begin()->first);
  for (const auto& [e, c] : terms_)
    if (pres_->chow_degree(e) != d) return false;
  return true;
}

std::optional<int> Element::degree() const {
  if (terms_.empty() || !is_homogeneous()) return std::nullopt;
  return pres_->chow_degree(terms_.begin()->first);
}

int Element::min_degree() const {
  if (terms_.empty()) return 0;
  int d = pres_->chow_degree(terms_.begin()->first);
  for (const auto& [e, c] : terms_) d = std::min(d, pres_->chow_degree(e));
  return d;
}

void Element::check_same(const Element& o) const {
  if (pres_ != o.pres_) throw std::invalid_argument("operands live in different presentations");
}

Element& Element::operator+=(const Element& o) {
  check_same(o);
  for (const auto& [e, c] : o.terms_) {
    auto [it, inserted] = terms_.emplace(e, c);
    if (!inserted) {
      it->second = pres_->ring().reduce(it->second + c);
      if (it->second == 0) terms_.erase(it);
    }
  }
  return *this;
}

Element& Element::operator-=(const Element& o) { return *this += -o; }

Element Element::operator+(const Element& o) const {
  Element r = *this;
  r += o;
  return r;
}

Element Element::operator-(const Element& o) const {
  Element r = *this;
  r += -o;
  return r;
}

Element Element::operator-() const {
  Element r(pres_);
  for (const auto& [e, c] : terms_) {
    mpz_class n = pres_->ring().reduce(-c);
    if (n != 0) r.terms_.emplace(e, n);
  }
  return r;
}

Element Element::operator*(const Element& o) const {
  check_same(o);
  Terms acc;
  Exponents m(pres_->num_vars());
  for (const auto& [a, ca] : terms_) {
    for (const auto& [b, cb] : o.terms_) {
      for (std::size_t i = 0; i < m.size(); ++i) m[i] = a[i] + b[i];
      if (!pres_->in_bounds(m)) continue;
      acc[m] += ca * cb;
    }
  }
  return from_terms(pres_, std::move(acc)).normal_form();
}

Element Element::operator*(const mpz_class& c) const {
  Element r(pres_);
  for (const auto& [e, x] : terms_) r.terms_.emplace(e, x * c);
  return r.normal_form();
}

Element Element::pow(unsigned k) const {
  Element r = constant(pres_, 1);
  Element b = *this;
  while (k) {
    if (k & 1) r = r * b;
    k >>= 1;
    if (k) b = b * b;
  }
  return r;
}

bool Element::operator==(const Element& o) const {
  return pres_ == o.pres_ && terms_ == o.terms_;
}

Element Element::recast(PresentationPtr pres) const {
  if (pres->num_vars() != pres_->num_vars()) throw std::invalid_argument("recast: variable count differs");
  return from_terms(std::move(pres), terms_).normal_form();
}

std::string Element::to_string() const {
  if (terms_.empty()) return "0";
  std::string s;
  // Highest degree first, then lexicographically descending.
  std::vector<const Terms::value_type*> ts;
  for (const auto& t : terms_) ts.push_back(&t);
  std::stable_sort(ts.begin(), ts.end(), [&](auto a, auto b) {
    int da = pres_->chow_degree(a->first), db = pres_->chow_degree(b->first);
    if (da != db) return da > db;
    return a->first > b->first;
  });
  for (auto t : ts) {
    mpz_class c = t->second;
    bool neg = c < 0;
    if (neg) c = -c;
    if (s.empty()) s += neg ? "-" : "";
    else s += neg ? " - " : " + ";
    std::string mono = pres_->monomial_string(t->first);
    if (mono == "1") s += c.get_str();
    else if (c == 1) s += mono;
    else s += c.get_str() + "*" + mono;
  }
  return s;
}

Element substitute(const Element& f, const std::vector<Element>& images) {
  const auto& src = f.presentation();
  if (images.size() != src->num_vars()) throw std::invalid_argument("substitute: wrong image count");
  if (images.empty()) throw std::invalid_argument("substitute: no images");
  PresentationPtr dst = images.front().presentation();
  Element out(dst);
  // Cache powers per variable.
  std::vector<std::vector<Element>> powers(images.size());
  for (const auto& [e, c] : f.terms()) {
    Element t = Element::constant(dst, c);
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      auto& pw = powers[i];
      if (pw.empty()) pw.push_back(Element::constant(dst, 1));
      while (static_cast<int>(pw.size()) <= e[i]) pw.push_back(pw.back() * images[i]);
      t = t * pw[e[i]];
    }
    out += t;
  }
  return out;
}

Element elementary_symmetric(const std::vector<Element>& xs, int k, PresentationPtr pres) {
  // e[j] after processing a prefix of xs.
  std::vector<Element> e(k + 1, Element(pres));
  e[0] = Element::constant(pres, 1);
  for (const auto& x : xs)
    for (int j = k; j >= 1; --j) e[j] += e[j - 1] * x;
  return e[k];
}

void poly_trim(std::vector<std::int64_t>& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

std::vector<std::int64_t> poly_mul(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b) {
  if (a.empty() || b.empty()) return {};
  std::vector<std::int64_t> r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  poly_trim(r);
  return r;
}

std::optional<std::vector<std::int64_t>> poly_div_one_minus(std::vector<std::int64_t> a, int d) {
  poly_trim(a);
  if (a.empty()) return a;
  // a = (1 - t^d) q  =>  q[i] = a[i] + q[i-d]
  if (static_cast<int>(a.size()) <= d) return std::nullopt;
  std::vector<std::int64_t> q(a.size() - d, 0);
  for (std::size_t i = 0; i < q.size(); ++i)
    q[i] = a[i] + (i >= static_cast<std::size_t>(d) ? q[i - d] : 0);
  for (std::size_t i = q.size(); i < a.size(); ++i) {
    std::int64_t expect = i >= static_cast<std::size_t>(d) ? -q[i - d] : 0;
    if (a[i] != expect) return std::nullopt;
  }
  return q;
}

std::string poly_string(const std::vector<std::int64_t>& a) {
  std::string s;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    std::int64_t c = a[i];
    if (!s.empty()) s += c < 0 ? " - " : " + ";
    else if (c < 0) s += "-";
    std::int64_t m = c < 0 ? -c : c;
    if (i == 0) s += std::to_string(m);
    else {
      if (m != 1) s += std::to_string(m);
      s += i == 1 ? "t" : "t^" + std::to_string(i);
    }
  }
  return s.empty() ? "0" : s;
}

std::vector<std::int64_t> HilbertSeries::expand(int upto) const {
  std::vector<std::int64_t> out(upto + 1, 0);
  if (dense) {
    for (int i = 0; i <= upto && i < static_cast<int>(dense->size()); ++i) out[i] = (*dense)[i];
    return out;
  }
  for (int i = 0; i <= upto && i < static_cast<int>(numerator.size()); ++i) out[i] = numerator[i];
  for (int d : denominator_degrees)
    for (int i = d; i <= upto; ++i) out[i] += out[i - d];
  return out;
}

std::optional<std::int64_t> HilbertSeries::total() const {
  if (!dense) return std::nullopt;
  std::int64_t s = 0;
  for (auto c : *dense) s += c;
  return s;
}

std::string HilbertSeries::to_string() const {
  if (dense) return poly_string(*dense);
  std::string den;
  for (int d : denominator_degrees) den += "(1 - t" + (d == 1 ? std::string() : "^" + std::to_string(d)) + ")";
  return "(" + poly_string(numerator) + ") / " + den;
}

HilbertSeries hilbert_series(const AlgebraPresentation& a) {
  HilbertSeries h;
  h.numerator = {1};
  for (const auto& v : a.variables()) {
    h.denominator_degrees.push_back(v.chow_degree);
    if (v.truncation) {
      std::vector<std::int64_t> f(v.chow_degree * *v.truncation + 1, 0);
      f[0] = 1;
      f.back() = -1;
      h.numerator = poly_mul(h.numerator, f);
    }
  }
  if (a.finite()) {
    std::vector<std::int64_t> d = {1};
    for (const auto& v : a.variables()) {
      std::vector<std::int64_t> f(v.chow_degree * (*v.truncation - 1) + 1, 0);
      for (int k = 0; k < *v.truncation; ++k) f[k * v.chow_degree] = 1;
      d = poly_mul(d, f);
    }
    h.dense = d;
  }
  return h;
}

namespace {

class Parser {
 public:
  Parser(PresentationPtr pres, std::string_view text, const std::map<std::string, Element>& syms)
      : pres_(std::move(pres)), s_(text), syms_(syms) {}

  Element run() {
    Element e = expr();
    skip();
    if (i_ != s_.size()) fail("unexpected '" + std::string(1, s_[i_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) {
    throw ParseError(msg + " at offset " + std::to_string(i_) + " in \"" + std::string(s_) + "\"");
  }
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool eat(char c) {
    skip();
    if (i_ < s_.size() && s_[i_] == c) {
      ++i_;
      return true;
    }
    return false;
  }
  static bool label_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
  }

  Element expr() {
    Element acc = term();
    while (true) {
      if (eat('+')) acc += term();
      else if (eat('-')) acc -= term();
      else return acc;
    }
  }
  Element term() {
    Element acc = unary();
    while (eat('*')) acc = acc * unary();
    return acc;
  }
  Element unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }
  Element power() {
    Element base = atom();
    if (eat('^')) {
      skip();
      std::size_t st = i_;
      while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
      if (st == i_) fail("expected exponent");
      return base.pow(static_cast<unsigned>(std::stoul(std::string(s_.substr(st, i_ - st)))));
    }
    return base;
  }
  Element atom() {
    skip();
    if (i_ >= s_.size()) fail("unexpected end");
    if (eat('(')) {
      Element e = expr();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    char c = s_[i_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t st = i_;
      while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
      return Element::constant(pres_, mpz_class(std::string(s_.substr(st, i_ - st))));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t st = i_;
      while (i_ < s_.size() && label_char(s_[i_])) ++i_;
      std::string label(s_.substr(st, i_ - st));
      if (auto it = syms_.find(label); it != syms_.end()) return it->second;
      if (auto v = pres_->index_of(label)) return Element::variable(pres_, *v);
      i_ = st;
      fail("unknown symbol '" + label + "'");
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  PresentationPtr pres_;
  std::string_view s_;
  const std::map<std::string, Element>& syms_;
  std::size_t i_ = 0;
};

}  // namespace

Element parse_element(PresentationPtr pres, std::string_view text,
                      const std::map<std::string, Element>& symbols) {
  return Parser(std::move(pres), text, symbols).run();
}

}  // namespace grflag
