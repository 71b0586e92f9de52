#include "grflag/laurent.hpp"

#include <algorithm>
#include <stdexcept>

namespace grflag {

LaurentElement::LaurentElement(PresentationPtr py, unsigned p, bool mod_p)
    : py_(std::move(py)), p_(p), mod_p_(mod_p) {
  if (!is_prime(p_)) throw std::invalid_argument("LaurentElement needs a prime");
}

LaurentElement LaurentElement::from_weighted(const Element& e, int weight, unsigned p) {
  LaurentElement out(e.presentation(), p);
  for (const auto& [m, c] : e.terms()) {
    int deficit = e.presentation()->chow_degree(m) - weight;
    if (deficit % static_cast<int>(p - 1) != 0)
      throw std::invalid_argument("term " + e.presentation()->monomial_string(m) + " cannot sit at weight " +
                                  std::to_string(weight));
    out.add_term({deficit / static_cast<int>(p - 1), m}, c);
  }
  return out;
}

LaurentElement LaurentElement::monomial(PresentationPtr py, unsigned p, int v1_exp, Exponents m, const mpz_class& c) {
  LaurentElement out(std::move(py), p);
  if (out.py_->in_bounds(m)) out.add_term({v1_exp, std::move(m)}, c);
  return out;
}

LaurentElement LaurentElement::one(PresentationPtr py, unsigned p) {
  Exponents z(py->num_vars(), 0);
  return monomial(std::move(py), p, 0, z, 1);
}

void LaurentElement::add_term(const Key& k, const mpz_class& c) {
  auto [it, ins] = terms_.emplace(k, 0);
  it->second += c;
  if (mod_p_) {
    mpz_class r;
    mpz_fdiv_r_ui(r.get_mpz_t(), it->second.get_mpz_t(), p_);
    it->second = r;
  }
  if (it->second == 0) terms_.erase(it);
}

void LaurentElement::check_same(const LaurentElement& o) const {
  if (py_ != o.py_ || p_ != o.p_ || mod_p_ != o.mod_p_)
    throw std::invalid_argument("LaurentElement operands from different modules");
}

mpz_class LaurentElement::coefficient(int v1_exp, const Exponents& m) const {
  auto it = terms_.find({v1_exp, m});
  return it == terms_.end() ? mpz_class(0) : it->second;
}

int LaurentElement::degree_of(const Key& k) const {
  return py_->chow_degree(k.second) - static_cast<int>(p_ - 1) * k.first;
}

std::optional<int> LaurentElement::degree() const {
  if (terms_.empty()) return std::nullopt;
  int d = degree_of(terms_.begin()->first);
  for (const auto& [k, c] : terms_)
    if (degree_of(k) != d) return std::nullopt;
  return d;
}

bool LaurentElement::in_connective() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.first.first >= 0; });
}

int LaurentElement::min_v1_exponent() const {
  int m = 0;
  bool first = true;
  for (const auto& [k, c] : terms_) {
    if (first || k.first < m) m = k.first;
    first = false;
  }
  return m;
}

LaurentElement LaurentElement::operator+(const LaurentElement& o) const {
  check_same(o);
  LaurentElement r = *this;
  for (const auto& [k, c] : o.terms_) r.add_term(k, c);
  return r;
}

LaurentElement LaurentElement::operator-(const LaurentElement& o) const {
  check_same(o);
  LaurentElement r = *this;
  for (const auto& [k, c] : o.terms_) r.add_term(k, -c);
  return r;
}

LaurentElement LaurentElement::operator*(const LaurentElement& o) const {
  check_same(o);
  LaurentElement r(py_, p_, mod_p_);
  Exponents m(py_->num_vars());
  for (const auto& [ka, ca] : terms_)
    for (const auto& [kb, cb] : o.terms_) {
      for (std::size_t i = 0; i < m.size(); ++i) m[i] = ka.second[i] + kb.second[i];
      if (!py_->in_bounds(m)) continue;
      r.add_term({ka.first + kb.first, m}, ca * cb);
    }
  return r;
}

LaurentElement LaurentElement::operator*(const mpz_class& c) const {
  LaurentElement r(py_, p_, mod_p_);
  for (const auto& [k, x] : terms_) r.add_term(k, x * c);
  return r;
}

LaurentElement LaurentElement::shift(int k) const {
  LaurentElement r(py_, p_, mod_p_);
  for (const auto& [key, c] : terms_) r.terms_.emplace(Key{key.first + k, key.second}, c);
  return r;
}

LaurentElement LaurentElement::reduce_mod_p() const {
  LaurentElement r(py_, p_, true);
  for (const auto& [k, c] : terms_) r.add_term(k, c);
  return r;
}

bool LaurentElement::operator==(const LaurentElement& o) const {
  return py_ == o.py_ && p_ == o.p_ && mod_p_ == o.mod_p_ && terms_ == o.terms_;
}

Element LaurentElement::evaluate_at_one() const {
  Element::Terms t;
  for (const auto& [k, c] : terms_) t[k.second] += c;
  PresentationPtr pres = mod_p_ ? py_->with_ring(CoefficientRing::prime_field(p_)) : py_;
  return Element::from_terms(pres, std::move(t)).normal_form();
}

Element LaurentElement::v1_free_part() const {
  Element::Terms t;
  for (const auto& [k, c] : terms_)
    if (k.first == 0) t[k.second] += c;
  return Element::from_terms(py_, std::move(t)).normal_form();
}

std::string LaurentElement::to_string() const {
  if (terms_.empty()) return "0";
  std::vector<const Terms::value_type*> ts;
  for (const auto& t : terms_) ts.push_back(&t);
  std::stable_sort(ts.begin(), ts.end(), [](auto a, auto b) {
    if (a->first.first != b->first.first) return a->first.first < b->first.first;
    return a->first.second > b->first.second;
  });
  std::string s;
  for (auto t : ts) {
    mpz_class c = t->second;
    bool neg = c < 0;
    if (neg) c = -c;
    if (s.empty()) s += neg ? "-" : "";
    else s += neg ? " - " : " + ";
    std::string parts;
    if (c != 1) parts = c.get_str();
    int e = t->first.first;
    if (e != 0) {
      if (!parts.empty()) parts += "*";
      parts += e == 1 ? "v1" : "v1^" + std::to_string(e);
    }
    std::string mono = py_->monomial_string(t->first.second);
    if (mono != "1") {
      if (!parts.empty()) parts += "*";
      parts += mono;
    }
    s += parts.empty() ? "1" : parts;
  }
  return s;
}

}  // namespace grflag
