#include "grflag/kres.hpp"

#include "grflag/filtration.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace grflag {

namespace {

// Row echelon form over F_p with full reduction against existing pivots.
class FpEchelon {
 public:
  explicit FpEchelon(unsigned p) : p_(p) {}

  bool insert(std::vector<long long> v) {
    reduce(v);
    auto it = std::find_if(v.begin(), v.end(), [](long long x) { return x != 0; });
    if (it == v.end()) return false;
    std::size_t col = it - v.begin();
    long long inv = inverse(*it);
    for (auto& x : v) x = x * inv % p_;
    for (auto& [c, row] : rows_)
      if (row[col] != 0) {
        long long f = row[col];
        for (std::size_t k = 0; k < row.size(); ++k) row[k] = ((row[k] - f * v[k]) % (long long)p_ + p_) % p_;
      }
    rows_.emplace(col, std::move(v));
    return true;
  }

  bool contains(std::vector<long long> v) const {
    reduce(v);
    return std::all_of(v.begin(), v.end(), [](long long x) { return x == 0; });
  }

  std::size_t rank() const { return rows_.size(); }

  IntMatrix matrix() const {
    IntMatrix m;
    for (const auto& [c, row] : rows_) {
      IntRow r;
      for (long long x : row) r.emplace_back(static_cast<long>(x));
      m.push_back(std::move(r));
    }
    return m;
  }

 private:
  void reduce(std::vector<long long>& v) const {
    for (auto& x : v) x = ((x % (long long)p_) + p_) % p_;
    for (const auto& [c, row] : rows_)
      if (v[c] != 0) {
        long long f = v[c];
        for (std::size_t k = 0; k < v.size(); ++k) v[k] = ((v[k] - f * row[k]) % (long long)p_ + p_) % p_;
      }
  }
  long long inverse(long long a) const {
    long long r = 1, b = a, e = p_ - 2;
    while (e) {
      if (e & 1) r = r * b % p_;
      b = b * b % p_;
      e >>= 1;
    }
    return r;
  }
  unsigned p_;
  std::map<std::size_t, std::vector<long long>> rows_;
};

// Z_(p)-span membership via Hermite bases.
class LocalLattice {
 public:
  LocalLattice(unsigned p, std::size_t n, Exec exec) : p_(p), n_(n), exec_(exec) {}

  void set_rows(IntMatrix rows) { hnf_ = hermite_normal_form(std::move(rows), n_, exec_); }
  const IntMatrix& hnf() const { return hnf_; }

  bool contains(const IntRow& v) const {
    if (lattice_coordinates(hnf_, v)) return true;
    IntMatrix ext = hnf_;
    ext.push_back(v);
    ext = hermite_normal_form(std::move(ext), n_, exec_);
    if (ext.size() != hnf_.size()) return false;
    // Same span: the index is the ratio of pivot products.
    mpz_class a = 1, b = 1;
    for (std::size_t i = 0; i < hnf_.size(); ++i) {
      a *= pivot(hnf_[i]);
      b *= pivot(ext[i]);
    }
    mpz_class index = abs(a / b);
    return !mpz_divisible_ui_p(index.get_mpz_t(), p_);
  }

 private:
  static mpz_class pivot(const IntRow& r) {
    for (const auto& x : r)
      if (x != 0) return x;
    return 0;
  }
  unsigned p_;
  std::size_t n_;
  Exec exec_;
  IntMatrix hnf_;
};

std::vector<long long> to_fp(const IntRow& r, unsigned p) {
  std::vector<long long> v;
  v.reserve(r.size());
  for (const auto& x : r) {
    mpz_class m;
    mpz_fdiv_r_ui(m.get_mpz_t(), x.get_mpz_t(), p);
    v.push_back(m.get_si());
  }
  return v;
}

struct FormProduct {
  Word word;
  int degree;
  IntRow coords;  // monomial coordinates, v1 exponents implied by the degree
};

std::vector<FormProduct> image_products(const GroupCase& c, bool mod_p, const std::vector<Exponents>& basis) {
  FiltrationSpec spec = FiltrationSpec::from_case(c);
  std::vector<Product> prods = enumerate_products(spec);
  std::map<Word, LaurentElement> forms;
  auto form_of = [&](std::size_t i) {
    LaurentElement f = c.b_models[i].v1_form;
    return mod_p ? f.reduce_mod_p() : f;
  };
  auto coords = [&](const LaurentElement& e) {
    IntRow r(basis.size(), 0);
    for (const auto& [key, coef] : e.terms()) {
      auto it = std::lower_bound(basis.begin(), basis.end(), key.second);
      r[it - basis.begin()] = coef;
    }
    return r;
  };
  std::vector<FormProduct> out;
  LaurentElement one = LaurentElement::one(c.py, c.prime);
  out.push_back({{}, 0, coords(one)});
  for (const auto& pr : prods) {
    Word parent(pr.word.begin(), pr.word.end() - 1);
    LaurentElement f = form_of(pr.word.back());
    if (!parent.empty()) f = forms.at(parent) * f;
    if (f.is_zero()) {
      forms.emplace(pr.word, f);
      continue;
    }
    out.push_back({pr.word, pr.weight, coords(f)});
    forms.emplace(pr.word, std::move(f));
  }
  return out;
}

}  // namespace

const MinimalExponent* ImageReport::find(const std::string& label) const {
  for (const auto& e : entries)
    if (e.label == label) return &e;
  return nullptr;
}

int default_v1_cap(const GroupCase& c) { return c.py->top_degree() / static_cast<int>(c.prime - 1) + 2; }

ImageReport image_subalgebra(const GroupCase& c, bool mod_p, std::optional<int> degree_cap, std::optional<int> v1_cap,
                             Exec exec) {
  ImageReport rep;
  rep.name = c.name;
  rep.mod_p = mod_p;
  rep.degree_cap = degree_cap.value_or(c.py->top_degree());
  rep.v1_cap = v1_cap.value_or(default_v1_cap(c));
  if (rep.degree_cap < 0 || rep.v1_cap < 0) throw KresError("caps must be nonnegative");
  const int q = static_cast<int>(c.prime) - 1;
  const std::vector<Exponents> basis = c.py->basis();
  const std::size_t n = basis.size();
  std::vector<FormProduct> prods = image_products(c, mod_p, basis);
  rep.product_count = prods.size();
  rep.full_rank = static_cast<long>(n);

  // Im_D is spanned by products P with deg P >= D and deg P = D mod (p-1).
  std::map<int, FpEchelon> fp;
  std::map<int, LocalLattice> zp;
  auto piece_rows = [&](int d) {
    IntMatrix rows;
    for (const auto& pr : prods)
      if (pr.degree >= d && (pr.degree - d) % q == 0) rows.push_back(pr.coords);
    return rows;
  };
  auto contains = [&](int d, const IntRow& v) {
    if (mod_p) {
      auto it = fp.find(d);
      if (it == fp.end()) {
        FpEchelon e(c.prime);
        for (const auto& r : piece_rows(d)) e.insert(to_fp(r, c.prime));
        it = fp.emplace(d, std::move(e)).first;
      }
      return it->second.contains(to_fp(v, c.prime));
    }
    auto it = zp.find(d);
    if (it == zp.end()) {
      LocalLattice l(c.prime, n, exec);
      l.set_rows(piece_rows(d));
      it = zp.emplace(d, std::move(l)).first;
    }
    return it->second.contains(v);
  };

  for (std::size_t i = 0; i < n; ++i) {
    const Exponents& m = basis[i];
    int chow = c.py->chow_degree(m);
    if (chow > rep.degree_cap) continue;
    MinimalExponent me{m, c.exterior_label(m), chow, std::nullopt, true};
    IntRow unit(n, 0);
    unit[i] = 1;
    bool periodic = false;
    for (int s = 0; s <= rep.v1_cap; ++s) {
      int d = chow - q * s;
      if (contains(d, unit)) {
        me.exponent = s;
        break;
      }
      if (d <= 0) {
        periodic = true;
        break;
      }
    }
    if (!me.exponent && !periodic) {
      me.determined = false;
      rep.complete = false;
    }
    if (!me.exponent && periodic) rep.missing.push_back(me.label);
    rep.entries.push_back(std::move(me));
  }
  for (int d = 0; d > -q; --d) {
    IntMatrix rows = piece_rows(d);
    if (mod_p) {
      FpEchelon e(c.prime);
      for (const auto& r : rows) e.insert(to_fp(r, c.prime));
      rep.rank_after_inverting_v1 += static_cast<long>(e.rank());
    } else {
      rep.rank_after_inverting_v1 += static_cast<long>(hermite_normal_form(rows, n, exec).size());
    }
  }
  for (auto& [d, e] : fp) rep.pieces.push_back({d, e.matrix()});
  for (auto& [d, l] : zp) rep.pieces.push_back({d, l.hnf()});
  return rep;
}

ImageReport image_with_stability(const GroupCase& c, bool mod_p, Exec exec) {
  ImageReport a = image_subalgebra(c, mod_p, std::nullopt, std::nullopt, exec);
  ImageReport b = image_subalgebra(c, mod_p, a.degree_cap, 2 * a.v1_cap, exec);
  bool same = a.entries.size() == b.entries.size();
  for (std::size_t i = 0; same && i < a.entries.size(); ++i)
    same = a.entries[i].exponent == b.entries[i].exponent && a.entries[i].determined == b.entries[i].determined;
  a.stabilized = same && a.complete;
  return a;
}

std::vector<std::string> y2_multiples(const GroupCase& c) {
  std::vector<std::string> out;
  for (const auto& m : c.py->basis()) {
    std::string lab = c.exterior_label(m);
    std::stringstream ss(lab);
    std::string tok;
    while (std::getline(ss, tok, '*'))
      if (tok == "y2") {
        out.push_back(lab);
        break;
      }
  }
  return out;
}

namespace {

LaurentElement y_form(const GroupCase& c, int j) {
  auto it = c.y_even.find(j);
  if (it == c.y_even.end() || it->second.is_zero()) return LaurentElement(c.py, c.prime);
  return LaurentElement::from_weighted(it->second, j, c.prime);
}

// c'_i = 2 y_{2i} + v1 y_{2i+2}
LaurentElement c_prime(const GroupCase& c, int i) { return y_form(c, i) * mpz_class(2) + y_form(c, i + 1).shift(1); }

std::string show(const LaurentElement& e) { return e.is_zero() ? "0" : e.to_string(); }

}  // namespace

TelescopeReport telescope_check(const GroupCase& c, int k) {
  if (c.family != Family::Spin) throw KresError(c.name + " is not a Spin case");
  if (k < 0 || (2 << k) >= c.rank)
    throw KresError("hypothesis 2^(k+1) < l fails for k = " + std::to_string(k) + ", l = " + std::to_string(c.rank));
  TelescopeReport rep;
  rep.name = c.name;
  rep.k = k;
  const int a = 1 << k;
  auto two_pow = [](int e) -> mpz_class { return mpz_class(1) << e; };
  LaurentElement cpp = c_prime(c, a) - y_form(c, a) * mpz_class(2);
  LaurentElement base_rhs = y_form(c, a + 1).shift(1);
  rep.base_holds = cpp == base_rhs;
  rep.base = "c''_" + std::to_string(a) + " = " + show(cpp) + ", v1*y_" + std::to_string(2 * (a + 1)) + " = " +
             show(base_rhs);

  LaurentElement prev = cpp;  // Y_0
  for (int i = 1; i <= a - 1; ++i) {
    LaurentElement yi = y_form(c, a + i + 1).shift(1);
    LaurentElement rec = c_prime(c, a + i) - prev.shift(-1) * mpz_class(2);
    rep.recursion.push_back({i, show(yi), show(rec), yi == rec, show(yi - rec)});
    // The closed form as stated: (-1)^i 2^i v1^{-i} c'' + sum_{0<j<i} (-1)^j 2^j v1^{-j} c'_{2(a+j)}.
    mpz_class sign_i = (i % 2 ? -1 : 1);
    LaurentElement stated = cpp.shift(-i) * (sign_i * two_pow(i));
    for (int j = 1; j < i; ++j) {
      mpz_class sj = (j % 2 ? -1 : 1);
      stated = stated + c_prime(c, 2 * (a + j)).shift(-j) * (sj * two_pow(j));
    }
    rep.closed_form.push_back({i, show(yi), show(stated), yi == stated, show(yi - stated)});
    prev = yi;
  }

  LaurentElement rhs = c_prime(c, 2 * a - 1).shift(a);
  for (int last : {a - 1, a}) {
    LaurentElement lhs = c_prime(c, a) * two_pow(a);
    for (int i = 1; i <= last; ++i) {
      mpz_class si = (i % 2 ? -1 : 1);
      lhs = lhs + c_prime(c, a + i).shift(i) * (si * two_pow(a - i));
    }
    rep.ranges.push_back({last, show(lhs), show(rhs), show(lhs - rhs), lhs == rhs});
  }
  return rep;
}

ConventionReport spin_generator_conventions(const GroupCase& c) {
  if (c.family != Family::Spin) throw KresError(c.name + " is not a Spin case");
  auto is_pow2 = [](int x) { return x > 0 && (x & (x - 1)) == 0; };
  std::vector<std::pair<std::string, std::vector<int>>> convs;
  std::vector<int> a, b;
  for (int i = 2; i <= c.rank; ++i)
    if (!is_pow2(i + 1)) a.push_back(i);
  for (int i = 3; i <= c.rank; ++i)
    if (!is_pow2(i)) b.push_back(i - 1);
  convs.emplace_back("c'_i, i != 2^j - 1", a);
  convs.emplace_back("c'_{i-1}, i != 2^j, 3 <= i <= l", b);

  const std::vector<Exponents> basis = c.py->basis();
  ConventionReport rep;
  for (const auto& [name, idx] : convs) {
    ConventionResult r{name, {}, {}, false};
    std::vector<LaurentElement> imgs;
    for (int i : idx) {
      r.generators.push_back("c" + std::to_string(i) + "'");
      LaurentElement img = c_prime(c, i).reduce_mod_p();
      r.images.push_back(show(img));
      imgs.push_back(img);
    }
    FpEchelon e(2);
    const std::size_t g = imgs.size();
    bool any_zero = false;
    for (std::size_t mask = 0; mask < (std::size_t{1} << g); ++mask) {
      LaurentElement prod = LaurentElement::one(c.py, 2).reduce_mod_p();
      for (std::size_t t = 0; t < g; ++t)
        if (mask >> t & 1) prod = prod * imgs[t];
      if (prod.is_zero()) {
        any_zero = true;
        continue;
      }
      std::vector<long long> v(basis.size(), 0);
      for (const auto& [key, coef] : prod.terms()) {
        auto it = std::lower_bound(basis.begin(), basis.end(), key.second);
        v[it - basis.begin()] = (v[it - basis.begin()] + coef.get_si()) % 2;
      }
      e.insert(v);
    }
    r.isomorphic = !any_zero && (std::size_t{1} << g) == basis.size() && e.rank() == basis.size();
    if (r.isomorphic) rep.matching += (rep.matching.empty() ? "" : ", ") + name;
    rep.conventions.push_back(std::move(r));
  }
  if (rep.matching.empty()) rep.matching = "none";
  return rep;
}

TorsionBound torsion_bound(const GroupCase& c) {
  TorsionBound tb;
  FiltrationSpec spec = FiltrationSpec::from_case(c);
  const int top = c.py->chow_degree(c.y_top);
  std::vector<std::pair<Word, mpz_class>> hits;
  for (const auto& pr : enumerate_products(spec)) {
    if (pr.weight != top) continue;
    mpz_class coef = pr.value.coefficient(c.y_top);
    if (coef == 0) continue;
    int s = p_valuation(coef, c.prime);
    tb.candidates.emplace_back(word_label(spec, pr.word), s);
    hits.emplace_back(pr.word, coef);
  }
  if (hits.empty()) {
    tb.note = "no product of weight " + std::to_string(top) + " reaches y_top";
    return tb;
  }
  // Minimal valuation, then lexicographically least word.
  std::size_t best = 0;
  for (std::size_t i = 1; i < hits.size(); ++i) {
    int si = p_valuation(hits[i].second, c.prime), sb = p_valuation(hits[best].second, c.prime);
    if (si < sb || (si == sb && hits[i].first < hits[best].first)) best = i;
  }
  tb.exponent = p_valuation(hits[best].second, c.prime);
  tb.witness = word_label(spec, hits[best].first);
  tb.coefficient = hits[best].second;
  mpz_class pp;
  mpz_ui_pow_ui(pp.get_mpz_t(), c.prime, static_cast<unsigned long>(*tb.exponent));
  tb.cofactor = tb.coefficient / pp;
  tb.note = "upper bound t(G)_(p) <= p^s; the S(t)-tail is not modeled";
  return tb;
}

RostCounts rost_counts(int n, unsigned p) {
  if (n < 1) throw KresError("Rost motives need n >= 1");
  if (!is_prime(p)) throw KresError(std::to_string(p) + " is not prime");
  RostCounts rc{n, p, 0, 0, {}, {}, true, {}};
  std::vector<Variable> vars;
  for (int j = 1; j < n; ++j) vars.push_back({"v" + std::to_string(j), 1, std::nullopt});
  vars.push_back({"y", 1, static_cast<int>(p)});
  auto ring = AlgebraPresentation::create(vars, CoefficientRing::integers());
  auto v = [&](int j) {
    return j == 0 ? Element::constant(ring, p) : Element::variable(ring, "v" + std::to_string(j));
  };
  Element y = Element::variable(ring, "y");
  // c_j(y^i) restricts to v_j y^i.
  auto res = [&](int j, unsigned i) { return v(j) * y.pow(i); };
  // K-theory: v0 = p, v1 = 1, v_j = 0 for j >= 2.
  std::vector<Element> k_images;
  for (int j = 1; j < n; ++j) k_images.push_back(Element::constant(ring, j == 1 ? 1 : 0));
  k_images.push_back(y);

  rc.basis.push_back("1");
  for (int j = 0; j < n; ++j)
    for (unsigned i = 1; i < p; ++i) {
      std::string lab = "c" + std::to_string(j) + "(y" + (i > 1 ? "^" + std::to_string(i) : "") + ")";
      rc.basis.push_back(lab);
      if (substitute(res(j, i), k_images).is_zero()) rc.killed.push_back(lab);
      if (n >= 2) {
        Element lhs = v(1) * res(j, i), rhs = v(j) * res(1, i);
        if (!(lhs == rhs)) {
          rc.relation_verified = false;
          rc.relation_failures.push_back(lab + ": " + lhs.to_string() + " != " + rhs.to_string());
        }
      }
    }
  rc.chow_basis_count = static_cast<long>(rc.basis.size());
  rc.killed_count = static_cast<long>(rc.killed.size());
  return rc;
}

}  // namespace grflag
