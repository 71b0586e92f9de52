#include "grflag/filtration.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace grflag {

FiltrationSpec FiltrationSpec::from_case(const GroupCase& c) {
  FiltrationSpec s;
  s.ambient = c.py;
  for (const auto& b : c.b_models) s.generators.push_back({b.label, b.weight, b.value});
  return s;
}

std::vector<Product> enumerate_products(const FiltrationSpec& spec) {
  std::vector<Product> out;
  if (spec.generators.empty()) return out;
  const int top = spec.ambient->top_degree();
  const int ng = static_cast<int>(spec.generators.size());
  std::vector<int> natural(ng);
  for (int i = 0; i < ng; ++i) {
    const auto& g = spec.generators[i];
    if (g.value.presentation() != spec.ambient) throw std::invalid_argument(g.label + " lives outside the ambient");
    if (g.value.coefficient(Exponents(spec.ambient->num_vars(), 0)) != 0)
      throw std::invalid_argument(g.label + " has a unit part");
    natural[i] = g.value.min_degree();
  }
  Word w;
  auto rec = [&](auto&& self, int start, const Element& cur, int weight, int deg) -> void {
    for (int j = start; j < ng; ++j) {
      const auto& g = spec.generators[j];
      if (g.value.is_zero() || deg + natural[j] > top) continue;
      Element next = w.empty() ? g.value : cur * g.value;
      if (next.is_zero()) continue;
      w.push_back(j);
      out.push_back({w, weight + g.weight, next});
      self(self, j, next, weight + g.weight, deg + natural[j]);
      w.pop_back();
    }
  };
  rec(rec, 0, Element(spec.ambient), 0, 0);
  return out;
}

std::string word_label(const FiltrationSpec& spec, const Word& w) {
  if (w.empty()) return "1";
  std::string s;
  for (std::size_t i = 0; i < w.size();) {
    std::size_t j = i;
    while (j < w.size() && w[j] == w[i]) ++j;
    if (!s.empty()) s += "*";
    s += spec.generators[w[i]].label;
    if (j - i > 1) s += "^" + std::to_string(j - i);
    i = j;
  }
  return s;
}

std::optional<Word> parse_word(const FiltrationSpec& spec, const std::string& s) {
  Word w;
  if (s == "1") return w;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t star = s.find('*', pos);
    std::string tok = s.substr(pos, star == std::string::npos ? std::string::npos : star - pos);
    int idx = -1, power = 1;
    for (std::size_t i = 0; i < spec.generators.size(); ++i)
      if (spec.generators[i].label == tok) idx = static_cast<int>(i);
    if (idx < 0) {
      std::size_t caret = tok.rfind('^');
      if (caret == std::string::npos) return std::nullopt;
      std::string base = tok.substr(0, caret);
      for (std::size_t i = 0; i < spec.generators.size(); ++i)
        if (spec.generators[i].label == base) idx = static_cast<int>(i);
      if (idx < 0) return std::nullopt;
      try {
        power = std::stoi(tok.substr(caret + 1));
      } catch (...) {
        return std::nullopt;
      }
    }
    for (int k = 0; k < power; ++k) w.push_back(idx);
    if (star == std::string::npos) break;
    pos = star + 1;
  }
  std::sort(w.begin(), w.end());
  return w;
}

int word_weight(const FiltrationSpec& spec, const Word& w) {
  int s = 0;
  for (int i : w) s += spec.generators[i].weight;
  return s;
}

Element word_value(const FiltrationSpec& spec, const Word& w) {
  Element e = Element::constant(spec.ambient, 1);
  for (int i : w) e = e * spec.generators[i].value;
  return e;
}

IntRow LatticeChain::coordinates(const Element& e) const {
  IntRow v(basis.size(), 0);
  for (const auto& [m, c] : e.terms()) {
    auto it = std::lower_bound(basis.begin(), basis.end(), m);
    if (it == basis.end() || *it != m) throw std::invalid_argument("monomial outside the basis");
    v[it - basis.begin()] = c;
  }
  return v;
}

int LatticeChain::level(const Element& e) const {
  if (e.is_zero()) return max_weight + 1;
  IntRow v = coordinates(e);
  int lv = -1;
  for (int m = 0; m <= max_weight; ++m) {
    if (!lattice_coordinates(L[m], v)) break;
    lv = m;
  }
  return lv;
}

LatticeChain build_lattice_chain(const FiltrationSpec& spec, const std::vector<Product>& products, Exec exec) {
  LatticeChain ch;
  ch.basis = spec.ambient->basis();  // lexicographic, as lower_bound expects
  const std::size_t n = ch.basis.size();
  int maxw = 0;
  for (const auto& p : products) maxw = std::max(maxw, p.weight);
  ch.max_weight = maxw;
  std::map<int, std::vector<const Product*>> by_weight;
  for (const auto& p : products) by_weight[p.weight].push_back(&p);
  ch.L.assign(maxw + 2, IntMatrix{});
  for (int m = maxw; m >= 1; --m) {
    IntMatrix rows = ch.L[m + 1];
    auto it = by_weight.find(m);
    if (it != by_weight.end()) {
      // Insert in chunks so intermediate Hermite bases stay small.
      const std::size_t chunk = std::max<std::size_t>(n, 32);
      std::size_t k = 0;
      for (const Product* p : it->second) {
        rows.push_back(ch.coordinates(p->value));
        if (++k % chunk == 0) rows = hermite_normal_form(std::move(rows), n, exec);
      }
      rows = hermite_normal_form(std::move(rows), n, exec);
    }
    ch.L[m] = std::move(rows);
  }
  IntMatrix rows = maxw >= 1 ? ch.L[1] : IntMatrix{};
  rows.push_back(ch.coordinates(Element::constant(spec.ambient, 1)));
  ch.L[0] = hermite_normal_form(std::move(rows), n, exec);
  return ch;
}

const GrWeight* GrResult::at(int w) const {
  for (const auto& g : weights)
    if (g.weight == w) return &g;
  return nullptr;
}

std::vector<mpz_class> GrResult::factors_at(int w) const {
  std::vector<mpz_class> f;
  if (const GrWeight* g = at(w))
    for (const auto& s : g->summands) f.push_back(s.factor);
  return f;
}

namespace {

// Coordinates of x in the basis of L_w, times V.
std::optional<IntRow> quotient_coords(const LatticeChain& ch, int w, const IntMatrix& V, const Element& x) {
  auto c = lattice_coordinates(ch.L[w], ch.coordinates(x));
  if (!c) return std::nullopt;
  IntRow a(V.empty() ? 0 : V[0].size(), 0);
  for (std::size_t k = 0; k < c->size(); ++k) {
    if ((*c)[k] == 0) continue;
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += (*c)[k] * V[k][i];
  }
  return a;
}

void reduce_image(IntRow& a, const std::vector<mpz_class>& d) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (d[i] == 0) continue;
    mpz_class r;
    mpz_fdiv_r(r.get_mpz_t(), a[i].get_mpz_t(), d[i].get_mpz_t());
    a[i] = r;
  }
}

bool generates(const mpz_class& a, const mpz_class& d) {
  if (d == 0) return abs(a) == 1;
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t());
  return g == 1;
}

}  // namespace

std::optional<IntRow> GrResult::quotient_image(int w, const Element& x) const {
  if (w < 0 || w > chain.max_weight) return std::nullopt;
  const GrWeight* g = at(w);
  if (!g) {
    // Zero quotient: membership is all there is to report.
    if (!lattice_coordinates(chain.L[w], chain.coordinates(x))) return std::nullopt;
    return IntRow{};
  }
  auto a = quotient_coords(chain, w, g->V, x);
  if (a) reduce_image(*a, g->d);
  return a;
}

GrResult gr_invariants(const FiltrationSpec& spec, unsigned p, const std::string& name, Exec exec) {
  GrResult r;
  r.name = name;
  r.prime = p;
  r.spec = spec;
  std::vector<Product> products = enumerate_products(spec);
  r.product_count = products.size();
  r.chain = build_lattice_chain(spec, products, exec);
  const auto& ch = r.chain;
  // Candidate words in lexicographic order, the unit first.
  std::vector<std::pair<Word, const Element*>> cands;
  Element one = Element::constant(spec.ambient, 1);
  cands.emplace_back(Word{}, &one);
  for (const auto& pr : products) cands.emplace_back(pr.word, &pr.value);
  std::vector<int> cand_weight;
  std::sort(cands.begin(), cands.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (const auto& c : cands) cand_weight.push_back(word_weight(spec, c.first));

  for (int m = 0; m <= ch.max_weight; ++m) {
    const IntMatrix& A = ch.L[m];
    const IntMatrix& B = ch.L[m + 1];
    const std::size_t ra = A.size();
    if (A == B) continue;  // Hermite bases are unique
    IntMatrix R;
    for (const auto& row : B) {
      auto c = lattice_coordinates(A, row);
      if (!c) throw std::logic_error("lattice chain is not decreasing");
      R.push_back(*c);
    }
    GrWeight gw;
    gw.weight = m;
    if (R.empty()) {
      gw.V = identity_matrix(ra);
      gw.d.assign(ra, 0);
    } else {
      SmithForm snf = smith_normal_form(R, ra, exec);
      gw.V = snf.V;
      gw.d.assign(ra, 0);
      for (std::size_t i = 0; i < snf.rank; ++i) gw.d[i] = snf.diagonal[i];
    }
    for (std::size_t i = 0; i < ra; ++i)
      if (gw.d[i] != 1) {
        gw.summand_index.push_back(i);
        gw.summands.push_back({gw.d[i], {}, ""});
      }
    // Representatives: lexicographically least word in L_m whose image
    // generates the summand's cyclic factor.
    std::vector<bool> found(gw.summands.size(), false);
    std::size_t missing = gw.summands.size();
    for (std::size_t k = 0; k < cands.size() && missing; ++k) {
      if (cand_weight[k] < m) continue;
      auto a = quotient_coords(ch, m, gw.V, *cands[k].second);
      if (!a) continue;
      reduce_image(*a, gw.d);
      for (std::size_t s = 0; s < gw.summands.size(); ++s) {
        if (found[s]) continue;
        std::size_t i = gw.summand_index[s];
        if (generates((*a)[i], gw.d[i])) {
          found[s] = true;
          --missing;
          gw.summands[s].rep = cands[k].first;
          gw.summands[s].rep_label = word_label(spec, cands[k].first);
        }
      }
    }
    for (std::size_t s = 0; s < gw.summands.size(); ++s)
      if (!found[s]) gw.summands[s].rep_label = "?";
    for (const auto& s : gw.summands) {
      if (s.factor == 0) ++r.totals.free;
      else {
        ++r.totals.torsion;
        if (mpz_divisible_ui_p(s.factor.get_mpz_t(), p)) ++r.totals.mod_p_dim;
      }
    }
    r.weights.push_back(std::move(gw));
  }
  r.totals.mod_p_dim += r.totals.free;
  return r;
}

GrResult gr_invariants(const GroupCase& c, Exec exec) {
  return gr_invariants(FiltrationSpec::from_case(c), c.prime, c.name, exec);
}

bool realizes_summand(const GrResult& r, int w, const Element& x, long factor, std::string* why) {
  auto fail = [&](const std::string& s) {
    if (why) *why = s;
    return false;
  };
  const GrWeight* g = r.at(w);
  if (!g) return fail("gr at weight " + std::to_string(w) + " is zero");
  auto a = r.quotient_image(w, x);
  if (!a) return fail("not in filtration " + std::to_string(w));
  const auto& d = g->d;
  if (factor == 0) {
    mpz_class gcd = 0;
    for (std::size_t i = 0; i < a->size(); ++i)
      if (d[i] == 0) mpz_gcd(gcd.get_mpz_t(), gcd.get_mpz_t(), (*a)[i].get_mpz_t());
    if (gcd == 0) return fail("image has finite order");
    if (gcd != 1) return fail("image is divisible by " + gcd.get_str() + " modulo torsion");
    return true;
  }
  mpz_class order = 1;
  bool height0 = false;
  for (std::size_t i = 0; i < a->size(); ++i) {
    if (d[i] == 0) {
      if ((*a)[i] != 0) return fail("image has infinite order");
      continue;
    }
    if (d[i] == 1 || (*a)[i] == 0) continue;
    mpz_class gg, o;
    mpz_gcd(gg.get_mpz_t(), (*a)[i].get_mpz_t(), d[i].get_mpz_t());
    o = d[i] / gg;
    mpz_lcm(order.get_mpz_t(), order.get_mpz_t(), o.get_mpz_t());
    if (!mpz_divisible_ui_p((*a)[i].get_mpz_t(), r.prime)) height0 = true;
  }
  if (order != factor) return fail("image has order " + order.get_str() + ", expected " + std::to_string(factor));
  if (!height0) return fail("image is divisible by p");
  return true;
}

std::string factors_string(const std::vector<mpz_class>& f) {
  std::string s = "[";
  for (std::size_t i = 0; i < f.size(); ++i) s += (i ? "," : "") + f[i].get_str();
  return s + "]";
}

namespace {

std::vector<mpz_class> canonical(std::vector<mpz_class> f) {
  std::sort(f.begin(), f.end(), [](const mpz_class& a, const mpz_class& b) {
    if ((a == 0) != (b == 0)) return b == 0;
    return a < b;
  });
  return f;
}

}  // namespace

GrDiff compare_expected(const GrResult& result, const ExpectedGr& expected) {
  GrDiff diff;
  if (!expected.exact) {
    if (expected.min_mod_p_dim) {
      bool ok = result.totals.mod_p_dim >= *expected.min_mod_p_dim;
      diff.equal = ok;
      diff.notes.push_back("mod-p dimension " + std::to_string(result.totals.mod_p_dim) + (ok ? " >= " : " < ") +
                           std::to_string(*expected.min_mod_p_dim));
    }
    return diff;
  }
  std::map<int, std::vector<const ExpectedClass*>> exp;
  for (const auto& c : expected.classes) exp[c.weight].push_back(&c);
  std::map<int, bool> weights;
  for (const auto& [w, v] : exp) weights[w] = true;
  for (const auto& g : result.weights) weights[g.weight] = true;
  for (const auto& [w, unused] : weights) {
    WeightDiff wd{w, {}, canonical(result.factors_at(w)), {}};
    for (const auto* c : exp[w]) wd.expected.push_back(c->factor);
    wd.expected = canonical(wd.expected);
    if (wd.expected != wd.actual) wd.issues.push_back("invariant factors differ");
    for (const auto* c : exp[w]) {
      auto word = parse_word(result.spec, c->rep);
      if (!word) {
        wd.issues.push_back("unknown representative " + c->rep);
        continue;
      }
      std::string why;
      if (!realizes_summand(result, w, word_value(result.spec, *word), c->factor, &why))
        wd.issues.push_back(c->rep + ": " + why);
    }
    if (!wd.issues.empty()) {
      diff.equal = false;
      diff.weights.push_back(std::move(wd));
    }
  }
  for (const auto& dw : expected.deeper_words) {
    auto word = parse_word(result.spec, dw);
    if (!word) {
      diff.equal = false;
      diff.notes.push_back("unknown word " + dw);
      continue;
    }
    int natural = word_weight(result.spec, *word);
    int lv = result.chain.level(word_value(result.spec, *word));
    bool deeper = lv > natural;
    if (!deeper) diff.equal = false;
    diff.notes.push_back(dw + " (weight " + std::to_string(natural) + ") lies in filtration " + std::to_string(lv) +
                         (deeper ? "" : ", not deeper"));
  }
  return diff;
}

std::string GrDiff::summary() const {
  std::string s;
  for (const auto& w : weights) {
    s += "w" + std::to_string(w.weight) + ": expected " + factors_string(w.expected) + " actual " +
         factors_string(w.actual);
    for (const auto& i : w.issues) s += "; " + i;
    s += "\n";
  }
  for (const auto& n : notes) s += n + "\n";
  return s;
}

}  // namespace grflag
