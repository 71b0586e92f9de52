#include "grflag/groebner.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

namespace grflag {

std::string order_name(MonomialOrder o) { return o == MonomialOrder::Lex ? "lex" : "grevlex"; }

namespace {

constexpr std::size_t kMaxVars = 24;

struct Mon {
  std::array<std::uint8_t, kMaxVars> e{};
  int deg = 0;
  std::uint32_t mask = 0;
  bool operator==(const Mon& o) const { return e == o.e; }
};

struct Term {
  Mon m;
  std::uint32_t c;
};

using Poly = std::vector<Term>;  // strictly decreasing in the monomial order

struct Ctx {
  std::size_t n;
  std::vector<int> w;
  MonomialOrder order;
  std::uint64_t p;

  Mon make(const Exponents& x) const {
    Mon m;
    for (std::size_t i = 0; i < n; ++i) {
      if (x[i] > 255) throw std::invalid_argument("exponent too large for Groebner kernel");
      m.e[i] = static_cast<std::uint8_t>(x[i]);
      m.deg += x[i] * w[i];
      if (x[i]) m.mask |= 1u << (i % 32);
    }
    return m;
  }
  Exponents unmake(const Mon& m) const {
    Exponents x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = m.e[i];
    return x;
  }
  // >0 when a > b
  int cmp(const Mon& a, const Mon& b) const {
    if (order == MonomialOrder::Grevlex) {
      if (a.deg != b.deg) return a.deg > b.deg ? 1 : -1;
      for (std::size_t i = n; i-- > 0;)
        if (a.e[i] != b.e[i]) return a.e[i] < b.e[i] ? 1 : -1;
      return 0;
    }
    for (std::size_t i = 0; i < n; ++i)
      if (a.e[i] != b.e[i]) return a.e[i] > b.e[i] ? 1 : -1;
    return 0;
  }
  bool divides(const Mon& a, const Mon& b) const {
    if ((a.mask & ~b.mask) != 0 || a.deg > b.deg) return false;
    for (std::size_t i = 0; i < n; ++i)
      if (a.e[i] > b.e[i]) return false;
    return true;
  }
  Mon mul(const Mon& a, const Mon& b) const {
    Mon m;
    for (std::size_t i = 0; i < n; ++i) m.e[i] = static_cast<std::uint8_t>(a.e[i] + b.e[i]);
    m.deg = a.deg + b.deg;
    m.mask = a.mask | b.mask;
    return m;
  }
  Mon div(const Mon& a, const Mon& b) const {
    Mon m;
    for (std::size_t i = 0; i < n; ++i) {
      m.e[i] = static_cast<std::uint8_t>(a.e[i] - b.e[i]);
      if (m.e[i]) m.mask |= 1u << (i % 32);
    }
    m.deg = a.deg - b.deg;
    return m;
  }
  Mon lcm(const Mon& a, const Mon& b) const {
    Mon m;
    for (std::size_t i = 0; i < n; ++i) m.e[i] = std::max(a.e[i], b.e[i]);
    m.mask = a.mask | b.mask;
    m.deg = 0;
    for (std::size_t i = 0; i < n; ++i) m.deg += m.e[i] * w[i];
    return m;
  }
  bool coprime(const Mon& a, const Mon& b) const {
    for (std::size_t i = 0; i < n; ++i)
      if (a.e[i] && b.e[i]) return false;
    return true;
  }
  std::uint32_t inv(std::uint32_t a) const {
    // Fermat
    std::uint64_t r = 1, b = a, k = p - 2;
    while (k) {
      if (k & 1) r = r * b % p;
      b = b * b % p;
      k >>= 1;
    }
    return static_cast<std::uint32_t>(r);
  }
};

struct MonLess {
  const Ctx* ctx;
  bool operator()(const Mon& a, const Mon& b) const { return ctx->cmp(a, b) > 0; }  // descending
};

Poly to_poly(const Element& f, const Ctx& ctx) {
  Poly out;
  for (const auto& [e, c] : f.terms()) {
    mpz_class r;
    mpz_fdiv_r_ui(r.get_mpz_t(), c.get_mpz_t(), static_cast<unsigned long>(ctx.p));
    if (r != 0) out.push_back({ctx.make(e), static_cast<std::uint32_t>(r.get_ui())});
  }
  std::sort(out.begin(), out.end(), [&](const Term& a, const Term& b) { return ctx.cmp(a.m, b.m) > 0; });
  return out;
}

Element to_element(const Poly& f, const Ctx& ctx, const PresentationPtr& ring) {
  Element::Terms t;
  for (const auto& term : f) t.emplace(ctx.unmake(term.m), mpz_class(term.c));
  return Element::from_terms(ring, std::move(t));
}

void make_monic(Poly& f, const Ctx& ctx) {
  if (f.empty() || f.front().c == 1) return;
  std::uint64_t s = ctx.inv(f.front().c);
  for (auto& t : f) t.c = static_cast<std::uint32_t>(t.c * s % ctx.p);
}

// Full reduction of f by the monic polynomials `basis`.
Poly reduce_full(const Poly& f, const std::vector<Poly>& basis, const Ctx& ctx) {
  std::map<Mon, std::uint32_t, MonLess> acc(MonLess{&ctx});
  for (const auto& t : f) acc.emplace(t.m, t.c);
  Poly rem;
  while (!acc.empty()) {
    auto it = acc.begin();
    Mon m = it->first;
    std::uint64_t c = it->second;
    acc.erase(it);
    const Poly* g = nullptr;
    for (const auto& b : basis)
      if (ctx.divides(b.front().m, m)) {
        g = &b;
        break;
      }
    if (!g) {
      rem.push_back({m, static_cast<std::uint32_t>(c)});
      continue;
    }
    Mon q = ctx.div(m, g->front().m);
    for (std::size_t k = 1; k < g->size(); ++k) {
      Mon mm = ctx.mul(q, (*g)[k].m);
      std::uint64_t sub = c * (*g)[k].c % ctx.p;
      auto [jt, ins] = acc.emplace(mm, 0);
      std::uint64_t v = (jt->second + ctx.p - sub) % ctx.p;
      if (v == 0) acc.erase(jt);
      else jt->second = static_cast<std::uint32_t>(v);
    }
  }
  return rem;
}

// Kernel: reduce every polynomial of a batch independently.
void reduce_batch(std::vector<Poly>& batch, const std::vector<Poly>& basis, const Ctx& ctx, Exec exec) {
  if (exec == Exec::Parallel && batch.size() > 1) {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(batch.size()); ++i)
      batch[i] = reduce_full(batch[i], basis, ctx);
  } else {
    for (auto& f : batch) f = reduce_full(f, basis, ctx);
  }
}

Poly spoly(const Poly& a, const Poly& b, const Ctx& ctx) {
  Mon l = ctx.lcm(a.front().m, b.front().m);
  Mon qa = ctx.div(l, a.front().m), qb = ctx.div(l, b.front().m);
  std::map<Mon, std::uint32_t, MonLess> acc(MonLess{&ctx});
  for (std::size_t k = 1; k < a.size(); ++k) acc[ctx.mul(qa, a[k].m)] = a[k].c;
  for (std::size_t k = 1; k < b.size(); ++k) {
    auto [it, ins] = acc.emplace(ctx.mul(qb, b[k].m), 0);
    std::uint64_t v = (it->second + ctx.p - b[k].c) % ctx.p;
    if (v == 0) acc.erase(it);
    else it->second = static_cast<std::uint32_t>(v);
  }
  Poly out;
  for (const auto& [m, c] : acc) out.push_back({m, c});
  return out;
}

struct Pair {
  std::size_t i, j;
  Mon lcm;
};

Ctx make_ctx(const PresentationPtr& ring, MonomialOrder order) {
  if (!ring->ring().is_field()) throw std::invalid_argument("Groebner bases need a prime field");
  for (const auto& v : ring->variables())
    if (v.truncation) throw std::invalid_argument("Groebner bases need an untruncated polynomial ring");
  if (ring->num_vars() > kMaxVars) throw std::invalid_argument("too many variables");
  Ctx ctx;
  ctx.n = ring->num_vars();
  for (const auto& v : ring->variables()) ctx.w.push_back(v.chow_degree);
  ctx.order = order;
  ctx.p = ring->ring().characteristic();
  return ctx;
}

}  // namespace

std::vector<Exponents> GroebnerBasis::leading_monomials() const {
  Ctx ctx = make_ctx(ring_, order_);
  std::vector<Exponents> out;
  for (const auto& g : polys_) out.push_back(ctx.unmake(to_poly(g, ctx).front().m));
  return out;
}

Element GroebnerBasis::normal_form(const Element& f) const {
  if (f.presentation() != ring_) throw std::invalid_argument("normal_form: element from another ring");
  Ctx ctx = make_ctx(ring_, order_);
  std::vector<Poly> basis;
  for (const auto& g : polys_) basis.push_back(to_poly(g, ctx));
  return to_element(reduce_full(to_poly(f, ctx), basis, ctx), ctx, ring_);
}

GroebnerBasis buchberger(const std::vector<Element>& gens, const BuchbergerOptions& opts) {
  if (gens.empty()) throw std::invalid_argument("buchberger: no generators");
  PresentationPtr ring = gens.front().presentation();
  Ctx ctx = make_ctx(ring, opts.order);
  std::map<int, std::vector<Poly>> inputs;
  for (const auto& g : gens) {
    if (g.presentation() != ring) throw std::invalid_argument("buchberger: mixed rings");
    if (!g.is_homogeneous()) throw std::invalid_argument("buchberger: generator not homogeneous: " + g.to_string());
    Poly f = to_poly(g, ctx);
    if (!f.empty()) inputs[f.front().m.deg].push_back(std::move(f));
  }

  std::vector<Poly> G;
  std::vector<Pair> pairs;
  std::size_t processed = 0;
  std::optional<int> truncated_at;

  auto update = [&](std::size_t h) {
    const Mon& lh = G[h].front().m;
    // Drop old pairs made redundant by the new lead (B_k criterion).
    std::erase_if(pairs, [&](const Pair& pr) {
      if (!ctx.divides(lh, pr.lcm)) return false;
      Mon a = ctx.lcm(G[pr.i].front().m, lh), b = ctx.lcm(G[pr.j].front().m, lh);
      return !(a == pr.lcm) && !(b == pr.lcm);
    });
    std::vector<Pair> C;
    for (std::size_t i = 0; i < h; ++i) C.push_back({i, h, ctx.lcm(G[i].front().m, lh)});
    std::vector<Pair> D;
    for (std::size_t k = 0; k < C.size(); ++k) {
      const Pair& c = C[k];
      bool cop = ctx.coprime(G[c.i].front().m, lh);
      bool dominated = false;
      for (std::size_t l = k + 1; l < C.size() && !dominated; ++l) dominated = ctx.divides(C[l].lcm, c.lcm);
      for (std::size_t l = 0; l < D.size() && !dominated; ++l) dominated = ctx.divides(D[l].lcm, c.lcm);
      if (cop || !dominated) D.push_back(c);
    }
    for (const auto& d : D)
      if (!ctx.coprime(G[d.i].front().m, lh)) pairs.push_back(d);
  };

  while (!pairs.empty() || !inputs.empty()) {
    int d = inputs.empty() ? std::numeric_limits<int>::max() : inputs.begin()->first;
    for (const auto& pr : pairs) d = std::min(d, pr.lcm.deg);
    if (opts.degree_cap && d > *opts.degree_cap) {
      truncated_at = *opts.degree_cap;
      break;
    }
    std::vector<Poly> batch;
    std::vector<Pair> rest;
    for (const auto& pr : pairs) {
      if (pr.lcm.deg == d) batch.push_back(spoly(G[pr.i], G[pr.j], ctx));
      else rest.push_back(pr);
    }
    processed += pairs.size() - rest.size();
    pairs = std::move(rest);
    if (auto it = inputs.find(d); it != inputs.end()) {
      for (auto& f : it->second) batch.push_back(std::move(f));
      inputs.erase(it);
    }
    reduce_batch(batch, G, ctx, opts.exec);
    // Echelon within the degree.
    std::vector<Poly> fresh;
    for (auto& f : batch) {
      if (f.empty()) continue;
      Poly r = reduce_full(f, fresh, ctx);
      if (r.empty()) continue;
      make_monic(r, ctx);
      fresh.push_back(std::move(r));
    }
    for (auto& f : fresh) {
      G.push_back(std::move(f));
      update(G.size() - 1);
    }
  }

  // Interreduce tails.
  std::vector<Poly> tails(G.size());
  for (std::size_t i = 0; i < G.size(); ++i) tails[i] = Poly(G[i].begin() + 1, G[i].end());
  reduce_batch(tails, G, ctx, opts.exec);
  GroebnerBasis out;
  out.ring_ = ring;
  out.order_ = opts.order;
  out.verified_up_to_ = truncated_at;
  out.pairs_processed_ = processed;
  std::vector<Poly> red;
  for (std::size_t i = 0; i < G.size(); ++i) {
    Poly g{G[i].front()};
    g.insert(g.end(), tails[i].begin(), tails[i].end());
    red.push_back(std::move(g));
  }
  std::sort(red.begin(), red.end(), [&](const Poly& a, const Poly& b) { return ctx.cmp(a.front().m, b.front().m) < 0; });
  for (const auto& g : red) out.polys_.push_back(to_element(g, ctx, ring));
  return out;
}

namespace {

using Gens = std::vector<Exponents>;

bool exp_divides(const Exponents& a, const Exponents& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

Gens minimalize(Gens g) {
  std::sort(g.begin(), g.end(), [](const Exponents& a, const Exponents& b) {
    int sa = std::accumulate(a.begin(), a.end(), 0), sb = std::accumulate(b.begin(), b.end(), 0);
    return sa != sb ? sa < sb : a < b;
  });
  g.erase(std::unique(g.begin(), g.end()), g.end());
  Gens out;
  for (const auto& m : g) {
    bool red = false;
    for (const auto& k : out)
      if (exp_divides(k, m)) {
        red = true;
        break;
      }
    if (!red) out.push_back(m);
  }
  return out;
}

int wdeg(const Exponents& e, const std::vector<int>& w) {
  int d = 0;
  for (std::size_t i = 0; i < e.size(); ++i) d += e[i] * w[i];
  return d;
}

std::vector<std::int64_t> one_minus_t(int d) {
  std::vector<std::int64_t> f(d + 1, 0);
  f[0] = 1;
  f[d] -= 1;
  return f;
}

// Numerator K(t) with S/I = K(t) / prod(1 - t^w_i).
std::vector<std::int64_t> numerator(Gens g, const std::vector<int>& w) {
  g = minimalize(std::move(g));
  if (g.empty()) return {1};
  for (const auto& m : g)
    if (std::all_of(m.begin(), m.end(), [](int x) { return x == 0; })) return {};
  bool pairwise_coprime = true;
  for (std::size_t a = 0; a < g.size() && pairwise_coprime; ++a)
    for (std::size_t b = a + 1; b < g.size() && pairwise_coprime; ++b)
      for (std::size_t i = 0; i < w.size(); ++i)
        if (g[a][i] && g[b][i]) {
          pairwise_coprime = false;
          break;
        }
  if (pairwise_coprime) {
    std::vector<std::int64_t> r = {1};
    for (const auto& m : g) r = poly_mul(r, one_minus_t(wdeg(m, w)));
    return r;
  }
  // Pivot on the variable shared by most generators, at a median exponent.
  std::size_t best = 0;
  int best_count = -1;
  for (std::size_t i = 0; i < w.size(); ++i) {
    int c = 0;
    for (const auto& m : g) c += m[i] > 0;
    if (c > best_count) best_count = c, best = i;
  }
  std::vector<int> ex;
  for (const auto& m : g)
    if (m[best] > 0) ex.push_back(m[best]);
  std::sort(ex.begin(), ex.end());
  int e = ex[ex.size() / 2];
  if (e == ex.back() && ex.size() > 1) e = ex[(ex.size() - 1) / 2];
  Exponents piv(w.size(), 0);
  piv[best] = e;
  // I + (piv)
  Gens plus = g;
  plus.push_back(piv);
  // I : piv
  Gens colon;
  for (auto m : g) {
    m[best] = std::max(0, m[best] - e);
    colon.push_back(m);
  }
  auto a = numerator(std::move(plus), w);
  auto b = numerator(std::move(colon), w);
  std::vector<std::int64_t> shift(e * w[best] + 1, 0);
  shift.back() = 1;
  b = poly_mul(b, shift);
  if (b.size() > a.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] += b[i];
  poly_trim(a);
  return a;
}

}  // namespace

HilbertSeries monomial_quotient_series(const std::vector<Exponents>& gens, const std::vector<int>& var_degrees) {
  HilbertSeries h;
  h.numerator = numerator(gens, var_degrees);
  h.denominator_degrees = var_degrees;
  std::vector<std::int64_t> q = h.numerator;
  bool finite = true;
  for (int d : var_degrees) {
    auto r = poly_div_one_minus(q, d);
    if (!r) {
      finite = false;
      break;
    }
    q = *r;
  }
  if (finite) h.dense = q;
  return h;
}

HilbertSeries quotient_hilbert_series(const GroebnerBasis& gb) {
  std::vector<int> w;
  for (const auto& v : gb.ring()->variables()) w.push_back(v.chow_degree);
  return monomial_quotient_series(gb.leading_monomials(), w);
}

RegularSequenceReport regular_sequence_check(const std::vector<Element>& gens, const BuchbergerOptions& opts) {
  RegularSequenceReport rep;
  GroebnerBasis gb = buchberger(gens, opts);
  rep.actual = quotient_hilbert_series(gb);
  rep.expected_numerator = {1};
  for (const auto& g : gens) {
    auto d = g.degree();
    if (!d) throw std::invalid_argument("regular_sequence_check: zero or inhomogeneous element");
    rep.expected_numerator = poly_mul(rep.expected_numerator, one_minus_t(*d));
  }
  auto got = rep.actual.numerator;
  rep.regular = got == rep.expected_numerator;
  if (gb.verified_up_to()) {
    rep.regular = false;
    rep.detail = "basis truncated at degree " + std::to_string(*gb.verified_up_to());
  } else {
    rep.detail = "numerator " + poly_string(got) + " vs " + poly_string(rep.expected_numerator);
  }
  return rep;
}

IdealSpec parse_ideal_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("ideal file is not JSON: ") + e.what());
  }
  try {
    unsigned p = j.at("prime").get<unsigned>();
    std::vector<Variable> vars;
    for (const auto& v : j.at("variables"))
      vars.push_back(Variable{v.at("label").get<std::string>(), v.value("degree", 1), std::nullopt});
    IdealSpec spec;
    spec.ring = AlgebraPresentation::create(std::move(vars), CoefficientRing::prime_field(p));
    std::map<std::string, Element> defs;
    if (j.contains("definitions"))
      for (const auto& d : j.at("definitions"))
        defs.insert_or_assign(d.at("label").get<std::string>(),
                              parse_element(spec.ring, d.at("expr").get<std::string>(), defs));
    for (const auto& g : j.at("generators")) {
      std::string s = g.get<std::string>();
      spec.generators.push_back(parse_element(spec.ring, s, defs));
      spec.generator_text.push_back(s);
    }
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed ideal file: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("malformed ideal file: ") + e.what());
  }
}

IdealSpec load_ideal_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_ideal_json(ss.str());
}

}  // namespace grflag
