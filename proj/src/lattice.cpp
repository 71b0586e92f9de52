#include "grflag/lattice.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace grflag {

Exec default_exec() {
  const char* s = std::getenv("GRFLAG_SERIAL");
  return (s && *s && std::string(s) != "0") ? Exec::Serial : Exec::Parallel;
}

bool eliminate_column(IntMatrix& rows, std::size_t pivot, std::size_t col, std::size_t first,
                      std::size_t last, bool floor_div, Exec exec) {
  const IntRow& p = rows[pivot];
  const mpz_class& pc = p[col];
  const std::size_t n = p.size();
  int left = 0;
  auto body = [&](std::size_t i) -> int {
    if (i == pivot) return 0;
    IntRow& r = rows[i];
    if (r[col] == 0) return 0;
    mpz_class q;
    if (floor_div) mpz_fdiv_q(q.get_mpz_t(), r[col].get_mpz_t(), pc.get_mpz_t());
    else mpz_tdiv_q(q.get_mpz_t(), r[col].get_mpz_t(), pc.get_mpz_t());
    if (q != 0)
      for (std::size_t j = col; j < n; ++j)
        if (p[j] != 0) r[j] -= q * p[j];
    return r[col] != 0 ? 1 : 0;
  };
  if (exec == Exec::Parallel && last - first > 8) {
#pragma omp parallel for reduction(+ : left) schedule(dynamic, 4)
    for (std::ptrdiff_t i = static_cast<std::ptrdiff_t>(first); i < static_cast<std::ptrdiff_t>(last); ++i)
      left += body(static_cast<std::size_t>(i));
  } else {
    for (std::size_t i = first; i < last; ++i) left += body(i);
  }
  return left != 0;
}

IntMatrix hermite_normal_form(IntMatrix rows, std::size_t ncols, Exec exec) {
  for (const auto& r : rows)
    if (r.size() != ncols) throw std::invalid_argument("hermite_normal_form: ragged rows");
  std::erase_if(rows, [](const IntRow& r) { return std::all_of(r.begin(), r.end(), [](const mpz_class& x) { return x == 0; }); });
  std::size_t top = 0;
  for (std::size_t col = 0; col < ncols && top < rows.size(); ++col) {
    bool have = false;
    while (true) {
      std::size_t best = rows.size();
      for (std::size_t i = top; i < rows.size(); ++i)
        if (rows[i][col] != 0 && (best == rows.size() || abs(rows[i][col]) < abs(rows[best][col]))) best = i;
      if (best == rows.size()) break;
      have = true;
      std::swap(rows[top], rows[best]);
      if (!eliminate_column(rows, top, col, top + 1, rows.size(), false, exec)) break;
    }
    if (!have) continue;
    if (rows[top][col] < 0)
      for (auto& x : rows[top]) x = -x;
    eliminate_column(rows, top, col, 0, top, true, exec);
    ++top;
    // Rows below that became zero can be dropped cheaply.
    std::erase_if(rows, [&, idx = std::size_t(0)](const IntRow& r) mutable {
      bool drop = idx++ >= top && std::all_of(r.begin(), r.end(), [](const mpz_class& x) { return x == 0; });
      return drop;
    });
  }
  rows.resize(top);
  return rows;
}

std::vector<std::size_t> pivot_columns(const IntMatrix& hnf) {
  std::vector<std::size_t> piv;
  for (const auto& r : hnf) {
    std::size_t j = 0;
    while (j < r.size() && r[j] == 0) ++j;
    piv.push_back(j);
  }
  return piv;
}

std::optional<IntRow> lattice_coordinates(const IntMatrix& hnf, IntRow v) {
  IntRow c(hnf.size());
  auto piv = pivot_columns(hnf);
  for (std::size_t i = 0; i < hnf.size(); ++i) {
    const mpz_class& a = hnf[i][piv[i]];
    // Entries left of this pivot must already be zero.
    for (std::size_t j = (i == 0 ? 0 : piv[i - 1] + 1); j < piv[i]; ++j)
      if (v[j] != 0) return std::nullopt;
    if (v[piv[i]] % a != 0) return std::nullopt;
    c[i] = v[piv[i]] / a;
    if (c[i] != 0)
      for (std::size_t j = piv[i]; j < v.size(); ++j) v[j] -= c[i] * hnf[i][j];
  }
  for (const auto& x : v)
    if (x != 0) return std::nullopt;
  return c;
}

IntMatrix identity_matrix(std::size_t n) {
  IntMatrix m(n, IntRow(n, 0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

IntMatrix mat_mul(const IntMatrix& a, const IntMatrix& b, std::size_t bcols) {
  IntMatrix r(a.size(), IntRow(bcols, 0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < a[i].size(); ++k) {
      if (a[i][k] == 0) continue;
      for (std::size_t j = 0; j < bcols; ++j) r[i][j] += a[i][k] * b[k][j];
    }
  return r;
}

namespace {

void swap_cols(IntMatrix& m, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (auto& r : m) std::swap(r[a], r[b]);
}

// col_j -= q * col_t
void col_axpy(IntMatrix& m, std::size_t j, std::size_t t, const mpz_class& q) {
  for (auto& r : m) r[j] -= q * r[t];
}

void row_axpy(IntMatrix& m, std::size_t i, std::size_t t, const mpz_class& q) {
  for (std::size_t j = 0; j < m[i].size(); ++j) m[i][j] -= q * m[t][j];
}

}  // namespace

SmithForm smith_normal_form(const IntMatrix& input, std::size_t ncols, Exec exec) {
  (void)exec;  // transforms make this cheap relative to Hermite; kept serial
  const std::size_t nr = input.size(), nc = ncols;
  for (const auto& r : input)
    if (r.size() != nc) throw std::invalid_argument("smith_normal_form: ragged rows");
  IntMatrix m = input;
  SmithForm out;
  out.U = identity_matrix(nr);
  out.V = identity_matrix(nc);
  const std::size_t k = std::min(nr, nc);
  std::size_t t = 0;
  for (; t < k; ++t) {
    // Smallest nonzero entry of the trailing block.
    auto move_min = [&]() -> bool {
      std::size_t bi = nr, bj = nc;
      for (std::size_t i = t; i < nr; ++i)
        for (std::size_t j = t; j < nc; ++j)
          if (m[i][j] != 0 && (bi == nr || abs(m[i][j]) < abs(m[bi][bj]))) bi = i, bj = j;
      if (bi == nr) return false;
      std::swap(m[t], m[bi]);
      std::swap(out.U[t], out.U[bi]);
      swap_cols(m, t, bj);
      swap_cols(out.V, t, bj);
      return true;
    };
    if (!move_min()) break;
    while (true) {
      bool clean = true;
      for (std::size_t i = t + 1; i < nr; ++i) {
        if (m[i][t] == 0) continue;
        mpz_class q;
        mpz_tdiv_q(q.get_mpz_t(), m[i][t].get_mpz_t(), m[t][t].get_mpz_t());
        row_axpy(m, i, t, q);
        row_axpy(out.U, i, t, q);
        if (m[i][t] != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < nc; ++j) {
        if (m[t][j] == 0) continue;
        mpz_class q;
        mpz_tdiv_q(q.get_mpz_t(), m[t][j].get_mpz_t(), m[t][t].get_mpz_t());
        col_axpy(m, j, t, q);
        col_axpy(out.V, j, t, q);
        if (m[t][j] != 0) clean = false;
      }
      if (!clean) {
        // Bring the smallest entry of row/column t to the pivot.
        std::size_t bi = t, bj = t;
        for (std::size_t i = t; i < nr; ++i)
          if (m[i][t] != 0 && abs(m[i][t]) < abs(m[bi][bj])) bi = i, bj = t;
        for (std::size_t j = t; j < nc; ++j)
          if (m[t][j] != 0 && abs(m[t][j]) < abs(m[bi][bj])) bi = t, bj = j;
        std::swap(m[t], m[bi]);
        std::swap(out.U[t], out.U[bi]);
        swap_cols(m, t, bj);
        swap_cols(out.V, t, bj);
        continue;
      }
      // Divisibility of the trailing block by the pivot.
      std::size_t bad = nr;
      for (std::size_t i = t + 1; i < nr && bad == nr; ++i)
        for (std::size_t j = t + 1; j < nc; ++j)
          if (m[i][j] % m[t][t] != 0) {
            bad = i;
            break;
          }
      if (bad == nr) break;
      row_axpy(m, t, bad, -1);
      row_axpy(out.U, t, bad, -1);
    }
    if (m[t][t] < 0) {
      for (auto& x : m[t]) x = -x;
      for (auto& x : out.U[t]) x = -x;
    }
  }
  out.rank = t;
  out.diagonal.assign(k, 0);
  for (std::size_t i = 0; i < t; ++i) out.diagonal[i] = m[i][i];
  return out;
}

int p_valuation(mpz_class x, unsigned p) {
  if (x == 0) return -1;
  int v = 0;
  while (mpz_divisible_ui_p(x.get_mpz_t(), p)) {
    x /= p;
    ++v;
  }
  return v;
}

std::string row_string(const IntRow& r) {
  std::string s = "[";
  for (std::size_t i = 0; i < r.size(); ++i) s += (i ? ", " : "") + r[i].get_str();
  return s + "]";
}

}  // namespace grflag
