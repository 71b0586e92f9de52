#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

namespace grflag {

using IntRow = std::vector<mpz_class>;
using IntMatrix = std::vector<IntRow>;

// Serial is the reference; Parallel splits row updates across OpenMP threads.
enum class Exec { Serial, Parallel };

Exec default_exec();

// Row-style Hermite normal form of the Z-span of `rows` (each of length ncols):
// echelon, positive pivots, entries above a pivot in [0, pivot).  Zero rows
// are dropped.
IntMatrix hermite_normal_form(IntMatrix rows, std::size_t ncols, Exec exec = default_exec());

// Pivot column of each row of a matrix in Hermite form.
std::vector<std::size_t> pivot_columns(const IntMatrix& hnf);

// Coordinates of v in the basis `hnf` (Hermite form), or nullopt if v is
// not in the lattice.
std::optional<IntRow> lattice_coordinates(const IntMatrix& hnf, IntRow v);

struct SmithForm {
  std::vector<mpz_class> diagonal;  // min(rows, cols) entries; d1 | d2 | ...; zeros last
  IntMatrix U;                      // rows x rows, unimodular
  IntMatrix V;                      // cols x cols, unimodular
  std::size_t rank = 0;
};

// U * M * V = diag.
SmithForm smith_normal_form(const IntMatrix& m, std::size_t ncols, Exec exec = default_exec());

IntMatrix mat_mul(const IntMatrix& a, const IntMatrix& b, std::size_t bcols);
IntMatrix identity_matrix(std::size_t n);

// p-adic valuation; -1 for zero.
int p_valuation(mpz_class x, unsigned p);

std::string row_string(const IntRow& r);

// Kernel shared by the Hermite and Smith loops: for every row i in `targets`,
// rows[i] -= q_i * rows[pivot] with q_i = round-toward-zero(rows[i][col] / rows[pivot][col])
// (floor when `floor_div`).  Returns true if some targeted entry in `col` is
// still nonzero.
bool eliminate_column(IntMatrix& rows, std::size_t pivot, std::size_t col, std::size_t first,
                      std::size_t last, bool floor_div, Exec exec);

}  // namespace grflag
