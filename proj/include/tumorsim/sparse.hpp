#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace tumorsim {

struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;
};

/// Compressed-row sparse matrix. Column indices are strictly increasing within
/// each row. Explicit zeros are kept so matrices assembled on the same mesh
/// share one sparsity pattern.
struct SparseMatrix {
  std::size_t n_rows = 0;
  std::size_t n_cols = 0;
  std::vector<std::size_t> row_offsets;
  std::vector<std::size_t> col_indices;
  std::vector<double> values;

  std::size_t nnz() const { return values.size(); }
  /// Entry (i, j), zero when not stored.
  double at(std::size_t i, std::size_t j) const;
  /// Position of (i, j) in values, or nnz() when not stored.
  std::size_t find(std::size_t i, std::size_t j) const;
  std::vector<double> diagonal() const;
  bool same_pattern(const SparseMatrix& other) const;
};

/// Sums duplicates and sorts into canonical order. Throws std::out_of_range on a bad index.
SparseMatrix csr_from_triplets(std::size_t n_rows, std::size_t n_cols, std::span<const Triplet> triplets);

std::vector<double> spmv(const SparseMatrix& a, std::span<const double> x);
void spmv(const SparseMatrix& a, std::span<const double> x, std::span<double> y);

/// a += alpha * b. Both matrices must share the same pattern.
void add_scaled(SparseMatrix& a, double alpha, const SparseMatrix& b);

/// a * diag(d) * b. Column indices of the result are sorted; structural
/// zeros of the product are kept.
SparseMatrix multiply(const SparseMatrix& a, std::span<const double> d, const SparseMatrix& b);
/// a + b on the union of both patterns.
SparseMatrix add(const SparseMatrix& a, const SparseMatrix& b);

struct SolveReport {
  int iterations = 0;
  double final_relative_residual = 0.0;
  bool converged = false;
};

struct SolverOptions {
  double tol = 1e-10;
  int max_iter = 10000;
};

struct SolveResult {
  std::vector<double> x;
  SolveReport report;
};

/// Jacobi-preconditioned conjugate gradients for SPD systems.
/// `guess` (optional, may be empty) seeds the iteration.
SolveResult cg_solve(const SparseMatrix& a, std::span<const double> b, const SolverOptions& opts = {},
                     std::span<const double> guess = {});

/// Jacobi-preconditioned BiCGSTAB. Zero diagonal entries are replaced by 1 in
/// the preconditioner. A breakdown restarts once from the current iterate.
SolveResult bicgstab_solve(const SparseMatrix& a, std::span<const double> b, const SolverOptions& opts = {},
                           std::span<const double> guess = {});

double dot(std::span<const double> x, std::span<const double> y);
double norm2(std::span<const double> x);

}  // namespace tumorsim
