#include "tumorsim/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace tumorsim {

double SparseMatrix::at(std::size_t i, std::size_t j) const {
  const auto k = find(i, j);
  return k == nnz() ? 0.0 : values[k];
}

std::size_t SparseMatrix::find(std::size_t i, std::size_t j) const {
  const auto first = col_indices.begin() + static_cast<std::ptrdiff_t>(row_offsets[i]);
  const auto last = col_indices.begin() + static_cast<std::ptrdiff_t>(row_offsets[i + 1]);
  const auto it = std::lower_bound(first, last, j);
  if (it == last || *it != j) return nnz();
  return static_cast<std::size_t>(it - col_indices.begin());
}

std::vector<double> SparseMatrix::diagonal() const {
  std::vector<double> d(std::min(n_rows, n_cols), 0.0);
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = at(i, i);
  return d;
}

bool SparseMatrix::same_pattern(const SparseMatrix& other) const {
  return n_rows == other.n_rows && n_cols == other.n_cols && row_offsets == other.row_offsets &&
         col_indices == other.col_indices;
}

SparseMatrix csr_from_triplets(std::size_t n_rows, std::size_t n_cols, std::span<const Triplet> triplets) {
  for (const auto& t : triplets) {
    if (t.row >= n_rows || t.col >= n_cols) {
      throw std::out_of_range("csr_from_triplets: entry (" + std::to_string(t.row) + ", " +
                              std::to_string(t.col) + ") outside " + std::to_string(n_rows) + "x" +
                              std::to_string(n_cols));
    }
  }
  std::vector<std::size_t> order(triplets.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  // Stable sort keeps the summation order of duplicates deterministic.
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& ta = triplets[a];
    const auto& tb = triplets[b];
    return ta.row != tb.row ? ta.row < tb.row : ta.col < tb.col;
  });

  SparseMatrix m;
  m.n_rows = n_rows;
  m.n_cols = n_cols;
  m.row_offsets.assign(n_rows + 1, 0);
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto& t = triplets[order[k]];
    const bool dup = k > 0 && triplets[order[k - 1]].row == t.row && triplets[order[k - 1]].col == t.col;
    if (dup) {
      m.values.back() += t.value;
    } else {
      m.col_indices.push_back(t.col);
      m.values.push_back(t.value);
      ++m.row_offsets[t.row + 1];
    }
  }
  std::partial_sum(m.row_offsets.begin(), m.row_offsets.end(), m.row_offsets.begin());
  return m;
}

void spmv(const SparseMatrix& a, std::span<const double> x, std::span<double> y) {
  if (x.size() != a.n_cols || y.size() != a.n_rows) {
    throw std::invalid_argument("spmv: dimension mismatch (matrix " + std::to_string(a.n_rows) + "x" +
                                std::to_string(a.n_cols) + ", x " + std::to_string(x.size()) + ")");
  }
  for (std::size_t i = 0; i < a.n_rows; ++i) {
    double s = 0.0;
    for (std::size_t k = a.row_offsets[i]; k < a.row_offsets[i + 1]; ++k) s += a.values[k] * x[a.col_indices[k]];
    y[i] = s;
  }
}

std::vector<double> spmv(const SparseMatrix& a, std::span<const double> x) {
  std::vector<double> y(a.n_rows);
  spmv(a, x, y);
  return y;
}

void add_scaled(SparseMatrix& a, double alpha, const SparseMatrix& b) {
  if (!a.same_pattern(b)) throw std::invalid_argument("add_scaled: sparsity patterns differ");
  for (std::size_t k = 0; k < a.values.size(); ++k) a.values[k] += alpha * b.values[k];
}

SparseMatrix multiply(const SparseMatrix& a, std::span<const double> d, const SparseMatrix& b) {
  if (a.n_cols != b.n_rows || d.size() != a.n_cols) throw std::invalid_argument("multiply: dimension mismatch");
  SparseMatrix c;
  c.n_rows = a.n_rows;
  c.n_cols = b.n_cols;
  c.row_offsets.assign(a.n_rows + 1, 0);
  // Gustavson's row-by-row product with a dense accumulator.
  std::vector<double> acc(b.n_cols, 0.0);
  std::vector<std::size_t> marker(b.n_cols, static_cast<std::size_t>(-1));
  std::vector<std::size_t> cols;
  for (std::size_t i = 0; i < a.n_rows; ++i) {
    cols.clear();
    for (std::size_t ka = a.row_offsets[i]; ka < a.row_offsets[i + 1]; ++ka) {
      const std::size_t k = a.col_indices[ka];
      const double aik = a.values[ka] * d[k];
      for (std::size_t kb = b.row_offsets[k]; kb < b.row_offsets[k + 1]; ++kb) {
        const std::size_t j = b.col_indices[kb];
        if (marker[j] != i) {
          marker[j] = i;
          acc[j] = 0.0;
          cols.push_back(j);
        }
        acc[j] += aik * b.values[kb];
      }
    }
    std::sort(cols.begin(), cols.end());
    for (auto j : cols) {
      c.col_indices.push_back(j);
      c.values.push_back(acc[j]);
    }
    c.row_offsets[i + 1] = c.col_indices.size();
  }
  return c;
}

SparseMatrix add(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.n_rows != b.n_rows || a.n_cols != b.n_cols) throw std::invalid_argument("add: dimension mismatch");
  SparseMatrix c;
  c.n_rows = a.n_rows;
  c.n_cols = a.n_cols;
  c.row_offsets.assign(a.n_rows + 1, 0);
  for (std::size_t i = 0; i < a.n_rows; ++i) {
    std::size_t ka = a.row_offsets[i], kb = b.row_offsets[i];
    const std::size_t ea = a.row_offsets[i + 1], eb = b.row_offsets[i + 1];
    while (ka < ea || kb < eb) {
      const std::size_t ja = ka < ea ? a.col_indices[ka] : c.n_cols;
      const std::size_t jb = kb < eb ? b.col_indices[kb] : c.n_cols;
      if (ja == jb) {
        c.col_indices.push_back(ja);
        c.values.push_back(a.values[ka++] + b.values[kb++]);
      } else if (ja < jb) {
        c.col_indices.push_back(ja);
        c.values.push_back(a.values[ka++]);
      } else {
        c.col_indices.push_back(jb);
        c.values.push_back(b.values[kb++]);
      }
    }
    c.row_offsets[i + 1] = c.col_indices.size();
  }
  return c;
}

double dot(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double norm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

namespace {

std::vector<double> inverse_diagonal(const SparseMatrix& a) {
  auto d = a.diagonal();
  for (auto& v : d) v = (v == 0.0) ? 1.0 : 1.0 / v;
  return d;
}

void check_square(const SparseMatrix& a, std::span<const double> b, const char* who) {
  if (a.n_rows != a.n_cols || b.size() != a.n_rows) {
    throw std::invalid_argument(std::string(who) + ": system dimensions do not match");
  }
}

std::vector<double> initial_iterate(std::span<const double> guess, std::size_t n) {
  if (guess.empty()) return std::vector<double>(n, 0.0);
  if (guess.size() != n) throw std::invalid_argument("initial guess has wrong length");
  return {guess.begin(), guess.end()};
}

void residual(const SparseMatrix& a, std::span<const double> x, std::span<const double> b, std::span<double> r) {
  spmv(a, x, r);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
}

}  // namespace

SolveResult cg_solve(const SparseMatrix& a, std::span<const double> b, const SolverOptions& opts,
                     std::span<const double> guess) {
  check_square(a, b, "cg_solve");
  const std::size_t n = b.size();
  SolveResult out;
  const double bnorm = norm2(b);
  if (bnorm == 0.0) {
    out.x.assign(n, 0.0);
    out.report.converged = true;
    return out;
  }
  auto x = initial_iterate(guess, n);
  const auto dinv = inverse_diagonal(a);
  std::vector<double> r(n), z(n), p(n), q(n);
  residual(a, x, b, r);
  double rel = norm2(r) / bnorm;
  int it = 0;
  if (rel > opts.tol) {
    for (std::size_t i = 0; i < n; ++i) z[i] = dinv[i] * r[i];
    p = z;
    double rz = dot(r, z);
    while (it < opts.max_iter) {
      spmv(a, p, q);
      const double pq = dot(p, q);
      if (pq == 0.0) break;
      const double alpha = rz / pq;
      for (std::size_t i = 0; i < n; ++i) {
        x[i] += alpha * p[i];
        r[i] -= alpha * q[i];
      }
      ++it;
      rel = norm2(r) / bnorm;
      if (rel <= opts.tol) break;
      for (std::size_t i = 0; i < n; ++i) z[i] = dinv[i] * r[i];
      const double rz_new = dot(r, z);
      const double beta = rz_new / rz;
      rz = rz_new;
      for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    // Report the true residual, not the recursively updated one.
    residual(a, x, b, r);
    rel = norm2(r) / bnorm;
  }
  out.x = std::move(x);
  out.report = {it, rel, rel <= opts.tol};
  return out;
}

SolveResult bicgstab_solve(const SparseMatrix& a, std::span<const double> b, const SolverOptions& opts,
                           std::span<const double> guess) {
  check_square(a, b, "bicgstab_solve");
  const std::size_t n = b.size();
  SolveResult out;
  const double bnorm = norm2(b);
  if (bnorm == 0.0) {
    out.x.assign(n, 0.0);
    out.report.converged = true;
    return out;
  }
  auto x = initial_iterate(guess, n);
  const auto dinv = inverse_diagonal(a);
  std::vector<double> r(n), rhat(n), p(n), v(n), s(n), t(n), y(n), z(n);
  residual(a, x, b, r);
  double rel = norm2(r) / bnorm;
  int it = 0;
  int restarts = 0;
  // Restarts: one after a breakdown, a few more when the recursive residual
  // drifts away from the true one near convergence.
  int refreshes = 0;
  constexpr double tiny = 1e-300;

  while (rel > opts.tol && it < opts.max_iter) {
    rhat = r;
    double rho = 1.0, alpha = 1.0, omega = 1.0;
    std::fill(p.begin(), p.end(), 0.0);
    std::fill(v.begin(), v.end(), 0.0);
    bool breakdown = false;
    while (it < opts.max_iter) {
      const double rho_new = dot(rhat, r);
      if (std::abs(rho_new) < tiny || std::abs(omega) < tiny) {
        breakdown = true;
        break;
      }
      const double beta = (rho_new / rho) * (alpha / omega);
      rho = rho_new;
      for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
      for (std::size_t i = 0; i < n; ++i) y[i] = dinv[i] * p[i];
      spmv(a, y, v);
      const double rv = dot(rhat, v);
      if (std::abs(rv) < tiny) {
        breakdown = true;
        break;
      }
      alpha = rho / rv;
      for (std::size_t i = 0; i < n; ++i) s[i] = r[i] - alpha * v[i];
      ++it;
      if (norm2(s) / bnorm <= opts.tol) {
        for (std::size_t i = 0; i < n; ++i) x[i] += alpha * y[i];
        r = s;
        break;
      }
      for (std::size_t i = 0; i < n; ++i) z[i] = dinv[i] * s[i];
      spmv(a, z, t);
      const double tt = dot(t, t);
      omega = tt > 0.0 ? dot(t, s) / tt : 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        x[i] += alpha * y[i] + omega * z[i];
        r[i] = s[i] - omega * t[i];
      }
      if (norm2(r) / bnorm <= opts.tol) break;
    }
    residual(a, x, b, r);
    rel = norm2(r) / bnorm;
    if (rel <= opts.tol) break;
    if (breakdown) {
      if (restarts++ >= 1) break;
    } else if (refreshes++ >= 5) {
      break;
    }
  }
  out.x = std::move(x);
  out.report = {it, rel, rel <= opts.tol};
  return out;
}

}  // namespace tumorsim
