#include "rational_simplex.hpp"

#include <stdexcept>

namespace pufent::detail {

LpSolution solve_max(const LinearProgram& lp) {
  const std::size_t rows = lp.a.size();
  const std::size_t vars = lp.c.size();
  const std::size_t cols = vars + rows;  // structural + slack; rhs kept apart
  if (lp.b.size() != rows) throw std::invalid_argument("rhs size mismatch");

  std::vector<std::vector<mpq_class>> t(rows, std::vector<mpq_class>(cols));
  std::vector<mpq_class> rhs(lp.b);
  std::vector<std::size_t> basis(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    if (lp.a[i].size() != vars) throw std::invalid_argument("constraint width mismatch");
    if (sgn(rhs[i]) < 0) throw std::invalid_argument("slack basis infeasible: negative rhs");
    for (std::size_t j = 0; j < vars; ++j) t[i][j] = lp.a[i][j];
    t[i][vars + i] = 1;
    basis[i] = vars + i;
  }
  // Reduced costs of the objective row: z - c.x = 0.
  std::vector<mpq_class> cost(cols);
  for (std::size_t j = 0; j < vars; ++j) cost[j] = -lp.c[j];
  mpq_class objective = 0;

  for (;;) {
    std::size_t enter = cols;
    for (std::size_t j = 0; j < cols; ++j) {
      if (sgn(cost[j]) < 0) {
        enter = j;
        break;
      }
    }
    if (enter == cols) break;

    std::size_t leave = rows;
    mpq_class best_ratio;
    for (std::size_t i = 0; i < rows; ++i) {
      if (sgn(t[i][enter]) <= 0) continue;
      mpq_class ratio = rhs[i] / t[i][enter];
      if (leave == rows || ratio < best_ratio ||
          (ratio == best_ratio && basis[i] < basis[leave])) {
        leave = i;
        best_ratio = ratio;
      }
    }
    if (leave == rows) return LpSolution{false, 0, {}};

    const mpq_class pivot = t[leave][enter];
    for (std::size_t j = 0; j < cols; ++j) {
      if (sgn(t[leave][j]) != 0) t[leave][j] /= pivot;
    }
    rhs[leave] /= pivot;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == leave || sgn(t[i][enter]) == 0) continue;
      const mpq_class factor = t[i][enter];
      for (std::size_t j = 0; j < cols; ++j) {
        if (sgn(t[leave][j]) != 0) t[i][j] -= factor * t[leave][j];
      }
      rhs[i] -= factor * rhs[leave];
    }
    if (sgn(cost[enter]) != 0) {
      const mpq_class factor = cost[enter];
      for (std::size_t j = 0; j < cols; ++j) {
        if (sgn(t[leave][j]) != 0) cost[j] -= factor * t[leave][j];
      }
      objective -= factor * rhs[leave];
    }
    basis[leave] = enter;
  }

  LpSolution solution;
  solution.objective = objective;
  solution.x.assign(vars, 0);
  for (std::size_t i = 0; i < rows; ++i) {
    if (basis[i] < vars) solution.x[basis[i]] = rhs[i];
  }
  return solution;
}

}  // namespace pufent::detail
