#pragma once

#include <vector>

#include <gmpxx.h>

namespace pufent::detail {

/// Exact primal simplex for  max c.x  s.t.  A x <= b, x >= 0, with b >= 0 so
/// the slack basis is feasible. Bland's rule guarantees termination on the
/// degenerate problems the threshold test produces.
struct LinearProgram {
  std::vector<std::vector<mpq_class>> a;
  std::vector<mpq_class> b;
  std::vector<mpq_class> c;
};

struct LpSolution {
  bool bounded = true;
  mpq_class objective;
  std::vector<mpq_class> x;
};

LpSolution solve_max(const LinearProgram& lp);

}  // namespace pufent::detail
