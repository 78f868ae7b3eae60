#pragma once

#include <limits>
#include <utility>
#include <vector>

namespace hdrelay {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kLpFeasibilityTolerance = 1e-9;

enum class RowSense { Le, Ge, Eq };

struct LinearRow {
  std::vector<std::pair<int, double>> terms;  // (variable, coefficient)
  RowSense sense = RowSense::Le;
  double rhs = 0.0;
};

// minimize c.x  s.t.  rows,  lower <= x <= upper  (lower finite).
struct LinearProgram {
  std::vector<double> objective;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<LinearRow> rows;

  int num_vars() const { return static_cast<int>(objective.size()); }
  int add_var(double cost, double lo = 0.0, double hi = kInf);
  int add_row(LinearRow row);
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationCap };

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> x;
  double objective = 0.0;
  int pivots = 0;
};

struct LpOptions {
  int max_pivots = 200000;
  bool bland_only = false;
  // Consecutive degenerate pivots before switching to Bland's rule.
  int degenerate_switch = 50;
};

// Dense two-phase primal simplex. Optimal solutions are re-derived from the
// final basis and checked against the original rows; a failed check retries
// with Bland's rule and then throws NumericalInstability.
LpSolution lp_solve(const LinearProgram& lp, const LpOptions& options = {});

}  // namespace hdrelay
