#include "hdrelay/lp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "hdrelay/error.hpp"

namespace hdrelay {

int LinearProgram::add_var(double cost, double lo, double hi) {
  objective.push_back(cost);
  lower.push_back(lo);
  upper.push_back(hi);
  return num_vars() - 1;
}

int LinearProgram::add_row(LinearRow row) {
  rows.push_back(std::move(row));
  return static_cast<int>(rows.size()) - 1;
}

namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kCostTol = 1e-11;

// Standard form  A y = b, y >= 0, b >= 0  with the shift x = lower + y.
struct StandardForm {
  int n_struct = 0;
  int n_cols = 0;
  int first_artificial = 0;
  std::vector<std::vector<double>> a;  // m x n_cols
  std::vector<double> b;
  std::vector<int> basis;
  double shift_cost = 0.0;
};

StandardForm standardize(const LinearProgram& lp) {
  const int n = lp.num_vars();
  struct Row {
    std::vector<double> coef;
    RowSense sense;
    double rhs;
  };
  std::vector<Row> rows;
  for (const auto& r : lp.rows) {
    Row row{std::vector<double>(static_cast<std::size_t>(n), 0.0), r.sense, r.rhs};
    for (auto [j, c] : r.terms) {
      if (j < 0 || j >= n) throw Error(ErrorKind::BadArgument, "LP row references an unknown variable");
      row.coef[j] += c;
      row.rhs -= c * lp.lower[j];
    }
    rows.push_back(std::move(row));
  }
  for (int j = 0; j < n; ++j) {
    if (!std::isfinite(lp.upper[j])) continue;
    Row row{std::vector<double>(static_cast<std::size_t>(n), 0.0), RowSense::Le, lp.upper[j] - lp.lower[j]};
    row.coef[j] = 1.0;
    rows.push_back(std::move(row));
  }
  for (auto& row : rows) {
    if (row.rhs < 0.0) {
      for (double& c : row.coef) c = -c;
      row.rhs = -row.rhs;
      if (row.sense == RowSense::Le)
        row.sense = RowSense::Ge;
      else if (row.sense == RowSense::Ge)
        row.sense = RowSense::Le;
    }
  }

  StandardForm sf;
  sf.n_struct = n;
  int slacks = 0, artificials = 0;
  for (const auto& row : rows) {
    if (row.sense != RowSense::Eq) ++slacks;
    if (row.sense != RowSense::Le) ++artificials;
  }
  sf.first_artificial = n + slacks;
  sf.n_cols = n + slacks + artificials;
  int s = n, art = sf.first_artificial;
  for (const auto& row : rows) {
    std::vector<double> full(static_cast<std::size_t>(sf.n_cols), 0.0);
    std::copy(row.coef.begin(), row.coef.end(), full.begin());
    if (row.sense == RowSense::Le) {
      full[s] = 1.0;
      sf.basis.push_back(s++);
    } else {
      if (row.sense == RowSense::Ge) full[s++] = -1.0;
      full[art] = 1.0;
      sf.basis.push_back(art++);
    }
    sf.a.push_back(std::move(full));
    sf.b.push_back(row.rhs);
  }
  for (int j = 0; j < n; ++j) sf.shift_cost += lp.objective[j] * lp.lower[j];
  return sf;
}

enum class PhaseResult { Optimal, Unbounded, IterationCap };

class Tableau {
 public:
  Tableau(const StandardForm& sf, const LpOptions& opt) : sf_(sf), opt_(opt), t_(sf.a), rhs_(sf.b), basis_(sf.basis) {
    allowed_.assign(static_cast<std::size_t>(sf.n_cols), 1);
  }

  PhaseResult run(const std::vector<double>& cost) {
    set_costs(cost);
    int degenerate = 0;
    for (;;) {
      if (pivots_ >= opt_.max_pivots) return PhaseResult::IterationCap;
      const bool bland = opt_.bland_only || degenerate >= opt_.degenerate_switch;
      int enter = -1;
      double best = -kCostTol;
      for (int j = 0; j < sf_.n_cols; ++j) {
        if (!allowed_[j] || d_[j] >= -kCostTol) continue;
        if (bland) {
          enter = j;
          break;
        }
        if (d_[j] < best) {
          best = d_[j];
          enter = j;
        }
      }
      if (enter < 0) return PhaseResult::Optimal;
      int leave = -1;
      double ratio = 0.0;
      for (std::size_t i = 0; i < t_.size(); ++i) {
        const double a = t_[i][enter];
        if (a <= kPivotTol) continue;
        const double r = rhs_[i] / a;
        if (leave < 0 || r < ratio - 1e-12 || (r <= ratio + 1e-12 && basis_[i] < basis_[leave])) {
          leave = static_cast<int>(i);
          ratio = r;
        }
      }
      if (leave < 0) return PhaseResult::Unbounded;
      degenerate = ratio <= 1e-12 ? degenerate + 1 : 0;
      pivot(leave, enter);
    }
  }

  double objective_value() const { return z_; }

  // Drives zero-level artificials out of the basis; drops redundant rows.
  void expel_artificials() {
    for (std::size_t i = 0; i < t_.size();) {
      if (basis_[i] < sf_.first_artificial) {
        ++i;
        continue;
      }
      int col = -1;
      double best = 1e-9;
      for (int j = 0; j < sf_.first_artificial; ++j)
        if (std::abs(t_[i][j]) > best) {
          best = std::abs(t_[i][j]);
          col = j;
        }
      if (col >= 0) {
        pivot(static_cast<int>(i), col);
        ++i;
      } else {
        t_.erase(t_.begin() + static_cast<std::ptrdiff_t>(i));
        rhs_.erase(rhs_.begin() + static_cast<std::ptrdiff_t>(i));
        basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(i));
        // Earlier removals all precede i, so this recovers the original index.
        removed_.push_back(static_cast<int>(i) + static_cast<int>(removed_.size()));
      }
    }
    for (int j = sf_.first_artificial; j < sf_.n_cols; ++j) allowed_[j] = 0;
  }

  const std::vector<int>& basis() const { return basis_; }
  const std::vector<double>& rhs() const { return rhs_; }
  const std::vector<int>& removed_rows() const { return removed_; }
  int pivots() const { return pivots_; }

 private:
  void set_costs(const std::vector<double>& cost) {
    d_ = cost;
    z_ = 0.0;
    for (std::size_t i = 0; i < t_.size(); ++i) {
      const double cb = cost[basis_[i]];
      if (cb == 0.0) continue;
      for (int j = 0; j < sf_.n_cols; ++j) d_[j] -= cb * t_[i][j];
      z_ += cb * rhs_[i];
    }
  }

  void pivot(int r, int c) {
    ++pivots_;
    auto& pr = t_[r];
    const double inv = 1.0 / pr[c];
    for (double& v : pr) v *= inv;
    rhs_[r] *= inv;
    pr[c] = 1.0;
    for (std::size_t i = 0; i < t_.size(); ++i) {
      if (static_cast<int>(i) == r) continue;
      const double f = t_[i][c];
      if (f == 0.0) continue;
      auto& row = t_[i];
      for (int j = 0; j < sf_.n_cols; ++j) row[j] -= f * pr[j];
      row[c] = 0.0;
      rhs_[i] -= f * rhs_[r];
      if (rhs_[i] < 0.0 && rhs_[i] > -1e-13) rhs_[i] = 0.0;
    }
    const double f = d_[c];
    if (f != 0.0) {
      for (int j = 0; j < sf_.n_cols; ++j) d_[j] -= f * pr[j];
      d_[c] = 0.0;
      z_ += f * rhs_[r];
    }
    basis_[r] = c;
  }

  const StandardForm& sf_;
  const LpOptions& opt_;
  std::vector<std::vector<double>> t_;
  std::vector<double> rhs_;
  std::vector<int> basis_;
  std::vector<double> d_;
  std::vector<char> allowed_;
  std::vector<int> removed_;
  double z_ = 0.0;
  int pivots_ = 0;
};

bool satisfies(const LinearProgram& lp, const std::vector<double>& x, double tol) {
  for (int j = 0; j < lp.num_vars(); ++j) {
    const double scale = std::max(1.0, std::abs(lp.lower[j]));
    if (x[j] < lp.lower[j] - tol * scale) return false;
    if (std::isfinite(lp.upper[j]) && x[j] > lp.upper[j] + tol * std::max(1.0, std::abs(lp.upper[j])))
      return false;
  }
  for (const auto& r : lp.rows) {
    double lhs = 0.0, mag = std::abs(r.rhs);
    for (auto [j, c] : r.terms) {
      lhs += c * x[j];
      mag += std::abs(c * x[j]);
    }
    const double t = tol * std::max(1.0, mag);
    if (r.sense == RowSense::Le && lhs > r.rhs + t) return false;
    if (r.sense == RowSense::Ge && lhs < r.rhs - t) return false;
    if (r.sense == RowSense::Eq && std::abs(lhs - r.rhs) > t) return false;
  }
  return true;
}

LpSolution solve_once(const LinearProgram& lp, const LpOptions& opt, bool* verified) {
  LpSolution out;
  *verified = true;
  for (int j = 0; j < lp.num_vars(); ++j) {
    if (!std::isfinite(lp.lower[j]))
      throw Error(ErrorKind::BadArgument, "LP variables need finite lower bounds");
    if (lp.upper[j] < lp.lower[j]) return out;
  }
  const StandardForm sf = standardize(lp);
  Tableau tab(sf, opt);

  if (sf.first_artificial < sf.n_cols) {
    std::vector<double> phase1(static_cast<std::size_t>(sf.n_cols), 0.0);
    for (int j = sf.first_artificial; j < sf.n_cols; ++j) phase1[j] = 1.0;
    const auto r = tab.run(phase1);
    out.pivots = tab.pivots();
    if (r == PhaseResult::IterationCap) {
      out.status = LpStatus::IterationCap;
      return out;
    }
    double scale = 1.0;
    for (double v : sf.b) scale = std::max(scale, std::abs(v));
    if (tab.objective_value() > kLpFeasibilityTolerance * scale) {
      out.status = LpStatus::Infeasible;
      return out;
    }
    tab.expel_artificials();
  }

  std::vector<double> cost(static_cast<std::size_t>(sf.n_cols), 0.0);
  std::copy(lp.objective.begin(), lp.objective.end(), cost.begin());
  const auto r = tab.run(cost);
  out.pivots = tab.pivots();
  if (r == PhaseResult::Unbounded) {
    out.status = LpStatus::Unbounded;
    return out;
  }
  if (r == PhaseResult::IterationCap) {
    out.status = LpStatus::IterationCap;
    return out;
  }

  // Tableau values, and values re-solved from the original columns.
  const auto& basis = tab.basis();
  std::vector<double> y(static_cast<std::size_t>(sf.n_cols), 0.0);
  for (std::size_t i = 0; i < basis.size(); ++i) y[basis[i]] = tab.rhs()[i];

  std::vector<int> rows_left;
  {
    std::vector<char> gone(sf.a.size(), 0);
    for (int i : tab.removed_rows()) gone[i] = 1;
    for (std::size_t i = 0; i < sf.a.size(); ++i)
      if (!gone[i]) rows_left.push_back(static_cast<int>(i));
  }
  std::vector<double> refined = y;
  const auto m = static_cast<Eigen::Index>(basis.size());
  if (m > 0 && static_cast<Eigen::Index>(rows_left.size()) == m) {
    Eigen::MatrixXd bm(m, m);
    Eigen::VectorXd bv(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      bv(i) = sf.b[rows_left[i]];
      for (Eigen::Index k = 0; k < m; ++k) bm(i, k) = sf.a[rows_left[i]][basis[k]];
    }
    const Eigen::VectorXd sol = bm.partialPivLu().solve(bv);
    if (sol.allFinite())
      for (Eigen::Index k = 0; k < m; ++k) refined[basis[k]] = sol(k);
  }

  auto to_x = [&](const std::vector<double>& yy) {
    std::vector<double> x(static_cast<std::size_t>(lp.num_vars()));
    for (int j = 0; j < lp.num_vars(); ++j) {
      x[j] = lp.lower[j] + std::max(0.0, yy[j]);
      if (std::isfinite(lp.upper[j])) x[j] = std::min(x[j], lp.upper[j]);
    }
    return x;
  };
  std::vector<double> x = to_x(refined);
  if (!satisfies(lp, x, kLpFeasibilityTolerance)) {
    x = to_x(y);
    *verified = satisfies(lp, x, kLpFeasibilityTolerance);
  }
  out.status = LpStatus::Optimal;
  out.x = std::move(x);
  out.objective = 0.0;
  for (int j = 0; j < lp.num_vars(); ++j) out.objective += lp.objective[j] * out.x[j];
  return out;
}

}  // namespace

LpSolution lp_solve(const LinearProgram& lp, const LpOptions& options) {
  bool verified = false;
  LpSolution s = solve_once(lp, options, &verified);
  if (s.status != LpStatus::Optimal || verified) return s;
  LpOptions bland = options;
  bland.bland_only = true;
  s = solve_once(lp, bland, &verified);
  if (s.status != LpStatus::Optimal || verified) return s;
  throw Error(ErrorKind::NumericalInstability, "simplex solution failed the post-solve feasibility check");
}

}  // namespace hdrelay
