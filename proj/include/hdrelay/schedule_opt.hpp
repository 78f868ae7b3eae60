#pragma once

#include <variant>
#include <vector>

#include "hdrelay/grouping.hpp"
#include "hdrelay/lp.hpp"
#include "hdrelay/network.hpp"
#include "hdrelay/schedule.hpp"
#include "hdrelay/sfm.hpp"

namespace hdrelay {

// minimize mu1 * R + mu2 * T_tot subject to R >= c_min.
struct ObjectiveSpec {
  double mu1 = -1.0;
  double mu2 = 0.0;
  double c_min = 0.0;

  static ObjectiveSpec rate_max() { return {-1.0, 0.0, 0.0}; }
  static ObjectiveSpec duty_min(double c_min) { return {0.0, 1.0, c_min}; }
  // With mu1 = 0 the rate is pinned to c_min.
  bool pins_rate() const { return mu1 == 0.0; }
};

enum class SolveStatus { Optimal, Infeasible, IterationCap };

struct SolveResult {
  SolveStatus status = SolveStatus::Infeasible;
  double rate = 0.0;
  double t_tot = 0.0;
  std::variant<std::monostate, Schedule, GroupSchedule> schedule;
  // Generated cuts whose constraint is tight at the returned point.
  std::vector<Cut> active_cuts;
  int generated_cuts = 0;
  int iterations = 0;
  // Min cut under the returned schedule, from the last separation call.
  double separation_value = 0.0;
  double wall_ms = 0.0;
};

enum class P1Check { Auto, Exhaustive, Sufficient, Skip };

inline constexpr int kDefaultDenseCap = 12;
inline constexpr double kSeparationTolerance = 1e-7;

struct SolverOptions {
  int max_nodes = kDefaultDenseCap;  // dense problems only
  int max_iterations = 1000;         // constraint-generation rounds
  double separation_tol = kSeparationTolerance;
  MinCutOptions mincut;
  // Restrict to modes where S transmits and D receives.
  bool fix_terminals = false;
  P1Check p1_check = P1Check::Auto;
};

// max R over dense schedules. Throws NetworkTooLarge above max_nodes.
SolveResult solve_problem1(const Network& net, const SolverOptions& options = {});
// General objective over dense schedules.
SolveResult solve_problem2(const Network& net, const ObjectiveSpec& obj, const SolverOptions& options = {});

// Local distributions on the bags of a tree decomposition. Throws
// GroupingInvalid when the bags break P1 or are not a tree decomposition of
// the network's clique graph.
SolveResult solve_problem3(const Network& net, const TreeDecomposition& td, const ObjectiveSpec& obj,
                           const SolverOptions& options = {});
// Builds the clique graph of `grouping` and decomposes it first.
SolveResult solve_problem3(const Network& net, const NodeGrouping& grouping, const ObjectiveSpec& obj,
                           const SolverOptions& options = {});

// Rate maximization on a linear deterministic network; the rate is the
// half-duplex capacity. Throws ModelMismatch on Gaussian networks.
SolveResult solve_problem3_lindet(const Network& net, const TreeDecomposition& td,
                                  const SolverOptions& options = {});
SolveResult solve_problem3_lindet(const Network& net, const NodeGrouping& grouping,
                                  const SolverOptions& options = {});

std::string to_string(SolveStatus s);

}  // namespace hdrelay
