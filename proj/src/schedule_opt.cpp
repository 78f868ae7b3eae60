#include "hdrelay/schedule_opt.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <string>

#include "hdrelay/baselines.hpp"
#include "hdrelay/cut_value.hpp"
#include "hdrelay/gauss_cut.hpp"

namespace hdrelay {

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::IterationCap: return "iteration_cap";
  }
  return "unknown";
}

namespace {

using Clock = std::chrono::steady_clock;

struct Extracted {
  std::variant<std::monostate, Schedule, GroupSchedule> schedule;
  CutObjective objective;
  double t_tot;
};

// Restricted master LP plus the problem-specific pieces of the loop.
struct Master {
  LinearProgram lp;
  int r_var = -1;
  std::function<LinearRow(NodeMask omega)> cut_row;
  std::function<Extracted(const std::vector<double>& x)> extract;
};

SolveResult generate_constraints(const Network& net, Master& m, const SolverOptions& options,
                                 Clock::time_point start) {
  SolveResult out;
  std::vector<NodeMask> cuts;
  auto add_cut = [&](NodeMask omega) {
    cuts.push_back(omega);
    m.lp.add_row(m.cut_row(omega));
  };
  add_cut(bit(net.source()));
  const NodeMask last = net.all_nodes() & ~bit(net.destination());
  if (last != cuts.front()) add_cut(last);

  auto finish = [&](SolveStatus status) {
    out.status = status;
    out.generated_cuts = static_cast<int>(cuts.size());
    out.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    return out;
  };

  for (int iter = 1; iter <= options.max_iterations; ++iter) {
    out.iterations = iter;
    const LpSolution sol = lp_solve(m.lp);
    if (sol.status == LpStatus::Infeasible) {
      out.schedule = std::monostate{};
      return finish(SolveStatus::Infeasible);
    }
    if (sol.status == LpStatus::IterationCap) return finish(SolveStatus::IterationCap);
    if (sol.status == LpStatus::Unbounded)
      throw Error(ErrorKind::NumericalInstability, "restricted master LP reported unbounded");

    Extracted ex = m.extract(sol.x);
    const double rate = sol.x[m.r_var];
    const MinCutResult mc = min_cut(ex.objective, options.mincut);
    out.rate = rate;
    out.t_tot = ex.t_tot;
    out.schedule = ex.schedule;
    out.separation_value = mc.value;
    if (mc.value >= rate - options.separation_tol) {
      out.active_cuts.clear();
      for (NodeMask omega : cuts)
        if (ex.objective.value(omega) <= rate + options.separation_tol) out.active_cuts.emplace_back(net, omega);
      return finish(SolveStatus::Optimal);
    }
    const NodeMask omega = mc.omega.omega();
    if (std::find(cuts.begin(), cuts.end(), omega) != cuts.end())
      throw Error(ErrorKind::NumericalInstability, "separation returned a cut that is already in the master LP");
    add_cut(omega);
  }
  return finish(SolveStatus::IterationCap);
}

// Bounds on R shared by all problems.
std::pair<double, double> rate_bounds(const Network& net, const ObjectiveSpec& obj, const SolverOptions& options) {
  if (obj.pins_rate()) return {obj.c_min, obj.c_min};
  return {obj.c_min, std::max(full_duplex_bound(net, options.mincut), 0.0)};
}

SolveResult infeasible_now(Clock::time_point start) {
  SolveResult r;
  r.status = SolveStatus::Infeasible;
  r.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  return r;
}

void check_objective(const ObjectiveSpec& obj) {
  if (!(obj.c_min >= 0.0)) throw Error(ErrorKind::BadArgument, "c_min must be nonnegative");
}

}  // namespace

SolveResult solve_problem2(const Network& net, const ObjectiveSpec& obj, const SolverOptions& options) {
  const auto start = Clock::now();
  check_objective(obj);
  const int n = net.num_nodes();
  if (n > options.max_nodes)
    throw Error(ErrorKind::NetworkTooLarge, std::to_string(n) + " nodes exceed the dense solver cap of " +
                                                std::to_string(options.max_nodes));
  const auto [r_lo, r_hi] = rate_bounds(net, obj, options);
  if (r_lo > r_hi) return infeasible_now(start);

  std::vector<NodeMask> modes;
  for (NodeMask m = 0; m < (NodeMask{1} << n); ++m) {
    if (options.fix_terminals && (!contains(m, net.source()) || contains(m, net.destination()))) continue;
    modes.push_back(m);
  }

  Master master;
  auto& lp = master.lp;
  for (std::size_t i = 0; i < modes.size(); ++i) lp.add_var(0.0);
  master.r_var = lp.add_var(obj.mu1, r_lo, r_hi);
  const int t_var = lp.add_var(obj.mu2, 0.0, n);
  LinearRow sum{{}, RowSense::Eq, 1.0};
  LinearRow duty{{{t_var, 1.0}}, RowSense::Eq, 0.0};
  for (std::size_t i = 0; i < modes.size(); ++i) {
    sum.terms.emplace_back(static_cast<int>(i), 1.0);
    if (modes[i]) duty.terms.emplace_back(static_cast<int>(i), -static_cast<double>(popcount(modes[i])));
  }
  lp.add_row(sum);
  lp.add_row(duty);

  auto cache = std::make_shared<CutValueCache>(net);
  master.cut_row = [&, cache](NodeMask omega) {
    LinearRow row{{{master.r_var, 1.0}}, RowSense::Le, 0.0};
    for (std::size_t i = 0; i < modes.size(); ++i) {
      const double v = half_duplex_cut_value(*cache, omega, ModeConfig{modes[i]});
      if (v != 0.0) row.terms.emplace_back(static_cast<int>(i), -v);
    }
    return row;
  };
  master.extract = [&](const std::vector<double>& x) {
    std::map<NodeMask, double> e;
    for (std::size_t i = 0; i < modes.size(); ++i)
      if (x[i] > 0.0) e[modes[i]] = x[i];
    Schedule q = Schedule::from_approximate(n, e);
    const double t = q.total_duty();
    return Extracted{q, CutObjective::joint(net, q), t};
  };
  return generate_constraints(net, master, options, start);
}

SolveResult solve_problem1(const Network& net, const SolverOptions& options) {
  return solve_problem2(net, ObjectiveSpec::rate_max(), options);
}

SolveResult solve_problem3(const Network& net, const TreeDecomposition& td, const ObjectiveSpec& obj,
                           const SolverOptions& options) {
  const auto start = Clock::now();
  check_objective(obj);
  const int n = net.num_nodes();
  if (td.num_nodes != n) throw Error(ErrorKind::GroupingInvalid, "decomposition node count differs from the network");
  for (const auto& b : td.bags) {
    if (b.empty()) throw Error(ErrorKind::GroupingInvalid, "empty bag");
    if (b.size() > 30) throw Error(ErrorKind::GroupingInvalid, "bag too large for local tables");
    if (!std::is_sorted(b.begin(), b.end()) || std::adjacent_find(b.begin(), b.end()) != b.end())
      throw Error(ErrorKind::GroupingInvalid, "bags must list distinct nodes in increasing order");
    for (NodeId v : b)
      if (v < 0 || v >= n) throw Error(ErrorKind::GroupingInvalid, "bag holds an unknown node");
  }
  const NodeGrouping grouping = td.grouping();
  const auto problems = tree_decomposition_violations(build_clique_graph(net, grouping), td);
  if (!problems.empty()) throw Error(ErrorKind::GroupingInvalid, "not a tree decomposition: " + problems.front());
  {
    P1Check mode = options.p1_check;
    if (mode == P1Check::Auto)
      mode = popcount(net.relays()) <= kP1ExhaustiveCap ? P1Check::Exhaustive : P1Check::Sufficient;
    if (mode == P1Check::Exhaustive && !check_p1_exhaustive(net, grouping))
      throw Error(ErrorKind::GroupingInvalid, "some cut-graph component lies in no bag");
    if (mode == P1Check::Sufficient) {
      const auto v = sufficient_condition_violations(net, grouping);
      if (!v.empty()) throw Error(ErrorKind::GroupingInvalid, v.front().message);
    }
  }
  const auto [r_lo, r_hi] = rate_bounds(net, obj, options);
  if (r_lo > r_hi) return infeasible_now(start);

  const auto bags = td.bag_masks();
  const std::size_t k = bags.size();
  // Global mode of local index l in bag i.
  auto expand = [&](std::size_t i, std::size_t l) {
    NodeMask m = 0;
    for (std::size_t j = 0; j < td.bags[i].size(); ++j)
      if ((l >> j) & 1U) m |= bit(td.bags[i][j]);
    return m;
  };

  Master master;
  auto& lp = master.lp;
  std::vector<int> offset(k);
  for (std::size_t i = 0; i < k; ++i) {
    offset[i] = lp.num_vars();
    for (std::size_t l = 0; l < (std::size_t{1} << td.bags[i].size()); ++l) {
      const NodeMask m = expand(i, l);
      const bool banned = options.fix_terminals &&
                          ((contains(bags[i], net.source()) && !contains(m, net.source())) ||
                           (contains(bags[i], net.destination()) && contains(m, net.destination())));
      lp.add_var(0.0, 0.0, banned ? 0.0 : kInf);
    }
  }
  master.r_var = lp.add_var(obj.mu1, r_lo, r_hi);
  const int t_var = lp.add_var(obj.mu2, 0.0, n);

  for (std::size_t i = 0; i < k; ++i) {
    LinearRow sum{{}, RowSense::Eq, 1.0};
    for (std::size_t l = 0; l < (std::size_t{1} << td.bags[i].size()); ++l)
      sum.terms.emplace_back(offset[i] + static_cast<int>(l), 1.0);
    lp.add_row(sum);
  }
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      const NodeMask overlap = bags[i] & bags[j];
      if (!overlap) continue;
      // One pattern per pair is implied by the two normalization rows.
      for (NodeMask pattern : [&] {
             std::vector<NodeMask> ps;
             for (NodeMask s = overlap;; s = (s - 1) & overlap) {
               ps.push_back(s);
               if (!s) break;
             }
             return ps;
           }()) {
        if (pattern == overlap) continue;
        LinearRow row{{}, RowSense::Eq, 0.0};
        for (std::size_t l = 0; l < (std::size_t{1} << td.bags[i].size()); ++l)
          if ((expand(i, l) & overlap) == pattern) row.terms.emplace_back(offset[i] + static_cast<int>(l), 1.0);
        for (std::size_t l = 0; l < (std::size_t{1} << td.bags[j].size()); ++l)
          if ((expand(j, l) & overlap) == pattern) row.terms.emplace_back(offset[j] + static_cast<int>(l), -1.0);
        lp.add_row(row);
      }
    }
  }
  {
    LinearRow duty{{{t_var, 1.0}}, RowSense::Eq, 0.0};
    for (NodeId v = 0; v < n; ++v) {
      std::size_t i = 0;
      while (!contains(bags[i], v)) ++i;
      for (std::size_t l = 0; l < (std::size_t{1} << td.bags[i].size()); ++l)
        if (contains(expand(i, l), v)) duty.terms.emplace_back(offset[i] + static_cast<int>(l), -1.0);
    }
    lp.add_row(duty);
  }

  auto cache = std::make_shared<CutValueCache>(net);
  master.cut_row = [&, cache](NodeMask omega) {
    LinearRow row{{{master.r_var, 1.0}}, RowSense::Le, 0.0};
    const NodeMask outside = net.all_nodes() & ~omega;
    std::map<int, double> coef;
    for (NodeMask comp : cut_components(net, omega)) {
      const int r = covering_group(bags, comp);
      if (r < 0) throw Error(ErrorKind::ComponentNotCovered, "cut-graph component lies in no bag");
      for (std::size_t l = 0; l < (std::size_t{1} << td.bags[r].size()); ++l) {
        const NodeMask m = expand(static_cast<std::size_t>(r), l);
        const double v = (*cache)(comp & omega & m, comp & outside & ~m);
        if (v != 0.0) coef[offset[r] + static_cast<int>(l)] -= v;
      }
    }
    for (auto [j, c] : coef) row.terms.emplace_back(j, c);
    return row;
  };
  master.extract = [&](const std::vector<double>& x) {
    std::vector<std::vector<double>> locals(k);
    for (std::size_t i = 0; i < k; ++i)
      locals[i].assign(x.begin() + offset[i], x.begin() + offset[i] + (1 << td.bags[i].size()));
    GroupSchedule g = GroupSchedule::from_approximate(n, td.bags, std::move(locals));
    const double t = g.total_duty();
    CutObjective o = CutObjective::grouped(net, g);
    return Extracted{std::move(g), std::move(o), t};
  };
  return generate_constraints(net, master, options, start);
}

SolveResult solve_problem3(const Network& net, const NodeGrouping& grouping, const ObjectiveSpec& obj,
                           const SolverOptions& options) {
  return solve_problem3(net, tree_decompose(build_clique_graph(net, grouping)), obj, options);
}

SolveResult solve_problem3_lindet(const Network& net, const TreeDecomposition& td, const SolverOptions& options) {
  if (net.model().kind != ModelKind::LinearDeterministic)
    throw Error(ErrorKind::ModelMismatch, "linear deterministic solver called on a Gaussian network");
  return solve_problem3(net, td, ObjectiveSpec::rate_max(), options);
}

SolveResult solve_problem3_lindet(const Network& net, const NodeGrouping& grouping, const SolverOptions& options) {
  if (net.model().kind != ModelKind::LinearDeterministic)
    throw Error(ErrorKind::ModelMismatch, "linear deterministic solver called on a Gaussian network");
  return solve_problem3(net, grouping, ObjectiveSpec::rate_max(), options);
}

}  // namespace hdrelay
