#include "hdrelay/report.hpp"

#include <cmath>

#include "hdrelay/baselines.hpp"
#include "hdrelay/error.hpp"
#include "hdrelay/serialization.hpp"

namespace hdrelay {

using nlohmann::json;

namespace {

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

}  // namespace

json cut_nodes(const Cut& c) { return members(c.omega()); }

json to_json(const SolveResult& r) {
  json cuts = json::array();
  for (const auto& c : r.active_cuts) cuts.push_back(cut_nodes(c));
  json sched = std::visit(
      [](const auto& s) -> json {
        if constexpr (std::is_same_v<std::decay_t<decltype(s)>, std::monostate>)
          return nullptr;
        else
          return hdrelay::to_json(s);
      },
      r.schedule);
  return json{{"status", to_string(r.status)},
              {"rate", r.rate},
              {"t_tot", r.t_tot},
              {"schedule", sched},
              {"active_cuts", cuts},
              {"generated_cuts", r.generated_cuts},
              {"iterations", r.iterations},
              {"separation_value", r.separation_value},
              {"wall_ms", r.wall_ms}};
}

json to_json(const MinCutResult& r) {
  return json{{"omega", cut_nodes(r.omega)},
              {"value", r.value},
              {"method", r.method == MinCutMethod::Brute ? "brute" : "min_norm"},
              {"certificate_gap", r.certificate_gap},
              {"iterations", r.iterations}};
}

json to_json(const TreeDecomposition& td, const UndirectedGraph& g) {
  json edges = json::array();
  for (const auto& [a, b] : td.tree_edges) edges.push_back({a, b});
  const auto problems = tree_decomposition_violations(g, td);
  return json{{"bags", td.bags},
              {"tree_edges", edges},
              {"width", td.width()},
              {"valid", problems.empty()},
              {"violations", problems}};
}

GroupingKind parse_grouping_kind(const std::string& s) {
  if (s == "auto") return GroupingKind::Auto;
  if (s == "heuristic") return GroupingKind::Heuristic;
  if (s == "layered") return GroupingKind::Layered;
  if (s == "line") return GroupingKind::Line;
  throw Error(ErrorKind::BadArgument, "unknown grouping '" + s + "'");
}

std::string to_string(GroupingKind k) {
  switch (k) {
    case GroupingKind::Auto: return "auto";
    case GroupingKind::Heuristic: return "heuristic";
    case GroupingKind::Layered: return "layered";
    case GroupingKind::Line: return "line";
  }
  return "auto";
}

namespace {

bool spans_at_most_two(const Network& net) {
  for (const auto& e : net.edges())
    if (std::abs(e.to - e.from) > 2) return false;
  return true;
}

GroupingKind resolve(const Network& net, GroupingKind kind) {
  if (kind != GroupingKind::Auto) return kind;
  if (detect_layers(net)) return GroupingKind::Layered;
  if (spans_at_most_two(net)) return GroupingKind::Line;
  return GroupingKind::Heuristic;
}

}  // namespace

TreeDecomposition decompose(const Network& net, GroupingKind kind) {
  switch (resolve(net, kind)) {
    case GroupingKind::Layered: return layered_decomposition(net);
    case GroupingKind::Line: return line_two_hop_decomposition(net);
    default: return tree_decompose(build_clique_graph(net, heuristic_grouping(net)));
  }
}

json group_report(const Network& net, GroupingKind kind) {
  kind = resolve(net, kind);
  const TreeDecomposition td = decompose(net, kind);
  // The heuristic's own groups are reported next to the bags built from them.
  const NodeGrouping groups = kind == GroupingKind::Heuristic ? heuristic_grouping(net) : td.grouping();
  json violations = json::array();
  for (const auto& v : sufficient_condition_violations(net, groups))
    violations.push_back({{"rule", v.rule}, {"node", v.node}, {"group", v.group}, {"message", v.message}});
  json p1 = nullptr;
  if (net.num_nodes() - 2 <= kP1ExhaustiveCap) p1 = check_p1_exhaustive(net, td.grouping());
  return json{{"grouping", to_string(kind)},
              {"groups", groups.groups},
              {"sufficient_conditions", {{"ok", violations.empty()}, {"violations", violations}}},
              {"p1_exhaustive", p1},
              {"decomposition", to_json(td, build_clique_graph(net, td.grouping()))}};
}

json compare_report(const Network& net, std::uint64_t seed, int dense_cap) {
  const double fd = full_duplex_bound(net);
  json out{{"seed", seed}, {"full_duplex", fd}};
  SolveResult opt;
  if (net.num_nodes() <= dense_cap) {
    SolverOptions o;
    o.max_nodes = dense_cap;
    opt = solve_problem1(net, o);
    out["solver"] = "brute2";
  } else {
    opt = solve_problem3(net, decompose(net, GroupingKind::Auto), ObjectiveSpec::rate_max());
    out["solver"] = "grouped3";
  }
  auto entry = [&](double rate) {
    return json{{"rate", rate}, {"ratio", fd > 0 ? json(rate / fd) : json(nullptr)}};
  };
  json sched;
  sched["optimized"] = entry(opt.rate);
  auto baseline = [&](const char* name, auto make) {
    try {
      sched[name] = entry(schedule_min_cut(net, make()).value);
    } catch (const Error& e) {
      sched[name] = json{{"error", e.what()}};
    }
  };
  baseline("naive", [&] { return naive_schedule(net); });
  baseline("simple_random", [&] { return simple_random_schedule(net, seed); });
  out["schedulers"] = sched;
  return out;
}

json to_json(const TimingRow& r) {
  return json{{"L", r.layers},
              {"nodes", r.nodes},
              {"solver", r.solver},
              {"trials", r.trials},
              {"failures", r.failures},
              {"mean_ms", number_or_null(r.mean_ms)},
              {"min_ms", number_or_null(r.min_ms)},
              {"max_ms", number_or_null(r.max_ms)},
              {"mean_rate", number_or_null(r.mean_rate)},
              {"max_rate_gap", r.max_rate_gap < 0 ? json(nullptr) : json(r.max_rate_gap)},
              {"check", r.check},
              {"error", r.error},
              {"seed", r.seed},
              {"version", version()}};
}

json to_json(const DutyRow& r) {
  return json{{"P", r.power},         {"trial", r.trial},   {"point", r.point},
              {"c_min", r.c_min},     {"rate_max", r.rate_max}, {"t_tot", number_or_null(r.t_tot)},
              {"status", r.status},   {"monotone", r.monotone}, {"convex", r.convex},
              {"seed", r.seed},       {"version", version()}};
}

json to_json(const RatioRow& r) {
  return json{{"P", r.power},
              {"scheduler", r.scheduler},
              {"mean_ratio", r.mean_ratio},
              {"min_ratio", r.min_ratio},
              {"max_ratio", r.max_ratio},
              {"trials", r.trials},
              {"seed", r.seed},
              {"version", version()}};
}

json to_json(const RatioInstance& r) {
  return json{{"P", r.power},
              {"trial", r.trial},
              {"full_duplex", r.full_duplex},
              {"optimized", r.optimized},
              {"naive", r.naive},
              {"simple_random", r.simple_random},
              {"seed", r.seed},
              {"version", version()}};
}

}  // namespace hdrelay
