#include <optional>
#include <string>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hdrelay/baselines.hpp"
#include "hdrelay/error.hpp"
#include "hdrelay/experiments.hpp"
#include "hdrelay/generators.hpp"
#include "hdrelay/grouping.hpp"
#include "hdrelay/report.hpp"
#include "hdrelay/schedule_opt.hpp"
#include "hdrelay/serialization.hpp"
#include "hdrelay/sfm.hpp"

namespace py = pybind11;
using namespace hdrelay;
using nlohmann::json;

namespace {

// JSON crosses the boundary as text; the Python side sees dicts and lists.
py::object to_py(const json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

json from_py(const py::object& o) {
  if (py::isinstance<py::str>(o)) return json::parse(o.cast<std::string>());
  return json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

GainDist gains(const std::string& kind, double power, int k, int p) {
  if (kind == "unit") return GainDist::unit();
  if (kind == "gaussian") return GainDist::gaussian(power);
  if (kind == "complex") return GainDist::complex_gaussian(power);
  if (kind == "adt") return GainDist::adt_levels(k, p);
  throw Error(ErrorKind::BadArgument, "unknown gain kind '" + kind + "'");
}

// None -> full duplex, otherwise a schedule or group_schedule document.
CutObjective objective_for(const Network& net, const py::object& schedule) {
  if (schedule.is_none()) return CutObjective::full_duplex(net);
  const json doc = from_py(schedule);
  if (doc.value("type", "") == "group_schedule") return CutObjective::grouped(net, group_schedule_from_json(doc));
  return CutObjective::joint(net, schedule_from_json(doc));
}

MinCutOptions::Method method_of(const std::string& s) {
  if (s == "auto") return MinCutOptions::Method::Auto;
  if (s == "brute") return MinCutOptions::Method::Brute;
  if (s == "minnorm") return MinCutOptions::Method::MinNorm;
  throw Error(ErrorKind::BadArgument, "unknown min-cut method '" + s + "'");
}

template <typename Row>
py::list rows_to_py(const std::vector<Row>& rows) {
  py::list out;
  for (const auto& r : rows) out.append(to_py(to_json(r)));
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Half-duplex relay scheduling";
  m.attr("__version__") = version();

  py::register_exception<Error>(m, "HdrelayError");

  py::class_<Network>(m, "Network")
      .def_static("from_json", [](const py::object& doc) { return network_from_json(from_py(doc)); }, py::arg("doc"))
      .def("to_json", [](const Network& n) { return to_py(to_json(n)); })
      .def_property_readonly("num_nodes", &Network::num_nodes)
      .def_property_readonly("source", &Network::source)
      .def_property_readonly("destination", &Network::destination)
      .def_property_readonly("relays", [](const Network& n) { return members(n.relays()); })
      .def_property_readonly("edges",
                             [](const Network& n) {
                               std::vector<std::pair<int, int>> e;
                               for (const auto& x : n.edges()) e.emplace_back(x.from, x.to);
                               return e;
                             })
      .def("__repr__", [](const Network& n) {
        return "<Network nodes=" + std::to_string(n.num_nodes()) + " edges=" + std::to_string(n.edges().size()) + ">";
      });

  m.def(
      "gen_layered",
      [](const std::vector<int>& widths, const std::string& g, double power, std::uint64_t seed, int k, int p) {
        return gen_layered(widths, gains(g, power, k, p), seed);
      },
      py::arg("widths"), py::arg("gains") = "complex", py::arg("power") = 10.0, py::arg("seed") = 1,
      py::arg("k") = 3, py::arg("p") = 2);
  m.def(
      "gen_line_two_hop",
      [](int n, const std::string& g, double power, std::uint64_t seed, int k, int p) {
        return gen_line_two_hop(n, gains(g, power, k, p), seed);
      },
      py::arg("n"), py::arg("gains") = "gaussian", py::arg("power") = 10.0, py::arg("seed") = 1, py::arg("k") = 3,
      py::arg("p") = 2);
  m.def(
      "gen_random",
      [](int relays, double edge_prob, const std::string& g, double power, std::uint64_t seed, int k, int p) {
        return gen_random(relays, edge_prob, gains(g, power, k, p), seed);
      },
      py::arg("relays"), py::arg("edge_prob") = 0.5, py::arg("gains") = "complex", py::arg("power") = 10.0,
      py::arg("seed") = 1, py::arg("k") = 3, py::arg("p") = 2);

  m.def(
      "cut_value",
      [](const Network& net, const std::vector<int>& omega, const py::object& schedule) {
        return objective_for(net, schedule)(Cut(net, mask_of(omega)));
      },
      py::arg("net"), py::arg("omega"), py::arg("schedule") = py::none(),
      "Cut value of Omega (node list containing the source) under a schedule, full duplex when None.");
  m.def(
      "min_cut",
      [](const Network& net, const py::object& schedule, const std::string& method) {
        MinCutOptions opt;
        opt.method = method_of(method);
        return to_py(to_json(min_cut(objective_for(net, schedule), opt)));
      },
      py::arg("net"), py::arg("schedule") = py::none(), py::arg("method") = "auto");

  m.def(
      "solve",
      [](const Network& net, int problem, const std::string& objective, double c_min, std::optional<double> mu1,
         std::optional<double> mu2, const std::string& grouping, int max_nodes, bool fix_terminals) {
        ObjectiveSpec obj = objective == "rate" ? ObjectiveSpec::rate_max() : ObjectiveSpec::duty_min(c_min);
        if (objective != "rate" && objective != "duty")
          throw Error(ErrorKind::BadArgument, "objective must be 'rate' or 'duty'");
        if (mu1 || mu2) obj = ObjectiveSpec{mu1.value_or(0.0), mu2.value_or(0.0), c_min};
        SolverOptions opt;
        opt.max_nodes = max_nodes;
        opt.fix_terminals = fix_terminals;
        SolveResult r;
        if (problem == 1) {
          r = solve_problem1(net, opt);
        } else if (problem == 2) {
          r = solve_problem2(net, obj, opt);
        } else if (problem == 3) {
          r = solve_problem3(net, decompose(net, parse_grouping_kind(grouping)), obj, opt);
        } else {
          throw Error(ErrorKind::BadArgument, "problem must be 1, 2 or 3");
        }
        return to_py(to_json(r));
      },
      py::arg("net"), py::arg("problem") = 3, py::arg("objective") = "rate", py::arg("c_min") = 0.0,
      py::arg("mu1") = py::none(), py::arg("mu2") = py::none(), py::arg("grouping") = "auto",
      py::arg("max_nodes") = kDefaultDenseCap, py::arg("fix_terminals") = false);

  m.def(
      "solve_lindet",
      [](const Network& net, const std::string& grouping) {
        return to_py(to_json(solve_problem3_lindet(net, decompose(net, parse_grouping_kind(grouping)))));
      },
      py::arg("net"), py::arg("grouping") = "auto");

  m.def(
      "group", [](const Network& net, const std::string& grouping) {
        return to_py(group_report(net, parse_grouping_kind(grouping)));
      },
      py::arg("net"), py::arg("grouping") = "auto");
  m.def(
      "reconstruct_joint",
      [](const std::vector<std::vector<int>>& bags, const std::vector<std::pair<int, int>>& tree_edges,
         const py::object& group_schedule) {
        const GroupSchedule gs = group_schedule_from_json(from_py(group_schedule));
        TreeDecomposition td{gs.num_nodes(), bags, tree_edges};
        return to_py(to_json(reconstruct_joint(td, gs)));
      },
      py::arg("bags"), py::arg("tree_edges"), py::arg("group_schedule"));

  m.def("full_duplex_bound", [](const Network& net) { return full_duplex_bound(net); }, py::arg("net"));
  m.def("naive_schedule", [](const Network& net) { return to_py(to_json(naive_schedule(net))); }, py::arg("net"));
  m.def(
      "simple_random_schedule",
      [](const Network& net, std::uint64_t seed) { return to_py(to_json(simple_random_schedule(net, seed))); },
      py::arg("net"), py::arg("seed") = 1);
  m.def(
      "hd_fd_ratio",
      [](const Network& net, const py::object& schedule) {
        return hd_fd_ratio(net, schedule_from_json(from_py(schedule)));
      },
      py::arg("net"), py::arg("schedule"));
  m.def(
      "compare", [](const Network& net, std::uint64_t seed) { return to_py(compare_report(net, seed)); },
      py::arg("net"), py::arg("seed") = 1);

  m.def(
      "bench_timing",
      [](const std::vector<int>& layers, int width, int trials, double power, std::uint64_t seed, int workers) {
        TimingSpec s;
        s.layers = layers;
        s.width = width;
        s.trials = trials;
        s.power = power;
        s.seed = seed;
        s.workers = workers;
        decltype(run_timing(s)) rows;
        {
          py::gil_scoped_release release;
          rows = run_timing(s);
        }
        return rows_to_py(rows);
      },
      py::arg("layers") = std::vector<int>{3, 4, 5, 6}, py::arg("width") = 2, py::arg("trials") = 3,
      py::arg("power") = 10.0, py::arg("seed") = 1, py::arg("workers") = 1);
  m.def(
      "bench_duty",
      [](const std::vector<int>& widths, const std::vector<double>& powers, int points, int trials,
         std::uint64_t seed, const std::string& solver, int workers) {
        DutySpec s;
        s.widths = widths;
        s.powers = powers;
        s.points = points;
        s.trials = trials;
        s.seed = seed;
        s.solver = parse_solver_kind(solver);
        s.workers = workers;
        decltype(run_duty_curve(s)) rows;
        {
          py::gil_scoped_release release;
          rows = run_duty_curve(s);
        }
        return rows_to_py(rows);
      },
      py::arg("widths") = std::vector<int>{1, 3, 3, 1}, py::arg("powers") = std::vector<double>{10.0},
      py::arg("points") = 20, py::arg("trials") = 1, py::arg("seed") = 1, py::arg("solver") = "grouped3",
      py::arg("workers") = 1);
  m.def(
      "bench_ratio",
      [](int layers, int width, const std::vector<double>& powers, int trials, std::uint64_t seed,
         const std::string& solver, bool per_instance, int workers) {
        RatioSpec s;
        s.layers = layers;
        s.width = width;
        s.powers = powers;
        s.trials = trials;
        s.seed = seed;
        s.solver = parse_solver_kind(solver);
        s.workers = workers;
        std::vector<RatioInstance> inst;
        {
          py::gil_scoped_release release;
          inst = run_ratio_instances(s);
        }
        return per_instance ? rows_to_py(inst) : rows_to_py(summarize_ratios(inst, seed));
      },
      py::arg("layers") = 4, py::arg("width") = 4, py::arg("powers") = std::vector<double>{1.0, 10.0, 100.0},
      py::arg("trials") = 10, py::arg("seed") = 1, py::arg("solver") = "grouped3", py::arg("per_instance") = false,
      py::arg("workers") = 1);
}
