// hdrelay command line tool.
//   hdrelay [--config FILE] gen|solve|mincut|group|compare|bench ...
// Exit status: 0 success, 1 usage or input error, 2 solver failure.

#include <algorithm>
#include <cstdint>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hdrelay/baselines.hpp"
#include "hdrelay/error.hpp"
#include "hdrelay/experiments.hpp"
#include "hdrelay/generators.hpp"
#include "hdrelay/report.hpp"
#include "hdrelay/schedule_opt.hpp"
#include "hdrelay/serialization.hpp"
#include "hdrelay/sfm.hpp"

using namespace hdrelay;
using nlohmann::json;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitSolver = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Errors caused by the inputs rather than by a solver.
bool is_input_error(ErrorKind k) {
  switch (k) {
    case ErrorKind::SelfLoop:
    case ErrorKind::DuplicateEdge:
    case ErrorKind::BadGainVariant:
    case ErrorKind::SourceEqualsDestination:
    case ErrorKind::BadNodeIndex:
    case ErrorKind::BadWidths:
    case ErrorKind::BadSize:
    case ErrorKind::BadArgument:
    case ErrorKind::ParseError:
    case ErrorKind::InvalidSchedule:
    case ErrorKind::ModelMismatch:
    case ErrorKind::NotLayered:
    case ErrorKind::LayerTooThin:
      return true;
    default:
      return false;
  }
}

// Shared by every leaf command.
struct Common {
  std::string in, out, format = "json";
  std::uint64_t seed = 1;
};

void add_common(CLI::App* app, Common& c, bool csv_ok, bool needs_in) {
  if (needs_in) app->add_option("--in", c.in, "input network JSON")->required();
  app->add_option("--out", c.out, "output file (default stdout)");
  auto* f = app->add_option("--format", c.format, "output format");
  f->check(csv_ok ? CLI::IsMember({"json", "csv"}) : CLI::IsMember({"json"}));
  app->add_option("--seed", c.seed, "random seed");
}

void emit(const Common& c, const std::string& text) {
  if (c.out.empty())
    std::cout << text << (text.empty() || text.back() == '\n' ? "" : "\n");
  else
    write_text_file(c.out, text + (text.empty() || text.back() == '\n' ? "" : "\n"));
}

void emit_json(const Common& c, json doc) {
  if (doc.is_object() && !doc.contains("version")) doc["version"] = version();
  emit(c, doc.dump(2));
}

Network load_network(const std::string& path) { return parse_network(read_text_file(path)); }

// ---- gen --------------------------------------------------------------------

struct GenArgs {
  Common c;
  std::string family = "layered", gains = "complex";
  std::vector<int> widths;
  int layers = 4, width = 2, nodes = 6, relays = 4, k = 3, p = 2;
  double edge_prob = 0.5, power = 10.0;
};

GainDist gain_dist(const GenArgs& a) {
  if (a.gains == "unit") return GainDist::unit();
  if (a.gains == "gaussian") return GainDist::gaussian(a.power);
  if (a.gains == "complex") return GainDist::complex_gaussian(a.power);
  return GainDist::adt_levels(a.k, a.p);
}

std::vector<int> widths_of(const std::vector<int>& explicit_widths, int layers, int width) {
  if (!explicit_widths.empty()) return explicit_widths;
  if (layers < 2) throw UsageError("--layers must be at least 2");
  std::vector<int> w(static_cast<std::size_t>(layers), width);
  w.front() = w.back() = 1;
  return w;
}

int run_gen(const GenArgs& a) {
  Network net = [&] {
    if (a.family == "layered") return gen_layered(widths_of(a.widths, a.layers, a.width), gain_dist(a), a.c.seed);
    if (a.family == "line") return gen_line_two_hop(a.nodes, gain_dist(a), a.c.seed);
    return gen_random(a.relays, a.edge_prob, gain_dist(a), a.c.seed);
  }();
  json doc = to_json(net);
  doc["generator"] = {{"family", a.family}, {"gains", a.gains}, {"power", a.power}, {"seed", a.c.seed},
                      {"version", version()}};
  emit(a.c, doc.dump(2));
  return 0;
}

// ---- solve ------------------------------------------------------------------

struct SolveArgs {
  Common c;
  int problem = 3;
  std::string objective = "rate", grouping = "auto", mincut = "auto";
  std::optional<double> mu1, mu2;
  double c_min = 0.0;
  int max_nodes = kDefaultDenseCap;
  bool fix_terminals = false;
};

MinCutOptions::Method parse_method(const std::string& s) {
  if (s == "brute") return MinCutOptions::Method::Brute;
  if (s == "minnorm") return MinCutOptions::Method::MinNorm;
  return MinCutOptions::Method::Auto;
}

int run_solve(const SolveArgs& a) {
  const Network net = load_network(a.c.in);
  ObjectiveSpec obj = a.objective == "rate" ? ObjectiveSpec::rate_max() : ObjectiveSpec::duty_min(a.c_min);
  if (a.mu1 || a.mu2) obj = ObjectiveSpec{a.mu1.value_or(0.0), a.mu2.value_or(0.0), a.c_min};
  SolverOptions opt;
  opt.max_nodes = a.max_nodes;
  opt.fix_terminals = a.fix_terminals;
  opt.mincut.method = parse_method(a.mincut);

  SolveResult r;
  if (a.problem == 1) {
    r = solve_problem1(net, opt);
  } else if (a.problem == 2) {
    r = solve_problem2(net, obj, opt);
  } else {
    const auto td = decompose(net, parse_grouping_kind(a.grouping));
    const bool lindet = net.model().kind == ModelKind::LinearDeterministic;
    r = lindet && a.objective == "rate" && !a.mu1 && !a.mu2 ? solve_problem3_lindet(net, td, opt)
                                                             : solve_problem3(net, td, obj, opt);
  }
  json doc = to_json(r);
  doc["problem"] = a.problem;
  doc["objective"] = {{"mu1", obj.mu1}, {"mu2", obj.mu2}, {"c_min", obj.c_min}};
  emit_json(a.c, doc);
  return r.status == SolveStatus::IterationCap ? kExitSolver : 0;
}

// ---- mincut -----------------------------------------------------------------

struct MinCutArgs {
  Common c;
  std::string schedule, method = "auto";
};

int run_mincut(const MinCutArgs& a) {
  const Network net = load_network(a.c.in);
  MinCutOptions opt;
  opt.method = parse_method(a.method);
  std::optional<CutObjective> obj;
  std::string weighting = "full_duplex";
  if (!a.schedule.empty()) {
    const json doc = json::parse(read_text_file(a.schedule), nullptr, false);
    if (doc.is_discarded()) throw Error(ErrorKind::ParseError, "'" + a.schedule + "' is not valid JSON");
    if (doc.value("type", "") == "group_schedule") {
      obj = CutObjective::grouped(net, group_schedule_from_json(doc));
      weighting = "group_schedule";
    } else {
      obj = CutObjective::joint(net, schedule_from_json(doc));
      weighting = "schedule";
    }
  } else {
    obj = CutObjective::full_duplex(net);
  }
  json doc = to_json(min_cut(*obj, opt));
  doc["weighting"] = weighting;
  emit_json(a.c, doc);
  return 0;
}

// ---- group / compare --------------------------------------------------------

struct GroupArgs {
  Common c;
  std::string grouping = "auto";
};

int run_group(const GroupArgs& a) {
  emit_json(a.c, group_report(load_network(a.c.in), parse_grouping_kind(a.grouping)));
  return 0;
}

struct CompareArgs {
  Common c;
  int dense_cap = kDefaultDenseCap;
};

int run_compare(const CompareArgs& a) {
  emit_json(a.c, compare_report(load_network(a.c.in), a.c.seed, a.dense_cap));
  return 0;
}

// ---- bench ------------------------------------------------------------------

template <typename Row>
std::string rows_json(const std::vector<Row>& rows) {
  json arr = json::array();
  for (const auto& r : rows) arr.push_back(to_json(r));
  return arr.dump(2);
}

struct BenchArgs {
  Common c;
  std::vector<int> layers{3, 4, 5, 6}, widths{1, 3, 3, 1};
  std::vector<double> powers;
  int width = 2, trials = 3, points = 20, workers = 1, dense_cap = kDefaultDenseCap;
  std::string solver = "grouped3";
  bool no_probe = false, per_instance = false;
};

int run_bench_timing(const BenchArgs& a) {
  TimingSpec s;
  s.layers = a.layers;
  s.width = a.width;
  s.trials = a.trials;
  if (!a.powers.empty()) s.power = a.powers.front();
  s.seed = a.c.seed;
  s.dense_cap = a.dense_cap;
  s.workers = a.workers;
  const auto rows = run_timing(s);
  emit(a.c, a.c.format == "csv" ? timing_csv(rows) : rows_json(rows));
  for (const auto& r : rows)
    if (r.check == "mismatch") return kExitSolver;
  return 0;
}

int run_bench_duty(const BenchArgs& a) {
  DutySpec s;
  s.widths = a.widths;
  if (!a.powers.empty()) s.powers = a.powers;
  s.points = a.points;
  s.trials = a.trials;
  s.seed = a.c.seed;
  s.solver = parse_solver_kind(a.solver);
  s.probe_infeasible = !a.no_probe;
  s.workers = a.workers;
  const auto rows = run_duty_curve(s);
  emit(a.c, a.c.format == "csv" ? duty_csv(rows) : rows_json(rows));
  return 0;
}

int run_bench_ratio(const BenchArgs& a) {
  RatioSpec s;
  s.layers = a.layers.empty() ? 4 : a.layers.front();
  s.width = a.width;
  if (!a.powers.empty()) s.powers = a.powers;
  s.trials = a.trials;
  s.seed = a.c.seed;
  s.solver = parse_solver_kind(a.solver);
  s.workers = a.workers;
  const auto inst = run_ratio_instances(s);
  if (a.per_instance) {
    emit(a.c, a.c.format == "csv" ? ratio_instances_csv(inst) : rows_json(inst));
  } else {
    const auto rows = summarize_ratios(inst, s.seed);
    emit(a.c, a.c.format == "csv" ? ratio_csv(rows) : rows_json(rows));
  }
  return 0;
}

// ---- config -----------------------------------------------------------------

// Pulls "--config FILE" out of args and appends "--key value" for every config
// key the command line does not already set.
std::vector<std::string> apply_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
  }
  if (path.empty()) return args;
  const json cfg = json::parse(read_text_file(path), nullptr, false);
  if (cfg.is_discarded() || !cfg.is_object()) throw UsageError("config '" + path + "' is not a JSON object");
  std::set<std::string> given;
  for (const auto& a : args)
    if (a.rfind("--", 0) == 0) given.insert(a.substr(2, a.find('=') == std::string::npos ? std::string::npos : a.find('=') - 2));
  auto scalar = [](const json& v) -> std::string {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer() || v.is_number_unsigned()) return v.dump();
    if (v.is_number()) return format_double(v.get<double>());
    throw UsageError("config values must be strings, numbers, booleans or arrays of those");
  };
  for (const auto& [key, v] : cfg.items()) {
    if (given.count(key)) continue;
    if (v.is_boolean()) {
      if (v.get<bool>()) args.push_back("--" + key);
      continue;
    }
    std::string value;
    if (v.is_array()) {
      for (const auto& x : v) value += (value.empty() ? "" : ",") + scalar(x);
    } else {
      value = scalar(v);
    }
    args.push_back("--" + key);
    args.push_back(value);
  }
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Half-duplex relay scheduling: cut-set bounds, schedule optimization, experiments"};
  app.set_version_flag("--version", std::string(version()));
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "JSON file of option values (keys are option names)");

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "generate a random network");
  add_common(g, gen.c, false, false);
  g->add_option("--family", gen.family)->check(CLI::IsMember({"layered", "line", "random"}));
  g->add_option("--widths", gen.widths, "layer widths, e.g. 1,3,3,1")->delimiter(',');
  g->add_option("--layers", gen.layers, "layer count when --widths is absent");
  g->add_option("--width", gen.width, "relay layer width when --widths is absent");
  g->add_option("--nodes", gen.nodes, "line: node count");
  g->add_option("--relays", gen.relays, "random: relay count");
  g->add_option("--edge-prob", gen.edge_prob, "random: edge probability")->check(CLI::Range(0.0, 1.0));
  g->add_option("--gains", gen.gains)->check(CLI::IsMember({"unit", "gaussian", "complex", "adt"}));
  g->add_option("--P,--power", gen.power, "gain variance");
  g->add_option("--k", gen.k, "adt: max shift level");
  g->add_option("--p", gen.p, "adt: field size");

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "optimize a schedule");
  add_common(s, solve.c, false, true);
  s->add_option("--problem", solve.problem, "1 dense rate, 2 dense general, 3 grouped")->check(CLI::Range(1, 3));
  s->add_option("--objective", solve.objective)->check(CLI::IsMember({"rate", "duty"}));
  s->add_option("--c-min", solve.c_min, "minimum rate");
  s->add_option("--mu1", solve.mu1, "rate weight (overrides --objective)");
  s->add_option("--mu2", solve.mu2, "duty weight (overrides --objective)");
  s->add_option("--grouping", solve.grouping)->check(CLI::IsMember({"auto", "heuristic", "layered", "line"}));
  s->add_option("--max-nodes", solve.max_nodes, "node cap of the dense solvers");
  s->add_option("--mincut", solve.mincut)->check(CLI::IsMember({"auto", "brute", "minnorm"}));
  s->add_flag("--fix-terminals", solve.fix_terminals, "S always transmits, D always receives");

  MinCutArgs mc;
  auto* m = app.add_subcommand("mincut", "minimum cut under a schedule");
  add_common(m, mc.c, false, true);
  m->add_option("--schedule", mc.schedule, "schedule or group_schedule JSON (default full duplex)");
  m->add_option("--method", mc.method)->check(CLI::IsMember({"auto", "brute", "minnorm"}));

  GroupArgs grp;
  auto* gr = app.add_subcommand("group", "node grouping and tree decomposition");
  add_common(gr, grp.c, false, true);
  gr->add_option("--grouping", grp.grouping)->check(CLI::IsMember({"auto", "heuristic", "layered", "line"}));

  CompareArgs cmp;
  auto* c = app.add_subcommand("compare", "optimized schedule against the baselines");
  add_common(c, cmp.c, false, true);
  c->add_option("--dense-cap", cmp.dense_cap, "largest network for the dense solver");

  auto* bench = app.add_subcommand("bench", "experiments");
  bench->require_subcommand(1);
  BenchArgs bt, bd, br;
  bt.c.format = bd.c.format = br.c.format = "csv";
  br.layers = {4};
  br.width = 4;
  br.trials = 10;
  bd.trials = 1;
  auto* t = bench->add_subcommand("timing", "solver wall time against network depth");
  add_common(t, bt.c, true, false);
  t->add_option("--layers", bt.layers, "layer counts")->delimiter(',');
  t->add_option("--width", bt.width);
  t->add_option("--trials", bt.trials)->check(CLI::PositiveNumber);
  t->add_option("--P,--power", bt.powers, "gain variance")->delimiter(',');
  t->add_option("--dense-cap", bt.dense_cap);
  t->add_option("--workers", bt.workers)->check(CLI::PositiveNumber);
  auto* d = bench->add_subcommand("duty", "minimum duty cycle against c_min");
  add_common(d, bd.c, true, false);
  d->add_option("--widths", bd.widths)->delimiter(',');
  d->add_option("--P,--power", bd.powers, "gain variances")->delimiter(',');
  d->add_option("--points", bd.points)->check(CLI::Range(2, 100000));
  d->add_option("--trials", bd.trials)->check(CLI::PositiveNumber);
  d->add_option("--solver", bd.solver)->check(CLI::IsMember({"brute2", "grouped3"}));
  d->add_flag("--no-probe", bd.no_probe, "skip the c_min above rate_max row");
  d->add_option("--workers", bd.workers)->check(CLI::PositiveNumber);
  auto* r = bench->add_subcommand("ratio", "half-duplex over full-duplex ratios");
  add_common(r, br.c, true, false);
  r->add_option("--layers", br.layers)->delimiter(',');
  r->add_option("--width", br.width);
  r->add_option("--P,--power", br.powers, "gain variances")->delimiter(',');
  r->add_option("--trials", br.trials)->check(CLI::PositiveNumber);
  r->add_option("--solver", br.solver)->check(CLI::IsMember({"brute2", "grouped3"}));
  r->add_flag("--per-instance", br.per_instance, "one row per network instead of summaries");
  r->add_option("--workers", br.workers)->check(CLI::PositiveNumber);

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = apply_config(std::move(args));
    std::reverse(args.begin(), args.end());  // CLI11 consumes from the back
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    if (code == 0) return 0;
    std::cerr << app.help();
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  try {
    if (g->parsed()) return run_gen(gen);
    if (s->parsed()) return run_solve(solve);
    if (m->parsed()) return run_mincut(mc);
    if (gr->parsed()) return run_group(grp);
    if (c->parsed()) return run_compare(cmp);
    if (t->parsed()) return run_bench_timing(bt);
    if (d->parsed()) return run_bench_duty(bd);
    if (r->parsed()) return run_bench_ratio(br);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return is_input_error(e.kind()) ? kExitUsage : kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolver;
  }
  return kExitUsage;
}
