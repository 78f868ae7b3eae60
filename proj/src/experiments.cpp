#include "hdrelay/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <sstream>
#include <thread>

#include "hdrelay/baselines.hpp"
#include "hdrelay/error.hpp"
#include "hdrelay/grouping.hpp"
#include "hdrelay/schedule_opt.hpp"
#include "hdrelay/serialization.hpp"

#ifndef HDRELAY_VERSION
#define HDRELAY_VERSION "unknown"
#endif

namespace hdrelay {

const char* version() { return HDRELAY_VERSION; }

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Runs job(i) for i in [0, n) on up to `workers` threads. Results go into
// caller-owned slots, so output order never depends on scheduling.
void parallel_for(int n, int workers, const std::function<void(int)>& job) {
  workers = std::max(1, std::min(workers, n));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) job(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (int i = next++; i < n && !failed; i = next++) {
        try {
          job(i);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

SolveResult solve_with(SolverKind kind, const Network& net, const ObjectiveSpec& obj, int dense_cap = kDefaultDenseCap) {
  SolverOptions opt;
  opt.max_nodes = dense_cap;
  if (kind == SolverKind::Dense) return solve_problem2(net, obj, opt);
  return solve_problem3(net, layered_decomposition(net), obj, opt);
}

std::vector<int> layer_widths(int layers, int width) {
  if (layers < 2) throw Error(ErrorKind::BadWidths, "need at least 2 layers");
  std::vector<int> w(static_cast<std::size_t>(layers), width);
  w.front() = w.back() = 1;
  return w;
}

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

class CsvWriter {
 public:
  explicit CsvWriter(std::initializer_list<const char*> header) {
    bool first = true;
    for (const char* h : header) {
      out_ << (first ? "" : ",") << h;
      first = false;
    }
    out_ << ",seed,version\n";
  }
  CsvWriter& cell(const std::string& s) {
    out_ << (fresh_ ? "" : ",") << quote(s);
    fresh_ = false;
    return *this;
  }
  CsvWriter& cell(double x) { return cell(std::isfinite(x) ? format_double(x) : std::string()); }
  CsvWriter& cell(int x) { return cell(std::to_string(x)); }
  CsvWriter& cell(bool b) { return cell(std::string(b ? "true" : "false")); }
  void end(std::uint64_t seed) {
    cell(std::to_string(seed)).cell(std::string(version()));
    out_ << "\n";
    fresh_ = true;
  }
  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
  bool fresh_ = true;
};

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
  return splitmix(splitmix(splitmix(base) ^ a) ^ (b * 0x632be59bd9b4e019ULL));
}

std::string to_string(SolverKind s) { return s == SolverKind::Dense ? "brute2" : "grouped3"; }

SolverKind parse_solver_kind(const std::string& s) {
  if (s == "brute2" || s == "dense") return SolverKind::Dense;
  if (s == "grouped3" || s == "grouped") return SolverKind::Grouped;
  throw Error(ErrorKind::BadArgument, "unknown solver '" + s + "' (expected brute2 or grouped3)");
}

// ---- timing -----------------------------------------------------------------

std::vector<TimingRow> run_timing(const TimingSpec& spec) {
  if (spec.trials < 1) throw Error(ErrorKind::BadArgument, "trials must be positive");
  struct Sample {
    double ms = 0, rate = 0;
    bool ok = false;
    std::string error;
  };
  const SolverKind kinds[] = {SolverKind::Dense, SolverKind::Grouped};
  const int nl = static_cast<int>(spec.layers.size());
  // Layer count x solver x trial.
  std::vector<Sample> samples(static_cast<std::size_t>(nl) * 2 * spec.trials);
  std::vector<int> nodes(nl, 0);
  for (int li = 0; li < nl; ++li) {
    const auto w = layer_widths(spec.layers[li], spec.width);
    int n = 0;
    for (int x : w) n += x;
    nodes[li] = n;
  }
  // Solves are timed one at a time unless the caller asks otherwise.
  parallel_for(static_cast<int>(samples.size()), spec.workers, [&](int idx) {
    const int trial = idx % spec.trials;
    const int k = (idx / spec.trials) % 2;
    const int li = idx / (2 * spec.trials);
    Sample& s = samples[idx];
    try {
      const Network net = gen_layered(layer_widths(spec.layers[li], spec.width),
                                      GainDist::complex_gaussian(spec.power),
                                      derive_seed(spec.seed, static_cast<std::uint64_t>(spec.layers[li]), trial));
      const auto t0 = std::chrono::steady_clock::now();
      const auto r = solve_with(kinds[k], net, ObjectiveSpec::rate_max(), spec.dense_cap);
      s.ms = elapsed_ms(t0);
      s.rate = r.rate;
      s.ok = r.status == SolveStatus::Optimal;
      if (!s.ok) s.error = to_string(r.status);
    } catch (const std::exception& e) {
      s.error = e.what();
    }
  });

  std::vector<TimingRow> rows;
  for (int li = 0; li < nl; ++li) {
    for (int k = 0; k < 2; ++k) {
      TimingRow row;
      row.layers = spec.layers[li];
      row.nodes = nodes[li];
      row.solver = to_string(kinds[k]);
      row.trials = spec.trials;
      row.seed = spec.seed;
      double sum_ms = 0, sum_rate = 0;
      int good = 0;
      row.min_ms = std::numeric_limits<double>::infinity();
      row.max_ms = 0;
      for (int t = 0; t < spec.trials; ++t) {
        const Sample& s = samples[(static_cast<std::size_t>(li) * 2 + k) * spec.trials + t];
        if (!s.ok) {
          ++row.failures;
          if (row.error.empty()) row.error = s.error;
          continue;
        }
        ++good;
        sum_ms += s.ms;
        sum_rate += s.rate;
        row.min_ms = std::min(row.min_ms, s.ms);
        row.max_ms = std::max(row.max_ms, s.ms);
      }
      if (good) {
        row.mean_ms = sum_ms / good;
        row.mean_rate = sum_rate / good;
      } else {
        row.min_ms = row.max_ms = row.mean_ms = row.mean_rate = std::numeric_limits<double>::quiet_NaN();
      }
      // Cross-check grouped against dense where both succeeded.
      double gap = -1;
      for (int t = 0; t < spec.trials; ++t) {
        const Sample& d = samples[(static_cast<std::size_t>(li) * 2) * spec.trials + t];
        const Sample& g = samples[(static_cast<std::size_t>(li) * 2 + 1) * spec.trials + t];
        if (d.ok && g.ok) gap = std::max(gap, std::abs(d.rate - g.rate));
      }
      row.max_rate_gap = gap;
      row.check = gap < 0 ? "n/a" : (gap <= 1e-5 ? "ok" : "mismatch");
      rows.push_back(row);
    }
  }
  return rows;
}

// ---- duty curve -------------------------------------------------------------

bool is_nondecreasing(const std::vector<double>& y, double slack) {
  for (std::size_t i = 1; i < y.size(); ++i)
    if (y[i] < y[i - 1] - slack) return false;
  return true;
}

bool is_convex(const std::vector<double>& y, double slack) {
  for (std::size_t i = 1; i + 1 < y.size(); ++i)
    if (y[i - 1] + y[i + 1] - 2.0 * y[i] < -slack) return false;
  return true;
}

std::vector<DutyRow> run_duty_curve(const DutySpec& spec) {
  if (spec.points < 2) throw Error(ErrorKind::BadArgument, "need at least 2 grid points");
  if (spec.trials < 1) throw Error(ErrorKind::BadArgument, "trials must be positive");
  const int np = static_cast<int>(spec.powers.size());
  const int per = spec.points + (spec.probe_infeasible ? 1 : 0);
  std::vector<std::vector<DutyRow>> curves(static_cast<std::size_t>(np) * spec.trials);
  parallel_for(static_cast<int>(curves.size()), spec.workers, [&](int idx) {
    const int pi = idx / spec.trials;
    const int trial = idx % spec.trials;
    const double power = spec.powers[pi];
    // Same draw across powers, so curves differ only by SNR.
    const Network net = gen_layered(spec.widths, GainDist::complex_gaussian(power), derive_seed(spec.seed, trial));
    const double rate_max = solve_with(spec.solver, net, ObjectiveSpec::rate_max()).rate;
    auto& rows = curves[idx];
    std::vector<double> t;
    for (int i = 0; i < per; ++i) {
      DutyRow row;
      row.power = power;
      row.trial = trial;
      row.rate_max = rate_max;
      row.seed = spec.seed;
      const bool probe = i == spec.points;
      row.point = probe ? -1 : i;
      row.c_min = probe ? 1.001 * rate_max : rate_max * i / (spec.points - 1);
      const auto r = solve_with(spec.solver, net, ObjectiveSpec::duty_min(row.c_min));
      row.status = to_string(r.status);
      row.t_tot = r.status == SolveStatus::Optimal ? r.t_tot : std::numeric_limits<double>::quiet_NaN();
      if (!probe) t.push_back(row.t_tot);
      rows.push_back(row);
    }
    const bool all_optimal = std::all_of(t.begin(), t.end(), [](double x) { return std::isfinite(x); });
    const bool mono = all_optimal && is_nondecreasing(t);
    const bool conv = all_optimal && is_convex(t);
    for (auto& row : rows) {
      row.monotone = mono;
      row.convex = conv;
    }
  });
  std::vector<DutyRow> out;
  for (auto& c : curves) out.insert(out.end(), c.begin(), c.end());
  return out;
}

// ---- ratios -----------------------------------------------------------------

std::vector<RatioInstance> run_ratio_instances(const RatioSpec& spec) {
  if (spec.trials < 1) throw Error(ErrorKind::BadArgument, "trials must be positive");
  const auto widths = layer_widths(spec.layers, spec.width);
  const int np = static_cast<int>(spec.powers.size());
  std::vector<RatioInstance> out(static_cast<std::size_t>(np) * spec.trials);
  parallel_for(static_cast<int>(out.size()), spec.workers, [&](int idx) {
    const int pi = idx / spec.trials;
    const int trial = idx % spec.trials;
    RatioInstance& r = out[idx];
    r.power = spec.powers[pi];
    r.trial = trial;
    r.seed = spec.seed;
    const Network net = gen_layered(widths, GainDist::complex_gaussian(r.power), derive_seed(spec.seed, trial));
    r.full_duplex = full_duplex_bound(net);
    if (r.full_duplex <= 0.0) throw Error(ErrorKind::ZeroFullDuplex, "full-duplex bound is zero");
    r.optimized = solve_with(spec.solver, net, ObjectiveSpec::rate_max()).rate / r.full_duplex;
    r.naive = hd_fd_ratio(net, naive_schedule(net));
    r.simple_random = hd_fd_ratio(net, simple_random_schedule(net, derive_seed(spec.seed, trial, 1)));
  });
  return out;
}

std::vector<RatioRow> summarize_ratios(const std::vector<RatioInstance>& inst, std::uint64_t seed) {
  std::vector<double> powers;
  for (const auto& r : inst)
    if (std::find(powers.begin(), powers.end(), r.power) == powers.end()) powers.push_back(r.power);
  const std::pair<const char*, double RatioInstance::*> fields[] = {
      {"optimized", &RatioInstance::optimized},
      {"naive", &RatioInstance::naive},
      {"simple_random", &RatioInstance::simple_random}};
  std::vector<RatioRow> rows;
  for (double p : powers) {
    for (const auto& [name, field] : fields) {
      RatioRow row;
      row.power = p;
      row.scheduler = name;
      row.seed = seed;
      row.min_ratio = std::numeric_limits<double>::infinity();
      row.max_ratio = -row.min_ratio;
      double sum = 0;
      for (const auto& r : inst) {
        if (r.power != p) continue;
        const double v = r.*field;
        sum += v;
        row.min_ratio = std::min(row.min_ratio, v);
        row.max_ratio = std::max(row.max_ratio, v);
        ++row.trials;
      }
      row.mean_ratio = sum / row.trials;
      rows.push_back(row);
    }
  }
  return rows;
}

// ---- CSV --------------------------------------------------------------------

std::string timing_csv(const std::vector<TimingRow>& rows) {
  CsvWriter w{"L", "nodes", "solver", "trials", "failures", "mean_ms", "min_ms", "max_ms", "mean_rate",
              "max_rate_gap", "check", "error"};
  for (const auto& r : rows) {
    w.cell(r.layers).cell(r.nodes).cell(r.solver).cell(r.trials).cell(r.failures);
    w.cell(r.mean_ms).cell(r.min_ms).cell(r.max_ms).cell(r.mean_rate);
    w.cell(r.max_rate_gap < 0 ? std::numeric_limits<double>::quiet_NaN() : r.max_rate_gap);
    w.cell(r.check).cell(r.error);
    w.end(r.seed);
  }
  return w.str();
}

std::string duty_csv(const std::vector<DutyRow>& rows) {
  CsvWriter w{"P", "trial", "point", "c_min", "rate_max", "t_tot", "status", "monotone", "convex"};
  for (const auto& r : rows) {
    w.cell(r.power).cell(r.trial).cell(r.point).cell(r.c_min).cell(r.rate_max).cell(r.t_tot);
    w.cell(r.status).cell(r.monotone).cell(r.convex);
    w.end(r.seed);
  }
  return w.str();
}

std::string ratio_csv(const std::vector<RatioRow>& rows) {
  CsvWriter w{"P", "scheduler", "mean_ratio", "min_ratio", "max_ratio", "trials"};
  for (const auto& r : rows) {
    w.cell(r.power).cell(r.scheduler).cell(r.mean_ratio).cell(r.min_ratio).cell(r.max_ratio).cell(r.trials);
    w.end(r.seed);
  }
  return w.str();
}

std::string ratio_instances_csv(const std::vector<RatioInstance>& rows) {
  CsvWriter w{"P", "trial", "full_duplex", "optimized", "naive", "simple_random"};
  for (const auto& r : rows) {
    w.cell(r.power).cell(r.trial).cell(r.full_duplex).cell(r.optimized).cell(r.naive).cell(r.simple_random);
    w.end(r.seed);
  }
  return w.str();
}

}  // namespace hdrelay
