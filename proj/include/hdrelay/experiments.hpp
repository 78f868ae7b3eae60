#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hdrelay/generators.hpp"

namespace hdrelay {

// git describe of the build.
const char* version();

// Independent stream seed for (base, a, b).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0);

enum class SolverKind { Dense, Grouped };  // "brute2" / "grouped3"
std::string to_string(SolverKind s);
SolverKind parse_solver_kind(const std::string& s);

// ---- timing -----------------------------------------------------------------

struct TimingSpec {
  std::vector<int> layers{3, 4, 5, 6};
  int width = 2;
  int trials = 3;
  double power = 10.0;
  std::uint64_t seed = 1;
  int dense_cap = 12;  // dense solver only up to this many nodes
  int workers = 1;
};

struct TimingRow {
  int layers = 0;
  int nodes = 0;
  std::string solver;
  int trials = 0;
  int failures = 0;
  double mean_ms = 0, min_ms = 0, max_ms = 0;
  double mean_rate = 0;
  // max |grouped - dense| rate over trials where both ran; -1 when not compared.
  double max_rate_gap = -1;
  std::string check;  // "ok", "mismatch" or "n/a"
  std::string error;
  std::uint64_t seed = 0;
};

std::vector<TimingRow> run_timing(const TimingSpec& spec);

// ---- duty cycle versus c_min ------------------------------------------------

struct DutySpec {
  std::vector<int> widths{1, 3, 3, 1};
  std::vector<double> powers{10.0};
  int points = 20;
  int trials = 1;
  std::uint64_t seed = 1;
  SolverKind solver = SolverKind::Grouped;
  // Also probe c_min = 1.001 * rate_max, which must come back infeasible.
  bool probe_infeasible = true;
  int workers = 1;
};

struct DutyRow {
  double power = 0;
  int trial = 0;
  int point = 0;  // -1 for the infeasibility probe
  double c_min = 0;
  double rate_max = 0;
  double t_tot = 0;
  std::string status;
  bool monotone = true;  // flags describe the whole curve of this trial
  bool convex = true;
  std::uint64_t seed = 0;
};

inline constexpr double kCurveSlack = 1e-7;

std::vector<DutyRow> run_duty_curve(const DutySpec& spec);
// Nondecreasing / convex on a uniform grid, within `slack`.
bool is_nondecreasing(const std::vector<double>& y, double slack = kCurveSlack);
bool is_convex(const std::vector<double>& y, double slack = kCurveSlack);

// ---- half-duplex / full-duplex ratios ---------------------------------------

struct RatioSpec {
  int layers = 4;
  int width = 4;
  std::vector<double> powers{1.0, 10.0, 100.0};
  int trials = 10;
  std::uint64_t seed = 1;
  SolverKind solver = SolverKind::Grouped;
  int workers = 1;
};

struct RatioInstance {
  double power = 0;
  int trial = 0;
  double full_duplex = 0;
  double optimized = 0;
  double naive = 0;
  double simple_random = 0;
  std::uint64_t seed = 0;
};

struct RatioRow {
  double power = 0;
  std::string scheduler;  // optimized, naive, simple_random
  double mean_ratio = 0, min_ratio = 0, max_ratio = 0;
  int trials = 0;
  std::uint64_t seed = 0;
};

std::vector<RatioInstance> run_ratio_instances(const RatioSpec& spec);
std::vector<RatioRow> summarize_ratios(const std::vector<RatioInstance>& inst, std::uint64_t seed);
inline std::vector<RatioRow> run_ratio_curve(const RatioSpec& spec) {
  return summarize_ratios(run_ratio_instances(spec), spec.seed);
}

// ---- output -----------------------------------------------------------------

// RFC 4180 CSV with a header row; every row ends with seed and version.
std::string timing_csv(const std::vector<TimingRow>& rows);
std::string duty_csv(const std::vector<DutyRow>& rows);
std::string ratio_csv(const std::vector<RatioRow>& rows);
std::string ratio_instances_csv(const std::vector<RatioInstance>& rows);

}  // namespace hdrelay
