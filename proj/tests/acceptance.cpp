// One PASS/FAIL line per acceptance criterion. Optional arguments select
// criteria by number, e.g. `acceptance 3 9`.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hdrelay/baselines.hpp"
#include "hdrelay/error.hpp"
#include "hdrelay/experiments.hpp"
#include "hdrelay/generators.hpp"
#include "hdrelay/gauss_cut.hpp"
#include "hdrelay/grouping.hpp"
#include "hdrelay/schedule_opt.hpp"
#include "hdrelay/sfm.hpp"

using namespace hdrelay;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// ---- local oracles ----------------------------------------------------------

int rank_mod(std::vector<std::vector<std::int64_t>> a, int p) {
  int rank = 0;
  const int rows = static_cast<int>(a.size());
  const int cols = rows ? static_cast<int>(a[0].size()) : 0;
  auto inv = [p](std::int64_t x) {
    std::int64_t r = 1, e = p - 2;
    x %= p;
    while (e) {
      if (e & 1) r = r * x % p;
      x = x * x % p;
      e >>= 1;
    }
    return r;
  };
  for (int c = 0; c < cols && rank < rows; ++c) {
    int piv = -1;
    for (int r = rank; r < rows; ++r)
      if (((a[r][c] % p) + p) % p) piv = r;
    if (piv < 0) continue;
    std::swap(a[piv], a[rank]);
    const std::int64_t s = inv(((a[rank][c] % p) + p) % p);
    for (auto& x : a[rank]) x = ((x * s) % p + p) % p;
    for (int r = 0; r < rows; ++r) {
      if (r == rank) continue;
      const std::int64_t f = ((a[r][c] % p) + p) % p;
      if (!f) continue;
      for (int j = 0; j < cols; ++j) a[r][j] = ((a[r][j] - f * a[rank][j]) % p + p) % p;
    }
    ++rank;
  }
  return rank;
}

// Value of a single mode on cut omega, from scratch.
double mode_value(const Network& net, NodeMask omega, NodeMask mode) {
  std::vector<NodeId> tx, rx;
  for (NodeId v = 0; v < net.num_nodes(); ++v) {
    if ((omega >> v) & 1U) {
      if ((mode >> v) & 1U) tx.push_back(v);
    } else if (!((mode >> v) & 1U)) {
      rx.push_back(v);
    }
  }
  if (tx.empty() || rx.empty()) return 0.0;
  const auto& model = net.model();
  if (model.kind == ModelKind::LinearDeterministic) {
    const int k = model.k;
    std::vector<std::vector<std::int64_t>> m(rx.size() * k, std::vector<std::int64_t>(tx.size() * k, 0));
    for (std::size_t r = 0; r < rx.size(); ++r)
      for (std::size_t c = 0; c < tx.size(); ++c)
        if (auto e = net.edge_index(tx[c], rx[r])) {
          const FieldMatrix g = net.channel_matrix(*e);
          for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) m[r * k + i][c * k + j] = g(i, j);
        }
    return rank_mod(m, model.p);
  }
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(rx.size()), static_cast<Eigen::Index>(tx.size()));
  for (std::size_t r = 0; r < rx.size(); ++r)
    for (std::size_t c = 0; c < tx.size(); ++c)
      if (auto e = net.edge_index(tx[c], rx[r])) {
        const auto& g = net.edges()[*e].gain;
        h(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
            model.kind == ModelKind::GaussianReal ? std::complex<double>(std::get<double>(g), 0.0)
                                                  : std::get<std::complex<double>>(g);
      }
  const Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(h.rows(), h.rows()) + h * h.adjoint();
  const double det = std::real(m.partialPivLu().determinant());
  return (model.kind == ModelKind::GaussianReal ? 0.5 : 1.0) * std::log2(det);
}

double schedule_value(const Network& net, NodeMask omega, const Schedule& q) {
  double v = 0;
  for (const auto& [m, p] : q.entries()) v += p * mode_value(net, omega, m);
  return v;
}

std::vector<NodeMask> all_cuts(const Network& net) {
  std::vector<NodeId> relays = members(net.relays());
  std::vector<NodeMask> out;
  for (NodeMask a = 0; a < (NodeMask{1} << relays.size()); ++a) {
    NodeMask omega = bit(net.source());
    for (std::size_t i = 0; i < relays.size(); ++i)
      if ((a >> i) & 1U) omega |= bit(relays[i]);
    out.push_back(omega);
  }
  return out;
}

// Value of the game max_q min_cut sum_m q_m C[cut][m] with C >= 0, from the
// LP  max sum w  s.t.  sum_cut w_cut C[cut][m] <= 1 for all m, w >= 0, whose
// optimum is 1 / value. Dense tableau, Bland's rule, origin feasible.
double game_value(const std::vector<std::vector<double>>& c) {
  const int cuts = static_cast<int>(c.size());
  const int modes = static_cast<int>(c[0].size());
  const int cols = cuts + modes;
  std::vector<std::vector<double>> t(modes, std::vector<double>(cols + 1, 0.0));
  std::vector<int> basis(modes);
  for (int m = 0; m < modes; ++m) {
    for (int j = 0; j < cuts; ++j) t[m][j] = c[j][m];
    t[m][cuts + m] = 1.0;
    t[m][cols] = 1.0;
    basis[m] = cuts + m;
  }
  std::vector<double> z(cols + 1, 0.0);  // reduced costs of max sum w
  for (int j = 0; j < cuts; ++j) z[j] = -1.0;
  for (int iter = 0; iter < 100000; ++iter) {
    int enter = -1;
    for (int j = 0; j < cols; ++j)
      if (z[j] < -1e-12) {
        enter = j;
        break;
      }
    if (enter < 0) return z[cols] > 0 ? 1.0 / z[cols] : INFINITY;
    int leave = -1;
    double best = INFINITY;
    for (int m = 0; m < modes; ++m) {
      if (t[m][enter] <= 1e-12) continue;
      const double r = t[m][cols] / t[m][enter];
      if (r < best - 1e-15 || (std::abs(r - best) <= 1e-15 && leave >= 0 && basis[m] < basis[leave])) {
        best = r;
        leave = m;
      }
    }
    if (leave < 0) return 0.0;  // unbounded: some cut is zero under every mode
    const double pv = t[leave][enter];
    for (auto& x : t[leave]) x /= pv;
    for (int m = 0; m < modes; ++m) {
      if (m == leave || t[m][enter] == 0.0) continue;
      const double f = t[m][enter];
      for (int j = 0; j <= cols; ++j) t[m][j] -= f * t[leave][j];
    }
    const double f = z[enter];
    for (int j = 0; j <= cols; ++j) z[j] -= f * t[leave][j];
    basis[leave] = enter;
  }
  return NAN;
}

std::vector<double> local_marginal(const Schedule& q, const std::vector<NodeId>& bag) {
  std::vector<double> out(std::size_t{1} << bag.size(), 0.0);
  for (const auto& [m, p] : q.entries()) {
    std::size_t idx = 0;
    for (std::size_t j = 0; j < bag.size(); ++j)
      if ((m >> bag[j]) & 1U) idx |= std::size_t{1} << j;
    out[idx] += p;
  }
  return out;
}

Schedule random_dense_joint(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> w(0.0, 1.0);
  std::map<NodeMask, double> e;
  double total = 0;
  for (NodeMask m = 0; m < (NodeMask{1} << n); ++m) total += e[m] = w(rng);
  for (auto& [m, p] : e) p /= total;
  return Schedule(n, e);
}

Schedule random_sparse(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> w(0.05, 1.0);
  std::uniform_int_distribution<NodeMask> pick(0, (NodeMask{1} << n) - 1);
  std::uniform_int_distribution<int> atoms(1, 6);
  std::map<NodeMask, double> e;
  for (int i = atoms(rng); i > 0; --i) e[pick(rng)] += w(rng);
  double total = 0;
  for (auto& [m, p] : e) total += p;
  for (auto& [m, p] : e) p /= total;
  return Schedule(n, e);
}

// ---- criteria ---------------------------------------------------------------

Outcome naive_exactness() {
  std::mt19937_64 rng(101);
  const double powers[] = {1.0, 10.0, 100.0};
  double worst = 0;
  for (int i = 0; i < 20; ++i) {
    const int layers = 3 + i % 3;
    std::vector<int> widths(static_cast<std::size_t>(layers), 1);
    for (int l = 1; l + 1 < layers; ++l) widths[l] = std::uniform_int_distribution<int>(2, 4)(rng);
    const Network net = gen_layered(widths, GainDist::complex_gaussian(powers[i % 3]), rng());
    worst = std::max(worst, std::abs(hd_fd_ratio(net, naive_schedule(net)) - 0.5));
  }
  return {worst <= 1e-9, "20 layered nets, max |ratio - 0.5| = " + fmt("%.2e", worst)};
}

Outcome grouped_equals_dense() {
  double worst = 0;
  int count = 0;
  auto check = [&](const Network& net, const TreeDecomposition& td) {
    const auto d1 = solve_problem2(net, ObjectiveSpec::rate_max());
    const auto g1 = solve_problem3(net, td, ObjectiveSpec::rate_max());
    worst = std::max(worst, std::abs(d1.rate - g1.rate));
    const auto obj = ObjectiveSpec::duty_min(0.5 * d1.rate);
    const auto d2 = solve_problem2(net, obj);
    const auto g2 = solve_problem3(net, td, obj);
    worst = std::max({worst, std::abs(d2.rate - g2.rate), std::abs(d2.t_tot - g2.t_tot)});
    ++count;
  };
  for (int i = 0; i < 10; ++i) {
    const Network net = gen_layered({1, 2, 2, 1}, GainDist::complex_gaussian(10.0), derive_seed(202, i));
    check(net, layered_decomposition(net));
  }
  for (int i = 0; i < 5; ++i) {
    const Network net = gen_line_two_hop(4 + i, GainDist::gaussian(10.0), derive_seed(203, i));
    check(net, line_two_hop_decomposition(net));
  }
  return {worst <= 1e-5, std::to_string(count) + " nets, rate max and duty min, max gap " + fmt("%.2e", worst)};
}

Outcome sfm_matches_brute() {
  std::mt19937_64 rng(303);
  double worst = 0;
  for (int i = 0; i < 50; ++i) {
    const int relays = 3 + i % 8;
    const double prob = std::uniform_real_distribution<double>(0.3, 0.7)(rng);
    const GainDist dist = i % 3 == 0   ? GainDist::gaussian(5.0)
                          : i % 3 == 1 ? GainDist::complex_gaussian(10.0)
                                       : GainDist::adt_levels(3);
    const Network net = gen_random(relays, prob, dist, rng());
    const auto obj = CutObjective::joint(net, random_sparse(net.num_nodes(), rng));
    const double a = min_cut_submodular(obj).value;
    const double b = min_cut_brute(obj).value;
    worst = std::max(worst, std::abs(a - b));
  }
  return {worst <= 1e-6, "50 random nets, max |min-norm - brute| = " + fmt("%.2e", worst)};
}

Outcome submodularity() {
  std::mt19937_64 rng(404);
  int violations = 0;
  long pairs = 0;
  double worst = 0;
  for (int i = 0; i < 10; ++i) {
    for (int kind = 0; kind < 2; ++kind) {
      const GainDist dist = kind == 0 ? GainDist::complex_gaussian(10.0) : GainDist::adt_levels(3);
      const Network net = gen_random(5, 0.6, dist, rng());
      const Schedule q = random_dense_joint(7, rng);
      const auto cuts = all_cuts(net);
      std::map<NodeMask, double> f;
      for (NodeMask o : cuts) f[o] = schedule_value(net, o, q);
      for (NodeMask a : cuts)
        for (NodeMask b : cuts) {
          const double slack = f[a | b] + f[a & b] - f[a] - f[b];
          worst = std::max(worst, slack);
          violations += slack > 1e-9;
          ++pairs;
        }
    }
  }
  return {violations == 0, std::to_string(pairs) + " pairs on 20 nets, max excess " + fmt("%.2e", worst)};
}

Outcome single_relay() {
  const std::pair<double, double> gains[] = {{1.0, 1.0}, {1.0, 3.0}, {2.5, 0.7}, {0.3, 4.0}, {10.0, 10.0}};
  double worst = 0, worst_sweep = 0;
  bool ok = true;
  for (auto [h1, h2] : gains) {
    const Network net = make_network(3, 0, 2, ChannelModel::gaussian_real(), {{0, 1, h1}, {1, 2, h2}});
    const double c1 = 0.5 * std::log2(1 + h1 * h1);
    const double c2 = 0.5 * std::log2(1 + h2 * h2);
    const double closed = c1 * c2 / (c1 + c2);
    double sweep = 0;
    const int n = 100000;
    for (int i = 0; i <= n; ++i) {
      const double t = static_cast<double>(i) / n;
      sweep = std::max(sweep, std::min(t * c1, (1 - t) * c2));
    }
    const double rate = solve_problem1(net).rate;
    worst = std::max(worst, std::abs(rate - closed));
    worst_sweep = std::max(worst_sweep, std::abs(sweep - closed));
    // The grid optimum is at most one step from the true one.
    ok = ok && std::abs(sweep - closed) <= std::max(c1, c2) / n && rate >= sweep - 1e-9;
  }
  ok = ok && worst <= 1e-6;
  return {ok, "5 gain pairs, |LP - closed form| " + fmt("%.2e", worst) + ", |sweep - closed form| " +
                  fmt("%.2e", worst_sweep)};
}

Outcome lindet_capacity() {
  std::mt19937_64 rng(606);
  const std::vector<std::vector<int>> shapes = {{1, 2, 1}, {1, 3, 1}, {1, 2, 2, 1}, {1, 2, 3, 1}, {1, 3, 2, 1},
                                                {1, 5, 1}, {1, 1, 2, 1}, {1, 2, 1, 1}, {1, 1, 1, 1, 1}, {1, 2, 1, 2, 1}};
  double worst = 0, total = 0;
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    const int k = 1 + static_cast<int>(i % 3);
    const int p = i % 4 == 3 ? 3 : 2;
    const Network net = gen_layered(shapes[i], GainDist::adt_levels(k, p), rng());
    const auto cuts = all_cuts(net);
    const NodeMask modes = NodeMask{1} << net.num_nodes();
    std::vector<std::vector<double>> c(cuts.size(), std::vector<double>(modes));
    for (std::size_t j = 0; j < cuts.size(); ++j)
      for (NodeMask m = 0; m < modes; ++m) c[j][m] = mode_value(net, cuts[j], m);
    const double oracle = game_value(c);
    const double rate = solve_problem3_lindet(net, layered_decomposition(net)).rate;
    worst = std::max(worst, std::abs(rate - oracle));
    total += oracle;
  }
  return {worst <= 1e-6, "10 ADT nets, mean capacity " + fmt("%.3f", total / 10) +
                             ", max |grouped - all-cuts LP| = " + fmt("%.2e", worst)};
}

Outcome duty_curve_shape() {
  DutySpec spec;
  spec.widths = {1, 3, 3, 1};
  spec.powers = {10.0};
  spec.points = 20;
  spec.trials = 5;
  spec.seed = 707;
  spec.probe_infeasible = true;
  const auto rows = run_duty_curve(spec);
  std::map<int, std::vector<double>> curves;
  bool probes_infeasible = true, starts_at_zero = true;
  for (const auto& r : rows) {
    if (r.point < 0) {
      probes_infeasible = probes_infeasible && r.status == "infeasible";
      continue;
    }
    if (r.point == 0) starts_at_zero = starts_at_zero && std::abs(r.t_tot) <= 1e-9;
    curves[r.trial].push_back(r.t_tot);
  }
  double worst_drop = 0, worst_concave = 0;
  for (const auto& [trial, t] : curves) {
    for (std::size_t i = 1; i < t.size(); ++i) worst_drop = std::max(worst_drop, t[i - 1] - t[i]);
    for (std::size_t i = 1; i + 1 < t.size(); ++i)
      worst_concave = std::max(worst_concave, 2 * t[i] - t[i - 1] - t[i + 1]);
    if (t.size() != 20 || std::any_of(t.begin(), t.end(), [](double x) { return !std::isfinite(x); }))
      return {false, "curve " + std::to_string(trial) + " has missing points"};
  }
  const bool ok = curves.size() == 5 && worst_drop <= 1e-7 && worst_concave <= 1e-7 && probes_infeasible &&
                  starts_at_zero;
  return {ok, "5 curves x 20 points, max drop " + fmt("%.2e", std::max(0.0, worst_drop)) + ", max concavity " +
                  fmt("%.2e", std::max(0.0, worst_concave))};
}

Outcome dominance() {
  RatioSpec spec;
  spec.seed = 808;
  const auto inst = run_ratio_instances(spec);
  int bad = 0;
  for (const auto& r : inst) bad += !(r.optimized >= r.simple_random) || !(r.optimized >= 0.5);
  return {bad == 0 && inst.size() == 30,
          std::to_string(inst.size()) + " instances, " + std::to_string(bad) + " ordering violations"};
}

Outcome scaling() {
  std::vector<int> widths(10, 2);
  widths.front() = widths.back() = 1;
  const Network net = gen_layered(widths, GainDist::complex_gaussian(10.0), 909);
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = solve_problem3(net, layered_decomposition(net), ObjectiveSpec::rate_max());
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  auto refused = [&](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.kind() == ErrorKind::NetworkTooLarge;
    }
    return false;
  };
  const bool refused1 = refused([&] { solve_problem1(net); });
  const bool refused2 = refused([&] { solve_problem2(net, ObjectiveSpec::rate_max()); });
  const double fd = full_duplex_bound(net);
  // Exhaustive check of all 2^16 cuts under the returned schedule.
  const auto& gs = std::get<GroupSchedule>(r.schedule);
  const double achieved = min_cut_brute(CutObjective::grouped(net, gs)).value;
  const bool sane = r.status == SolveStatus::Optimal && r.rate > 0 && r.rate <= fd + 1e-9 &&
                    std::abs(achieved - r.rate) <= 1e-6;
  return {sane && secs < 300.0 && refused1 && refused2,
          "18 nodes solved in " + fmt("%.2f", secs) + " s, rate " + fmt("%.4f", r.rate) + ", exhaustive min cut " +
              fmt("%.4f", achieved) +
              (refused1 && refused2 ? ", dense solvers refused" : ", dense solvers NOT refused")};
}

Outcome reconstruction() {
  std::mt19937_64 rng(1010);
  double worst_marg = 0, worst_cut = 0;
  for (int i = 0; i < 10; ++i) {
    Network net = i % 2 == 0 ? gen_layered(i % 4 == 0 ? std::vector<int>{1, 2, 3, 1} : std::vector<int>{1, 2, 2, 1},
                                           GainDist::complex_gaussian(5.0), rng())
                             : gen_random(5, 0.45, GainDist::complex_gaussian(5.0), rng());
    const TreeDecomposition td = i % 2 == 0 ? layered_decomposition(net)
                                            : tree_decompose(build_clique_graph(net, heuristic_grouping(net)));
    const Schedule joint = random_dense_joint(net.num_nodes(), rng);
    std::vector<std::vector<double>> locals;
    for (const auto& bag : td.bags) locals.push_back(local_marginal(joint, bag));
    const GroupSchedule gs(net.num_nodes(), td.bags, locals);
    const Schedule rec = reconstruct_joint(td, gs);
    for (std::size_t b = 0; b < td.bags.size(); ++b) {
      const auto m = local_marginal(rec, td.bags[b]);
      for (std::size_t j = 0; j < m.size(); ++j) worst_marg = std::max(worst_marg, std::abs(m[j] - locals[b][j]));
    }
    for (NodeMask omega : all_cuts(net)) {
      const double grouped = decomposed_cut_value(net, Cut(net, omega), gs);
      worst_cut = std::max(worst_cut, std::abs(grouped - schedule_value(net, omega, rec)));
    }
  }
  return {worst_marg <= 1e-9 && worst_cut <= 1e-9,
          "10 decompositions, max marginal gap " + fmt("%.2e", worst_marg) + ", max cut gap " + fmt("%.2e", worst_cut)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"naive schedule ratio is exactly 1/2", naive_exactness},
      {"grouped solver equals dense solver", grouped_equals_dense},
      {"min-norm cut equals brute-force cut", sfm_matches_brute},
      {"cut value is submodular", submodularity},
      {"single relay closed form", single_relay},
      {"linear deterministic capacity equals all-cuts LP", lindet_capacity},
      {"duty curve nondecreasing and convex", duty_curve_shape},
      {"optimized dominates baselines", dominance},
      {"grouped solver scales to 18 nodes", scaling},
      {"joint reconstruction fidelity", reconstruction},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && !only.count(id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %2d  %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first, o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed ? 1 : 0;
}
