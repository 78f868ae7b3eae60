#include "hdrelay/sfm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Dense>

namespace hdrelay {

CutObjective::CutObjective(const Network& net, Weights w)
    : net_(&net),
      ground_(members(net.relays())),
      weights_(std::move(w)),
      cache_(std::make_shared<CutValueCache>(net)) {}

CutObjective CutObjective::joint(const Network& net, Schedule q) {
  if (q.num_nodes() != net.num_nodes())
    throw Error(ErrorKind::BadArgument, "schedule node count does not match the network");
  return CutObjective(net, std::move(q));
}

CutObjective CutObjective::grouped(const Network& net, const GroupSchedule& locals) {
  if (locals.num_nodes() != net.num_nodes())
    throw Error(ErrorKind::BadArgument, "group schedule node count does not match the network");
  return CutObjective(net, SparseGroupSchedule(locals));
}

CutObjective CutObjective::full_duplex(const Network& net) { return CutObjective(net, std::monostate{}); }

CutObjective CutObjective::custom(const Network& net, std::function<double(NodeMask)> f) {
  return CutObjective(net, std::move(f));
}

double CutObjective::value(NodeMask omega) const {
  return std::visit(
      [&](const auto& w) -> double {
        using T = std::decay_t<decltype(w)>;
        if constexpr (std::is_same_v<T, Schedule>) {
          return joint_cut_value(*cache_, omega, w);
        } else if constexpr (std::is_same_v<T, SparseGroupSchedule>) {
          return grouped_cut_value(*cache_, omega, w);
        } else if constexpr (std::is_same_v<T, std::monostate>) {
          return full_duplex_cut_value(*cache_, omega);
        } else {
          return w(omega);
        }
      },
      weights_);
}

NodeMask CutObjective::omega_of(NodeMask subset) const {
  NodeMask omega = bit(net_->source());
  for (std::size_t i = 0; i < ground_.size(); ++i)
    if ((subset >> i) & 1U) omega |= bit(ground_[i]);
  return omega;
}

SetFunction CutObjective::as_set_function() const {
  return [this](NodeMask subset) { return value(omega_of(subset)); };
}

MinCutResult min_cut_brute(const CutObjective& obj, int cap) {
  const int n = obj.ground_size();
  if (n > cap)
    throw Error(ErrorKind::GroundSetTooLarge,
                std::to_string(n) + " relays exceed the brute-force cap of " + std::to_string(cap));
  NodeMask best_subset = 0;
  double best = obj.value(obj.omega_of(0));
  const NodeMask end = NodeMask{1} << n;
  for (NodeMask a = 1; a < end; ++a) {
    const double v = obj.value(obj.omega_of(a));
    if (v < best - 1e-12 * std::max(1.0, std::abs(best))) {
      best = v;
      best_subset = a;
    }
  }
  return MinCutResult{Cut(obj.network(), obj.omega_of(best_subset)), best, MinCutMethod::Brute, 0.0,
                      static_cast<int>(end)};
}

std::vector<double> greedy_vertex(const SetFunction& f, const std::vector<int>& order,
                                  std::vector<double>* prefix_values) {
  std::vector<double> x(order.size(), 0.0);
  if (prefix_values) prefix_values->assign(1, 0.0);
  NodeMask prefix = 0;
  double prev = 0.0;
  for (int e : order) {
    prefix |= NodeMask{1} << e;
    const double cur = f(prefix);
    x[e] = cur - prev;
    prev = cur;
    if (prefix_values) prefix_values->push_back(cur);
  }
  return x;
}

namespace {

// Minimizes |S a| subject to sum(a) = 1 (affine hull of the corral).
Eigen::VectorXd affine_minimizer(const Eigen::MatrixXd& s) {
  const Eigen::Index k = s.cols();
  Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(k + 1, k + 1);
  kkt.topLeftCorner(k, k) = s.transpose() * s;
  kkt.block(0, k, k, 1).setOnes();
  kkt.block(k, 0, 1, k).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k + 1);
  rhs(k) = 1.0;
  Eigen::VectorXd sol = kkt.colPivHouseholderQr().solve(rhs);
  return sol.head(k);
}

}  // namespace

SubmodularMinimum minimize_submodular(int n, const SetFunction& f, double eps, int max_major_cycles) {
  SubmodularMinimum out;
  if (n == 0) return out;

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> prefix;

  NodeMask best_set = 0;
  double best_value = 0.0;
  auto consider_prefixes = [&](const std::vector<int>& ord, const std::vector<double>& values) {
    NodeMask set = 0;
    for (int i = 1; i <= n; ++i) {
      set |= NodeMask{1} << ord[i - 1];
      if (values[i] < best_value) {
        best_value = values[i];
        best_set = set;
      }
    }
  };

  auto to_vec = [n](const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), n).eval();
  };

  Eigen::VectorXd x = to_vec(greedy_vertex(f, order, &prefix));
  consider_prefixes(order, prefix);
  std::vector<Eigen::VectorXd> corral{x};
  std::vector<double> lambda{1.0};

  constexpr double kTiny = 1e-12;
  for (int major = 1; major <= max_major_cycles; ++major) {
    out.major_cycles = major;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return x(a) < x(b); });
    Eigen::VectorXd q = to_vec(greedy_vertex(f, order, &prefix));
    consider_prefixes(order, prefix);

    const double lower = x.cwiseMin(0.0).sum();
    const double gap = std::max(0.0, best_value - lower);
    out.set = best_set;
    out.value = best_value;
    out.gap = gap;
    if (gap <= eps) return out;

    const double xx = x.squaredNorm();
    const bool wolfe_optimal = xx - x.dot(q) <= 1e-14 * std::max(1.0, xx);
    const bool repeated = std::any_of(corral.begin(), corral.end(), [&](const Eigen::VectorXd& s) {
      return (s - q).lpNorm<Eigen::Infinity>() <= kTiny * std::max(1.0, q.lpNorm<Eigen::Infinity>());
    });
    if (wolfe_optimal || repeated) break;

    corral.push_back(q);
    lambda.push_back(0.0);
    // Minor cycles: move toward the affine minimizer of the corral, dropping
    // points whose weight hits zero, until it lies in the relative interior.
    for (int minor = 0; minor < 4 * n + 8; ++minor) {
      Eigen::MatrixXd s(n, static_cast<Eigen::Index>(corral.size()));
      for (std::size_t i = 0; i < corral.size(); ++i) s.col(static_cast<Eigen::Index>(i)) = corral[i];
      const Eigen::VectorXd alpha = affine_minimizer(s);
      if ((alpha.array() > kTiny).all()) {
        for (std::size_t i = 0; i < lambda.size(); ++i) lambda[i] = alpha(static_cast<Eigen::Index>(i));
        break;
      }
      double theta = 1.0;
      for (std::size_t i = 0; i < lambda.size(); ++i) {
        const double a = alpha(static_cast<Eigen::Index>(i));
        if (a <= kTiny && lambda[i] - a > 0.0) theta = std::min(theta, lambda[i] / (lambda[i] - a));
      }
      for (std::size_t i = 0; i < lambda.size(); ++i)
        lambda[i] = theta * alpha(static_cast<Eigen::Index>(i)) + (1.0 - theta) * lambda[i];
      std::vector<Eigen::VectorXd> kept_points;
      std::vector<double> kept_weights;
      for (std::size_t i = 0; i < lambda.size(); ++i) {
        if (lambda[i] > kTiny) {
          kept_points.push_back(corral[i]);
          kept_weights.push_back(lambda[i]);
        }
      }
      if (kept_points.empty()) {
        kept_points.push_back(corral.back());
        kept_weights.push_back(1.0);
      }
      const double total = std::accumulate(kept_weights.begin(), kept_weights.end(), 0.0);
      for (double& w : kept_weights) w /= total;
      corral = std::move(kept_points);
      lambda = std::move(kept_weights);
    }
    x.setZero();
    for (std::size_t i = 0; i < corral.size(); ++i) x += lambda[i] * corral[i];
  }

  if (out.gap <= eps) return out;
  throw Error(ErrorKind::ConvergenceFailure,
              "min-norm point stopped after " + std::to_string(out.major_cycles) +
                  " major cycles with duality gap " + std::to_string(out.gap));
}

MinCutResult min_cut_submodular(const CutObjective& obj, double eps, int max_major_cycles) {
  const double base = obj.value(obj.omega_of(0));
  auto f = [&](NodeMask subset) { return obj.value(obj.omega_of(subset)) - base; };
  const auto sol = minimize_submodular(obj.ground_size(), f, eps, max_major_cycles);
  const NodeMask omega = obj.omega_of(sol.set);
  return MinCutResult{Cut(obj.network(), omega), obj.value(omega), MinCutMethod::MinNorm, sol.gap,
                      sol.major_cycles};
}

MinCutResult min_cut(const CutObjective& obj, const MinCutOptions& options) {
  using M = MinCutOptions::Method;
  const bool brute = options.method == M::Brute ||
                     (options.method == M::Auto && obj.ground_size() <= options.brute_max_ground);
  if (brute) return min_cut_brute(obj, std::max(options.brute_max_ground, kDefaultBruteCap));
  return min_cut_submodular(obj, options.eps, options.max_major_cycles);
}

}  // namespace hdrelay
