#pragma once

#include <functional>
#include <memory>
#include <variant>
#include <vector>

#include "hdrelay/cut_value.hpp"
#include "hdrelay/network.hpp"
#include "hdrelay/schedule.hpp"

namespace hdrelay {

// Set function on a ground set {0, .., n-1}, argument as a bitmask.
using SetFunction = std::function<double(NodeMask)>;

// Omega -> cut value for a fixed weighting. The ground set is V \ {S, D};
// ground element i is the i-th relay in node order.
class CutObjective {
 public:
  static CutObjective joint(const Network& net, Schedule q);
  static CutObjective grouped(const Network& net, const GroupSchedule& locals);
  // Every node transmitting and receiving at once.
  static CutObjective full_duplex(const Network& net);
  // Arbitrary function of Omega, for tests and custom bounds.
  static CutObjective custom(const Network& net, std::function<double(NodeMask omega)> f);

  double operator()(const Cut& omega) const { return value(omega.omega()); }
  double value(NodeMask omega) const;

  const Network& network() const noexcept { return *net_; }
  int ground_size() const noexcept { return static_cast<int>(ground_.size()); }
  const std::vector<NodeId>& ground() const noexcept { return ground_; }
  // Omega = {S} union the relays selected by `subset` (a ground-set mask).
  NodeMask omega_of(NodeMask subset) const;
  // f(A) = value({S} u A) on the ground set.
  SetFunction as_set_function() const;

 private:
  using Weights = std::variant<Schedule, SparseGroupSchedule, std::monostate,
                               std::function<double(NodeMask)>>;
  CutObjective(const Network& net, Weights w);

  const Network* net_;
  std::vector<NodeId> ground_;
  Weights weights_;
  std::shared_ptr<CutValueCache> cache_;
};

enum class MinCutMethod { Brute, MinNorm };

struct MinCutResult {
  Cut omega;
  double value = 0.0;
  MinCutMethod method = MinCutMethod::Brute;
  // Proven bound on value - (true minimum); 0 for brute force.
  double certificate_gap = 0.0;
  int iterations = 0;
};

inline constexpr int kDefaultBruteCap = 16;
inline constexpr double kDefaultSfmEps = 1e-7;
inline constexpr int kDefaultMajorCycleCap = 10000;

// Exhaustive minimization over all Omega = {S} u A. Ties (within 1e-12
// relative) go to the smallest A as a bitmask over node indices.
// Throws GroundSetTooLarge above `cap` relays.
MinCutResult min_cut_brute(const CutObjective& obj, int cap = kDefaultBruteCap);

// Fujishige-Wolfe minimum-norm-point minimization. Throws ConvergenceFailure
// when the duality gap is still above eps after `max_major_cycles`.
MinCutResult min_cut_submodular(const CutObjective& obj, double eps = kDefaultSfmEps,
                                int max_major_cycles = kDefaultMajorCycleCap);

struct MinCutOptions {
  enum class Method { Auto, Brute, MinNorm };
  Method method = Method::Auto;
  int brute_max_ground = 12;  // Auto uses brute force up to this many relays
  double eps = kDefaultSfmEps;
  int max_major_cycles = kDefaultMajorCycleCap;
};

MinCutResult min_cut(const CutObjective& obj, const MinCutOptions& options = {});

// ---- Set-function level building blocks -----------------------------------

// Greedy vertex of the base polytope of f (f(empty) must be 0) for the linear
// order `order`: x[order[i]] = f(P_i) - f(P_{i-1}). When `prefix_values` is
// non-null it receives f(P_0..P_n).
std::vector<double> greedy_vertex(const SetFunction& f, const std::vector<int>& order,
                                  std::vector<double>* prefix_values = nullptr);

struct SubmodularMinimum {
  NodeMask set = 0;
  double value = 0.0;
  double gap = 0.0;  // value - lower bound from the current base vector
  int major_cycles = 0;
};

// Minimizes a submodular f over subsets of {0..n-1}; f(empty) must be 0.
SubmodularMinimum minimize_submodular(int n, const SetFunction& f, double eps = kDefaultSfmEps,
                                      int max_major_cycles = kDefaultMajorCycleCap);

}  // namespace hdrelay
