#pragma once

#include <unordered_map>
#include <utility>
#include <vector>

#include "hdrelay/network.hpp"
#include "hdrelay/schedule.hpp"

namespace hdrelay {

// Model-dispatched value of transmitters `tx` into receivers `rx`: Gaussian
// mutual information in bits, or transfer-matrix rank for linear deterministic.
double cross_value(const Network& net, NodeMask tx, NodeMask rx);

// Drops transmitters with no edge into rx and receivers with no edge from the
// remaining transmitters; the cross value is unchanged.
std::pair<NodeMask, NodeMask> trim_cross_sets(const Network& net, NodeMask tx, NodeMask rx);

// Memoized cross_value keyed on the trimmed (tx, rx) pair. Not thread-safe;
// each solver run owns one.
class CutValueCache {
 public:
  explicit CutValueCache(const Network& net) : net_(&net) {}

  double operator()(NodeMask tx, NodeMask rx);
  std::size_t size() const noexcept { return values_.size(); }
  const Network& network() const noexcept { return *net_; }

 private:
  struct KeyHash {
    std::size_t operator()(const std::pair<NodeMask, NodeMask>& k) const noexcept {
      return std::hash<NodeMask>{}(k.first * 0x9E3779B97F4A7C15ULL ^ k.second);
    }
  };
  const Network* net_;
  std::unordered_map<std::pair<NodeMask, NodeMask>, double, KeyHash> values_;
};

// Half-duplex value of one mode configuration (any model).
double half_duplex_cut_value(CutValueCache& cache, NodeMask omega, ModeConfig m);
// All nodes simultaneously transmitting and receiving: tx = Omega, rx = Omega^c.
double full_duplex_cut_value(CutValueCache& cache, NodeMask omega);
// sum_m q(m) * half-duplex value, over the support of q.
double joint_cut_value(CutValueCache& cache, NodeMask omega, const Schedule& q);

// Group masks plus the positive-probability local modes of each group,
// expanded to global mode masks.
struct SparseGroupSchedule {
  explicit SparseGroupSchedule(const GroupSchedule& locals);

  std::vector<NodeMask> groups;
  std::vector<std::vector<std::pair<NodeMask, double>>> support;
};

// Index of the first group containing `component`, or -1.
int covering_group(const std::vector<NodeMask>& groups, NodeMask component);

// Component-decomposed value under local distributions (any model). Throws
// ComponentNotCovered when a component of G_Omega lies in no group.
double grouped_cut_value(CutValueCache& cache, NodeMask omega, const SparseGroupSchedule& locals);
double grouped_cut_value(CutValueCache& cache, NodeMask omega, const GroupSchedule& locals);

}  // namespace hdrelay
