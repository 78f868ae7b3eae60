#pragma once

#include <map>
#include <vector>

#include "hdrelay/network.hpp"

namespace hdrelay {

inline constexpr double kScheduleSumTolerance = 1e-9;
inline constexpr double kConsistencyTolerance = 1e-7;

// Sparse probability distribution over mode configurations (absent = 0).
class Schedule {
 public:
  // Validates nonnegativity and sum = 1 within 1e-9; zero entries are dropped.
  Schedule(int num_nodes, std::map<NodeMask, double> entries);

  static Schedule point_mass(int num_nodes, ModeConfig m);
  // Clamps tiny negatives, drops entries below `drop_below`, renormalizes.
  // Used on LP output where round-off leaves -1e-15 style residue.
  static Schedule from_approximate(int num_nodes, const std::map<NodeMask, double>& entries,
                                   double drop_below = 1e-13);

  int num_nodes() const noexcept { return num_nodes_; }
  const std::map<NodeMask, double>& entries() const noexcept { return entries_; }
  double probability(ModeConfig m) const;
  std::size_t support_size() const noexcept { return entries_.size(); }

  // Pr[node v transmits].
  double duty_cycle(NodeId v) const;
  // Sum of duty cycles over all nodes.
  double total_duty() const;

 private:
  int num_nodes_ = 0;
  std::map<NodeMask, double> entries_;
};

// Local distributions q_i over {0,1}^|V_i|. Bit j of a local index is the mode
// of groups[i][j].
class GroupSchedule {
 public:
  // Validates each local (nonnegative, sums to 1 within 1e-9, length 2^|V_i|)
  // and pairwise overlap consistency within 1e-7.
  GroupSchedule(int num_nodes, std::vector<std::vector<NodeId>> groups,
                std::vector<std::vector<double>> locals);

  // Clamp/renormalize like Schedule::from_approximate, then validate.
  static GroupSchedule from_approximate(int num_nodes, std::vector<std::vector<NodeId>> groups,
                                        std::vector<std::vector<double>> locals);

  int num_nodes() const noexcept { return num_nodes_; }
  const std::vector<std::vector<NodeId>>& groups() const noexcept { return groups_; }
  const std::vector<std::vector<double>>& locals() const noexcept { return locals_; }
  std::size_t size() const noexcept { return groups_.size(); }

  NodeMask group_mask(std::size_t i) const { return masks_[i]; }
  // Global mode mask for a local index of group i.
  NodeMask expand(std::size_t i, std::size_t local) const;
  // Marginal of q_i onto `subset` (must lie inside group i), keyed by global mask.
  std::map<NodeMask, double> marginal(std::size_t i, NodeMask subset) const;

  // max over overlapping pairs and overlap configurations of the marginal gap.
  double max_overlap_discrepancy() const;
  // Pr[v transmits] read from the first group containing v.
  double duty_cycle(NodeId v) const;
  double total_duty() const;

 private:
  struct Unchecked {};
  GroupSchedule(Unchecked, int num_nodes, std::vector<std::vector<NodeId>> groups,
                std::vector<std::vector<double>> locals);

  int num_nodes_ = 0;
  std::vector<std::vector<NodeId>> groups_;
  std::vector<std::vector<double>> locals_;
  std::vector<NodeMask> masks_;
};

// Marginalizes a joint schedule onto each group.
GroupSchedule marginalize(const Schedule& q, const std::vector<std::vector<NodeId>>& groups);

}  // namespace hdrelay
