#include "hdrelay/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hdrelay {

namespace {

void check_node_count(int num_nodes) {
  if (num_nodes < 1 || num_nodes > kMaxNodes)
    throw Error(ErrorKind::InvalidSchedule, "node count must lie in [1, 64]");
}

NodeMask full_mask(int num_nodes) {
  return num_nodes == 64 ? ~NodeMask{0} : (NodeMask{1} << num_nodes) - 1;
}

}  // namespace

Schedule::Schedule(int num_nodes, std::map<NodeMask, double> entries) : num_nodes_(num_nodes) {
  check_node_count(num_nodes);
  std::vector<Violation> violations;
  double total = 0.0;
  for (const auto& [mask, p] : entries) {
    if (mask & ~full_mask(num_nodes))
      violations.push_back({ErrorKind::InvalidSchedule, "mode configuration names a node out of range"});
    if (!(p >= 0.0) || !std::isfinite(p))
      violations.push_back({ErrorKind::InvalidSchedule,
                            "negative or non-finite probability for mode " +
                                mode_string(ModeConfig{mask}, num_nodes)});
    total += p;
  }
  if (std::abs(total - 1.0) > kScheduleSumTolerance)
    violations.push_back({ErrorKind::InvalidSchedule,
                          "probabilities sum to " + std::to_string(total) + ", expected 1"});
  if (!violations.empty()) throw ValidationError(std::move(violations));
  for (const auto& [mask, p] : entries)
    if (p > 0.0) entries_.emplace(mask, p);
}

Schedule Schedule::point_mass(int num_nodes, ModeConfig m) { return Schedule(num_nodes, {{m.bits, 1.0}}); }

Schedule Schedule::from_approximate(int num_nodes, const std::map<NodeMask, double>& entries,
                                    double drop_below) {
  std::map<NodeMask, double> kept;
  double total = 0.0;
  for (const auto& [mask, p] : entries) {
    if (p > drop_below) {
      kept.emplace(mask, p);
      total += p;
    }
  }
  if (total <= 0.0) throw Error(ErrorKind::InvalidSchedule, "no positive mass to normalize");
  for (auto& [mask, p] : kept) p /= total;
  return Schedule(num_nodes, std::move(kept));
}

double Schedule::probability(ModeConfig m) const {
  auto it = entries_.find(m.bits);
  return it == entries_.end() ? 0.0 : it->second;
}

double Schedule::duty_cycle(NodeId v) const {
  double d = 0.0;
  for (const auto& [mask, p] : entries_)
    if (contains(mask, v)) d += p;
  return d;
}

double Schedule::total_duty() const {
  double t = 0.0;
  for (const auto& [mask, p] : entries_) t += p * popcount(mask);
  return t;
}

GroupSchedule::GroupSchedule(Unchecked, int num_nodes, std::vector<std::vector<NodeId>> groups,
                             std::vector<std::vector<double>> locals)
    : num_nodes_(num_nodes), groups_(std::move(groups)), locals_(std::move(locals)) {
  check_node_count(num_nodes);
  for (const auto& g : groups_) masks_.push_back(mask_of(g));
}

GroupSchedule::GroupSchedule(int num_nodes, std::vector<std::vector<NodeId>> groups,
                             std::vector<std::vector<double>> locals)
    : GroupSchedule(Unchecked{}, num_nodes, std::move(groups), std::move(locals)) {
  std::vector<Violation> violations;
  if (groups_.size() != locals_.size())
    violations.push_back({ErrorKind::InvalidSchedule, "one local distribution per group required"});
  for (std::size_t i = 0; i < groups_.size() && i < locals_.size(); ++i) {
    const auto& g = groups_[i];
    const std::string where = "group " + std::to_string(i);
    if (g.empty() || g.size() > 30) {
      violations.push_back({ErrorKind::InvalidSchedule, where + " must have 1..30 nodes"});
      continue;
    }
    if (static_cast<std::size_t>(popcount(masks_[i])) != g.size())
      violations.push_back({ErrorKind::InvalidSchedule, where + " repeats a node"});
    if (std::any_of(g.begin(), g.end(), [&](NodeId v) { return v < 0 || v >= num_nodes; }))
      violations.push_back({ErrorKind::InvalidSchedule, where + " names a node out of range"});
    if (locals_[i].size() != (std::size_t{1} << g.size())) {
      violations.push_back({ErrorKind::InvalidSchedule, where + " local table must have 2^|V_i| entries"});
      continue;
    }
    double total = 0.0;
    for (double p : locals_[i]) {
      if (!(p >= 0.0) || !std::isfinite(p))
        violations.push_back({ErrorKind::InvalidSchedule, where + " has a negative probability"});
      total += p;
    }
    if (std::abs(total - 1.0) > kScheduleSumTolerance)
      violations.push_back({ErrorKind::InvalidSchedule,
                            where + " sums to " + std::to_string(total) + ", expected 1"});
  }
  if (!violations.empty()) throw ValidationError(std::move(violations));
  const double gap = max_overlap_discrepancy();
  if (gap > kConsistencyTolerance)
    throw Error(ErrorKind::InconsistentMarginals,
                "overlap marginals disagree by " + std::to_string(gap));
}

GroupSchedule GroupSchedule::from_approximate(int num_nodes, std::vector<std::vector<NodeId>> groups,
                                              std::vector<std::vector<double>> locals) {
  for (auto& local : locals) {
    double total = 0.0;
    for (double& p : local) {
      if (p < 0.0) p = 0.0;
      total += p;
    }
    if (total > 0.0)
      for (double& p : local) p /= total;
  }
  return GroupSchedule(num_nodes, std::move(groups), std::move(locals));
}

NodeMask GroupSchedule::expand(std::size_t i, std::size_t local) const {
  NodeMask m = 0;
  const auto& g = groups_[i];
  for (std::size_t j = 0; j < g.size(); ++j)
    if ((local >> j) & 1U) m |= bit(g[j]);
  return m;
}

std::map<NodeMask, double> GroupSchedule::marginal(std::size_t i, NodeMask subset) const {
  if (subset & ~masks_[i]) throw Error(ErrorKind::BadArgument, "marginal subset not inside group");
  std::map<NodeMask, double> out;
  const auto& local = locals_[i];
  for (std::size_t l = 0; l < local.size(); ++l) out[expand(i, l) & subset] += local[l];
  return out;
}

double GroupSchedule::max_overlap_discrepancy() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < groups_.size(); ++i) {
    for (std::size_t j = i + 1; j < groups_.size(); ++j) {
      const NodeMask overlap = masks_[i] & masks_[j];
      if (!overlap) continue;
      auto a = marginal(i, overlap);
      auto b = marginal(j, overlap);
      for (const auto& [m, p] : a) worst = std::max(worst, std::abs(p - (b.count(m) ? b[m] : 0.0)));
      for (const auto& [m, p] : b) worst = std::max(worst, std::abs(p - (a.count(m) ? a[m] : 0.0)));
    }
  }
  return worst;
}

double GroupSchedule::duty_cycle(NodeId v) const {
  for (std::size_t i = 0; i < groups_.size(); ++i) {
    if (!contains(masks_[i], v)) continue;
    double d = 0.0;
    for (std::size_t l = 0; l < locals_[i].size(); ++l)
      if (contains(expand(i, l), v)) d += locals_[i][l];
    return d;
  }
  throw Error(ErrorKind::BadArgument, "node " + std::to_string(v) + " is in no group");
}

double GroupSchedule::total_duty() const {
  NodeMask covered = 0;
  for (NodeMask m : masks_) covered |= m;
  double t = 0.0;
  for (NodeId v : members(covered)) t += duty_cycle(v);
  return t;
}

GroupSchedule marginalize(const Schedule& q, const std::vector<std::vector<NodeId>>& groups) {
  std::vector<std::vector<double>> locals;
  for (const auto& g : groups) {
    std::vector<double> local(std::size_t{1} << g.size(), 0.0);
    for (const auto& [mask, p] : q.entries()) {
      std::size_t idx = 0;
      for (std::size_t j = 0; j < g.size(); ++j)
        if (contains(mask, g[j])) idx |= std::size_t{1} << j;
      local[idx] += p;
    }
    locals.push_back(std::move(local));
  }
  return GroupSchedule(q.num_nodes(), groups, std::move(locals));
}

}  // namespace hdrelay
