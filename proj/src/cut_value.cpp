#include "hdrelay/cut_value.hpp"

#include <string>

#include "hdrelay/gauss_cut.hpp"
#include "hdrelay/lindet_cut.hpp"

namespace hdrelay {

double cross_value(const Network& net, NodeMask tx, NodeMask rx) {
  if (net.model().is_gaussian()) return gaussian_cross_value(net, tx, rx);
  return lindet_cross_rank(net, tx, rx);
}

std::pair<NodeMask, NodeMask> trim_cross_sets(const Network& net, NodeMask tx, NodeMask rx) {
  NodeMask a = 0;
  for (NodeId u : members(tx))
    if (net.out_neighbors(u) & rx) a |= bit(u);
  NodeMask b = 0;
  for (NodeId v : members(rx))
    if (net.in_neighbors(v) & a) b |= bit(v);
  return {a, b};
}

double CutValueCache::operator()(NodeMask tx, NodeMask rx) {
  const auto key = trim_cross_sets(*net_, tx, rx);
  if (!key.first) return 0.0;
  auto it = values_.find(key);
  if (it != values_.end()) return it->second;
  const double v = cross_value(*net_, key.first, key.second);
  values_.emplace(key, v);
  return v;
}

double half_duplex_cut_value(CutValueCache& cache, NodeMask omega, ModeConfig m) {
  const NodeMask all = cache.network().all_nodes();
  return cache(omega & m.bits, all & ~omega & ~m.bits);
}

double full_duplex_cut_value(CutValueCache& cache, NodeMask omega) {
  const NodeMask all = cache.network().all_nodes();
  return cache(omega & all, all & ~omega);
}

double joint_cut_value(CutValueCache& cache, NodeMask omega, const Schedule& q) {
  double total = 0.0;
  for (const auto& [mask, p] : q.entries()) total += p * half_duplex_cut_value(cache, omega, ModeConfig{mask});
  return total;
}

SparseGroupSchedule::SparseGroupSchedule(const GroupSchedule& locals) {
  for (std::size_t i = 0; i < locals.size(); ++i) {
    groups.push_back(locals.group_mask(i));
    std::vector<std::pair<NodeMask, double>> s;
    const auto& local = locals.locals()[i];
    for (std::size_t l = 0; l < local.size(); ++l)
      if (local[l] > 0.0) s.emplace_back(locals.expand(i, l), local[l]);
    support.push_back(std::move(s));
  }
}

int covering_group(const std::vector<NodeMask>& groups, NodeMask component) {
  for (std::size_t i = 0; i < groups.size(); ++i)
    if ((component & ~groups[i]) == 0) return static_cast<int>(i);
  return -1;
}

double grouped_cut_value(CutValueCache& cache, NodeMask omega, const SparseGroupSchedule& locals) {
  const Network& net = cache.network();
  const NodeMask outside = net.all_nodes() & ~omega;
  double total = 0.0;
  for (NodeMask comp : cut_components(net, omega)) {
    const int r = covering_group(locals.groups, comp);
    if (r < 0)
      throw Error(ErrorKind::ComponentNotCovered,
                  "cut-graph component {" + [&] {
                    std::string s;
                    for (NodeId v : members(comp)) s += (s.empty() ? "" : ",") + std::to_string(v);
                    return s;
                  }() + "} lies in no group");
    for (const auto& [mask, p] : locals.support[r])
      total += p * cache(comp & omega & mask, comp & outside & ~mask);
  }
  return total;
}

double grouped_cut_value(CutValueCache& cache, NodeMask omega, const GroupSchedule& locals) {
  return grouped_cut_value(cache, omega, SparseGroupSchedule(locals));
}

}  // namespace hdrelay
