#include "hdrelay/baselines.hpp"

#include <algorithm>
#include <random>

namespace hdrelay {

MinCutResult full_duplex_min_cut(const Network& net, const MinCutOptions& options) {
  return min_cut(CutObjective::full_duplex(net), options);
}

double full_duplex_bound(const Network& net, const MinCutOptions& options) {
  return full_duplex_min_cut(net, options).value;
}

MinCutResult schedule_min_cut(const Network& net, const Schedule& q, const MinCutOptions& options) {
  return min_cut(CutObjective::joint(net, q), options);
}

namespace {

std::vector<std::vector<NodeId>> require_layers(const Network& net) {
  auto layers = detect_layers(net);
  if (!layers) throw Error(ErrorKind::NotLayered, "network is not layered");
  return *layers;
}

}  // namespace

Schedule naive_schedule(const Network& net) {
  const auto layers = require_layers(net);
  NodeMask even = 0;
  for (std::size_t l = 0; l < layers.size(); l += 2) even |= mask_of(layers[l]);
  const NodeMask odd = net.all_nodes() & ~even;
  return Schedule(net.num_nodes(), {{even, 0.5}, {odd, 0.5}});
}

Schedule simple_random_schedule(const Network& net, std::uint64_t seed) {
  const auto layers = require_layers(net);
  std::mt19937_64 rng(seed);
  NodeMask slot[2] = {bit(net.source()), bit(net.source())};
  for (std::size_t l = 1; l + 1 < layers.size(); ++l) {
    auto nodes = layers[l];
    if (nodes.size() < 2)
      throw Error(ErrorKind::LayerTooThin,
                  "relay layer " + std::to_string(l) + " has fewer than two nodes");
    std::shuffle(nodes.begin(), nodes.end(), rng);
    const std::size_t first = (nodes.size() + 1) / 2;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const std::size_t half = i < first ? 0 : 1;
      for (int t = 0; t < 2; ++t)
        if ((l + half + static_cast<std::size_t>(t)) % 2 == 0) slot[t] |= bit(nodes[i]);
    }
  }
  std::map<NodeMask, double> e;
  e[slot[0]] += 0.5;
  e[slot[1]] += 0.5;
  return Schedule(net.num_nodes(), e);
}

double hd_fd_ratio(const Network& net, const Schedule& q, const MinCutOptions& options) {
  const double fd = full_duplex_bound(net, options);
  if (fd <= 0.0) throw Error(ErrorKind::ZeroFullDuplex, "full-duplex bound is zero");
  return schedule_min_cut(net, q, options).value / fd;
}

}  // namespace hdrelay
