#pragma once

#include <map>
#include <random>

#include "hdrelay/network.hpp"
#include "hdrelay/schedule.hpp"

namespace fixtures {

using namespace hdrelay;

// Five-relay example: S=0, relays 1..5, D=6.
inline Network five_relay(double gain = 1.0) {
  std::vector<Edge> e;
  for (auto [u, v] : std::vector<std::pair<int, int>>{
           {0, 1}, {0, 2}, {1, 3}, {1, 5}, {2, 3}, {2, 5}, {3, 4}, {4, 6}, {5, 6}})
    e.push_back({u, v, gain});
  return make_network(7, 0, 6, ChannelModel::gaussian_real(), e);
}

inline Network line(double h1, double h2) {
  return make_network(3, 0, 2, ChannelModel::gaussian_real(), {{0, 1, h1}, {1, 2, h2}});
}

inline Schedule random_joint(int n, std::mt19937_64& rng, int atoms = 0) {
  std::uniform_real_distribution<double> w(0.0, 1.0);
  std::map<NodeMask, double> e;
  if (atoms <= 0) {
    for (NodeMask m = 0; m < (NodeMask{1} << n); ++m) e[m] = w(rng);
  } else {
    std::uniform_int_distribution<NodeMask> pick(0, (NodeMask{1} << n) - 1);
    for (int i = 0; i < atoms; ++i) e[pick(rng)] += 0.05 + w(rng);
  }
  double total = 0;
  for (auto& [m, p] : e) total += p;
  for (auto& [m, p] : e) p /= total;
  return Schedule(n, e);
}

// All cuts {S} u A.
template <typename F>
void for_each_cut(const Network& net, F&& f) {
  const auto relays = members(net.relays());
  for (NodeMask a = 0; a < (NodeMask{1} << relays.size()); ++a) {
    NodeMask omega = bit(net.source());
    for (std::size_t i = 0; i < relays.size(); ++i)
      if ((a >> i) & 1U) omega |= bit(relays[i]);
    f(omega);
  }
}

}  // namespace fixtures
