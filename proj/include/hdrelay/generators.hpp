#pragma once

#include <cstdint>
#include <vector>

#include "hdrelay/network.hpp"

namespace hdrelay {

// How random link gains are drawn.
struct GainDist {
  enum class Kind { Unit, Gaussian, ComplexGaussian, AdtLevels };
  Kind kind = Kind::Unit;
  double power = 1.0;  // variance P for Gaussian / ComplexGaussian
  int k = 1;           // AdtLevels: levels uniform in [0, k]
  int p = 2;           // AdtLevels: field size

  static GainDist unit() { return {}; }
  static GainDist gaussian(double power) { return {Kind::Gaussian, power, 1, 2}; }
  // CN(0, P): real and imaginary parts i.i.d. N(0, P/2).
  static GainDist complex_gaussian(double power) { return {Kind::ComplexGaussian, power, 1, 2}; }
  static GainDist adt_levels(int k, int p = 2) { return {Kind::AdtLevels, 1.0, k, p}; }

  ChannelModel model() const;
};

// Fully connected consecutive layers; widths[0] = widths.back() = 1. Nodes are
// numbered layer by layer, S = 0, D = last. Deterministic in `seed`.
Network gen_layered(const std::vector<int>& widths, const GainDist& dist, std::uint64_t seed);

// Nodes 0..n-1, edges (i, i+1) and (i, i+2); S = 0, D = n-1.
Network gen_line_two_hop(int n, const GainDist& dist, std::uint64_t seed);

// Random digraph on relays + 2 nodes: every ordered pair (u, v) with u != D,
// v != S becomes an edge with probability `edge_prob`. S = 0, D = relays + 1.
Network gen_random(int relays, double edge_prob, const GainDist& dist, std::uint64_t seed);

}  // namespace hdrelay
