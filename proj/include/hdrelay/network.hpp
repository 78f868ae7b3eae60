#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hdrelay/error.hpp"
#include "hdrelay/field_matrix.hpp"

namespace hdrelay {

using NodeId = int;

// Node subsets are bitmasks; bit v set means node v is in the set.
using NodeMask = std::uint64_t;

inline constexpr int kMaxNodes = 64;

constexpr NodeMask bit(NodeId v) { return NodeMask{1} << v; }
constexpr bool contains(NodeMask set, NodeId v) { return (set >> v) & 1U; }
int popcount(NodeMask set);
std::vector<NodeId> members(NodeMask set);
NodeMask mask_of(const std::vector<NodeId>& nodes);

enum class ModelKind { GaussianReal, GaussianComplex, LinearDeterministic };

struct ChannelModel {
  ModelKind kind = ModelKind::GaussianReal;
  int p = 2;  // field size, LinearDeterministic only
  int k = 0;  // vector length, LinearDeterministic only

  static ChannelModel gaussian_real() { return {ModelKind::GaussianReal, 2, 0}; }
  static ChannelModel gaussian_complex() { return {ModelKind::GaussianComplex, 2, 0}; }
  static ChannelModel linear_deterministic(int p, int k) {
    return {ModelKind::LinearDeterministic, p, k};
  }

  bool is_gaussian() const { return kind != ModelKind::LinearDeterministic; }
  friend bool operator==(const ChannelModel&, const ChannelModel&) = default;
};

// ADT link level n_uv; expands to the channel matrix S^(k - n_uv).
struct ShiftLevel {
  int n = 0;
  friend bool operator==(const ShiftLevel&, const ShiftLevel&) = default;
};

using GainValue = std::variant<double, std::complex<double>, ShiftLevel, FieldMatrix>;

struct Edge {
  NodeId from = 0;
  NodeId to = 0;
  GainValue gain = 1.0;
};

// Immutable, validated relay network.
class Network {
 public:
  int num_nodes() const noexcept { return num_nodes_; }
  NodeId source() const noexcept { return source_; }
  NodeId destination() const noexcept { return destination_; }
  const ChannelModel& model() const noexcept { return model_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  NodeMask all_nodes() const noexcept;
  // V \ {S, D}: the ground set of cut minimization.
  NodeMask relays() const noexcept;
  NodeMask out_neighbors(NodeId u) const { return out_[u]; }
  NodeMask in_neighbors(NodeId v) const { return in_[v]; }
  // Index into edges() of (u, v), if present.
  std::optional<std::size_t> edge_index(NodeId u, NodeId v) const;

  // Channel matrix of edge e for the linear deterministic model (k x k over F_p).
  FieldMatrix channel_matrix(std::size_t e) const;

 private:
  friend Network make_network(int, NodeId, NodeId, ChannelModel, std::vector<Edge>);

  int num_nodes_ = 0;
  NodeId source_ = 0;
  NodeId destination_ = 0;
  ChannelModel model_;
  std::vector<Edge> edges_;
  std::vector<NodeMask> out_;
  std::vector<NodeMask> in_;
  std::vector<std::int32_t> edge_lookup_;  // num_nodes^2, -1 where absent
};

// Validates and builds a Network. Throws ValidationError listing every
// violation (SelfLoop, DuplicateEdge, BadGainVariant, SourceEqualsDestination,
// BadNodeIndex).
Network make_network(int num_nodes, NodeId source, NodeId destination, ChannelModel model,
                     std::vector<Edge> edges);

// One transmit/receive assignment; bit v = 1 means node v transmits.
struct ModeConfig {
  NodeMask bits = 0;

  bool transmits(NodeId v) const { return contains(bits, v); }
  NodeMask transmitters(NodeMask all) const { return bits & all; }
  NodeMask receivers(NodeMask all) const { return ~bits & all; }
  friend auto operator<=>(const ModeConfig&, const ModeConfig&) = default;
};

// A cut Omega with S in Omega and D not in Omega.
class Cut {
 public:
  // Throws BadArgument unless source is inside and destination outside.
  Cut(const Network& net, NodeMask omega);
  // Omega = {S} union A for A a subset of the relays.
  static Cut from_relays(const Network& net, NodeMask relay_subset);

  NodeMask omega() const noexcept { return omega_; }
  bool contains(NodeId v) const { return hdrelay::contains(omega_, v); }
  friend bool operator==(const Cut&, const Cut&) = default;

 private:
  NodeMask omega_ = 0;
};

// Layer partition of a layered network: layer 0 = {S}, last layer = {D}, every
// edge goes from a layer to the next one. Empty when the network is not layered.
std::optional<std::vector<std::vector<NodeId>>> detect_layers(const Network& net);

std::string mode_string(ModeConfig m, int num_nodes);
ModeConfig parse_mode_string(const std::string& s);

}  // namespace hdrelay
