#include "hdrelay/network.hpp"

#include <bit>
#include <cmath>
#include <string>

namespace hdrelay {

int popcount(NodeMask set) { return std::popcount(set); }

std::vector<NodeId> members(NodeMask set) {
  std::vector<NodeId> out;
  out.reserve(std::popcount(set));
  while (set) {
    out.push_back(std::countr_zero(set));
    set &= set - 1;
  }
  return out;
}

NodeMask mask_of(const std::vector<NodeId>& nodes) {
  NodeMask m = 0;
  for (NodeId v : nodes) m |= bit(v);
  return m;
}

namespace {

bool gain_matches(const GainValue& g, const ChannelModel& model, std::string& why) {
  switch (model.kind) {
    case ModelKind::GaussianReal:
      if (!std::holds_alternative<double>(g)) {
        why = "GaussianReal model requires a real scalar gain";
        return false;
      }
      if (!std::isfinite(std::get<double>(g))) {
        why = "gain must be finite";
        return false;
      }
      return true;
    case ModelKind::GaussianComplex:
      if (!std::holds_alternative<std::complex<double>>(g)) {
        why = "GaussianComplex model requires a complex scalar gain";
        return false;
      }
      if (!std::isfinite(std::get<std::complex<double>>(g).real()) ||
          !std::isfinite(std::get<std::complex<double>>(g).imag())) {
        why = "gain must be finite";
        return false;
      }
      return true;
    case ModelKind::LinearDeterministic:
      if (const auto* s = std::get_if<ShiftLevel>(&g)) {
        if (s->n < 0 || s->n > model.k) {
          why = "shift level must lie in [0, k]";
          return false;
        }
        return true;
      }
      if (const auto* m = std::get_if<FieldMatrix>(&g)) {
        if (m->p() != model.p || m->rows() != model.k || m->cols() != model.k) {
          why = "field matrix must be k x k over F_p of the model";
          return false;
        }
        return true;
      }
      why = "LinearDeterministic model requires a shift level or a field matrix";
      return false;
  }
  return false;
}

}  // namespace

Network make_network(int num_nodes, NodeId source, NodeId destination, ChannelModel model,
                     std::vector<Edge> edges) {
  std::vector<Violation> violations;
  auto fail = [&](ErrorKind kind, std::string msg) { violations.push_back({kind, std::move(msg)}); };

  if (num_nodes < 2 || num_nodes > kMaxNodes) {
    fail(ErrorKind::BadNodeIndex, "node count must lie in [2, 64]");
    throw ValidationError(std::move(violations));
  }
  auto valid_node = [&](NodeId v) { return v >= 0 && v < num_nodes; };
  if (!valid_node(source)) fail(ErrorKind::BadNodeIndex, "source out of range");
  if (!valid_node(destination)) fail(ErrorKind::BadNodeIndex, "destination out of range");
  if (source == destination) fail(ErrorKind::SourceEqualsDestination, "source equals destination");
  if (model.kind == ModelKind::LinearDeterministic) {
    if (!is_prime(model.p)) fail(ErrorKind::BadArgument, "field size p must be prime");
    if (model.k < 1) fail(ErrorKind::BadArgument, "vector length k must be positive");
  }

  Network net;
  net.num_nodes_ = num_nodes;
  net.source_ = source;
  net.destination_ = destination;
  net.model_ = model;
  net.out_.assign(num_nodes, 0);
  net.in_.assign(num_nodes, 0);
  net.edge_lookup_.assign(static_cast<std::size_t>(num_nodes) * num_nodes, -1);

  for (std::size_t i = 0; i < edges.size(); ++i) {
    const Edge& e = edges[i];
    const std::string where = "edge #" + std::to_string(i) + " (" + std::to_string(e.from) + "," +
                              std::to_string(e.to) + ")";
    if (!valid_node(e.from) || !valid_node(e.to)) {
      fail(ErrorKind::BadNodeIndex, where + " references a node out of range");
      continue;
    }
    if (e.from == e.to) {
      fail(ErrorKind::SelfLoop, where + " is a self-loop");
      continue;
    }
    std::string why;
    if (!gain_matches(e.gain, model, why)) fail(ErrorKind::BadGainVariant, where + ": " + why);
    auto& slot = net.edge_lookup_[static_cast<std::size_t>(e.from) * num_nodes + e.to];
    if (slot >= 0) {
      fail(ErrorKind::DuplicateEdge, where + " duplicates an earlier edge");
      continue;
    }
    slot = static_cast<std::int32_t>(i);
    net.out_[e.from] |= bit(e.to);
    net.in_[e.to] |= bit(e.from);
  }
  if (!violations.empty()) throw ValidationError(std::move(violations));
  net.edges_ = std::move(edges);
  return net;
}

NodeMask Network::all_nodes() const noexcept {
  return num_nodes_ == 64 ? ~NodeMask{0} : (NodeMask{1} << num_nodes_) - 1;
}

NodeMask Network::relays() const noexcept { return all_nodes() & ~bit(source_) & ~bit(destination_); }

std::optional<std::size_t> Network::edge_index(NodeId u, NodeId v) const {
  const auto idx = edge_lookup_[static_cast<std::size_t>(u) * num_nodes_ + v];
  if (idx < 0) return std::nullopt;
  return static_cast<std::size_t>(idx);
}

FieldMatrix Network::channel_matrix(std::size_t e) const {
  if (model_.kind != ModelKind::LinearDeterministic)
    throw Error(ErrorKind::ModelMismatch, "channel matrices exist only for the linear deterministic model");
  const auto& g = edges_.at(e).gain;
  if (const auto* s = std::get_if<ShiftLevel>(&g)) return FieldMatrix::shift_power(model_.p, model_.k, s->n);
  return std::get<FieldMatrix>(g);
}

Cut::Cut(const Network& net, NodeMask omega) : omega_(omega & net.all_nodes()) {
  if (!hdrelay::contains(omega_, net.source()))
    throw Error(ErrorKind::BadArgument, "cut must contain the source");
  if (hdrelay::contains(omega_, net.destination()))
    throw Error(ErrorKind::BadArgument, "cut must exclude the destination");
}

Cut Cut::from_relays(const Network& net, NodeMask relay_subset) {
  return Cut(net, bit(net.source()) | (relay_subset & net.relays()));
}

std::optional<std::vector<std::vector<NodeId>>> detect_layers(const Network& net) {
  const int n = net.num_nodes();
  std::vector<int> layer(n, -1);
  layer[net.source()] = 0;
  std::vector<NodeId> frontier{net.source()};
  int depth = 0;
  while (!frontier.empty()) {
    std::vector<NodeId> next;
    for (NodeId u : frontier)
      for (NodeId v : members(net.out_neighbors(u)))
        if (layer[v] < 0) {
          layer[v] = depth + 1;
          next.push_back(v);
        }
    frontier = std::move(next);
    ++depth;
  }
  for (int v = 0; v < n; ++v)
    if (layer[v] < 0) return std::nullopt;
  for (const auto& e : net.edges())
    if (layer[e.to] != layer[e.from] + 1) return std::nullopt;
  int last = 0;
  for (int v = 0; v < n; ++v) last = std::max(last, layer[v]);
  std::vector<std::vector<NodeId>> layers(last + 1);
  for (int v = 0; v < n; ++v) layers[layer[v]].push_back(v);
  if (layers.back().size() != 1 || layers.back()[0] != net.destination()) return std::nullopt;
  return layers;
}

std::string mode_string(ModeConfig m, int num_nodes) {
  std::string s(num_nodes, '0');
  for (int v = 0; v < num_nodes; ++v)
    if (m.transmits(v)) s[v] = '1';
  return s;
}

ModeConfig parse_mode_string(const std::string& s) {
  if (s.empty() || s.size() > static_cast<std::size_t>(kMaxNodes))
    throw Error(ErrorKind::ParseError, "mode string length must lie in [1, 64]");
  ModeConfig m;
  for (std::size_t v = 0; v < s.size(); ++v) {
    if (s[v] == '1')
      m.bits |= bit(static_cast<NodeId>(v));
    else if (s[v] != '0')
      throw Error(ErrorKind::ParseError, "mode string must contain only '0' and '1'");
  }
  return m;
}

}  // namespace hdrelay
