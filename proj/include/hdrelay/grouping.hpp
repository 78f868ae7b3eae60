#pragma once

#include <string>
#include <utility>
#include <vector>

#include "hdrelay/network.hpp"
#include "hdrelay/schedule.hpp"

namespace hdrelay {

// Possibly overlapping node subsets V_1..V_k; each list is in node order.
struct NodeGrouping {
  std::vector<std::vector<NodeId>> groups;

  std::vector<NodeMask> masks() const;
  NodeMask covered() const;
};

struct UndirectedGraph {
  int n = 0;
  std::vector<NodeMask> adj;

  explicit UndirectedGraph(int n_ = 0) : n(n_), adj(static_cast<std::size_t>(n_), 0) {}
  void add_edge(NodeId u, NodeId v);
  bool has_edge(NodeId u, NodeId v) const { return contains(adj[u], v); }
  int num_edges() const;
  std::vector<std::pair<NodeId, NodeId>> edge_list() const;  // u < v, sorted
};

struct TreeDecomposition {
  int num_nodes = 0;
  std::vector<std::vector<NodeId>> bags;
  std::vector<std::pair<int, int>> tree_edges;

  int width() const;
  std::vector<NodeMask> bag_masks() const;
  NodeGrouping grouping() const { return {bags}; }
};

// Greedy closure grouping: seed a node that is not yet a transmitter of any
// group, add out-neighbours of transmitters and in-neighbours of receivers
// until nothing changes, repeat. Nodes without any edge get a singleton group.
NodeGrouping heuristic_grouping(const Network& net);

struct GroupingViolation {
  int rule = 0;  // 0 coverage, 1..3 the three structural rules below
  NodeId node = -1;
  int group = -1;
  std::string message;
};

// Rule 1: every node with an outgoing edge is a transmitter in some group.
// Rule 2: a transmitter's out-neighbours all lie in its group.
// Rule 3: a receiver's in-neighbours all lie in its group.
// A transmitter (receiver) of V_l has an edge to (from) another node of V_l.
std::vector<GroupingViolation> sufficient_condition_violations(const Network& net,
                                                               const NodeGrouping& g);
inline bool check_sufficient_conditions(const Network& net, const NodeGrouping& g) {
  return sufficient_condition_violations(net, g).empty();
}

inline constexpr int kP1ExhaustiveCap = 16;

// Every component of every cut graph lies inside some group. Enumerates all
// cuts; throws GroundSetTooLarge above `cap` relays.
bool check_p1_exhaustive(const Network& net, const NodeGrouping& g, int cap = kP1ExhaustiveCap);

// Undirected E plus a clique on each group.
UndirectedGraph build_clique_graph(const Network& net, const NodeGrouping& g);

// Min-fill node elimination (ties: min degree, then lowest index). Bags that
// are contained in a tree neighbour are contracted away. Throws
// InternalVerificationFailure if the result is not a tree decomposition.
TreeDecomposition tree_decompose(const UndirectedGraph& g);

// Empty when td is a tree decomposition of g; otherwise one message per problem.
std::vector<std::string> tree_decomposition_violations(const UndirectedGraph& g,
                                                       const TreeDecomposition& td);

// Bags L_i u L_{i+1} on a path. Throws NotLayered.
TreeDecomposition layered_decomposition(const Network& net);
// Bags {i, .., i+3} on a path (one bag when |V| < 4). The network must use
// node order with edges only between nodes at most two apart.
TreeDecomposition line_two_hop_decomposition(const Network& net);

inline constexpr int kReconstructMaxNodes = 16;

// q(m) = prod_i q_i(m_Ci) / prod_{tree edges} q(m_separator), with 0/0 = 0.
// `locals` must be indexed by the bags of td. Throws InconsistentMarginals,
// GroundSetTooLarge above 16 nodes, BadArgument on bag mismatch.
Schedule reconstruct_joint(const TreeDecomposition& td, const GroupSchedule& locals);

}  // namespace hdrelay
