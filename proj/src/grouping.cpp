#include "hdrelay/grouping.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <set>

#include "hdrelay/cut_value.hpp"
#include "hdrelay/gauss_cut.hpp"

namespace hdrelay {

std::vector<NodeMask> NodeGrouping::masks() const {
  std::vector<NodeMask> out;
  out.reserve(groups.size());
  for (const auto& g : groups) out.push_back(mask_of(g));
  return out;
}

NodeMask NodeGrouping::covered() const {
  NodeMask all = 0;
  for (NodeMask m : masks()) all |= m;
  return all;
}

void UndirectedGraph::add_edge(NodeId u, NodeId v) {
  if (u == v) return;
  adj[u] |= bit(v);
  adj[v] |= bit(u);
}

int UndirectedGraph::num_edges() const {
  int total = 0;
  for (NodeMask a : adj) total += std::popcount(a);
  return total / 2;
}

std::vector<std::pair<NodeId, NodeId>> UndirectedGraph::edge_list() const {
  std::vector<std::pair<NodeId, NodeId>> out;
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v : members(adj[u]))
      if (u < v) out.emplace_back(u, v);
  return out;
}

int TreeDecomposition::width() const {
  std::size_t w = 0;
  for (const auto& b : bags) w = std::max(w, b.size());
  return static_cast<int>(w) - 1;
}

std::vector<NodeMask> TreeDecomposition::bag_masks() const {
  std::vector<NodeMask> out;
  for (const auto& b : bags) out.push_back(mask_of(b));
  return out;
}

namespace {

NodeMask group_transmitters(const Network& net, NodeMask group) {
  NodeMask t = 0;
  for (NodeId v : members(group))
    if (net.out_neighbors(v) & group) t |= bit(v);
  return t;
}

NodeMask group_receivers(const Network& net, NodeMask group) {
  NodeMask r = 0;
  for (NodeId v : members(group))
    if (net.in_neighbors(v) & group) r |= bit(v);
  return r;
}

}  // namespace

NodeGrouping heuristic_grouping(const Network& net) {
  NodeGrouping out;
  NodeMask is_transmitter = 0;
  NodeMask covered = 0;
  for (NodeId seed = 0; seed < net.num_nodes(); ++seed) {
    if (contains(is_transmitter, seed) || !net.out_neighbors(seed)) continue;
    NodeMask group = bit(seed) | net.out_neighbors(seed);
    for (;;) {
      NodeMask grown = group;
      for (NodeId v : members(group_transmitters(net, group))) grown |= net.out_neighbors(v);
      for (NodeId v : members(group_receivers(net, group))) grown |= net.in_neighbors(v);
      if (grown == group) break;
      group = grown;
    }
    is_transmitter |= group_transmitters(net, group);
    covered |= group;
    out.groups.push_back(members(group));
  }
  for (NodeId v : members(net.all_nodes() & ~covered)) out.groups.push_back({v});
  return out;
}

std::vector<GroupingViolation> sufficient_condition_violations(const Network& net,
                                                               const NodeGrouping& g) {
  std::vector<GroupingViolation> out;
  const auto masks = g.masks();
  NodeMask covered = 0;
  NodeMask transmitters = 0;
  for (std::size_t l = 0; l < masks.size(); ++l) {
    covered |= masks[l];
    const NodeMask tx = group_transmitters(net, masks[l]);
    const NodeMask rx = group_receivers(net, masks[l]);
    transmitters |= tx;
    const int gi = static_cast<int>(l);
    for (NodeId i : members(tx))
      for (NodeId j : members(net.out_neighbors(i) & ~masks[l]))
        out.push_back({2, i, gi,
                       "transmitter " + std::to_string(i) + " of group " + std::to_string(l) +
                           " has out-neighbour " + std::to_string(j) + " outside the group"});
    for (NodeId j : members(rx))
      for (NodeId i : members(net.in_neighbors(j) & ~masks[l]))
        out.push_back({3, j, gi,
                       "receiver " + std::to_string(j) + " of group " + std::to_string(l) +
                           " has in-neighbour " + std::to_string(i) + " outside the group"});
  }
  for (NodeId v : members(net.all_nodes() & ~covered))
    out.push_back({0, v, -1, "node " + std::to_string(v) + " is in no group"});
  for (NodeId v = 0; v < net.num_nodes(); ++v)
    if (net.out_neighbors(v) && !contains(transmitters, v))
      out.push_back({1, v, -1, "node " + std::to_string(v) + " is a transmitter in no group"});
  return out;
}

bool check_p1_exhaustive(const Network& net, const NodeGrouping& g, int cap) {
  const auto relays = members(net.relays());
  if (static_cast<int>(relays.size()) > cap)
    throw Error(ErrorKind::GroundSetTooLarge,
                std::to_string(relays.size()) + " relays exceed the exhaustive P1 cap of " +
                    std::to_string(cap));
  const auto masks = g.masks();
  for (NodeMask a = 0; a < (NodeMask{1} << relays.size()); ++a) {
    NodeMask omega = bit(net.source());
    for (std::size_t i = 0; i < relays.size(); ++i)
      if ((a >> i) & 1U) omega |= bit(relays[i]);
    for (NodeMask comp : cut_components(net, omega))
      if (covering_group(masks, comp) < 0) return false;
  }
  return true;
}

UndirectedGraph build_clique_graph(const Network& net, const NodeGrouping& g) {
  UndirectedGraph out(net.num_nodes());
  for (const auto& e : net.edges()) out.add_edge(e.from, e.to);
  for (const auto& group : g.groups)
    for (std::size_t i = 0; i < group.size(); ++i)
      for (std::size_t j = i + 1; j < group.size(); ++j) out.add_edge(group[i], group[j]);
  return out;
}

std::vector<std::string> tree_decomposition_violations(const UndirectedGraph& g,
                                                       const TreeDecomposition& td) {
  std::vector<std::string> out;
  const auto bags = td.bag_masks();
  const int k = static_cast<int>(bags.size());
  NodeMask all = 0;
  for (NodeMask b : bags) all |= b;
  const NodeMask vertices = g.n == 64 ? ~NodeMask{0} : (NodeMask{1} << g.n) - 1;
  if ((all & vertices) != vertices) out.push_back("bags do not cover every vertex");
  if (all & ~vertices) out.push_back("a bag holds a vertex outside the graph");

  for (auto [u, v] : g.edge_list()) {
    const NodeMask e = bit(u) | bit(v);
    if (std::none_of(bags.begin(), bags.end(), [&](NodeMask b) { return (b & e) == e; }))
      out.push_back("edge " + std::to_string(u) + "-" + std::to_string(v) + " lies in no bag");
  }

  std::vector<std::vector<int>> nbr(static_cast<std::size_t>(k));
  for (auto [a, b] : td.tree_edges) {
    if (a < 0 || b < 0 || a >= k || b >= k || a == b) {
      out.push_back("tree edge with a bad bag index");
      return out;
    }
    nbr[a].push_back(b);
    nbr[b].push_back(a);
  }
  if (k > 0 && static_cast<int>(td.tree_edges.size()) != k - 1) out.push_back("tree has the wrong number of edges");

  // Connectivity of the bags satisfying `keep`, seeded from the first one.
  auto connected = [&](auto keep) {
    std::vector<char> seen(static_cast<std::size_t>(k), 0);
    int start = -1, want = 0;
    for (int i = 0; i < k; ++i)
      if (keep(i)) {
        ++want;
        if (start < 0) start = i;
      }
    if (start < 0) return true;
    std::vector<int> stack{start};
    seen[start] = 1;
    int got = 0;
    while (!stack.empty()) {
      const int i = stack.back();
      stack.pop_back();
      ++got;
      for (int j : nbr[i])
        if (!seen[j] && keep(j)) {
          seen[j] = 1;
          stack.push_back(j);
        }
    }
    return got == want;
  };
  if (!connected([](int) { return true; })) out.push_back("tree is not connected");
  for (NodeId v = 0; v < g.n; ++v)
    if (!connected([&](int i) { return contains(bags[i], v); }))
      out.push_back("bags holding vertex " + std::to_string(v) + " are not a connected subtree");
  return out;
}

TreeDecomposition tree_decompose(const UndirectedGraph& g) {
  const int n = g.n;
  std::vector<NodeMask> adj = g.adj;
  NodeMask remaining = n == 64 ? ~NodeMask{0} : (NodeMask{1} << n) - 1;
  std::vector<NodeId> order;
  std::vector<NodeMask> bag_of(static_cast<std::size_t>(n), 0);
  std::vector<int> position(static_cast<std::size_t>(n), 0);

  auto fill_in = [&](NodeId v) {
    int missing = 0;
    for (NodeId u : members(adj[v])) missing += std::popcount(adj[v] & ~adj[u] & ~bit(u));
    return missing / 2;
  };

  while (remaining) {
    NodeId best = -1;
    int best_fill = 0, best_deg = 0;
    for (NodeId v : members(remaining)) {
      const int f = fill_in(v);
      const int d = std::popcount(adj[v]);
      if (best < 0 || f < best_fill || (f == best_fill && d < best_deg)) {
        best = v;
        best_fill = f;
        best_deg = d;
      }
    }
    const NodeMask nb = adj[best];
    bag_of[best] = nb | bit(best);
    position[best] = static_cast<int>(order.size());
    order.push_back(best);
    for (NodeId u : members(nb)) adj[u] = (adj[u] | nb) & ~bit(u) & ~bit(best);
    remaining &= ~bit(best);
  }

  // Bag i belongs to order[i]; its parent is the bag of the earliest-eliminated
  // remaining neighbour.
  const int k = n;
  std::vector<std::set<int>> tree(static_cast<std::size_t>(k));
  std::vector<int> roots;
  for (int i = 0; i < k; ++i) {
    const NodeMask later = bag_of[order[i]] & ~bit(order[i]);
    if (!later) {
      roots.push_back(i);
      continue;
    }
    int parent = k;
    for (NodeId u : members(later)) parent = std::min(parent, position[u]);
    tree[i].insert(parent);
    tree[parent].insert(i);
  }
  for (std::size_t r = 1; r < roots.size(); ++r) {
    tree[roots[r - 1]].insert(roots[r]);
    tree[roots[r]].insert(roots[r - 1]);
  }

  std::vector<NodeMask> bags(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) bags[i] = bag_of[order[i]];
  std::vector<char> alive(static_cast<std::size_t>(k), 1);
  for (bool changed = true; changed;) {
    changed = false;
    for (int a = 0; a < k && !changed; ++a) {
      if (!alive[a]) continue;
      for (int b : tree[a]) {
        if ((bags[a] & ~bags[b]) != 0) continue;
        // a is redundant: hand its other neighbours to b.
        for (int c : tree[a]) {
          tree[c].erase(a);
          if (c != b) {
            tree[c].insert(b);
            tree[b].insert(c);
          }
        }
        tree[a].clear();
        alive[a] = 0;
        changed = true;
        break;
      }
    }
  }

  TreeDecomposition td;
  td.num_nodes = n;
  std::vector<int> index(static_cast<std::size_t>(k), -1);
  for (int i = 0; i < k; ++i)
    if (alive[i]) {
      index[i] = static_cast<int>(td.bags.size());
      td.bags.push_back(members(bags[i]));
    }
  for (int i = 0; i < k; ++i)
    for (int j : tree[i])
      if (alive[i] && i < j) td.tree_edges.emplace_back(index[i], index[j]);

  const auto problems = tree_decomposition_violations(g, td);
  if (!problems.empty())
    throw Error(ErrorKind::InternalVerificationFailure, "tree decomposition check failed: " + problems.front());
  return td;
}

TreeDecomposition layered_decomposition(const Network& net) {
  const auto layers = detect_layers(net);
  if (!layers) throw Error(ErrorKind::NotLayered, "network is not layered");
  TreeDecomposition td;
  td.num_nodes = net.num_nodes();
  for (std::size_t i = 0; i + 1 < layers->size(); ++i) {
    std::vector<NodeId> bag = (*layers)[i];
    bag.insert(bag.end(), (*layers)[i + 1].begin(), (*layers)[i + 1].end());
    std::sort(bag.begin(), bag.end());
    td.bags.push_back(std::move(bag));
    if (i > 0) td.tree_edges.emplace_back(static_cast<int>(i) - 1, static_cast<int>(i));
  }
  return td;
}

TreeDecomposition line_two_hop_decomposition(const Network& net) {
  for (const auto& e : net.edges())
    if (std::abs(e.from - e.to) > 2)
      throw Error(ErrorKind::BadArgument, "edge " + std::to_string(e.from) + "->" + std::to_string(e.to) +
                                              " spans more than two positions");
  const int n = net.num_nodes();
  TreeDecomposition td;
  td.num_nodes = n;
  if (n < 4) {
    td.bags.push_back(members(net.all_nodes()));
    return td;
  }
  for (int i = 0; i + 3 < n; ++i) {
    td.bags.push_back({i, i + 1, i + 2, i + 3});
    if (i > 0) td.tree_edges.emplace_back(i - 1, i);
  }
  return td;
}

Schedule reconstruct_joint(const TreeDecomposition& td, const GroupSchedule& locals) {
  const int n = td.num_nodes;
  if (n > kReconstructMaxNodes)
    throw Error(ErrorKind::GroundSetTooLarge,
                std::to_string(n) + " nodes exceed the dense reconstruction cap of " +
                    std::to_string(kReconstructMaxNodes));
  if (locals.num_nodes() != n || locals.groups() != td.bags)
    throw Error(ErrorKind::BadArgument, "local distributions are not indexed by the decomposition bags");

  const auto bags = td.bag_masks();
  double worst = 0.0;
  for (auto [a, b] : td.tree_edges) {
    const NodeMask sep = bags[a] & bags[b];
    const auto ma = locals.marginal(a, sep);
    const auto mb = locals.marginal(b, sep);
    for (const auto& [m, p] : ma) {
      auto it = mb.find(m);
      worst = std::max(worst, std::abs(p - (it == mb.end() ? 0.0 : it->second)));
    }
  }
  if (worst > kConsistencyTolerance)
    throw Error(ErrorKind::InconsistentMarginals,
                "separator marginals differ by " + std::to_string(worst));

  // Bag tables keyed by the global mode restricted to the bag.
  std::vector<std::map<NodeMask, double>> tables;
  for (std::size_t i = 0; i < bags.size(); ++i) tables.push_back(locals.marginal(i, bags[i]));
  std::vector<std::pair<NodeMask, std::map<NodeMask, double>>> separators;
  for (auto [a, b] : td.tree_edges) {
    const NodeMask sep = bags[a] & bags[b];
    separators.emplace_back(sep, locals.marginal(a, sep));
  }

  std::map<NodeMask, double> joint;
  for (NodeMask m = 0; m < (NodeMask{1} << n); ++m) {
    double num = 1.0;
    for (std::size_t i = 0; i < bags.size() && num > 0.0; ++i) {
      auto it = tables[i].find(m & bags[i]);
      num *= it == tables[i].end() ? 0.0 : it->second;
    }
    if (num <= 0.0) continue;
    double den = 1.0;
    for (const auto& [sep, table] : separators) {
      auto it = table.find(m & sep);
      den *= it == table.end() ? 0.0 : it->second;
    }
    if (den > 0.0) joint[m] = num / den;
  }
  return Schedule::from_approximate(n, joint);
}

}  // namespace hdrelay
