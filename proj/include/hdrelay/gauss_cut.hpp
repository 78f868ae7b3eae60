#pragma once

#include <utility>
#include <vector>

#include "hdrelay/network.hpp"
#include "hdrelay/schedule.hpp"

namespace hdrelay {

// G_Omega: the edges leaving Omega and the connected components they induce
// (undirected view; only nodes incident to a kept edge appear).
struct CutGraph {
  Cut omega;
  std::vector<std::pair<NodeId, NodeId>> kept_edges;
  std::vector<NodeMask> components;  // ordered by smallest member
};

CutGraph cut_graph(const Network& net, const Cut& omega);
// Components only, without materializing the edge list.
std::vector<NodeMask> cut_components(const Network& net, NodeMask omega);

// I(X_tx; Y_rx) in bits for independent unit-power Gaussian inputs, counting
// only edges tx -> rx: (1/2) log2 det(I + H H^T) for the real model,
// log2 det(I + H H^H) for the complex model.
double gaussian_cross_value(const Network& net, NodeMask tx, NodeMask rx);

// Value of cut Omega under mode m: transmitters A = Omega n T(m) to
// receivers B = Omega^c n R(m). Throws ModelMismatch for non-Gaussian models.
double mode_cut_value(const Network& net, const Cut& omega, ModeConfig m);

// sum_m q(m) mode_cut_value(net, omega, m).
double expected_cut_value(const Network& net, const Cut& omega, const Schedule& q);

// Component-decomposed cut value: sum over components of G_Omega of the
// expected component value under the local distribution of the first group
// that covers the component. Throws ComponentNotCovered when no group does.
double decomposed_cut_value(const Network& net, const Cut& omega, const GroupSchedule& locals);

}  // namespace hdrelay
