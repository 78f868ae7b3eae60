#include "hdrelay/gauss_cut.hpp"

#include <bit>
#include <cmath>
#include <numbers>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "hdrelay/cut_value.hpp"

namespace hdrelay {

std::vector<NodeMask> cut_components(const Network& net, NodeMask omega) {
  const NodeMask all = net.all_nodes();
  const NodeMask outside = all & ~omega;
  // Undirected neighbors in G_Omega.
  auto neighbors = [&](NodeId v) {
    return contains(omega, v) ? net.out_neighbors(v) & outside : net.in_neighbors(v) & omega;
  };
  NodeMask unvisited = 0;
  for (NodeId u : members(omega & all))
    if (net.out_neighbors(u) & outside) unvisited |= bit(u) | (net.out_neighbors(u) & outside);

  std::vector<NodeMask> components;
  while (unvisited) {
    const NodeId start = std::countr_zero(unvisited);
    NodeMask comp = bit(start);
    NodeMask frontier = comp;
    while (frontier) {
      const NodeId v = std::countr_zero(frontier);
      frontier &= frontier - 1;
      const NodeMask fresh = neighbors(v) & ~comp;
      comp |= fresh;
      frontier |= fresh;
    }
    components.push_back(comp);
    unvisited &= ~comp;
  }
  return components;
}

CutGraph cut_graph(const Network& net, const Cut& omega) {
  CutGraph g{omega, {}, {}};
  for (const auto& e : net.edges())
    if (omega.contains(e.from) && !omega.contains(e.to)) g.kept_edges.emplace_back(e.from, e.to);
  g.components = cut_components(net, omega.omega());
  return g;
}

namespace {

template <typename Matrix>
double log_det_identity_plus_gram(const Matrix& h) {
  // det(I + H H^*) = det(I + H^* H); factor the smaller one.
  using Scalar = typename Matrix::Scalar;
  using Square = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Square gram = h.rows() <= h.cols() ? Square(h * h.adjoint()) : Square(h.adjoint() * h);
  gram.diagonal().array() += Scalar(1);
  Eigen::LLT<Square> llt(gram);
  if (llt.info() != Eigen::Success)
    throw Error(ErrorKind::NumericalInstability, "Cholesky factorization of I + HH* failed");
  double log_det = 0.0;
  const auto& l = llt.matrixLLT();
  for (Eigen::Index i = 0; i < l.rows(); ++i) log_det += 2.0 * std::log(std::real(l(i, i)));
  return log_det;
}

}  // namespace

double gaussian_cross_value(const Network& net, NodeMask tx, NodeMask rx) {
  if (!net.model().is_gaussian())
    throw Error(ErrorKind::ModelMismatch, "Gaussian cut value requested on a linear deterministic network");
  const auto a = members(tx);
  const auto b = members(rx);
  if (a.empty() || b.empty()) return 0.0;
  const auto rows = static_cast<Eigen::Index>(b.size());
  const auto cols = static_cast<Eigen::Index>(a.size());
  double nats = 0.0;
  if (net.model().kind == ModelKind::GaussianReal) {
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(rows, cols);
    bool any = false;
    for (Eigen::Index r = 0; r < rows; ++r)
      for (Eigen::Index c = 0; c < cols; ++c)
        if (auto e = net.edge_index(a[c], b[r])) {
          h(r, c) = std::get<double>(net.edges()[*e].gain);
          any = true;
        }
    if (!any) return 0.0;
    nats = 0.5 * log_det_identity_plus_gram(h);
  } else {
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(rows, cols);
    bool any = false;
    for (Eigen::Index r = 0; r < rows; ++r)
      for (Eigen::Index c = 0; c < cols; ++c)
        if (auto e = net.edge_index(a[c], b[r])) {
          h(r, c) = std::get<std::complex<double>>(net.edges()[*e].gain);
          any = true;
        }
    if (!any) return 0.0;
    nats = log_det_identity_plus_gram(h);
  }
  return std::max(0.0, nats / std::numbers::ln2);
}

double mode_cut_value(const Network& net, const Cut& omega, ModeConfig m) {
  const NodeMask all = net.all_nodes();
  return gaussian_cross_value(net, omega.omega() & m.bits, all & ~omega.omega() & ~m.bits);
}

double expected_cut_value(const Network& net, const Cut& omega, const Schedule& q) {
  if (!net.model().is_gaussian())
    throw Error(ErrorKind::ModelMismatch, "Gaussian cut value requested on a linear deterministic network");
  double total = 0.0;
  for (const auto& [mask, p] : q.entries()) total += p * mode_cut_value(net, omega, ModeConfig{mask});
  return total;
}

double decomposed_cut_value(const Network& net, const Cut& omega, const GroupSchedule& locals) {
  if (!net.model().is_gaussian())
    throw Error(ErrorKind::ModelMismatch, "Gaussian cut value requested on a linear deterministic network");
  CutValueCache cache(net);
  return grouped_cut_value(cache, omega.omega(), locals);
}

}  // namespace hdrelay
