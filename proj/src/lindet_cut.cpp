#include "hdrelay/lindet_cut.hpp"

#include "hdrelay/cut_value.hpp"

namespace hdrelay {

namespace {

void require_lindet(const Network& net) {
  if (net.model().kind != ModelKind::LinearDeterministic)
    throw Error(ErrorKind::ModelMismatch, "rank cut value requested on a Gaussian network");
}

}  // namespace

FieldMatrix transfer_matrix(const Network& net, NodeMask tx, NodeMask rx) {
  require_lindet(net);
  const int k = net.model().k;
  const auto a = members(tx);
  const auto b = members(rx);
  FieldMatrix lambda(net.model().p, static_cast<int>(b.size()) * k, static_cast<int>(a.size()) * k);
  for (std::size_t r = 0; r < b.size(); ++r) {
    for (std::size_t c = 0; c < a.size(); ++c) {
      auto e = net.edge_index(a[c], b[r]);
      if (!e) continue;
      const FieldMatrix g = net.channel_matrix(*e);
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) lambda.set(static_cast<int>(r) * k + i, static_cast<int>(c) * k + j, g(i, j));
    }
  }
  return lambda;
}

int lindet_cross_rank(const Network& net, NodeMask tx, NodeMask rx) {
  require_lindet(net);
  if (!tx || !rx) return 0;
  return rank_mod_p(transfer_matrix(net, tx, rx));
}

int lindet_mode_cut_value(const Network& net, const Cut& omega, ModeConfig m) {
  return lindet_cross_rank(net, omega.omega() & m.bits, net.all_nodes() & ~omega.omega() & ~m.bits);
}

double lindet_expected_cut_value(const Network& net, const Cut& omega, const Schedule& q) {
  require_lindet(net);
  double total = 0.0;
  for (const auto& [mask, p] : q.entries()) total += p * lindet_mode_cut_value(net, omega, ModeConfig{mask});
  return total;
}

double lindet_expected_cut_value(const Network& net, const Cut& omega, const GroupSchedule& locals) {
  require_lindet(net);
  CutValueCache cache(net);
  return grouped_cut_value(cache, omega.omega(), locals);
}

}  // namespace hdrelay
