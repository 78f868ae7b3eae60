#include <algorithm>
#include <bit>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "hdrelay/cut_value.hpp"
#include "hdrelay/gauss_cut.hpp"
#include "hdrelay/generators.hpp"
#include "hdrelay/grouping.hpp"

using namespace hdrelay;
using fixtures::for_each_cut;

namespace {

using Groups = std::vector<std::vector<NodeId>>;

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an exception");
  return ErrorKind::BadArgument;
}

UndirectedGraph random_graph(int n, double p, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(p);
  UndirectedGraph g(n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (coin(rng)) g.add_edge(u, v);
  return g;
}

}  // namespace

TEST_CASE("heuristic grouping on the five-relay example") {
  const auto net = fixtures::five_relay();
  const auto g = heuristic_grouping(net);
  CHECK(g.groups == Groups{{0, 1, 2}, {1, 2, 3, 5}, {3, 4}, {4, 5, 6}});
  CHECK(check_sufficient_conditions(net, g));
  CHECK(check_p1_exhaustive(net, g));
}

TEST_CASE("heuristic grouping on a diamond gives consecutive layer pairs") {
  const auto net = gen_layered({1, 2, 1}, GainDist::unit(), 0);
  const auto g = heuristic_grouping(net);
  CHECK(g.groups == Groups{{0, 1, 2}, {1, 2, 3}});
  CHECK(check_sufficient_conditions(net, g));
}

TEST_CASE("heuristic grouping on layered networks matches layer unions") {
  const auto net = gen_layered({1, 3, 2, 2, 1}, GainDist::unit(), 0);
  const auto g = heuristic_grouping(net);
  CHECK(g.groups == layered_decomposition(net).bags);
}

TEST_CASE("heuristic grouping of the line with two-hop links is one group") {
  const auto net = gen_line_two_hop(7, GainDist::unit(), 0);
  const auto g = heuristic_grouping(net);
  REQUIRE(g.groups.size() == 1);
  CHECK(g.groups[0] == members(net.all_nodes()));
}

TEST_CASE("direct link only") {
  const auto net = make_network(2, 0, 1, ChannelModel::gaussian_real(), {{0, 1, 1.0}});
  CHECK(heuristic_grouping(net).groups == Groups{{0, 1}});
  const auto iso = make_network(3, 0, 2, ChannelModel::gaussian_real(), {{0, 2, 1.0}});
  CHECK(heuristic_grouping(iso).groups == Groups{{0, 2}, {1}});
}

TEST_CASE("sufficient conditions report the broken rule") {
  const auto net = fixtures::five_relay();
  NodeGrouping g{{{0, 1, 2}, {1, 2, 3}, {3, 4}, {4, 5, 6}}};
  auto v = sufficient_condition_violations(net, g);
  REQUIRE_FALSE(v.empty());
  bool rule2 = false;
  for (const auto& x : v) rule2 |= x.rule == 2 && x.group == 1;
  CHECK(rule2);

  NodeGrouping h{{{0, 1, 2}, {1, 2, 3, 5}, {3, 4}, {5, 6}}};
  v = sufficient_condition_violations(net, h);
  bool rule3 = false;
  for (const auto& x : v) rule3 |= x.rule == 3 && x.node == 6;
  CHECK(rule3);

  NodeGrouping missing{{{0, 1, 2}, {1, 2, 3, 5}, {4, 5, 6}}};
  v = sufficient_condition_violations(net, missing);
  bool rule1 = false;
  for (const auto& x : v) rule1 |= x.rule == 1 && x.node == 3;
  CHECK(rule1);
}

TEST_CASE("layered grouping satisfies the sufficient conditions and P1") {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto net = gen_layered({1, 2, 3, 1}, GainDist::gaussian(1.0), seed);
    const auto g = layered_decomposition(net).grouping();
    CHECK(check_sufficient_conditions(net, g));
    CHECK(check_p1_exhaustive(net, g));
  }
}

TEST_CASE("P1 on the line with two-hop links") {
  const auto net = gen_line_two_hop(9, GainDist::unit(), 0);
  const auto fours = line_two_hop_decomposition(net).grouping();
  CHECK(check_p1_exhaustive(net, fours));
  CHECK_FALSE(check_sufficient_conditions(net, fours));

  NodeGrouping pairs;
  for (int i = 0; i + 1 < 9; ++i) pairs.groups.push_back({i, i + 1});
  CHECK_FALSE(check_p1_exhaustive(net, pairs));
  // Omega = {0, 2} has the component {2, 3, 4}.
  const auto comps = cut_components(net, 0b101);
  CHECK(std::any_of(comps.begin(), comps.end(), [](NodeMask c) { return std::popcount(c) >= 3; }));
}

TEST_CASE("exhaustive P1 check refuses large ground sets") {
  const auto net = gen_layered({1, 6, 6, 6, 1}, GainDist::unit(), 0);
  CHECK(kind_of([&] { check_p1_exhaustive(net, heuristic_grouping(net)); }) == ErrorKind::GroundSetTooLarge);
}

TEST_CASE("clique graph edge counts") {
  const auto net = fixtures::five_relay();
  CHECK(build_clique_graph(net, heuristic_grouping(net)).num_edges() == 12);

  const auto diamond = gen_layered({1, 2, 1}, GainDist::unit(), 0);
  const auto gd = build_clique_graph(diamond, heuristic_grouping(diamond));
  CHECK(gd.num_edges() == 5);
  CHECK(gd.has_edge(1, 2));
  CHECK_FALSE(gd.has_edge(0, 3));

  const auto edgeless = make_network(4, 0, 3, ChannelModel::gaussian_real(), {});
  CHECK(build_clique_graph(edgeless, NodeGrouping{{{0}, {1}, {2}, {3}}}).num_edges() == 0);
  CHECK(build_clique_graph(edgeless, NodeGrouping{{{0, 1, 2, 3}}}).num_edges() == 6);
}

TEST_CASE("tree decomposition of a path has width one") {
  UndirectedGraph g(6);
  for (int i = 0; i + 1 < 6; ++i) g.add_edge(i, i + 1);
  const auto td = tree_decompose(g);
  CHECK(td.width() == 1);
  CHECK(td.bags.size() == 5);
  for (const auto& b : td.bags) CHECK(b.size() == 2);
}

TEST_CASE("tree decomposition of a complete graph is one bag") {
  UndirectedGraph g(5);
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j) g.add_edge(i, j);
  const auto td = tree_decompose(g);
  REQUIRE(td.bags.size() == 1);
  CHECK(td.bags[0] == std::vector<NodeId>{0, 1, 2, 3, 4});
  CHECK(td.tree_edges.empty());
}

TEST_CASE("tree decomposition of the two-hop line clique graph") {
  const int n = 9;
  const auto net = gen_line_two_hop(n, GainDist::unit(), 0);
  const auto g = build_clique_graph(net, line_two_hop_decomposition(net).grouping());
  const auto td = tree_decompose(g);
  CHECK(td.width() == 3);
  REQUIRE(td.bags.size() == static_cast<std::size_t>(n - 3));
  for (int i = 0; i + 3 < n; ++i) CHECK(td.bags[i] == std::vector<NodeId>{i, i + 1, i + 2, i + 3});
}

TEST_CASE("tree decompositions of random graphs are valid") {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 40; ++t) {
    const int n = 2 + t % 12;
    const auto g = random_graph(n, 0.1 + 0.02 * t, rng);
    const auto td = tree_decompose(g);
    CHECK(tree_decomposition_violations(g, td).empty());
    CHECK(td.bags.size() <= static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < td.bags.size(); ++i)
      for (auto [a, b] : td.tree_edges) {
        const auto ma = mask_of(td.bags[a]), mb = mask_of(td.bags[b]);
        CHECK((ma & ~mb) != 0);
        CHECK((mb & ~ma) != 0);
      }
  }
}

TEST_CASE("violation checker catches a broken running intersection") {
  UndirectedGraph g(3);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  TreeDecomposition td{3, {{0, 1}, {2}, {1, 2}}, {{0, 1}, {1, 2}}};
  CHECK_FALSE(tree_decomposition_violations(g, td).empty());
}

TEST_CASE("reconstruction of the five-relay example") {
  const auto net = fixtures::five_relay();
  const auto td = tree_decompose(build_clique_graph(net, heuristic_grouping(net)));
  std::mt19937_64 rng(4);
  const auto joint = fixtures::random_joint(7, rng);
  const auto locals = marginalize(joint, td.bags);
  const auto q = reconstruct_joint(td, locals);
  const auto again = marginalize(q, td.bags);
  for (std::size_t i = 0; i < td.bags.size(); ++i)
    for (std::size_t l = 0; l < locals.locals()[i].size(); ++l)
      CHECK(again.locals()[i][l] == doctest::Approx(locals.locals()[i][l]).epsilon(1e-12));
  CutValueCache cache(net);
  for_each_cut(net, [&](NodeMask omega) {
    CHECK(joint_cut_value(cache, omega, q) ==
          doctest::Approx(grouped_cut_value(cache, omega, locals)).epsilon(1e-10));
    CHECK(joint_cut_value(cache, omega, joint) ==
          doctest::Approx(grouped_cut_value(cache, omega, locals)).epsilon(1e-10));
  });
}

TEST_CASE("uniform locals give the uniform joint") {
  const auto net = gen_line_two_hop(6, GainDist::unit(), 0);
  const auto td = line_two_hop_decomposition(net);
  std::vector<std::vector<double>> locals;
  for (const auto& b : td.bags) locals.emplace_back(std::size_t{1} << b.size(), 1.0 / (1 << b.size()));
  const auto q = reconstruct_joint(td, GroupSchedule(6, td.bags, locals));
  CHECK(q.support_size() == 64);
  for (const auto& [m, p] : q.entries()) CHECK(p == doctest::Approx(1.0 / 64).epsilon(1e-12));
}

TEST_CASE("reconstruction guards") {
  const auto net = gen_line_two_hop(5, GainDist::unit(), 0);
  const auto td = line_two_hop_decomposition(net);
  std::mt19937_64 rng(1);
  const auto locals = marginalize(fixtures::random_joint(5, rng), {{0, 1, 2, 3, 4}});
  CHECK(kind_of([&] { reconstruct_joint(td, locals); }) == ErrorKind::BadArgument);
  TreeDecomposition big{17, {members((NodeMask{1} << 17) - 1)}, {}};
  CHECK(kind_of([&] {
          reconstruct_joint(big, GroupSchedule(17, big.bags, {std::vector<double>(1 << 17, 1.0 / (1 << 17))}));
        }) == ErrorKind::GroundSetTooLarge);
  CHECK(kind_of([&] {
          GroupSchedule(3, {{0, 1}, {1, 2}}, {{0.5, 0.5, 0.0, 0.0}, {0.5, 0.5, 0.0, 0.0}});
        }) == ErrorKind::InconsistentMarginals);
}

TEST_CASE("layered decomposition rejects non-layered networks") {
  CHECK(kind_of([&] { layered_decomposition(fixtures::five_relay()); }) == ErrorKind::NotLayered);
}
