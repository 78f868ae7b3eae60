#include <cmath>
#include <functional>
#include <optional>
#include <random>

#include <Eigen/Dense>

#include "doctest.h"
#include "hdrelay/error.hpp"
#include "hdrelay/lp.hpp"

using namespace hdrelay;

namespace {

// Best vertex over all choices of n tight constraints (bounds included).
std::optional<double> vertex_oracle(const LinearProgram& lp) {
  const int n = lp.num_vars();
  std::vector<std::pair<std::vector<double>, double>> hyper;
  for (const auto& r : lp.rows) {
    std::vector<double> a(n, 0.0);
    for (auto [j, c] : r.terms) a[j] += c;
    hyper.emplace_back(a, r.rhs);
  }
  for (int j = 0; j < n; ++j) {
    std::vector<double> e(n, 0.0);
    e[j] = 1.0;
    hyper.emplace_back(e, lp.lower[j]);
    hyper.emplace_back(e, lp.upper[j]);
  }
  const int h = static_cast<int>(hyper.size());
  std::optional<double> best;
  std::vector<int> pick(n);
  auto feasible = [&](const Eigen::VectorXd& x) {
    for (int j = 0; j < n; ++j)
      if (x(j) < lp.lower[j] - 1e-9 || x(j) > lp.upper[j] + 1e-9) return false;
    for (const auto& r : lp.rows) {
      double lhs = 0;
      for (auto [j, c] : r.terms) lhs += c * x(j);
      if (r.sense == RowSense::Le && lhs > r.rhs + 1e-9) return false;
      if (r.sense == RowSense::Ge && lhs < r.rhs - 1e-9) return false;
      if (r.sense == RowSense::Eq && std::abs(lhs - r.rhs) > 1e-9) return false;
    }
    return true;
  };
  // Iterate n-subsets of hyperplanes.
  std::function<void(int, int)> rec = [&](int start, int depth) {
    if (depth == n) {
      Eigen::MatrixXd a(n, n);
      Eigen::VectorXd b(n);
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) a(i, j) = hyper[pick[i]].first[j];
        b(i) = hyper[pick[i]].second;
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
      if (lu.rank() < n) return;
      const Eigen::VectorXd x = lu.solve(b);
      if (!feasible(x)) return;
      double v = 0;
      for (int j = 0; j < n; ++j) v += lp.objective[j] * x(j);
      if (!best || v < *best) best = v;
      return;
    }
    for (int i = start; i < h; ++i) {
      pick[depth] = i;
      rec(i + 1, depth + 1);
    }
  };
  rec(0, 0);
  return best;
}

}  // namespace

TEST_CASE("max x with two upper limits") {
  LinearProgram lp;
  const int x = lp.add_var(-1.0);
  lp.add_row({{{x, 1.0}}, RowSense::Le, 3.0});
  lp.add_row({{{x, 1.0}}, RowSense::Le, 5.0});
  const auto s = lp_solve(lp);
  REQUIRE(s.status == LpStatus::Optimal);
  CHECK(s.x[x] == doctest::Approx(3.0));
}

TEST_CASE("contradictory rows are infeasible") {
  LinearProgram lp;
  const int x = lp.add_var(1.0);
  lp.add_row({{{x, 1.0}}, RowSense::Ge, 2.0});
  lp.add_row({{{x, 1.0}}, RowSense::Le, 1.0});
  CHECK(lp_solve(lp).status == LpStatus::Infeasible);
}

TEST_CASE("unbounded direction is reported") {
  LinearProgram lp;
  const int x = lp.add_var(-1.0);
  const int y = lp.add_var(0.0);
  lp.add_row({{{x, 1.0}, {y, -1.0}}, RowSense::Le, 1.0});
  CHECK(lp_solve(lp).status == LpStatus::Unbounded);
}

TEST_CASE("equalities, shifted lower bounds and redundant rows") {
  LinearProgram lp;
  const int a = lp.add_var(1.0, 0.5, 4.0);
  const int b = lp.add_var(2.0, -1.0, 3.0);
  lp.add_row({{{a, 1.0}, {b, 1.0}}, RowSense::Eq, 2.0});
  lp.add_row({{{a, 2.0}, {b, 2.0}}, RowSense::Eq, 4.0});
  const auto s = lp_solve(lp);
  REQUIRE(s.status == LpStatus::Optimal);
  CHECK(s.x[a] == doctest::Approx(3.0));
  CHECK(s.x[b] == doctest::Approx(-1.0));
  CHECK(s.objective == doctest::Approx(1.0));
}

TEST_CASE("fixed variable") {
  LinearProgram lp;
  const int r = lp.add_var(-1.0, 0.7, 0.7);
  const int t = lp.add_var(1.0, 0.0, 5.0);
  lp.add_row({{{r, 1.0}, {t, -1.0}}, RowSense::Le, 0.0});
  const auto s = lp_solve(lp);
  REQUIRE(s.status == LpStatus::Optimal);
  CHECK(s.x[t] == doctest::Approx(0.7));
}

TEST_CASE("degenerate cycling example terminates") {
  // Beale's example.
  LinearProgram lp;
  const int x1 = lp.add_var(-0.75), x2 = lp.add_var(150.0), x3 = lp.add_var(-0.02), x4 = lp.add_var(6.0);
  lp.add_row({{{x1, 0.25}, {x2, -60.0}, {x3, -0.04}, {x4, 9.0}}, RowSense::Le, 0.0});
  lp.add_row({{{x1, 0.5}, {x2, -90.0}, {x3, -0.02}, {x4, 3.0}}, RowSense::Le, 0.0});
  lp.add_row({{{x3, 1.0}}, RowSense::Le, 1.0});
  const auto s = lp_solve(lp);
  REQUIRE(s.status == LpStatus::Optimal);
  CHECK(s.objective == doctest::Approx(-0.05));
}

TEST_CASE("random small LPs match vertex enumeration") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::uniform_int_distribution<int> sense(0, 2);
  int optimal = 0, infeasible = 0;
  for (int t = 0; t < 300; ++t) {
    const int n = 1 + t % 3;
    LinearProgram lp;
    for (int j = 0; j < n; ++j) {
      const double lo = u(rng);
      lp.add_var(u(rng), lo, lo + 1.0 + std::abs(u(rng)));
    }
    const int m = 1 + t % 4;
    for (int i = 0; i < m; ++i) {
      LinearRow r;
      for (int j = 0; j < n; ++j) r.terms.emplace_back(j, u(rng));
      r.sense = static_cast<RowSense>(sense(rng) == 2 && t % 5 == 0 ? 2 : sense(rng) % 2);
      r.rhs = u(rng);
      lp.add_row(r);
    }
    const auto oracle = vertex_oracle(lp);
    const auto s = lp_solve(lp);
    if (oracle) {
      REQUIRE(s.status == LpStatus::Optimal);
      CHECK(s.objective == doctest::Approx(*oracle).epsilon(1e-8));
      ++optimal;
    } else {
      CHECK(s.status == LpStatus::Infeasible);
      ++infeasible;
    }
  }
  CHECK(optimal > 50);
  CHECK(infeasible > 5);
}
