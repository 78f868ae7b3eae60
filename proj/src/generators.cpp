#include "hdrelay/generators.hpp"

#include <cmath>
#include <random>

namespace hdrelay {

ChannelModel GainDist::model() const {
  switch (kind) {
    case Kind::Unit:
    case Kind::Gaussian: return ChannelModel::gaussian_real();
    case Kind::ComplexGaussian: return ChannelModel::gaussian_complex();
    case Kind::AdtLevels: return ChannelModel::linear_deterministic(p, k);
  }
  return ChannelModel::gaussian_real();
}

namespace {

class GainSampler {
 public:
  GainSampler(const GainDist& dist, std::uint64_t seed) : dist_(dist), rng_(seed) {
    if (dist.kind == GainDist::Kind::AdtLevels && dist.k < 1)
      throw Error(ErrorKind::BadArgument, "ADT levels need k >= 1");
    if ((dist.kind == GainDist::Kind::Gaussian || dist.kind == GainDist::Kind::ComplexGaussian) &&
        !(dist.power > 0.0))
      throw Error(ErrorKind::BadArgument, "gain power must be positive");
  }

  GainValue next() {
    switch (dist_.kind) {
      case GainDist::Kind::Unit: return 1.0;
      case GainDist::Kind::Gaussian: {
        std::normal_distribution<double> n(0.0, std::sqrt(dist_.power));
        return n(rng_);
      }
      case GainDist::Kind::ComplexGaussian: {
        std::normal_distribution<double> n(0.0, std::sqrt(dist_.power / 2.0));
        const double re = n(rng_);
        const double im = n(rng_);
        return std::complex<double>(re, im);
      }
      case GainDist::Kind::AdtLevels: {
        std::uniform_int_distribution<int> u(0, dist_.k);
        return ShiftLevel{u(rng_)};
      }
    }
    return 1.0;
  }

  std::mt19937_64& rng() { return rng_; }

 private:
  GainDist dist_;
  std::mt19937_64 rng_;
};

}  // namespace

Network gen_layered(const std::vector<int>& widths, const GainDist& dist, std::uint64_t seed) {
  if (widths.size() < 2 || widths.front() != 1 || widths.back() != 1)
    throw Error(ErrorKind::BadWidths, "need at least 2 layers with single-node first and last layers");
  int n = 0;
  for (int w : widths) {
    if (w < 1) throw Error(ErrorKind::BadWidths, "layer widths must be positive");
    n += w;
  }
  if (n > kMaxNodes) throw Error(ErrorKind::BadWidths, "too many nodes");

  GainSampler sampler(dist, seed);
  std::vector<Edge> edges;
  int first = 0;
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    const int next_first = first + widths[l];
    for (int u = first; u < next_first; ++u)
      for (int v = next_first; v < next_first + widths[l + 1]; ++v) edges.push_back({u, v, sampler.next()});
    first = next_first;
  }
  return make_network(n, 0, n - 1, dist.model(), std::move(edges));
}

Network gen_line_two_hop(int n, const GainDist& dist, std::uint64_t seed) {
  if (n < 3 || n > kMaxNodes) throw Error(ErrorKind::BadSize, "line network needs 3..64 nodes");
  GainSampler sampler(dist, seed);
  std::vector<Edge> edges;
  for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, sampler.next()});
  for (int i = 0; i + 2 < n; ++i) edges.push_back({i, i + 2, sampler.next()});
  return make_network(n, 0, n - 1, dist.model(), std::move(edges));
}

Network gen_random(int relays, double edge_prob, const GainDist& dist, std::uint64_t seed) {
  if (relays < 0 || relays + 2 > kMaxNodes) throw Error(ErrorKind::BadSize, "relay count out of range");
  if (!(edge_prob >= 0.0 && edge_prob <= 1.0)) throw Error(ErrorKind::BadArgument, "edge probability outside [0, 1]");
  const int n = relays + 2;
  const NodeId s = 0;
  const NodeId d = n - 1;
  GainSampler sampler(dist, seed);
  std::bernoulli_distribution coin(edge_prob);
  std::vector<Edge> edges;
  for (int u = 0; u < n; ++u) {
    if (u == d) continue;
    for (int v = 0; v < n; ++v) {
      if (v == s || v == u) continue;
      if (coin(sampler.rng())) edges.push_back({u, v, sampler.next()});
    }
  }
  return make_network(n, s, d, dist.model(), std::move(edges));
}

}  // namespace hdrelay
