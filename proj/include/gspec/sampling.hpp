#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "gspec/error.hpp"
#include "gspec/graphon.hpp"
#include "gspec/matrix.hpp"
#include "gspec/rng.hpp"

namespace gspec {

enum class LatentMode { stochastic, deterministic };

struct LatentSample {
  std::vector<double> values;  // sorted ascending
  LatentMode mode = LatentMode::stochastic;
  std::uint64_t seed = 0;      // meaningful for stochastic mode only

  std::size_t size() const noexcept { return values.size(); }
};

/// Unsorted i.i.d. uniforms from the seeded stream; sample_latent sorts these.
inline std::vector<double> raw_uniforms(std::size_t n, std::uint64_t seed) {
  UniformStream u(seed);
  std::vector<double> out(n);
  for (auto& v : out) v = u();
  return out;
}

inline LatentSample sample_latent(std::size_t n, LatentMode mode, std::uint64_t seed = 0) {
  detail::require(n >= 1, "sample_latent: n must be at least 1");
  LatentSample s;
  s.mode = mode;
  if (mode == LatentMode::deterministic) {
    s.values.resize(n);
    for (std::size_t i = 0; i < n; ++i)
      s.values[i] = static_cast<double>(i + 1) / static_cast<double>(n);
    return s;
  }
  s.seed = seed;
  s.values = raw_uniforms(n, seed);
  std::sort(s.values.begin(), s.values.end());
  return s;
}

/// Weighted adjacency with entries W(X_(i), X_(j)) off the diagonal and a zero
/// diagonal, so that it is exactly the conditional mean of the sampled graph.
inline Matrix expected_adjacency(const Graphon& g, const LatentSample& latent) {
  const std::size_t n = latent.size();
  Matrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = latent.values[i];
    detail::require(xi >= 0.0 && xi <= 1.0, "latent values must lie in [0,1]");
    for (std::size_t j = i + 1; j < n; ++j) {
      const double w = g(xi, latent.values[j]);
      m(i, j) = w;
      m(j, i) = w;
    }
  }
  return m;
}

/// Independent Bernoulli edges for i < j, mirrored; diagonal zero. Upper
/// triangle is consumed row by row from a single seeded stream.
inline Matrix sample_adjacency(const Matrix& expected, std::uint64_t seed) {
  const std::size_t n = expected.size();
  for (double p : expected.data())
    detail::require(p >= 0.0 && p <= 1.0, "sample_adjacency: probabilities must lie in [0,1]");
  UniformStream u(seed);
  Matrix a(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double e = u() < expected(i, j) ? 1.0 : 0.0;
      a(i, j) = e;
      a(j, i) = e;
    }
  }
  return a;
}

struct GraphPair {
  LatentSample latent;
  Matrix a_random;
  Matrix a_expected;
};

/// Sub-streams used for one trial: latent draws and edge draws never share state.
inline std::uint64_t latent_stream(std::uint64_t trial_seed) { return derive_seed(trial_seed, 0); }
inline std::uint64_t edge_stream(std::uint64_t trial_seed) { return derive_seed(trial_seed, 1); }

inline GraphPair sample_graph_pair(const Graphon& g, std::size_t n, LatentMode mode,
                                   std::uint64_t seed) {
  GraphPair pair;
  pair.latent = sample_latent(n, mode, latent_stream(seed));
  pair.a_expected = expected_adjacency(g, pair.latent);
  pair.a_random = sample_adjacency(pair.a_expected, edge_stream(seed));
  return pair;
}

}  // namespace gspec
