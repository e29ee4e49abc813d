#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include "phasetopo/embedding.hpp"
#include "phasetopo/homology.hpp"
#include "phasetopo/random.hpp"

namespace testing_support {

using namespace phasetopo;

inline PointCloud cloud_of(std::size_t dim, std::vector<double> coords) {
  return PointCloud(dim, std::move(coords), true);
}

inline PointCloud random_cloud(Rng& rng, std::size_t n, std::size_t dim) {
  std::vector<double> coords(n * dim);
  for (double& c : coords) c = rng.uniform(-1.0, 1.0);
  return PointCloud(dim, std::move(coords), true);
}

/// Points on a small integer grid, so distances repeat and ties in the filtration are common.
inline PointCloud lattice_cloud(Rng& rng, std::size_t n, std::size_t dim) {
  std::vector<double> coords(n * dim);
  for (double& c : coords) c = static_cast<double>(rng.below(4));
  return PointCloud(dim, std::move(coords), true);
}

inline PersistenceDiagram random_diagram(Rng& rng, std::size_t max_points, int dim = 1, double scale = 10.0) {
  PersistenceDiagram d;
  d.eps_max = scale * 2;
  const std::size_t n = rng.below(max_points + 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double b = rng.uniform(0.0, scale);
    d.pairs.push_back({dim, b, b + rng.uniform(0.0, scale)});
  }
  return d;
}

/// Minimum over all permutations of sum cost[i][p(i)].
inline double brute_force_assignment(const std::vector<double>& cost, std::size_t side) {
  std::vector<std::size_t> p(side);
  std::iota(p.begin(), p.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double total = 0.0;
    for (std::size_t i = 0; i < side; ++i) total += cost[i * side + p[i]];
    best = std::min(best, total);
  } while (std::next_permutation(p.begin(), p.end()));
  return best;
}

/// Partial matchings between finite diagrams, enumerated by recursion: each x goes to
/// an unused y or to the diagonal; unused y go to the diagonal. `combine` is + for W1
/// and max for bottleneck.
template <class Ground, class Diag, class Combine>
double brute_force_matching(const std::vector<PersistencePair>& x, const std::vector<PersistencePair>& y, Ground ground,
                            Diag diag, Combine combine) {
  std::vector<char> used(y.size(), 0);
  double best = std::numeric_limits<double>::infinity();
  const auto rec = [&](auto&& self, std::size_t i, double acc) -> void {
    if (i == x.size()) {
      for (std::size_t j = 0; j < y.size(); ++j) {
        if (!used[j]) acc = combine(acc, diag(y[j]));
      }
      best = std::min(best, acc);
      return;
    }
    self(self, i + 1, combine(acc, diag(x[i])));
    for (std::size_t j = 0; j < y.size(); ++j) {
      if (used[j]) continue;
      used[j] = 1;
      self(self, i + 1, combine(acc, ground(x[i], y[j])));
      used[j] = 0;
    }
  };
  rec(rec, 0, 0.0);
  return best;
}

inline double brute_w1(const PersistenceDiagram& a, const PersistenceDiagram& b) {
  return brute_force_matching(
      a.pairs, b.pairs,
      [](const PersistencePair& p, const PersistencePair& q) {
        return std::abs(p.birth - q.birth) + std::abs(*p.death - *q.death);
      },
      [](const PersistencePair& p) { return *p.death - p.birth; }, [](double s, double c) { return s + c; });
}

inline double brute_bottleneck(const PersistenceDiagram& a, const PersistenceDiagram& b) {
  return brute_force_matching(
      a.pairs, b.pairs,
      [](const PersistencePair& p, const PersistencePair& q) {
        return std::max(std::abs(p.birth - q.birth), std::abs(*p.death - *q.death));
      },
      [](const PersistencePair& p) { return (*p.death - p.birth) / 2.0; },
      [](double s, double c) { return std::max(s, c); });
}

inline std::vector<PersistencePair> sorted_pairs(PersistenceDiagram d) {
  d.canonicalize();
  return d.pairs;
}

}  // namespace testing_support
