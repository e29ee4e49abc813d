#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "phasetopo/embedding.hpp"

namespace phasetopo {

using VertexId = std::uint32_t;

/// A vertex, edge or triangle with the scale at which it enters.
/// Unused vertex slots are zero; `dim` says how many are meaningful.
struct Simplex {
  std::array<VertexId, 3> vertices{};
  std::uint8_t dim = 0;
  double value = 0.0;

  std::span<const VertexId> vertex_span() const { return {vertices.data(), std::size_t{dim} + 1}; }

  bool operator==(const Simplex&) const = default;
};

/// Total filtration order: value, then dimension, then lexicographic vertices.
bool filtration_less(const Simplex& a, const Simplex& b);

struct Filtration {
  std::vector<Simplex> simplices;
  double eps_max = 0.0;
  std::size_t n_vertices = 0;

  std::size_t count(int dim) const;
};

/// Largest pairwise Euclidean distance; 0 for one point. Throws EmptyCloud.
double diameter(const PointCloud& cloud);

/// Euclidean distance between points i and j, evaluated with the smaller index first
/// so d(i, j) and d(j, i) agree bit for bit.
double point_distance(const PointCloud& cloud, std::size_t i, std::size_t j);

struct RipsOptions {
  /// Truncation scale; std::nullopt requests the cloud diameter.
  std::optional<double> eps_max;
  /// Insert edges between temporally consecutive points at value 0.
  bool temporal_links = true;
};

/// Vietoris-Rips flag filtration up to dimension 2. Vertices enter at 0, edge {i,j}
/// at d(i,j) when d(i,j) <= eps_max, temporal edges {n,n+1} at 0, triangles at the
/// maximum of their edges.
Filtration build_rips(const PointCloud& cloud, const RipsOptions& options);

/// One simplex per line: `value dim v0 [v1 [v2]]`, in stored order.
void write_filtration(std::ostream& out, const Filtration& filtration);
std::string format_filtration(const Filtration& filtration);

}  // namespace phasetopo
