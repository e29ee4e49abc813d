#include "phasetopo/filtration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "phasetopo/error.hpp"
#include "phasetopo/text_io.hpp"

namespace phasetopo {

bool filtration_less(const Simplex& a, const Simplex& b) {
  if (a.value != b.value) return a.value < b.value;
  if (a.dim != b.dim) return a.dim < b.dim;
  return a.vertices < b.vertices;
}

std::size_t Filtration::count(int dim) const {
  return static_cast<std::size_t>(std::count_if(simplices.begin(), simplices.end(),
                                                [dim](const Simplex& s) { return s.dim == dim; }));
}

double point_distance(const PointCloud& cloud, std::size_t i, std::size_t j) {
  if (j < i) std::swap(i, j);
  const auto a = cloud.point(i);
  const auto b = cloud.point(j);
  double sum = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    sum += d * d;
  }
  return std::sqrt(sum);
}

double diameter(const PointCloud& cloud) {
  if (cloud.empty()) throw Error(ErrorCode::EmptyCloud, "diameter of an empty cloud");
  double best = 0.0;
  const std::size_t n = cloud.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) best = std::max(best, point_distance(cloud, i, j));
  }
  return best;
}

Filtration build_rips(const PointCloud& cloud, const RipsOptions& options) {
  if (cloud.empty()) throw Error(ErrorCode::EmptyCloud, "cannot build a filtration from an empty cloud");
  if (options.eps_max && !(*options.eps_max >= 0.0)) {
    throw Error(ErrorCode::NegativeScale, "eps_max must be nonnegative");
  }

  const std::size_t n = cloud.size();
  if (n > std::numeric_limits<VertexId>::max()) {
    throw Error(ErrorCode::InvalidArgument, "too many points for a filtration");
  }

  // Pairwise edge values; NaN marks an absent edge.
  constexpr double kAbsent = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> edge(n * n, kAbsent);
  double diam = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = point_distance(cloud, i, j);
      edge[i * n + j] = d;
      diam = std::max(diam, d);
    }
  }
  const double eps_max = options.eps_max.value_or(diam);

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double& value = edge[i * n + j];
      if (options.temporal_links && j == i + 1) {
        value = 0.0;
      } else if (!(value <= eps_max)) {
        value = kAbsent;
      }
      edge[j * n + i] = value;
    }
  }

  Filtration f;
  f.eps_max = eps_max;
  f.n_vertices = n;

  for (std::size_t i = 0; i < n; ++i) {
    f.simplices.push_back(Simplex{{static_cast<VertexId>(i), 0, 0}, 0, 0.0});
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = edge[i * n + j];
      if (std::isnan(v)) continue;
      f.simplices.push_back(Simplex{{static_cast<VertexId>(i), static_cast<VertexId>(j), 0}, 1, v});
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double ij = edge[i * n + j];
      if (std::isnan(ij)) continue;
      for (std::size_t k = j + 1; k < n; ++k) {
        const double ik = edge[i * n + k];
        const double jk = edge[j * n + k];
        if (std::isnan(ik) || std::isnan(jk)) continue;
        f.simplices.push_back(Simplex{
            {static_cast<VertexId>(i), static_cast<VertexId>(j), static_cast<VertexId>(k)},
            2,
            std::max({ij, ik, jk})});
      }
    }
  }

  std::sort(f.simplices.begin(), f.simplices.end(), filtration_less);
  return f;
}

void write_filtration(std::ostream& out, const Filtration& filtration) {
  for (const Simplex& s : filtration.simplices) {
    out << format_double(s.value) << ' ' << int{s.dim};
    for (VertexId v : s.vertex_span()) out << ' ' << v;
    out << '\n';
  }
}

std::string format_filtration(const Filtration& filtration) {
  std::ostringstream out;
  write_filtration(out, filtration);
  return out.str();
}

}  // namespace phasetopo
