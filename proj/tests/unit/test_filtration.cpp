#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "../support.hpp"
#include "phasetopo/error.hpp"
#include "phasetopo/filtration.hpp"

using namespace phasetopo;
using testing_support::cloud_of;

namespace {

const PointCloud kSquare = cloud_of(2, {0, 0, 1, 0, 1, 1, 0, 1});

std::size_t count_at(const Filtration& f, int dim, double value) {
  std::size_t n = 0;
  for (const auto& s : f.simplices) n += (s.dim == dim && s.value == value);
  return n;
}

}  // namespace

TEST_CASE("two points") {
  const Filtration f = build_rips(cloud_of(1, {0, 3}), {5.0, false});
  REQUIRE(f.simplices.size() == 3);
  CHECK(f.simplices[0] == Simplex{{0, 0, 0}, 0, 0.0});
  CHECK(f.simplices[1] == Simplex{{1, 0, 0}, 0, 0.0});
  CHECK(f.simplices[2] == Simplex{{0, 1, 0}, 1, 3.0});
  CHECK(f.eps_max == 5.0);
  CHECK(f.n_vertices == 2);
}

TEST_CASE("temporal links bridge gaps beyond eps_max") {
  const Filtration f = build_rips(cloud_of(1, {0, 10, 20}), {5.0, true});
  CHECK(f.count(0) == 3);
  CHECK(f.count(1) == 2);
  CHECK(f.count(2) == 0);
  CHECK(count_at(f, 1, 0.0) == 2);
  for (const auto& s : f.simplices) {
    if (s.dim == 1) CHECK(s.vertices[1] == s.vertices[0] + 1);
  }
}

TEST_CASE("unit square") {
  const Filtration f = build_rips(kSquare, {2.0, false});
  CHECK(count_at(f, 0, 0.0) == 4);
  CHECK(count_at(f, 1, 1.0) == 4);
  CHECK(count_at(f, 1, std::sqrt(2.0)) == 2);
  CHECK(count_at(f, 2, std::sqrt(2.0)) == 4);
  CHECK(f.simplices.size() == 14);
}

TEST_CASE("diameter") {
  CHECK(diameter(cloud_of(3, {1, 2, 3})) == 0.0);
  CHECK(diameter(cloud_of(2, {0, 0, 3, 4})) == 5.0);
  CHECK(diameter(kSquare) == std::sqrt(2.0));
  try {
    diameter(PointCloud{});
    FAIL("expected EmptyCloud");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyCloud);
  }
}

TEST_CASE("build_rips errors and default scale") {
  try {
    build_rips(PointCloud{}, {});
    FAIL("expected EmptyCloud");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyCloud);
  }
  try {
    build_rips(kSquare, {-1.0, true});
    FAIL("expected NegativeScale");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NegativeScale);
  }
  const Filtration f = build_rips(kSquare, {std::nullopt, false});
  CHECK(f.eps_max == std::sqrt(2.0));
  CHECK(f.count(1) == 6);
}

TEST_CASE("duplicate points stay distinct") {
  const Filtration f = build_rips(cloud_of(1, {2, 2, 2}), {std::nullopt, false});
  CHECK(f.count(0) == 3);
  CHECK(f.count(1) == 3);
  CHECK(f.count(2) == 1);
  for (const auto& s : f.simplices) CHECK(s.value == 0.0);
}

TEST_CASE("filtration properties on random clouds") {
  Rng rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 1 + rng.below(14);
    const std::size_t dim = 1 + rng.below(3);
    const PointCloud c = trial % 2 ? testing_support::random_cloud(rng, n, dim) : testing_support::lattice_cloud(rng, n, dim);
    const bool links = rng.below(2) == 1;
    const double diam = diameter(c);
    const std::optional<double> eps = rng.below(3) == 0 ? std::nullopt : std::optional<double>(diam * rng.uniform());
    const Filtration f = build_rips(c, {eps, links});
    const double cap = eps.value_or(diam);

    std::map<std::vector<VertexId>, double> value;
    for (std::size_t i = 0; i < f.simplices.size(); ++i) {
      const auto& s = f.simplices[i];
      if (i > 0) REQUIRE(filtration_less(f.simplices[i - 1], s));
      REQUIRE(s.value >= 0.0);
      REQUIRE(s.value <= cap);
      const auto vs = s.vertex_span();
      for (std::size_t k = 1; k < vs.size(); ++k) REQUIRE(vs[k - 1] < vs[k]);
      // faces come first and are no later
      if (s.dim >= 1) {
        for (std::size_t skip = 0; skip < vs.size(); ++skip) {
          std::vector<VertexId> face;
          for (std::size_t k = 0; k < vs.size(); ++k) {
            if (k != skip) face.push_back(vs[k]);
          }
          REQUIRE(value.count(face) == 1);
          REQUIRE(value[face] <= s.value);
        }
      }
      value[{vs.begin(), vs.end()}] = s.value;
    }

    // edges: exactly the close pairs plus temporal neighbours
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const std::vector<VertexId> e{static_cast<VertexId>(i), static_cast<VertexId>(j)};
        const bool temporal = links && j == i + 1;
        const double d = point_distance(c, i, j);
        const bool present = temporal || d <= cap;
        REQUIRE(value.count(e) == (present ? 1u : 0u));
        if (present) REQUIRE(value[e] == (temporal ? 0.0 : d));
      }
    }
    // flag rule
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        for (std::size_t k = j + 1; k < n; ++k) {
          const auto v = [](std::size_t a, std::size_t b) {
            return std::vector<VertexId>{static_cast<VertexId>(a), static_cast<VertexId>(b)};
          };
          const bool all = value.count(v(i, j)) && value.count(v(i, k)) && value.count(v(j, k));
          const std::vector<VertexId> t{static_cast<VertexId>(i), static_cast<VertexId>(j), static_cast<VertexId>(k)};
          REQUIRE(value.count(t) == (all ? 1u : 0u));
          if (all) REQUIRE(value[t] == std::max({value[v(i, j)], value[v(i, k)], value[v(j, k)]}));
        }
      }
    }
    if (links) {
      for (std::size_t i = 0; i + 1 < n; ++i) {
        REQUIRE(value[{static_cast<VertexId>(i), static_cast<VertexId>(i + 1)}] == 0.0);
      }
    }
    if (!eps && !links) CHECK(f.count(1) == n * (n - 1) / 2);
    CHECK(format_filtration(build_rips(c, {eps, links})) == format_filtration(f));
  }
}

TEST_CASE("filtration text form") {
  const std::string text = format_filtration(build_rips(cloud_of(1, {0, 3}), {5.0, false}));
  CHECK(text == "0 0 0\n0 0 1\n3 1 0 1\n");
}
