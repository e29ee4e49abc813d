#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "phasetopo/filtration.hpp"

namespace phasetopo {

/// A (birth, death) interval in homology dimension 0 or 1.
/// An empty `death` marks an essential class that never dies within the filtration.
struct PersistencePair {
  int dim = 0;
  double birth = 0.0;
  std::optional<double> death;

  bool essential() const noexcept { return !death.has_value(); }
  bool zero_persistence() const noexcept { return death && *death == birth; }
  /// death - birth, with essential classes measured up to `eps_max`.
  double persistence(double eps_max) const noexcept { return death.value_or(eps_max) - birth; }

  bool operator==(const PersistencePair&) const = default;
};

/// Canonical pair order: dim, birth, death (essential last).
bool pair_less(const PersistencePair& a, const PersistencePair& b);

struct PersistenceDiagram {
  std::vector<PersistencePair> pairs;
  double eps_max = 0.0;

  /// Pairs of one homology dimension, same eps_max.
  PersistenceDiagram dimension(int dim) const;
  PersistenceDiagram without_zero_persistence() const;
  /// Essential deaths replaced by eps_max.
  PersistenceDiagram finitized() const;
  /// Sorts pairs into canonical order.
  void canonicalize();

  std::size_t count(int dim) const;
  bool operator==(const PersistenceDiagram&) const = default;
};

/// How the dimension-1 part of the boundary matrix is reduced. Both produce identical
/// pairs; H0 always comes from left-to-right reduction of the edge columns.
enum class Reduction {
  /// Left-to-right reduction of triangle columns in filtration order. Positive
  /// triangles must be reduced all the way to zero, so this is slow on full Rips
  /// complexes.
  Boundary,
  /// Reduction of the anti-transposed matrix (edge coboundaries, reverse filtration
  /// order), with edges that already killed an H0 class cleared up front.
  Coboundary,
};

/// H0 and H1 pairs of the filtration over GF(2). Zero-persistence pairs are kept;
/// creators left unpaired become essential. Throws MalformedFiltration if the list is
/// out of order, a face is missing, or a face is listed after its coface.
PersistenceDiagram compute_persistence(const Filtration& f, Reduction strategy = Reduction::Coboundary);

/// Reference computation for small filtrations (<= kOracleMaxVertices vertices).
/// Recovers pairs from ranks of H_p(K_s) -> H_p(K_t) over every pair of distinct
/// filtration values, each rank obtained by dense GF(2) elimination.
/// Throws TooLargeForOracle above the vertex bound.
PersistenceDiagram naive_persistence_oracle(const Filtration& f);

inline constexpr std::size_t kOracleMaxVertices = 16;

/// Number of dimension-`dim` pairs whose persistence strictly exceeds `threshold`.
std::size_t persistent_betti(const PersistenceDiagram& d, int dim, double threshold);

struct DiagramFileHeader {
  std::string fingerprint;
  std::string channel;
  std::optional<unsigned long long> seed;
};

/// Text form: optional `# key value` comment lines, `eps_max <v>`, then one
/// `dim birth death|inf` record per pair in canonical order.
void write_diagram(std::ostream& out, const PersistenceDiagram& d, const DiagramFileHeader& header = {},
                   bool keep_zero_persistence = false);
std::string format_diagram(const PersistenceDiagram& d, const DiagramFileHeader& header = {},
                           bool keep_zero_persistence = false);
/// Throws ParseError with the offending line number.
PersistenceDiagram parse_diagram(const std::string& text);
PersistenceDiagram read_diagram_file(const std::string& path);

}  // namespace phasetopo
