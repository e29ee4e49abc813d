#pragma once

#include <cstddef>
#include <vector>

#include "phasetopo/homology.hpp"

namespace phasetopo {

/// Role of each entry in a diagonal-augmented cost matrix.
enum class EntryKind : unsigned char { PointToPoint, PointToDiagonal, DiagonalToDiagonal };

/// Square cost matrix, row-major. For diagrams X and Y the rows are X followed by |Y|
/// diagonal slots and the columns are Y followed by |X| diagonal slots.
struct MatchingProblem {
  std::size_t side = 0;
  std::vector<double> cost;
  std::vector<EntryKind> provenance;

  double at(std::size_t row, std::size_t col) const { return cost[row * side + col]; }

  /// Builds the augmented problem with L1 (Wasserstein) or L-infinity (bottleneck) ground
  /// costs. Inputs must already be finite and single-dimension.
  enum class Ground { L1, LInf };
  static MatchingProblem augmented(const PersistenceDiagram& x, const PersistenceDiagram& y, Ground ground);
};

struct Assignment {
  std::vector<std::size_t> row_to_col;
  double total_cost = 0.0;  ///< sum of matched entries in row order
};

/// Minimum-cost perfect matching (Hungarian method with potentials, O(n^3)).
/// Throws InvalidArgument on a non-square or non-finite matrix.
Assignment assignment_solve(const MatchingProblem& problem);

/// Exact 1-Wasserstein distance with L1 ground metric; a point (b, d) matched to the
/// diagonal costs d - b. Solves the rectangular equivalent of the augmented problem
/// (smaller diagram as rows), which has the same optimum as
/// assignment_solve(MatchingProblem::augmented(x, y, L1)). Throws MixedDimensions or
/// NonFinitePair.
double wasserstein1(const PersistenceDiagram& x, const PersistenceDiagram& y);

/// Exact bottleneck distance with L-infinity ground metric; diagonal cost (d - b) / 2.
double bottleneck(const PersistenceDiagram& x, const PersistenceDiagram& y);

/// Finitizes two diagrams against their shared eps_max. Throws EpsMaxMismatch when
/// the truncation scales differ.
std::pair<PersistenceDiagram, PersistenceDiagram> finitize_common(const PersistenceDiagram& x,
                                                                  const PersistenceDiagram& y);

}  // namespace phasetopo
