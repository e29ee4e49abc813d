#include "phasetopo/diagram_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "phasetopo/error.hpp"

namespace phasetopo {

namespace {

double ground_cost(const PersistencePair& a, const PersistencePair& b, MatchingProblem::Ground ground) {
  const double db = std::abs(a.birth - b.birth);
  const double dd = std::abs(*a.death - *b.death);
  return ground == MatchingProblem::Ground::L1 ? db + dd : std::max(db, dd);
}

double diagonal_cost(const PersistencePair& a, MatchingProblem::Ground ground) {
  const double length = *a.death - a.birth;
  return ground == MatchingProblem::Ground::L1 ? length : length / 2.0;
}

// Validates inputs and returns the shared homology dimension, if any pairs exist.
std::optional<int> check_inputs(const PersistenceDiagram& x, const PersistenceDiagram& y) {
  std::optional<int> dim;
  for (const auto* d : {&x, &y}) {
    for (const auto& p : d->pairs) {
      if (p.essential() || !std::isfinite(p.birth) || !std::isfinite(*p.death)) {
        throw Error(ErrorCode::NonFinitePair, "diagram contains an essential or non-finite pair; finitize first");
      }
      if (dim && *dim != p.dim) throw Error(ErrorCode::MixedDimensions, "diagrams mix homology dimensions");
      dim = p.dim;
    }
  }
  return dim;
}

// Zero-persistence points match the diagonal at no cost and never improve another
// matching (triangle inequality), so they are dropped; the survivors are sorted so the
// result does not depend on input order. The pair (x, y) is also put in a canonical
// order so that d(x, y) and d(y, x) run the identical computation.
std::pair<PersistenceDiagram, PersistenceDiagram> normalized(const PersistenceDiagram& x,
                                                             const PersistenceDiagram& y) {
  auto a = x.without_zero_persistence();
  auto b = y.without_zero_persistence();
  a.canonicalize();
  b.canonicalize();
  const bool swap = std::lexicographical_compare(b.pairs.begin(), b.pairs.end(), a.pairs.begin(), a.pairs.end(),
                                                 pair_less);
  if (swap) std::swap(a, b);
  return {std::move(a), std::move(b)};
}

// Kuhn augmenting-path search restricted to entries <= limit.
bool has_perfect_matching(const MatchingProblem& p, double limit) {
  const std::size_t n = p.side;
  std::vector<std::size_t> match_of_col(n, n);
  std::vector<char> visited(n);
  const auto augment = [&](auto&& self, std::size_t row) -> bool {
    for (std::size_t col = 0; col < n; ++col) {
      if (visited[col] || p.at(row, col) > limit) continue;
      visited[col] = 1;
      if (match_of_col[col] == n || self(self, match_of_col[col])) {
        match_of_col[col] = row;
        return true;
      }
    }
    return false;
  };
  for (std::size_t row = 0; row < n; ++row) {
    std::fill(visited.begin(), visited.end(), 0);
    if (!augment(augment, row)) return false;
  }
  return true;
}

}  // namespace

MatchingProblem MatchingProblem::augmented(const PersistenceDiagram& x, const PersistenceDiagram& y,
                                           Ground ground) {
  const std::size_t nx = x.pairs.size();
  const std::size_t ny = y.pairs.size();
  MatchingProblem p;
  p.side = nx + ny;
  p.cost.assign(p.side * p.side, 0.0);
  p.provenance.assign(p.side * p.side, EntryKind::DiagonalToDiagonal);
  for (std::size_t r = 0; r < p.side; ++r) {
    for (std::size_t c = 0; c < p.side; ++c) {
      const std::size_t idx = r * p.side + c;
      if (r < nx && c < ny) {
        p.cost[idx] = ground_cost(x.pairs[r], y.pairs[c], ground);
        p.provenance[idx] = EntryKind::PointToPoint;
      } else if (r < nx) {
        p.cost[idx] = diagonal_cost(x.pairs[r], ground);
        p.provenance[idx] = EntryKind::PointToDiagonal;
      } else if (c < ny) {
        p.cost[idx] = diagonal_cost(y.pairs[c], ground);
        p.provenance[idx] = EntryKind::PointToDiagonal;
      }
    }
  }
  return p;
}

namespace {

// Hungarian method with potentials for a rows x cols problem, rows <= cols; every row is
// assigned a distinct column. `cost(r, c)` may be negative. Returns row -> column.
template <typename Cost>
std::vector<std::size_t> hungarian(std::size_t rows, std::size_t cols, const Cost& cost) {
  // 1-based indices; column 0 is the virtual source of each augmenting search.
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(rows + 1, 0.0), v(cols + 1, 0.0), min_slack(cols + 1);
  std::vector<std::size_t> row_of_col(cols + 1, 0), way(cols + 1, 0);
  std::vector<char> used(cols + 1);

  for (std::size_t row = 1; row <= rows; ++row) {
    row_of_col[0] = row;
    std::size_t col0 = 0;
    std::fill(min_slack.begin(), min_slack.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[col0] = 1;
      const std::size_t r = row_of_col[col0];
      double delta = kInf;
      std::size_t next = 0;
      for (std::size_t col = 1; col <= cols; ++col) {
        if (used[col]) continue;
        const double slack = cost(r - 1, col - 1) - u[r] - v[col];
        if (slack < min_slack[col]) {
          min_slack[col] = slack;
          way[col] = col0;
        }
        if (min_slack[col] < delta) {
          delta = min_slack[col];
          next = col;
        }
      }
      for (std::size_t col = 0; col <= cols; ++col) {
        if (used[col]) {
          u[row_of_col[col]] += delta;
          v[col] -= delta;
        } else {
          min_slack[col] -= delta;
        }
      }
      col0 = next;
    } while (row_of_col[col0] != 0);
    do {
      const std::size_t prev = way[col0];
      row_of_col[col0] = row_of_col[prev];
      col0 = prev;
    } while (col0 != 0);
  }

  std::vector<std::size_t> row_to_col(rows, 0);
  for (std::size_t col = 1; col <= cols; ++col) {
    if (row_of_col[col] != 0) row_to_col[row_of_col[col] - 1] = col - 1;
  }
  return row_to_col;
}

}  // namespace

Assignment assignment_solve(const MatchingProblem& problem) {
  const std::size_t n = problem.side;
  if (problem.cost.size() != n * n) throw Error(ErrorCode::InvalidArgument, "cost matrix is not square");
  for (double c : problem.cost) {
    if (!std::isfinite(c)) throw Error(ErrorCode::InvalidArgument, "cost matrix has a non-finite entry");
  }
  Assignment result;
  if (n == 0) return result;
  result.row_to_col = hungarian(n, n, [&](std::size_t r, std::size_t c) { return problem.at(r, c); });
  for (std::size_t row = 0; row < n; ++row) result.total_cost += problem.at(row, result.row_to_col[row]);
  return result;
}

double wasserstein1(const PersistenceDiagram& x, const PersistenceDiagram& y) {
  check_inputs(x, y);
  auto [a, b] = normalized(x, y);
  if (a.pairs.empty() && b.pairs.empty()) return 0.0;
  if (a.pairs.size() > b.pairs.size()) std::swap(a, b);

  // Equivalent rectangular form of the augmented problem: rows are the points of the
  // smaller diagram `a`; columns are the points of `b` followed by |a| diagonal slots.
  // Matching a to b costs c(a, b) - diag(b) since every unmatched point of b pays
  // diag(b) separately.
  constexpr auto kL1 = MatchingProblem::Ground::L1;
  const std::size_t rows = a.pairs.size();
  const std::size_t cols = b.pairs.size() + rows;
  std::vector<double> diag_b(b.pairs.size());
  for (std::size_t j = 0; j < b.pairs.size(); ++j) diag_b[j] = diagonal_cost(b.pairs[j], kL1);
  std::vector<double> cost(rows * cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      cost[i * cols + j] = j < b.pairs.size() ? ground_cost(a.pairs[i], b.pairs[j], kL1) - diag_b[j]
                                              : diagonal_cost(a.pairs[i], kL1);
    }
  }
  const auto row_to_col = hungarian(rows, cols, [&](std::size_t r, std::size_t c) { return cost[r * cols + c]; });

  // Re-sum the plain (unreduced) costs of the optimal matching in a fixed order.
  std::vector<char> b_matched(b.pairs.size(), 0);
  double total = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    const std::size_t j = row_to_col[i];
    if (j < b.pairs.size()) {
      b_matched[j] = 1;
      total += ground_cost(a.pairs[i], b.pairs[j], kL1);
    } else {
      total += diagonal_cost(a.pairs[i], kL1);
    }
  }
  for (std::size_t j = 0; j < b.pairs.size(); ++j) {
    if (!b_matched[j]) total += diag_b[j];
  }
  return total;
}

double bottleneck(const PersistenceDiagram& x, const PersistenceDiagram& y) {
  check_inputs(x, y);
  const auto [a, b] = normalized(x, y);
  if (a.pairs.empty() && b.pairs.empty()) return 0.0;
  const auto problem = MatchingProblem::augmented(a, b, MatchingProblem::Ground::LInf);

  // The optimum is one of the matrix entries: binary search the smallest feasible one.
  std::vector<double> candidates = problem.cost;
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  std::size_t lo = 0;
  std::size_t hi = candidates.size() - 1;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (has_perfect_matching(problem, candidates[mid])) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return candidates[lo];
}

std::pair<PersistenceDiagram, PersistenceDiagram> finitize_common(const PersistenceDiagram& x,
                                                                  const PersistenceDiagram& y) {
  if (x.eps_max != y.eps_max) {
    throw Error(ErrorCode::EpsMaxMismatch, "diagrams were truncated at different scales");
  }
  return {x.finitized(), y.finitized()};
}

}  // namespace phasetopo
