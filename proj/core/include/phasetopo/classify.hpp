#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "phasetopo/dataset.hpp"
#include "phasetopo/homology.hpp"

namespace phasetopo {

/// Per-channel pipeline parameters shared by every sample in a comparison.
struct PipelineConfig {
  int m = 3;
  std::optional<int> tau;            ///< std::nullopt: estimate per channel
  int max_points = 150;
  std::optional<double> eps_max;     ///< std::nullopt: per-channel cloud diameter
  bool temporal_links = true;
  int k = 1;

  void validate() const;
  /// Stable text identifying every parameter that affects distances, including the
  /// fixed unweighted-sum aggregation rule.
  std::string fingerprint() const;

  bool operator==(const PipelineConfig&) const = default;
};

/// Full persistence of one channel, essential classes unfinitized.
struct ChannelPersistence {
  std::string channel;
  int tau = 1;
  std::size_t n_points = 0;
  PersistenceDiagram diagram;
};

/// delay_embed -> subsample -> build_rips -> compute_persistence. Errors are rethrown
/// with the channel id in the message.
ChannelPersistence analyze_channel(const TimeSeries& series, const PipelineConfig& cfg);

/// One finitized, zero-persistence-free diagram per homology dimension.
struct ChannelSignature {
  std::string channel;
  int tau = 1;
  double eps_max = 0.0;
  PersistenceDiagram h0;
  PersistenceDiagram h1;
};

struct TopologicalSignature {
  std::string fingerprint;
  std::vector<ChannelSignature> channels;

  std::size_t diagram_count() const noexcept { return channels.size() * 2; }
};

TopologicalSignature signature(const ActionSample& sample, const PipelineConfig& cfg);
/// Signatures for many samples, computed in parallel; order matches `samples`.
std::vector<TopologicalSignature> signatures(std::span<const ActionSample> samples, const PipelineConfig& cfg,
                                             unsigned threads);

/// Sum over channels and dimensions {0, 1} of wasserstein1. Throws FingerprintMismatch
/// or ChannelCountMismatch.
double sample_distance(const TopologicalSignature& a, const TopologicalSignature& b);

/// Symmetric matrix (row-major, N x N) of sample_distance over all pairs.
std::vector<double> distance_matrix(std::span<const TopologicalSignature> sigs, unsigned threads);

/// Majority label among the k nearest (distance, then index); ties between labels go to
/// the label of the nearest tied neighbour. With k = 1 this is the nearest neighbour,
/// lowest index first on equal distance. Throws EmptyTrainSet.
std::string knn_predict(std::span<const double> distances, std::span<const std::string> labels, int k = 1);
std::string knn_predict(const TopologicalSignature& query, std::span<const TopologicalSignature> train,
                        std::span<const std::string> labels, int k = 1);

struct EvalProtocol {
  std::size_t n_splits = 100;
  std::size_t test_per_class = 5;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

struct EvalReport {
  std::string fingerprint;
  std::uint64_t seed = 0;
  std::size_t n_splits = 0;
  std::size_t test_per_class = 0;
  int k = 1;
  std::vector<std::string> classes;
  std::vector<double> split_accuracy;
  double mean_accuracy = 0.0;
  double std_accuracy = 0.0;  ///< population standard deviation of the accuracy fraction
  std::vector<std::vector<double>> confusion;  ///< [true][predicted], rows normalized

  std::string format() const;
};

/// Runs 1-NN (k per config) over every split, reusing one cached distance matrix.
/// Requires test_per_class >= 1.
EvalReport evaluate(std::span<const ActionSample> samples, const PipelineConfig& cfg, const EvalProtocol& protocol);
/// Same protocol from a precomputed N x N distance matrix.
EvalReport evaluate_distances(std::span<const double> distances, std::span<const std::string> labels, int k,
                              const EvalProtocol& protocol, const std::string& fingerprint);

}  // namespace phasetopo
