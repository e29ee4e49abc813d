#include "phasetopo/classify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "phasetopo/diagram_metrics.hpp"
#include "phasetopo/error.hpp"
#include "phasetopo/filtration.hpp"
#include "phasetopo/parallel.hpp"
#include "phasetopo/text_io.hpp"

namespace phasetopo {

void PipelineConfig::validate() const {
  EmbeddingConfig{m, tau.value_or(1), max_points}.validate();
  if (eps_max && !(*eps_max >= 0.0)) throw Error(ErrorCode::NegativeScale, "eps_max must be nonnegative");
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "k must be >= 1");
}

std::string PipelineConfig::fingerprint() const {
  std::ostringstream out;
  out << "m=" << m << ";tau=" << (tau ? std::to_string(*tau) : "auto") << ";max_points=" << max_points
      << ";eps_max=" << (eps_max ? format_double(*eps_max) : "diameter")
      << ";temporal_links=" << (temporal_links ? "on" : "off") << ";aggregate=sum-w1-h0h1;k=" << k;
  return out.str();
}

ChannelPersistence analyze_channel(const TimeSeries& series, const PipelineConfig& cfg) {
  cfg.validate();
  try {
    ChannelPersistence out;
    out.channel = series.id;
    out.tau = cfg.tau ? *cfg.tau : estimate_delay(series);
    const PointCloud cloud = subsample(delay_embed(series, {cfg.m, out.tau, cfg.max_points}),
                                       static_cast<std::size_t>(cfg.max_points));
    out.n_points = cloud.size();
    out.diagram = compute_persistence(build_rips(cloud, {cfg.eps_max, cfg.temporal_links}));
    return out;
  } catch (const Error& e) {
    throw Error(e.code(), "channel '" + series.id + "': " + e.what());
  }
}

TopologicalSignature signature(const ActionSample& sample, const PipelineConfig& cfg) {
  TopologicalSignature sig;
  sig.fingerprint = cfg.fingerprint();
  for (const auto& channel : sample.channels) {
    const ChannelPersistence p = analyze_channel(channel, cfg);
    const PersistenceDiagram finite = p.diagram.finitized().without_zero_persistence();
    sig.channels.push_back({p.channel, p.tau, p.diagram.eps_max, finite.dimension(0), finite.dimension(1)});
  }
  return sig;
}

std::vector<TopologicalSignature> signatures(std::span<const ActionSample> samples, const PipelineConfig& cfg,
                                             unsigned threads) {
  std::vector<TopologicalSignature> out(samples.size());
  parallel_for(samples.size(), threads, [&](std::size_t i) {
    try {
      out[i] = signature(samples[i], cfg);
    } catch (const Error& e) {
      throw Error(e.code(), "sample '" + samples[i].sample_id + "': " + e.what());
    }
  });
  return out;
}

double sample_distance(const TopologicalSignature& a, const TopologicalSignature& b) {
  if (a.fingerprint != b.fingerprint) {
    throw Error(ErrorCode::FingerprintMismatch, "'" + a.fingerprint + "' vs '" + b.fingerprint + "'");
  }
  if (a.channels.size() != b.channels.size()) {
    throw Error(ErrorCode::ChannelCountMismatch,
                std::to_string(a.channels.size()) + " vs " + std::to_string(b.channels.size()) + " channels");
  }
  double total = 0.0;
  for (std::size_t c = 0; c < a.channels.size(); ++c) {
    total += wasserstein1(a.channels[c].h0, b.channels[c].h0);
    total += wasserstein1(a.channels[c].h1, b.channels[c].h1);
  }
  return total;
}

std::vector<double> distance_matrix(std::span<const TopologicalSignature> sigs, unsigned threads) {
  const std::size_t n = sigs.size();
  std::vector<double> d(n * n, 0.0);
  std::vector<std::pair<std::size_t, std::size_t>> jobs;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) jobs.emplace_back(i, j);
  }
  parallel_for(jobs.size(), threads, [&](std::size_t t) {
    const auto [i, j] = jobs[t];
    const double v = sample_distance(sigs[i], sigs[j]);
    d[i * n + j] = v;
    d[j * n + i] = v;
  });
  return d;
}

std::string knn_predict(std::span<const double> distances, std::span<const std::string> labels, int k) {
  if (distances.empty() || labels.empty()) throw Error(ErrorCode::EmptyTrainSet, "no training samples");
  if (distances.size() != labels.size()) throw Error(ErrorCode::InvalidArgument, "distance/label count mismatch");
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "k must be >= 1");

  std::vector<std::size_t> order(distances.size());
  std::iota(order.begin(), order.end(), 0);
  const std::size_t kk = std::min<std::size_t>(static_cast<std::size_t>(k), order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(kk), order.end(),
                    [&](std::size_t a, std::size_t b) {
                      if (distances[a] != distances[b]) return distances[a] < distances[b];
                      return a < b;
                    });
  if (kk == 1) return labels[order.front()];

  std::map<std::string, std::size_t> votes;
  for (std::size_t r = 0; r < kk; ++r) ++votes[labels[order[r]]];
  std::size_t best = 0;
  for (const auto& [label, count] : votes) best = std::max(best, count);
  for (std::size_t r = 0; r < kk; ++r) {
    if (votes[labels[order[r]]] == best) return labels[order[r]];
  }
  return labels[order.front()];
}

std::string knn_predict(const TopologicalSignature& query, std::span<const TopologicalSignature> train,
                        std::span<const std::string> labels, int k) {
  if (train.empty()) throw Error(ErrorCode::EmptyTrainSet, "no training samples");
  std::vector<double> d;
  d.reserve(train.size());
  for (const auto& t : train) d.push_back(sample_distance(query, t));
  return knn_predict(d, labels, k);
}

EvalReport evaluate_distances(std::span<const double> distances, std::span<const std::string> labels, int k,
                              const EvalProtocol& protocol, const std::string& fingerprint) {
  const std::size_t n = labels.size();
  if (distances.size() != n * n) throw Error(ErrorCode::InvalidArgument, "distance matrix size mismatch");
  if (protocol.test_per_class == 0) throw Error(ErrorCode::InvalidArgument, "evaluation needs test_per_class >= 1");
  if (protocol.n_splits == 0) throw Error(ErrorCode::InvalidArgument, "evaluation needs at least one split");

  EvalReport report;
  report.fingerprint = fingerprint;
  report.seed = protocol.seed;
  report.n_splits = protocol.n_splits;
  report.test_per_class = protocol.test_per_class;
  report.k = k;
  report.classes.assign(labels.begin(), labels.end());
  std::sort(report.classes.begin(), report.classes.end());
  report.classes.erase(std::unique(report.classes.begin(), report.classes.end()), report.classes.end());
  const std::size_t c = report.classes.size();
  const auto class_index = [&](const std::string& label) {
    return static_cast<std::size_t>(std::lower_bound(report.classes.begin(), report.classes.end(), label) -
                                    report.classes.begin());
  };

  const auto splits = make_splits(labels, protocol.n_splits, protocol.test_per_class, protocol.seed);
  std::vector<std::vector<std::size_t>> counts(splits.size(), std::vector<std::size_t>(c * c, 0));
  report.split_accuracy.assign(splits.size(), 0.0);

  parallel_for(splits.size(), protocol.threads, [&](std::size_t s) {
    const Split& split = splits[s];
    std::vector<std::string> train_labels;
    for (std::size_t i : split.train) train_labels.push_back(labels[i]);
    std::vector<double> row(split.train.size());
    std::size_t correct = 0;
    for (std::size_t q : split.test) {
      for (std::size_t t = 0; t < split.train.size(); ++t) row[t] = distances[q * n + split.train[t]];
      const std::string predicted = knn_predict(row, train_labels, k);
      if (predicted == labels[q]) ++correct;
      ++counts[s][class_index(labels[q]) * c + class_index(predicted)];
    }
    report.split_accuracy[s] = static_cast<double>(correct) / static_cast<double>(split.test.size());
  });

  double sum = 0.0;
  for (double a : report.split_accuracy) sum += a;
  report.mean_accuracy = sum / static_cast<double>(splits.size());
  double var = 0.0;
  for (double a : report.split_accuracy) var += (a - report.mean_accuracy) * (a - report.mean_accuracy);
  report.std_accuracy = std::sqrt(var / static_cast<double>(splits.size()));

  report.confusion.assign(c, std::vector<double>(c, 0.0));
  for (std::size_t t = 0; t < c; ++t) {
    std::size_t row_total = 0;
    for (const auto& split_counts : counts) {
      for (std::size_t p = 0; p < c; ++p) row_total += split_counts[t * c + p];
    }
    for (std::size_t p = 0; p < c; ++p) {
      std::size_t cell = 0;
      for (const auto& split_counts : counts) cell += split_counts[t * c + p];
      report.confusion[t][p] = row_total ? static_cast<double>(cell) / static_cast<double>(row_total) : 0.0;
    }
  }
  return report;
}

EvalReport evaluate(std::span<const ActionSample> samples, const PipelineConfig& cfg, const EvalProtocol& protocol) {
  cfg.validate();
  const auto sigs = signatures(samples, cfg, protocol.threads);
  const auto d = distance_matrix(sigs, protocol.threads);
  std::vector<std::string> labels;
  for (const auto& s : samples) labels.push_back(s.label);
  return evaluate_distances(d, labels, cfg.k, protocol, cfg.fingerprint());
}

std::string EvalReport::format() const {
  std::ostringstream out;
  out << "# phasetopo evaluation report\n";
  out << "fingerprint " << fingerprint << '\n';
  out << "seed " << seed << '\n';
  out << "splits " << n_splits << '\n';
  out << "test_per_class " << test_per_class << '\n';
  out << "k " << k << '\n';
  out << "classes";
  for (const auto& name : classes) out << ' ' << name;
  out << '\n';
  out << "mean_accuracy " << format_double(mean_accuracy) << '\n';
  out << "std_accuracy " << format_double(std_accuracy) << "  # population std of the accuracy fraction\n";
  for (std::size_t s = 0; s < split_accuracy.size(); ++s) {
    out << "split_accuracy " << s << ' ' << format_double(split_accuracy[s]) << '\n';
  }
  out << "# confusion rows: true class; columns: predicted class in class order\n";
  for (std::size_t t = 0; t < confusion.size(); ++t) {
    out << "confusion " << classes[t];
    for (double v : confusion[t]) out << ' ' << format_double(v);
    out << '\n';
  }
  return out.str();
}

}  // namespace phasetopo
