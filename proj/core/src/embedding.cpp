#include "phasetopo/embedding.hpp"

#include <cmath>
#include <numeric>

#include "phasetopo/error.hpp"

namespace phasetopo {

void EmbeddingConfig::validate() const {
  if (m < 1) throw Error(ErrorCode::InvalidArgument, "embedding dimension m must be >= 1");
  if (tau < 1) throw Error(ErrorCode::InvalidArgument, "embedding delay tau must be >= 1");
  if (max_points < 2) throw Error(ErrorCode::InvalidArgument, "max_points must be >= 2");
}

PointCloud::PointCloud(std::size_t dim, std::vector<double> coords, bool temporal_order)
    : dim_(dim), coords_(std::move(coords)), temporal_order_(temporal_order) {
  if (dim_ == 0 && !coords_.empty()) {
    throw Error(ErrorCode::InvalidArgument, "point cloud with dimension 0 must be empty");
  }
  if (dim_ != 0 && coords_.size() % dim_ != 0) {
    throw Error(ErrorCode::InvalidArgument, "coordinate buffer is not a multiple of the dimension");
  }
}

void require_finite(const TimeSeries& series) {
  for (std::size_t i = 0; i < series.samples.size(); ++i) {
    if (!std::isfinite(series.samples[i])) {
      throw Error(ErrorCode::NonFiniteSample,
                  "series '" + series.id + "' has a non-finite sample at index " + std::to_string(i));
    }
  }
}

PointCloud delay_embed(const TimeSeries& series, const EmbeddingConfig& cfg) {
  cfg.validate();
  require_finite(series);

  const auto m = static_cast<std::size_t>(cfg.m);
  const auto tau = static_cast<std::size_t>(cfg.tau);
  const std::size_t span = (m - 1) * tau;
  const std::size_t length = series.size();
  if (length < span + 2) {
    throw Error(ErrorCode::SeriesTooShort,
                "series '" + series.id + "' has " + std::to_string(length) +
                    " samples; m=" + std::to_string(cfg.m) + ", tau=" + std::to_string(cfg.tau) +
                    " needs at least " + std::to_string(span + 2));
  }

  const std::size_t count = length - span;
  std::vector<double> coords;
  coords.reserve(count * m);
  for (std::size_t n = 0; n < count; ++n) {
    for (std::size_t j = 0; j < m; ++j) coords.push_back(series.samples[n + j * tau]);
  }
  return PointCloud(m, std::move(coords), true);
}

double autocorrelation(std::span<const double> samples, std::size_t lag) {
  const std::size_t n = samples.size();
  if (lag >= n) return 0.0;
  const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(n);
  double denom = 0.0;
  for (double x : samples) denom += (x - mean) * (x - mean);
  if (denom == 0.0) return 0.0;
  double num = 0.0;
  for (std::size_t i = 0; i + lag < n; ++i) num += (samples[i] - mean) * (samples[i + lag] - mean);
  return num / denom;
}

int estimate_delay(const TimeSeries& series) {
  if (series.size() < 4) {
    throw Error(ErrorCode::SeriesTooShort, "delay estimation needs at least 4 samples");
  }
  require_finite(series);

  const std::span<const double> x(series.samples);
  const std::size_t n = x.size();
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  double denom = 0.0;
  for (double v : x) denom += (v - mean) * (v - mean);
  if (denom == 0.0) return 1;

  auto r = [&](std::size_t lag) {
    double num = 0.0;
    for (std::size_t i = 0; i + lag < n; ++i) num += (x[i] - mean) * (x[i + lag] - mean);
    return num / denom;
  };

  double previous = 1.0;  // r(0)
  for (std::size_t lag = 1; lag <= n / 2; ++lag) {
    const double current = r(lag);
    if (current <= 0.0) {
      if (lag == 1) return 1;
      return std::abs(previous) < std::abs(current) ? static_cast<int>(lag - 1) : static_cast<int>(lag);
    }
    previous = current;
  }
  return 1;
}

PointCloud subsample(const PointCloud& cloud, std::size_t max_points) {
  if (max_points < 2) throw Error(ErrorCode::InvalidArgument, "max_points must be >= 2");
  const std::size_t count = cloud.size();
  if (count <= max_points) return cloud;

  const std::size_t dim = cloud.dim();
  std::vector<double> coords;
  coords.reserve(max_points * dim);
  for (std::size_t i = 0; i < max_points; ++i) {
    const std::size_t index = i * (count - 1) / (max_points - 1);
    const auto p = cloud.point(index);
    coords.insert(coords.end(), p.begin(), p.end());
  }
  return PointCloud(dim, std::move(coords), cloud.temporal_order());
}

}  // namespace phasetopo
