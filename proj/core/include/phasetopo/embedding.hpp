#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace phasetopo {

/// Scalar observable sampled at uniform ticks.
struct TimeSeries {
  std::string id;
  std::vector<double> samples;

  std::size_t size() const noexcept { return samples.size(); }
};

struct EmbeddingConfig {
  int m = 3;            ///< embedding dimension
  int tau = 1;          ///< delay in samples
  int max_points = 150; ///< subsampling cap applied after embedding

  /// Throws Error(InvalidArgument) unless m >= 1, tau >= 1, max_points >= 2.
  void validate() const;
};

/// Points stored row-major in one flat buffer; row n is the n-th point.
/// Point order is temporal order whenever `temporal_order` is set.
class PointCloud {
 public:
  PointCloud() = default;
  PointCloud(std::size_t dim, std::vector<double> coords, bool temporal_order);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return dim_ == 0 ? 0 : coords_.size() / dim_; }
  bool empty() const noexcept { return size() == 0; }
  bool temporal_order() const noexcept { return temporal_order_; }

  std::span<const double> point(std::size_t i) const {
    return {coords_.data() + i * dim_, dim_};
  }
  const std::vector<double>& coords() const noexcept { return coords_; }

  bool operator==(const PointCloud&) const = default;

 private:
  std::size_t dim_ = 0;
  std::vector<double> coords_;
  bool temporal_order_ = false;
};

/// Delay-coordinate map: point n is [x(n), x(n+tau), ..., x(n+(m-1)tau)].
/// Yields T - (m-1)*tau points; throws SeriesTooShort when that is below 2
/// and NonFiniteSample on NaN/inf input.
PointCloud delay_embed(const TimeSeries& series, const EmbeddingConfig& cfg);

/// Lag of the first zero crossing of the sample autocorrelation. The lag on
/// either side of the sign change with the smaller |r| is returned; falls back
/// to 1 when there is no crossing within length/2 or the series is constant.
int estimate_delay(const TimeSeries& series);

/// Sample autocorrelation r(k) = sum (x_n - mean)(x_{n+k} - mean) / sum (x_n - mean)^2.
double autocorrelation(std::span<const double> samples, std::size_t lag);

/// Keeps `max_points` points at uniformly spaced temporal indices
/// floor(i (N-1) / (max_points-1)); identity when the cloud is small enough.
PointCloud subsample(const PointCloud& cloud, std::size_t max_points);

/// Throws NonFiniteSample naming the offending index.
void require_finite(const TimeSeries& series);

}  // namespace phasetopo
