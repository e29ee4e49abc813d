#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "phasetopo/embedding.hpp"

namespace phasetopo {

enum class OdeSystem { Lorenz, Rossler };

struct OdeSpec {
  OdeSystem system = OdeSystem::Lorenz;
  /// Lorenz: sigma, rho, beta. Rossler: a, b, c.
  std::map<std::string, double> params;
  std::array<double, 3> x0{1.0, 1.0, 1.0};
  double dt = 0.01;
  std::size_t n_steps = 6000;
  std::size_t burn_in = 1000;
  /// Any |coordinate| above this aborts with DivergedTrajectory.
  double divergence_bound = 1e6;

  /// Classical chaotic regimes (sigma=10, rho=28, beta=8/3; a=0.2, b=0.2, c=5.7).
  static OdeSpec lorenz();
  static OdeSpec rossler();

  void validate() const;
};

struct Trajectory {
  TimeSeries x, y, z;
};

/// Fixed-step RK4. Samples are the states after steps burn_in .. n_steps-1,
/// where step 0 is x0, so n_steps - burn_in samples are returned.
Trajectory integrate(const OdeSpec& spec);

enum class SignalKind { Sine, NoisySine, DampedSine };

struct SignalParams {
  double amplitude = 1.0;
  double period = 16.0;  ///< samples per cycle
  double phase = 0.0;    ///< radians
  double noise = 0.0;    ///< standard deviation of additive Gaussian noise (NoisySine)
  double decay = 0.0;    ///< exponential decay rate per sample (DampedSine)
};

/// amplitude * exp(-decay n) * sin(2 pi n / period + phase) + noise * N(0, 1), with the
/// decay and noise terms applied only for their respective kinds. Deterministic in `seed`.
TimeSeries synth_signal(SignalKind kind, const SignalParams& params, std::size_t n, std::uint64_t seed);

}  // namespace phasetopo
