#include "phasetopo/dynamics.hpp"

#include <cmath>
#include <functional>
#include <numbers>

#include "phasetopo/error.hpp"
#include "phasetopo/random.hpp"

namespace phasetopo {

namespace {

using State = std::array<double, 3>;

double param(const OdeSpec& spec, const std::string& name) {
  const auto it = spec.params.find(name);
  if (it == spec.params.end()) throw Error(ErrorCode::InvalidArgument, "missing ODE parameter '" + name + "'");
  return it->second;
}

State add_scaled(const State& a, const State& k, double h) {
  return {a[0] + h * k[0], a[1] + h * k[1], a[2] + h * k[2]};
}

}  // namespace

OdeSpec OdeSpec::lorenz() {
  OdeSpec spec;
  spec.system = OdeSystem::Lorenz;
  spec.params = {{"sigma", 10.0}, {"rho", 28.0}, {"beta", 8.0 / 3.0}};
  return spec;
}

OdeSpec OdeSpec::rossler() {
  OdeSpec spec;
  spec.system = OdeSystem::Rossler;
  spec.params = {{"a", 0.2}, {"b", 0.2}, {"c", 5.7}};
  return spec;
}

void OdeSpec::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(ErrorCode::InvalidArgument, "dt must be positive");
  if (n_steps <= burn_in) throw Error(ErrorCode::InvalidArgument, "n_steps must exceed burn_in");
  for (double v : x0) {
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "initial state must be finite");
  }
  for (const auto& [name, value] : params) {
    if (!std::isfinite(value)) throw Error(ErrorCode::InvalidArgument, "parameter '" + name + "' is not finite");
  }
}

Trajectory integrate(const OdeSpec& spec) {
  spec.validate();

  std::function<State(const State&)> field;
  if (spec.system == OdeSystem::Lorenz) {
    const double sigma = param(spec, "sigma");
    const double rho = param(spec, "rho");
    const double beta = param(spec, "beta");
    field = [=](const State& s) -> State {
      return {sigma * (s[1] - s[0]), s[0] * (rho - s[2]) - s[1], s[0] * s[1] - beta * s[2]};
    };
  } else {
    const double a = param(spec, "a");
    const double b = param(spec, "b");
    const double c = param(spec, "c");
    field = [=](const State& s) -> State { return {-s[1] - s[2], s[0] + a * s[1], b + s[2] * (s[0] - c)}; };
  }

  const std::size_t count = spec.n_steps - spec.burn_in;
  Trajectory out{{"x", {}}, {"y", {}}, {"z", {}}};
  out.x.samples.reserve(count);
  out.y.samples.reserve(count);
  out.z.samples.reserve(count);

  const double h = spec.dt;
  State s = spec.x0;
  for (std::size_t step = 0; step < spec.n_steps; ++step) {
    if (step > 0) {
      const State k1 = field(s);
      const State k2 = field(add_scaled(s, k1, h / 2));
      const State k3 = field(add_scaled(s, k2, h / 2));
      const State k4 = field(add_scaled(s, k3, h));
      for (int i = 0; i < 3; ++i) s[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    for (double v : s) {
      if (!std::isfinite(v) || std::abs(v) > spec.divergence_bound) {
        throw Error(ErrorCode::DivergedTrajectory, "state exceeded bound at step " + std::to_string(step));
      }
    }
    if (step >= spec.burn_in) {
      out.x.samples.push_back(s[0]);
      out.y.samples.push_back(s[1]);
      out.z.samples.push_back(s[2]);
    }
  }
  return out;
}

TimeSeries synth_signal(SignalKind kind, const SignalParams& params, std::size_t n, std::uint64_t seed) {
  if (n < 4) throw Error(ErrorCode::InvalidArgument, "signal length must be >= 4");
  if (!(params.noise >= 0.0)) throw Error(ErrorCode::InvalidArgument, "noise amplitude must be >= 0");
  if (!(params.period > 0.0)) throw Error(ErrorCode::InvalidArgument, "period must be positive");

  TimeSeries series;
  series.id = kind == SignalKind::Sine ? "sine" : kind == SignalKind::NoisySine ? "noisy_sine" : "damped_sine";
  series.samples.resize(n);
  Rng rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i);
    double value = params.amplitude * std::sin(2.0 * std::numbers::pi * t / params.period + params.phase);
    if (kind == SignalKind::DampedSine) value *= std::exp(-params.decay * t);
    if (kind == SignalKind::NoisySine && params.noise > 0.0) value += params.noise * rng.normal();
    series.samples[i] = value;
  }
  return series;
}

}  // namespace phasetopo
