#include "phasetopo/corpus.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "phasetopo/dynamics.hpp"
#include "phasetopo/error.hpp"
#include "phasetopo/random.hpp"
#include "phasetopo/text_io.hpp"

namespace phasetopo {

namespace {

ActionSample ode_instance(OdeSpec spec, std::size_t length) {
  spec.burn_in = 500;
  spec.n_steps = spec.burn_in + length;
  const Trajectory t = integrate(spec);
  return ActionSample{"", "", {t.x, t.y, t.z}};
}

}  // namespace

std::vector<ActionSample> make_synthetic_corpus(const CorpusSpec& spec) {
  if (spec.length < 64) throw Error(ErrorCode::InvalidArgument, "corpus series length must be >= 64");
  Rng rng(spec.seed);
  std::vector<ActionSample> out;
  const double two_pi = 2.0 * std::numbers::pi;
  const double len = static_cast<double>(spec.length);

  const auto add = [&](const std::string& label, std::size_t i, ActionSample sample) {
    sample.label = label;
    sample.sample_id = label + "_" + std::to_string(i);
    out.push_back(std::move(sample));
  };

  for (std::size_t i = 0; i < spec.instances_per_class; ++i) {
    OdeSpec lorenz = OdeSpec::lorenz();
    lorenz.params["rho"] = rng.uniform(26.0, 30.0);
    lorenz.x0 = {rng.uniform(-10.0, 10.0), rng.uniform(-10.0, 10.0), rng.uniform(10.0, 30.0)};
    lorenz.dt = 0.01;
    add("lorenz", i, ode_instance(lorenz, spec.length));
  }
  for (std::size_t i = 0; i < spec.instances_per_class; ++i) {
    OdeSpec rossler = OdeSpec::rossler();
    rossler.params["c"] = rng.uniform(5.0, 6.0);
    rossler.x0 = {rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0), rng.uniform(0.0, 1.0)};
    rossler.dt = 0.05;
    add("rossler", i, ode_instance(rossler, spec.length));
  }

  const auto sine_channels = [&](SignalKind kind, double noise_fraction, bool damped) {
    ActionSample sample;
    for (const char* id : {"c0", "c1", "c2"}) {
      SignalParams p;
      p.amplitude = rng.uniform(0.5, 2.0);
      p.period = rng.uniform(20.0, 40.0);
      p.phase = rng.uniform(0.0, two_pi);
      p.noise = noise_fraction * p.amplitude;
      p.decay = damped ? rng.uniform(0.8, 1.2) * std::log(10.0) / len : 0.0;
      TimeSeries s = synth_signal(kind, p, spec.length, rng.next());
      s.id = id;
      sample.channels.push_back(std::move(s));
    }
    return sample;
  };
  for (std::size_t i = 0; i < spec.instances_per_class; ++i) add("sine", i, sine_channels(SignalKind::Sine, 0.0, false));
  for (std::size_t i = 0; i < spec.instances_per_class; ++i) {
    add("noisy_sine", i, sine_channels(SignalKind::NoisySine, 0.25, false));
  }
  for (std::size_t i = 0; i < spec.instances_per_class; ++i) {
    add("damped_sine", i, sine_channels(SignalKind::DampedSine, 0.0, true));
  }
  return out;
}

std::string write_corpus(const std::string& directory, const std::vector<ActionSample>& samples) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(directory, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + directory + ": " + ec.message());

  DatasetManifest manifest;
  for (const auto& s : samples) {
    const std::string file = s.sample_id + ".csv";
    std::ostringstream csv;
    write_csv(csv, s.channels);
    const std::string bytes = csv.str();
    std::ofstream out(fs::path(directory) / file, std::ios::binary);
    out << bytes;
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + file);
    manifest.entries.push_back({file, s.label, s.sample_id, fnv1a_hex(bytes)});
    if (std::find(manifest.classes.begin(), manifest.classes.end(), s.label) == manifest.classes.end()) {
      manifest.classes.push_back(s.label);
    }
  }
  const std::string manifest_path = (fs::path(directory) / "manifest.csv").string();
  std::ofstream out(manifest_path, std::ios::binary);
  write_manifest(out, manifest);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + manifest_path);
  return manifest_path;
}

}  // namespace phasetopo
