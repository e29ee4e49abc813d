#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "phasetopo/dataset.hpp"

namespace phasetopo {

/// Five-class synthetic action corpus: lorenz, rossler, sine, noisy_sine, damped_sine.
/// Every instance has three channels and randomized parameters, phases and initial
/// conditions drawn from `seed`.
struct CorpusSpec {
  std::size_t instances_per_class = 20;
  std::size_t length = 600;  ///< samples per channel
  std::uint64_t seed = 1;
};

std::vector<ActionSample> make_synthetic_corpus(const CorpusSpec& spec);

/// Writes one CSV per sample plus `manifest.csv` (with checksums) into `directory`,
/// creating it if needed. Returns the manifest path.
std::string write_corpus(const std::string& directory, const std::vector<ActionSample>& samples);

}  // namespace phasetopo
