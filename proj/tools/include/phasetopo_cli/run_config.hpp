#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "phasetopo/classify.hpp"

namespace phasetopo::cli {

enum class Command { Synth, Corpus, Persist, Dist, Classify };

std::string to_string(Command c);
std::optional<Command> command_from_string(std::string_view name);

enum class Metric { Wasserstein, Bottleneck };

/// Every parameter of one CLI run. `serialize` writes one `key=value` line per field in
/// a fixed order and `parse` reads that form back exactly.
struct RunConfig {
  Command command = Command::Persist;
  PipelineConfig pipeline;
  double threshold = 0.1;  ///< fraction of eps_max
  std::size_t splits = 100;
  std::size_t test_per_class = 5;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  bool zscore = false;
  bool allow_ragged = false;
  bool dump_filtration = false;
  Metric metric = Metric::Wasserstein;

  std::string preset;                    ///< synth
  std::optional<std::size_t> n;          ///< synth rows; preset default when empty
  std::map<std::string, double> params;  ///< synth overrides, e.g. rho, period
  std::size_t instances = 20;            ///< corpus
  std::size_t length = 600;              ///< corpus

  std::vector<std::string> inputs;
  std::string manifest;
  std::string out;

  void validate() const;
  std::string serialize() const;
  static RunConfig parse(const std::string& text);

  bool operator==(const RunConfig&) const = default;
};

}  // namespace phasetopo::cli
