#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "phasetopo_cli/run_config.hpp"

namespace CLI {
class App;
}

namespace phasetopo::cli {

/// Registers every subcommand and flag on `app`, writing parsed values into `cfg`.
void configure_app(CLI::App& app, RunConfig& cfg);

/// Parses argv into a validated RunConfig. CLI11 parse errors propagate as CLI::Error.
RunConfig parse_args(const std::vector<std::string>& args);

/// Data goes to `out`; nothing is written to `out` on failure. Throws phasetopo::Error.
void run(const RunConfig& cfg, std::ostream& out);

void cmd_synth(const RunConfig& cfg, std::ostream& out);
void cmd_corpus(const RunConfig& cfg, std::ostream& out);
void cmd_persist(const RunConfig& cfg, std::ostream& out);
void cmd_dist(const RunConfig& cfg, std::ostream& out);
void cmd_classify(const RunConfig& cfg, std::ostream& out);

/// Full CLI entry point: parse, run, report errors on `err`. Returns the exit code.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace phasetopo::cli
