#include "phasetopo_cli/run_config.hpp"

#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

#include "phasetopo/error.hpp"
#include "phasetopo/text_io.hpp"

namespace phasetopo::cli {

namespace {

constexpr std::pair<Command, const char*> kCommands[] = {
    {Command::Synth, "synth"}, {Command::Corpus, "corpus"},     {Command::Persist, "persist"},
    {Command::Dist, "dist"},   {Command::Classify, "classify"},
};

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::InvalidArgument, what); }

const char* on_off(bool v) { return v ? "on" : "off"; }

}  // namespace

std::string to_string(Command c) {
  for (const auto& [value, name] : kCommands) {
    if (value == c) return name;
  }
  return "?";
}

std::optional<Command> command_from_string(std::string_view name) {
  for (const auto& [value, text] : kCommands) {
    if (name == text) return value;
  }
  return std::nullopt;
}

void RunConfig::validate() const {
  pipeline.validate();
  if (!std::isfinite(threshold) || threshold < 0.0) bad("threshold must be a finite fraction >= 0");
  if (threads > 4096) bad("threads out of range");
  if (n && *n == 0) bad("n must be >= 1");
  for (const auto& [key, value] : params) {
    if (key.empty() || key.find_first_of("=\n") != std::string::npos) bad("bad parameter name '" + key + "'");
    if (!std::isfinite(value)) bad("parameter " + key + " must be finite");
  }
  const auto check_text = [](const std::string& s) {
    if (s.find_first_of("\r\n") != std::string::npos) bad("paths and names may not contain line breaks");
  };
  check_text(preset);
  check_text(manifest);
  check_text(out);
  for (const auto& in : inputs) check_text(in);
}

std::string RunConfig::serialize() const {
  std::ostringstream o;
  o << "command=" << to_string(command) << '\n';
  o << "m=" << pipeline.m << '\n';
  o << "tau=" << (pipeline.tau ? std::to_string(*pipeline.tau) : "auto") << '\n';
  o << "max_points=" << pipeline.max_points << '\n';
  o << "eps_max=" << (pipeline.eps_max ? format_double(*pipeline.eps_max) : "diameter") << '\n';
  o << "temporal_links=" << on_off(pipeline.temporal_links) << '\n';
  o << "k=" << pipeline.k << '\n';
  o << "threshold=" << format_double(threshold) << '\n';
  o << "splits=" << splits << '\n';
  o << "test_per_class=" << test_per_class << '\n';
  o << "seed=" << seed << '\n';
  o << "threads=" << threads << '\n';
  o << "zscore=" << on_off(zscore) << '\n';
  o << "allow_ragged=" << on_off(allow_ragged) << '\n';
  o << "dump_filtration=" << on_off(dump_filtration) << '\n';
  o << "metric=" << (metric == Metric::Wasserstein ? "wasserstein" : "bottleneck") << '\n';
  o << "preset=" << preset << '\n';
  o << "n=" << (n ? std::to_string(*n) : "default") << '\n';
  for (const auto& [key, value] : params) o << "param." << key << '=' << format_double(value) << '\n';
  o << "instances=" << instances << '\n';
  o << "length=" << length << '\n';
  for (const auto& in : inputs) o << "input=" << in << '\n';
  o << "manifest=" << manifest << '\n';
  o << "out=" << out << '\n';
  return o.str();
}

RunConfig RunConfig::parse(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  std::set<std::string> seen;
  const auto fail = [&](const std::string& what) {
    throw Error(ErrorCode::ParseError, "config line " + std::to_string(line_no) + ": " + what);
  };
  const auto integer = [&](const std::string& v, long long lo) {
    const auto x = parse_integer(v);
    if (!x || *x < lo) fail("bad integer '" + v + "'");
    return *x;
  };
  const auto real = [&](const std::string& v) {
    const auto x = parse_double(v);
    if (!x) fail("bad number '" + v + "'");
    return *x;
  };
  const auto flag = [&](const std::string& v) {
    if (v == "on") return true;
    if (v == "off") return false;
    fail("expected on/off, got '" + v + "'");
    return false;
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail("expected key=value");
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    if (key == "input") {
      cfg.inputs.push_back(value);
      continue;
    }
    if (!seen.insert(key).second) fail("duplicate key '" + key + "'");
    if (key.rfind("param.", 0) == 0) {
      cfg.params[key.substr(6)] = real(value);
    } else if (key == "command") {
      const auto c = command_from_string(value);
      if (!c) fail("unknown command '" + value + "'");
      cfg.command = *c;
    } else if (key == "m") {
      cfg.pipeline.m = static_cast<int>(integer(value, 1));
    } else if (key == "tau") {
      cfg.pipeline.tau = value == "auto" ? std::nullopt : std::optional<int>(static_cast<int>(integer(value, 1)));
    } else if (key == "max_points") {
      cfg.pipeline.max_points = static_cast<int>(integer(value, 0));
    } else if (key == "eps_max") {
      cfg.pipeline.eps_max = value == "diameter" ? std::nullopt : std::optional<double>(real(value));
    } else if (key == "temporal_links") {
      cfg.pipeline.temporal_links = flag(value);
    } else if (key == "k") {
      cfg.pipeline.k = static_cast<int>(integer(value, 1));
    } else if (key == "threshold") {
      cfg.threshold = real(value);
    } else if (key == "splits") {
      cfg.splits = static_cast<std::size_t>(integer(value, 0));
    } else if (key == "test_per_class") {
      cfg.test_per_class = static_cast<std::size_t>(integer(value, 0));
    } else if (key == "seed") {
      const auto r = std::from_chars(value.data(), value.data() + value.size(), cfg.seed);
      if (value.empty() || r.ec != std::errc{} || r.ptr != value.data() + value.size()) fail("bad seed '" + value + "'");
    } else if (key == "threads") {
      cfg.threads = static_cast<unsigned>(integer(value, 0));
    } else if (key == "zscore") {
      cfg.zscore = flag(value);
    } else if (key == "allow_ragged") {
      cfg.allow_ragged = flag(value);
    } else if (key == "dump_filtration") {
      cfg.dump_filtration = flag(value);
    } else if (key == "metric") {
      if (value == "wasserstein") {
        cfg.metric = Metric::Wasserstein;
      } else if (value == "bottleneck") {
        cfg.metric = Metric::Bottleneck;
      } else {
        fail("unknown metric '" + value + "'");
      }
    } else if (key == "preset") {
      cfg.preset = value;
    } else if (key == "n") {
      cfg.n = value == "default" ? std::nullopt : std::optional<std::size_t>(integer(value, 1));
    } else if (key == "instances") {
      cfg.instances = static_cast<std::size_t>(integer(value, 0));
    } else if (key == "length") {
      cfg.length = static_cast<std::size_t>(integer(value, 0));
    } else if (key == "manifest") {
      cfg.manifest = value;
    } else if (key == "out") {
      cfg.out = value;
    } else {
      fail("unknown key '" + key + "'");
    }
  }
  cfg.validate();
  return cfg;
}

}  // namespace phasetopo::cli
