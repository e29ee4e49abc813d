#include "phasetopo_cli/commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>

#include "phasetopo/corpus.hpp"
#include "phasetopo/diagram_metrics.hpp"
#include "phasetopo/dynamics.hpp"
#include "phasetopo/error.hpp"
#include "phasetopo/parallel.hpp"
#include "phasetopo/text_io.hpp"

namespace phasetopo::cli {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::InvalidArgument, what); }

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  f << text;
  f.close();
  if (!f) throw Error(ErrorCode::IoError, "cannot write " + path.string());
}

void ensure_directory(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + dir + ": " + ec.message());
}

std::string file_stem(const std::string& channel) {
  std::string s = channel;
  for (char& c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.')) c = '_';
  }
  if (s.empty() || s == "." || s == "..") s = "_" + s;
  return s;
}

void add_pipeline_options(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--m", cfg.pipeline.m, "embedding dimension")->check(CLI::PositiveNumber);
  sub->add_option_function<std::string>(
         "--tau",
         [&cfg](const std::string& v) {
           if (v == "auto") {
             cfg.pipeline.tau.reset();
             return;
           }
           const auto x = parse_integer(v);
           if (!x || *x < 1) throw CLI::ValidationError("--tau", "expected a positive integer or 'auto'");
           cfg.pipeline.tau = static_cast<int>(*x);
         },
         "embedding delay, or 'auto' for the first autocorrelation zero")
      ->default_str("auto");
  sub->add_option("--max-points", cfg.pipeline.max_points, "subsample each embedded cloud to at most this many points")
      ->check(CLI::Range(2, 1 << 20));
  sub->add_option_function<std::string>(
         "--eps-max",
         [&cfg](const std::string& v) {
           if (v == "diameter") {
             cfg.pipeline.eps_max.reset();
             return;
           }
           const auto x = parse_double(v);
           if (!x || !std::isfinite(*x) || *x < 0.0) {
             throw CLI::ValidationError("--eps-max", "expected a nonnegative number or 'diameter'");
           }
           cfg.pipeline.eps_max = *x;
         },
         "largest edge length, or 'diameter'")
      ->default_str("diameter");
  sub->add_flag_function(
      "--no-temporal-links", [&cfg](std::int64_t) { cfg.pipeline.temporal_links = false; },
      "plain Vietoris-Rips, without the value-0 edges between consecutive points");
  sub->add_option("--k", cfg.pipeline.k, "neighbours voting in classification")->check(CLI::PositiveNumber);
  sub->add_option("--threads", cfg.threads, "worker threads, 0 for all cores");
  sub->add_flag("--zscore", cfg.zscore, "standardize every channel before embedding");
  sub->add_flag("--allow-ragged", cfg.allow_ragged, "accept channels of differing lengths");
}

const std::set<std::string> kLorenzKeys{"sigma", "rho", "beta", "dt", "burn_in", "x0", "y0", "z0"};
const std::set<std::string> kRosslerKeys{"a", "b", "c", "dt", "burn_in", "x0", "y0", "z0"};
const std::set<std::string> kSignalKeys{"amplitude", "period", "phase", "noise", "decay"};

std::size_t count_param(const std::string& key, double v) {
  if (v < 0.0 || v != std::floor(v) || v > 1e9) bad(key + " must be a nonnegative integer");
  return static_cast<std::size_t>(v);
}

}  // namespace

void configure_app(CLI::App& app, RunConfig& cfg) {
  app.require_subcommand(1);

  auto* synth = app.add_subcommand("synth", "generate a time series CSV from a preset");
  synth->add_option("preset", cfg.preset, "lorenz, rossler, sine, noisy_sine or damped_sine")->required();
  synth->add_option_function<std::size_t>(
      "--n", [&cfg](std::size_t v) { cfg.n = v; }, "number of rows");
  synth->add_option("--seed", cfg.seed, "noise seed");
  synth->add_option("--out", cfg.out, "output CSV (standard output when omitted)");
  for (const char* key : {"sigma", "rho", "beta", "a", "b", "c", "dt", "x0", "y0", "z0", "amplitude", "period",
                          "phase", "noise", "decay"}) {
    synth->add_option_function<double>(
        std::string("--") + key, [&cfg, key](double v) { cfg.params[key] = v; }, std::string("override ") + key);
  }
  synth->add_option_function<double>(
      "--burn-in", [&cfg](double v) { cfg.params["burn_in"] = v; }, "integration steps discarded before output");

  auto* corpus = app.add_subcommand("corpus", "write the five-class synthetic corpus with a manifest");
  corpus->add_option("--out", cfg.out, "output directory")->required();
  corpus->add_option("--instances", cfg.instances, "instances per class")->check(CLI::Range(2, 100000));
  corpus->add_option("--length", cfg.length, "samples per channel")->check(CLI::Range(64, 10000000));
  corpus->add_option("--seed", cfg.seed, "generator seed");

  auto* persist = app.add_subcommand("persist", "persistence diagrams for every channel of a CSV");
  persist->add_option("input", cfg.inputs, "time series CSV")->required()->expected(1)->check(CLI::ExistingFile);
  persist->add_option("--out", cfg.out, "output directory")->required();
  persist->add_option("--threshold", cfg.threshold, "persistence threshold as a fraction of eps_max")
      ->check(CLI::NonNegativeNumber);
  persist->add_option("--seed", cfg.seed, "seed recorded in the outputs");
  persist->add_flag("--dump-filtration", cfg.dump_filtration, "also write each channel's filtration");
  add_pipeline_options(persist, cfg);

  auto* dist = app.add_subcommand("dist", "distance between two diagram files");
  dist->add_option("diagrams", cfg.inputs, "two diagram files")->required()->expected(2)->check(CLI::ExistingFile);
  dist->add_option("--metric", cfg.metric, "wasserstein or bottleneck")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, Metric>{{"wasserstein", Metric::Wasserstein}, {"bottleneck", Metric::Bottleneck}}));

  auto* classify = app.add_subcommand("classify", "nearest-neighbour evaluation over random splits");
  classify->add_option("--manifest", cfg.manifest, "dataset manifest")->required()->check(CLI::ExistingFile);
  classify->add_option("--splits", cfg.splits, "number of random splits")->check(CLI::PositiveNumber);
  classify->add_option("--test-per-class", cfg.test_per_class, "test items per class and split")
      ->check(CLI::PositiveNumber);
  classify->add_option("--seed", cfg.seed, "split seed");
  classify->add_option("--out", cfg.out, "report file (standard output when omitted)");
  add_pipeline_options(classify, cfg);

  app.final_callback([&app, &cfg] {
    for (const auto* sub : app.get_subcommands()) {
      if (const auto c = command_from_string(sub->get_name())) cfg.command = *c;
    }
  });
}

RunConfig parse_args(const std::vector<std::string>& args) {
  CLI::App app{"phasetopo"};
  RunConfig cfg;
  configure_app(app, cfg);
  std::vector<const char*> argv{"phasetopo"};
  for (const auto& a : args) argv.push_back(a.c_str());
  app.parse(static_cast<int>(argv.size()), argv.data());
  cfg.validate();
  return cfg;
}

void cmd_synth(const RunConfig& cfg, std::ostream& out) {
  const auto has = [&](const std::string& k) { return cfg.params.count(k) != 0; };
  const auto check_keys = [&](const std::set<std::string>& allowed) {
    for (const auto& [key, value] : cfg.params) {
      if (!allowed.count(key)) bad("parameter '" + key + "' does not apply to preset " + cfg.preset);
    }
  };

  std::vector<TimeSeries> channels;
  if (cfg.preset == "lorenz" || cfg.preset == "rossler") {
    const bool lorenz = cfg.preset == "lorenz";
    check_keys(lorenz ? kLorenzKeys : kRosslerKeys);
    OdeSpec spec = lorenz ? OdeSpec::lorenz() : OdeSpec::rossler();
    for (const auto& [key, value] : cfg.params) {
      if (key == "dt") {
        spec.dt = value;
      } else if (key == "burn_in") {
        spec.burn_in = count_param(key, value);
      } else if (key == "x0" || key == "y0" || key == "z0") {
        spec.x0[static_cast<std::size_t>(key[0] - 'x')] = value;
      } else {
        spec.params[key] = value;
      }
    }
    spec.n_steps = spec.burn_in + cfg.n.value_or(OdeSpec{}.n_steps - OdeSpec{}.burn_in);
    Trajectory t = integrate(spec);
    channels = {std::move(t.x), std::move(t.y), std::move(t.z)};
  } else if (cfg.preset == "sine" || cfg.preset == "noisy_sine" || cfg.preset == "damped_sine") {
    check_keys(kSignalKeys);
    const std::size_t n = cfg.n.value_or(600);
    SignalParams p;
    SignalKind kind = SignalKind::Sine;
    if (cfg.preset == "noisy_sine") {
      kind = SignalKind::NoisySine;
      p.noise = 0.25;
    } else if (cfg.preset == "damped_sine") {
      kind = SignalKind::DampedSine;
      p.decay = std::log(10.0) / static_cast<double>(n);
    }
    if (has("amplitude")) p.amplitude = cfg.params.at("amplitude");
    if (has("period")) p.period = cfg.params.at("period");
    if (has("phase")) p.phase = cfg.params.at("phase");
    if (has("noise")) p.noise = cfg.params.at("noise");
    if (has("decay")) p.decay = cfg.params.at("decay");
    TimeSeries s = synth_signal(kind, p, n, cfg.seed);
    s.id = "x";
    channels.push_back(std::move(s));
  } else {
    bad("unknown preset '" + cfg.preset + "' (expected lorenz, rossler, sine, noisy_sine or damped_sine)");
  }

  std::ostringstream meta;
  meta << "preset=" << cfg.preset << ";rows=" << channels.front().size() << ";seed=" << cfg.seed;
  for (const auto& [key, value] : cfg.params) meta << ';' << key << '=' << format_double(value);

  std::ostringstream csv;
  csv << "# phasetopo synth " << meta.str() << '\n';
  write_csv(csv, channels);
  if (cfg.out.empty()) {
    out << csv.str();
    return;
  }
  write_text_file(cfg.out, csv.str());
  out << "wrote " << cfg.out << '\n';
  out << "preset " << cfg.preset << '\n';
  out << "rows " << channels.front().size() << '\n';
  out << "channels";
  for (const auto& c : channels) out << ' ' << c.id;
  out << '\n';
  out << "seed " << cfg.seed << '\n';
  for (const auto& [key, value] : cfg.params) out << "param " << key << ' ' << format_double(value) << '\n';
}

void cmd_corpus(const RunConfig& cfg, std::ostream& out) {
  if (cfg.out.empty()) bad("corpus needs an output directory");
  const auto samples = make_synthetic_corpus({cfg.instances, cfg.length, cfg.seed});
  const std::string manifest = write_corpus(cfg.out, samples);
  out << "wrote " << samples.size() << " samples\n";
  out << "manifest " << manifest << '\n';
}

void cmd_persist(const RunConfig& cfg, std::ostream& out) {
  if (cfg.inputs.size() != 1) bad("persist takes exactly one input CSV");
  if (cfg.out.empty()) bad("persist needs an output directory");
  std::vector<TimeSeries> channels = read_csv_file(cfg.inputs.front(), cfg.allow_ragged);
  if (cfg.zscore) {
    for (auto& c : channels) zscore(c);
  }

  std::set<std::string> stems;
  for (const auto& c : channels) {
    if (!stems.insert(file_stem(c.id)).second) bad("channels map to the same file name: '" + c.id + "'");
  }

  std::vector<ChannelPersistence> results(channels.size());
  parallel_for(channels.size(), cfg.threads,
               [&](std::size_t i) { results[i] = analyze_channel(channels[i], cfg.pipeline); });

  ensure_directory(cfg.out);
  write_text_file(fs::path(cfg.out) / "run.cfg", cfg.serialize());
  const std::string fingerprint = cfg.pipeline.fingerprint();
  for (std::size_t i = 0; i < channels.size(); ++i) {
    const auto& r = results[i];
    const std::string stem = file_stem(r.channel);
    const DiagramFileHeader header{fingerprint, r.channel, cfg.seed};
    for (int dim : {0, 1}) {
      write_text_file(fs::path(cfg.out) / (stem + ".h" + std::to_string(dim) + ".txt"),
                      format_diagram(r.diagram.dimension(dim), header));
    }
    if (cfg.dump_filtration) {
      const PointCloud cloud =
          subsample(delay_embed(channels[i], {cfg.pipeline.m, r.tau, cfg.pipeline.max_points}),
                    static_cast<std::size_t>(cfg.pipeline.max_points));
      write_text_file(fs::path(cfg.out) / (stem + ".filtration.txt"),
                      format_filtration(build_rips(cloud, {cfg.pipeline.eps_max, cfg.pipeline.temporal_links})));
    }
    const double cut = cfg.threshold * r.diagram.eps_max;
    out << "channel " << r.channel << " tau " << r.tau << " points " << r.n_points << " eps_max "
        << format_double(r.diagram.eps_max) << " beta0 " << persistent_betti(r.diagram, 0, cut) << " beta1 "
        << persistent_betti(r.diagram, 1, cut) << '\n';
  }
}

void cmd_dist(const RunConfig& cfg, std::ostream& out) {
  if (cfg.inputs.size() != 2) bad("dist takes exactly two diagram files");
  const PersistenceDiagram a = read_diagram_file(cfg.inputs[0]);
  const PersistenceDiagram b = read_diagram_file(cfg.inputs[1]);
  std::set<int> dims;
  for (const auto* d : {&a, &b}) {
    std::set<int> own;
    for (const auto& p : d->pairs) own.insert(p.dim);
    if (own.size() > 1) throw Error(ErrorCode::MixedDimensions, "a diagram file holds more than one dimension");
    dims.insert(own.begin(), own.end());
  }
  if (dims.size() > 1) {
    throw Error(ErrorCode::MixedDimensions,
                "diagrams are in dimensions " + std::to_string(*dims.begin()) + " and " + std::to_string(*dims.rbegin()));
  }
  const auto [fa, fb] = finitize_common(a, b);
  const double d = cfg.metric == Metric::Wasserstein ? wasserstein1(fa, fb) : bottleneck(fa, fb);
  out << format_double(d) << '\n';
}

void cmd_classify(const RunConfig& cfg, std::ostream& out) {
  const DatasetManifest manifest = read_manifest_file(cfg.manifest);
  const auto samples = load_dataset(manifest, {cfg.allow_ragged, cfg.zscore, cfg.threads});
  const EvalReport report = evaluate(samples, cfg.pipeline, {cfg.splits, cfg.test_per_class, cfg.seed, cfg.threads});
  const std::string text = report.format();
  if (cfg.out.empty()) {
    out << text;
    return;
  }
  write_text_file(cfg.out, text);

  std::size_t width = 4;
  for (const auto& c : report.classes) width = std::max(width, c.size());
  out << "fingerprint " << report.fingerprint << '\n';
  out << "seed " << report.seed << '\n';
  out << "accuracy " << std::fixed << std::setprecision(4) << report.mean_accuracy << " +/- " << report.std_accuracy
      << " over " << report.n_splits << " splits\n";
  out << std::setw(static_cast<int>(width)) << "" << " ";
  for (const auto& c : report.classes) out << ' ' << std::setw(static_cast<int>(width)) << c;
  out << '\n';
  for (std::size_t t = 0; t < report.classes.size(); ++t) {
    out << std::setw(static_cast<int>(width)) << report.classes[t] << " ";
    for (double v : report.confusion[t]) out << ' ' << std::setw(static_cast<int>(width)) << v;
    out << '\n';
  }
  out << std::defaultfloat;
  out << "report " << cfg.out << '\n';
}

void run(const RunConfig& cfg, std::ostream& out) {
  cfg.validate();
  switch (cfg.command) {
    case Command::Synth: return cmd_synth(cfg, out);
    case Command::Corpus: return cmd_corpus(cfg, out);
    case Command::Persist: return cmd_persist(cfg, out);
    case Command::Dist: return cmd_dist(cfg, out);
    case Command::Classify: return cmd_classify(cfg, out);
  }
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Topological features of delay-embedded time series"};
  app.name("phasetopo");
  RunConfig cfg;
  configure_app(app, cfg);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }
  try {
    run(cfg, out);
    out.flush();
    return 0;
  } catch (const std::exception& e) {
    err << "phasetopo: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace phasetopo::cli
