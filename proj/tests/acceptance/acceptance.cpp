// Acceptance checks. Prints one PASS/FAIL line per criterion; exit status is nonzero
// if any selected criterion fails. Usage: acceptance [criterion ...] (default: all).

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <tuple>

#include "../support.hpp"
#include "phasetopo/classify.hpp"
#include "phasetopo/corpus.hpp"
#include "phasetopo/diagram_metrics.hpp"
#include "phasetopo/dynamics.hpp"
#include "phasetopo/filtration.hpp"

using namespace phasetopo;
using namespace testing_support;

namespace {

// Pinned tolerances and budgets.
constexpr double kAttractorBudgetSeconds = 30.0;
constexpr double kAttractorThresholdFraction = 0.1;
constexpr double kOracleBudgetSeconds = 60.0;
constexpr double kAssignmentBudgetSeconds = 10.0;
constexpr double kTriangleTolerance = 1e-9;
constexpr double kStabilityFraction = 0.01;
constexpr double kStabilityTolerance = 1e-9;
constexpr double kClassifyAccuracy = 0.95;
constexpr double kClassifyBudgetSeconds = 300.0;
constexpr double kAblationSlack = 0.02;

struct Outcome {
  bool pass;
  std::string detail;
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(double v, int precision = 4) {
  std::ostringstream s;
  s.precision(precision);
  s << v;
  return s.str();
}

Outcome attractor_topology() {
  Stopwatch clock;
  std::ostringstream detail;
  bool pass = true;
  const PipelineConfig cfg;  // m=3, tau auto, 150 points, eps_max = diameter, temporal links on
  for (const auto& [name, spec, want1] :
       {std::tuple{"lorenz", OdeSpec::lorenz(), std::size_t{1}}, std::tuple{"rossler", OdeSpec::rossler(), std::size_t{2}}}) {
    const Trajectory t = integrate(spec);
    const ChannelPersistence p = analyze_channel(t.x, cfg);
    const double threshold = kAttractorThresholdFraction * p.diagram.eps_max;
    const std::size_t b0 = persistent_betti(p.diagram, 0, threshold);
    const std::size_t b1 = persistent_betti(p.diagram, 1, threshold);
    pass = pass && b0 == 1 && b1 == want1;
    detail << name << " tau=" << p.tau << " beta0=" << b0 << " beta1=" << b1 << " (want 1/" << want1 << "); ";
  }
  const double elapsed = clock.seconds();
  pass = pass && elapsed < kAttractorBudgetSeconds;
  detail << fmt(elapsed, 3) << "s";
  return {pass, detail.str()};
}

Outcome oracle_equivalence() {
  Stopwatch clock;
  Rng rng(20240601);
  std::size_t clouds = 0, mismatches = 0, pairs = 0;
  for (std::size_t dim = 1; dim <= 3; ++dim) {
    for (bool links : {false, true}) {
      for (double fraction : {0.4, 0.75, 1.0}) {
        for (int rep = 0; rep < 40; ++rep) {
          const std::size_t n = 1 + rng.below(12);
          const PointCloud c = rep % 2 ? lattice_cloud(rng, n, dim) : random_cloud(rng, n, dim);
          const std::optional<double> eps =
              fraction == 1.0 ? std::nullopt : std::optional<double>(fraction * diameter(c));
          const Filtration f = build_rips(c, {eps, links});
          const auto expected = sorted_pairs(naive_persistence_oracle(f));
          const auto cob = sorted_pairs(compute_persistence(f, Reduction::Coboundary));
          const auto bnd = sorted_pairs(compute_persistence(f, Reduction::Boundary));
          mismatches += (cob != expected) + (bnd != expected);
          pairs += expected.size();
          ++clouds;
        }
      }
    }
  }
  const double elapsed = clock.seconds();
  return {mismatches == 0 && clouds >= 200 && elapsed < kOracleBudgetSeconds,
          std::to_string(clouds) + " clouds, " + std::to_string(pairs) + " pairs, " + std::to_string(mismatches) +
              " mismatches, " + fmt(elapsed, 3) + "s"};
}

Outcome assignment_exactness() {
  Stopwatch clock;
  Rng rng(77);
  std::size_t matrices = 0, mismatches = 0;
  for (int trial = 0; trial < 600; ++trial) {
    const std::size_t side = 1 + trial % 7;
    MatchingProblem p;
    p.side = side;
    p.cost.resize(side * side);
    p.provenance.assign(side * side, EntryKind::PointToPoint);
    for (double& c : p.cost) c = trial % 3 == 0 ? static_cast<double>(rng.below(4)) : rng.uniform(0.0, 50.0);
    mismatches += assignment_solve(p).total_cost != brute_force_assignment(p.cost, side);
    ++matrices;
  }
  const double elapsed = clock.seconds();
  return {mismatches == 0 && matrices >= 500 && elapsed < kAssignmentBudgetSeconds,
          std::to_string(matrices) + " matrices (side <= 7), " + std::to_string(mismatches) + " mismatches, " +
              fmt(elapsed, 3) + "s"};
}

Outcome metric_properties() {
  Rng rng(314);
  std::size_t triples = 0, asymmetric = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 250; ++trial) {
    const auto a = random_diagram(rng, 10);
    const auto b = random_diagram(rng, 10);
    const auto c = random_diagram(rng, 10);
    for (const auto& metric : {std::function<double(const PersistenceDiagram&, const PersistenceDiagram&)>(wasserstein1),
                               std::function<double(const PersistenceDiagram&, const PersistenceDiagram&)>(bottleneck)}) {
      const double ab = metric(a, b), bc = metric(b, c), ac = metric(a, c);
      asymmetric += (ab != metric(b, a)) + (bc != metric(c, b)) + (ac != metric(c, a));
      worst = std::max({worst, ac - (ab + bc), ab - (ac + bc), bc - (ab + ac)});
    }
    ++triples;
  }
  return {asymmetric == 0 && worst <= kTriangleTolerance && triples >= 200,
          std::to_string(triples) + " triples, " + std::to_string(asymmetric) +
              " asymmetric, worst triangle excess " + fmt(worst)};
}

Outcome stability() {
  Rng rng(2718);
  std::size_t clouds = 0, violations = 0;
  double worst_ratio = 0.0;
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t dim = 1 + trial % 3;
    const std::size_t n = 8 + rng.below(33);
    const PointCloud c = random_cloud(rng, n, dim);
    const double diam = diameter(c);
    const double delta = kStabilityFraction * diam;
    std::vector<double> moved = c.coords();
    for (std::size_t i = 0; i < n; ++i) {
      // uniform in the Euclidean ball of radius delta, so every coordinate also moves <= delta
      std::vector<double> dir(dim);
      double norm = 0.0;
      for (double& d : dir) {
        d = rng.normal();
        norm += d * d;
      }
      norm = std::sqrt(norm);
      const double radius = delta * std::pow(rng.uniform(), 1.0 / static_cast<double>(dim));
      for (std::size_t k = 0; k < dim; ++k) moved[i * dim + k] += norm > 0 ? radius * dir[k] / norm : 0.0;
    }
    const PointCloud perturbed(dim, moved, true);
    const bool links = trial % 2 == 0;
    const RipsOptions options{2.0 * diam, links};
    const PersistenceDiagram before = compute_persistence(build_rips(c, options)).finitized();
    const PersistenceDiagram after = compute_persistence(build_rips(perturbed, options)).finitized();
    for (int hd : {0, 1}) {
      const double d = bottleneck(before.dimension(hd), after.dimension(hd));
      violations += d > 2.0 * delta + kStabilityTolerance;
      if (delta > 0) worst_ratio = std::max(worst_ratio, d / delta);
    }
    ++clouds;
  }
  return {violations == 0 && clouds >= 50,
          std::to_string(clouds) + " clouds, " + std::to_string(violations) + " violations, max bottleneck/delta " +
              fmt(worst_ratio) + " (bound 2)"};
}

struct Classification {
  EvalReport report;
  double seconds;
};

Classification classify_corpus(bool temporal_links) {
  static const std::vector<ActionSample> corpus = make_synthetic_corpus({20, 600, 1});
  PipelineConfig cfg;
  cfg.temporal_links = temporal_links;
  Stopwatch clock;
  EvalReport r = evaluate(corpus, cfg, {20, 3, 7, 1});
  return {std::move(r), clock.seconds()};
}

std::map<bool, Classification>& classification_cache() {
  static std::map<bool, Classification> cache;
  return cache;
}

const Classification& classification(bool temporal_links) {
  auto& cache = classification_cache();
  auto it = cache.find(temporal_links);
  if (it == cache.end()) it = cache.emplace(temporal_links, classify_corpus(temporal_links)).first;
  return it->second;
}

std::string confusion_text(const EvalReport& r) {
  std::ostringstream s;
  for (std::size_t t = 0; t < r.classes.size(); ++t) {
    s << (t ? ", " : "") << r.classes[t] << ' ' << fmt(r.confusion[t][t], 3);
  }
  return s.str();
}

Outcome classification_accuracy() {
  const Classification& on = classification(true);
  return {on.report.mean_accuracy >= kClassifyAccuracy && on.seconds < kClassifyBudgetSeconds,
          "links on: mean " + fmt(on.report.mean_accuracy) + " std " + fmt(on.report.std_accuracy) + " (>= " +
              fmt(kClassifyAccuracy) + "), per-class [" + confusion_text(on.report) + "], " + fmt(on.seconds, 4) + "s"};
}

Outcome ablation_direction() {
  const Classification& on = classification(true);
  const Classification& off = classification(false);
  return {on.report.mean_accuracy >= off.report.mean_accuracy - kAblationSlack,
          "links on " + fmt(on.report.mean_accuracy) + " vs off " + fmt(off.report.mean_accuracy) + " (slack " +
              fmt(kAblationSlack) + "), off per-class [" + confusion_text(off.report) + "]"};
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("phasetopo_acceptance_" + std::to_string(Rng(std::random_device{}()).next()));
  fs::create_directories(dir);
  const std::string manifest = write_corpus(dir.string(), make_synthetic_corpus({8, 300, 5}));
  const auto run = [&](const std::string& name) {
    const std::string cmd = std::string("\"") + PHASETOPO_CLI_PATH + "\" classify --manifest \"" + manifest +
                            "\" --max-points 40 --splits 10 --test-per-class 2 --seed 99 --threads 2 --out \"" +
                            (dir / name).string() + "\" > \"" + (dir / (name + ".stdout")).string() + "\"";
    return std::system(cmd.c_str());
  };
  const int first = run("a.txt");
  const int second = run("b.txt");
  const std::string a = read_file(dir / "a.txt");
  const std::string b = read_file(dir / "b.txt");
  std::error_code ec;
  fs::remove_all(dir, ec);
  const bool pass = first == 0 && second == 0 && !a.empty() && a == b;
  return {pass, "exit codes " + std::to_string(first) + "/" + std::to_string(second) + ", report " +
                    std::to_string(a.size()) + " bytes, " + (a == b ? "identical" : "different")};
}

}  // namespace

int main(int argc, char** argv) {
  const std::map<int, std::pair<std::string, std::function<Outcome()>>> criteria{
      {1, {"attractor topology", attractor_topology}},
      {2, {"oracle equivalence", oracle_equivalence}},
      {3, {"assignment exactness", assignment_exactness}},
      {4, {"metric properties", metric_properties}},
      {5, {"stability", stability}},
      {6, {"synthetic classification", classification_accuracy}},
      {7, {"temporal-link ablation", ablation_direction}},
      {8, {"determinism", determinism}},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) {
    const int c = std::atoi(argv[i]);
    if (!criteria.count(c)) {
      std::cerr << "unknown criterion '" << argv[i] << "'\n";
      return 2;
    }
    selected.insert(c);
  }
  if (selected.empty()) {
    for (const auto& [c, entry] : criteria) selected.insert(c);
  }

  bool all = true;
  for (int c : selected) {
    const auto& [name, check] = criteria.at(c);
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    all = all && o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << c << " (" << name << "): " << o.detail << std::endl;
  }
  return all ? 0 : 1;
}
