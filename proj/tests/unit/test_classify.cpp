#include <doctest.h>

#include <cmath>
#include <numeric>

#include "../support.hpp"
#include "phasetopo/classify.hpp"
#include "phasetopo/corpus.hpp"
#include "phasetopo/diagram_metrics.hpp"
#include "phasetopo/error.hpp"

using namespace phasetopo;

namespace {

PersistenceDiagram finite(std::vector<std::pair<double, double>> pts, int dim, double eps = 10.0) {
  PersistenceDiagram d;
  d.eps_max = eps;
  for (auto [b, e] : pts) d.pairs.push_back({dim, b, e});
  return d;
}

TopologicalSignature random_signature(Rng& rng, std::size_t channels) {
  TopologicalSignature s;
  s.fingerprint = PipelineConfig{}.fingerprint();
  for (std::size_t c = 0; c < channels; ++c) {
    s.channels.push_back({"c" + std::to_string(c), 1, 20.0, testing_support::random_diagram(rng, 5, 0),
                          testing_support::random_diagram(rng, 5, 1)});
  }
  return s;
}

ErrorCode code_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("pipeline config") {
  CHECK(PipelineConfig{}.fingerprint() ==
        "m=3;tau=auto;max_points=150;eps_max=diameter;temporal_links=on;aggregate=sum-w1-h0h1;k=1");
  PipelineConfig c;
  c.tau = 7;
  c.eps_max = 0.5;
  c.temporal_links = false;
  CHECK(c.fingerprint() == "m=3;tau=7;max_points=150;eps_max=0.5;temporal_links=off;aggregate=sum-w1-h0h1;k=1");
  c.m = 0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = {};
  c.eps_max = -1;
  CHECK(code_of([&] { c.validate(); }) == ErrorCode::NegativeScale);
  c = {};
  c.k = 0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = {};
  c.max_points = 1;
  CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("constant channel") {
  const ChannelPersistence p = analyze_channel(TimeSeries{"flat", std::vector<double>(40, 2.5)}, PipelineConfig{});
  CHECK(p.tau == 1);
  CHECK(p.diagram.eps_max == 0.0);
  const PersistenceDiagram kept = p.diagram.without_zero_persistence();
  CHECK(kept.pairs == std::vector<PersistencePair>{{0, 0.0, std::nullopt}});

  ActionSample sample{"s", "flat", {TimeSeries{"flat", std::vector<double>(40, 2.5)}}};
  const TopologicalSignature sig = signature(sample, PipelineConfig{});
  REQUIRE(sig.channels.size() == 1);
  CHECK(sig.channels[0].h1.pairs.empty());
}

TEST_CASE("signature shape") {
  const auto corpus = make_synthetic_corpus({1, 200, 3});
  PipelineConfig cfg;
  cfg.max_points = 40;
  ActionSample two = corpus[2];
  two.channels.resize(2);
  const TopologicalSignature sig = signature(two, cfg);
  CHECK(sig.diagram_count() == 4);
  CHECK(sig.fingerprint == cfg.fingerprint());
  for (const auto& c : sig.channels) {
    for (const auto& p : c.h0.pairs) {
      CHECK(p.dim == 0);
      CHECK(p.death.has_value());
      CHECK(*p.death > p.birth);
    }
    for (const auto& p : c.h1.pairs) {
      CHECK(p.dim == 1);
      CHECK(*p.death <= c.eps_max);
    }
  }
  CHECK(sig.channels[1].channel == two.channels[1].id);
}

TEST_CASE("channel errors name the channel") {
  PipelineConfig cfg;
  cfg.tau = 50;
  try {
    analyze_channel(TimeSeries{"knee_y", std::vector<double>(20, 1.0)}, cfg);
    FAIL("expected SeriesTooShort");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SeriesTooShort);
    CHECK(std::string(e.what()).find("knee_y") != std::string::npos);
  }
}

TEST_CASE("sample_distance") {
  Rng rng(4);
  const auto a = random_signature(rng, 2);
  CHECK(sample_distance(a, a) == 0.0);

  auto b = a;
  b.channels[1].h1 = finite({{0, 2}}, 1);
  auto c = a;
  c.channels[1].h1 = finite({}, 1);
  CHECK(sample_distance(b, c) == 2.0);

  for (int trial = 0; trial < 50; ++trial) {
    const auto x = random_signature(rng, 3);
    const auto y = random_signature(rng, 3);
    const auto z = random_signature(rng, 3);
    CHECK(sample_distance(x, y) == sample_distance(y, x));
    CHECK(sample_distance(x, z) <= sample_distance(x, y) + sample_distance(y, z) + 1e-9);
  }

  auto other = a;
  other.fingerprint = "m=4";
  CHECK(code_of([&] { sample_distance(a, other); }) == ErrorCode::FingerprintMismatch);
  CHECK(code_of([&] { sample_distance(a, random_signature(rng, 3)); }) == ErrorCode::ChannelCountMismatch);
}

TEST_CASE("knn_predict") {
  const std::vector<std::string> one{"walk"};
  CHECK(knn_predict(std::vector<double>{123.0}, one, 1) == "walk");

  const std::vector<std::string> labels{"a", "b", "c", "b"};
  CHECK(knn_predict(std::vector<double>{3, 1, 1, 2}, labels, 1) == "b");
  CHECK(knn_predict(std::vector<double>{3, 2, 1, 1}, labels, 1) == "c");  // tie: lower index
  CHECK(knn_predict(std::vector<double>{0, 2, 1, 1}, labels, 1) == "a");
  CHECK(knn_predict(std::vector<double>{0, 2, 1, 1}, labels, 3) == "a");  // a, c, b all once: nearest wins
  CHECK(knn_predict(std::vector<double>{0, 1, 5, 1}, labels, 3) == "b");
  CHECK(code_of([] { knn_predict(std::vector<double>{}, std::vector<std::string>{}, 1); }) == ErrorCode::EmptyTrainSet);

  Rng rng(2);
  const auto q = random_signature(rng, 1);
  std::vector<TopologicalSignature> train{random_signature(rng, 1), q, random_signature(rng, 1)};
  const std::vector<std::string> names{"x", "y", "z"};
  CHECK(knn_predict(q, train, names, 1) == "y");
  CHECK(code_of([&] { knn_predict(q, std::span<const TopologicalSignature>{}, std::span<const std::string>{}, 1); }) ==
        ErrorCode::EmptyTrainSet);
}

TEST_CASE("knn is invariant under increasing transforms") {
  Rng rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.below(12);
    std::vector<double> d(n), squared(n);
    std::vector<std::string> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
      d[i] = static_cast<double>(rng.below(6));
      squared[i] = d[i] * d[i];
      labels[i] = std::string(1, static_cast<char>('a' + rng.below(3)));
    }
    for (int k : {1, 3}) CHECK(knn_predict(d, labels, k) == knn_predict(squared, labels, k));
  }
}

TEST_CASE("evaluate on forced fixtures") {
  // two tight clusters far apart
  const std::vector<std::string> labels{"p", "p", "p", "q", "q", "q", "q"};
  const std::size_t n = labels.size();
  std::vector<double> d(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) d[i * n + j] = labels[i] == labels[j] ? 0.0 : 100.0;
  }
  const EvalReport r = evaluate_distances(d, labels, 1, {25, 2, 5, 2}, "fp");
  CHECK(r.mean_accuracy == 1.0);
  CHECK(r.std_accuracy == 0.0);
  CHECK(r.classes == std::vector<std::string>{"p", "q"});
  CHECK(r.confusion == std::vector<std::vector<double>>{{1, 0}, {0, 1}});

  // every point is nearest to the other class
  const std::vector<std::string> crossed{"p", "p", "q", "q"};
  std::vector<double> far(16, 1.0);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) far[i * 4 + j] = crossed[i] == crossed[j] ? 9.0 : 1.0;
  }
  const EvalReport wrong = evaluate_distances(far, crossed, 1, {1, 1, 0, 1}, "fp");
  CHECK(wrong.split_accuracy == std::vector<double>{0.0});
  CHECK(wrong.mean_accuracy == 0.0);
  CHECK(wrong.std_accuracy == 0.0);
  CHECK(wrong.confusion == std::vector<std::vector<double>>{{0, 1}, {1, 0}});

  CHECK_THROWS_AS(evaluate_distances(d, labels, 1, {10, 0, 5, 1}, "fp"), Error);
  CHECK(code_of([&] { evaluate_distances(d, labels, 1, {10, 3, 5, 1}, "fp"); }) == ErrorCode::ClassTooSmall);
}

TEST_CASE("evaluate statistics and determinism") {
  Rng rng(21);
  std::vector<std::string> labels;
  for (int i = 0; i < 24; ++i) labels.push_back(std::string(1, static_cast<char>('a' + i % 4)));
  const std::size_t n = labels.size();
  std::vector<double> d(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      d[i * n + j] = d[j * n + i] = rng.uniform(0, 1) + (labels[i] == labels[j] ? 0.0 : 0.3);
    }
  }
  const EvalReport r = evaluate_distances(d, labels, 1, {40, 2, 9, 1}, "fp");
  const EvalReport threaded = evaluate_distances(d, labels, 1, {40, 2, 9, 4}, "fp");
  CHECK(r.format() == threaded.format());

  const double mean = std::accumulate(r.split_accuracy.begin(), r.split_accuracy.end(), 0.0) / 40.0;
  CHECK(r.mean_accuracy == doctest::Approx(mean).epsilon(1e-15));
  double var = 0.0;
  for (double a : r.split_accuracy) var += (a - mean) * (a - mean);
  CHECK(r.std_accuracy == doctest::Approx(std::sqrt(var / 40.0)));

  // balanced test sets: accuracy is the mean of the confusion diagonal
  double trace = 0.0;
  for (std::size_t t = 0; t < r.confusion.size(); ++t) {
    CHECK(std::accumulate(r.confusion[t].begin(), r.confusion[t].end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    trace += r.confusion[t][t];
  }
  CHECK(trace / static_cast<double>(r.confusion.size()) == doctest::Approx(r.mean_accuracy).epsilon(1e-12));
}

TEST_CASE("evaluate end to end") {
  const auto corpus = make_synthetic_corpus({4, 160, 11});
  PipelineConfig cfg;
  cfg.max_points = 30;
  const EvalProtocol protocol{6, 1, 3, 1};
  const EvalReport r = evaluate(corpus, cfg, protocol);
  CHECK(r.fingerprint == cfg.fingerprint());
  CHECK(r.split_accuracy.size() == 6);
  CHECK(r.classes.size() == 5);

  const auto sigs = signatures(corpus, cfg, 3);
  const auto d = distance_matrix(sigs, 2);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    CHECK(d[i * corpus.size() + i] == 0.0);
    CHECK(sample_distance(sigs[i], signature(corpus[i], cfg)) == 0.0);
  }
  std::vector<std::string> labels;
  for (const auto& s : corpus) labels.push_back(s.label);
  CHECK(evaluate_distances(d, labels, 1, protocol, cfg.fingerprint()).format() == r.format());
  CHECK(evaluate(corpus, cfg, {6, 1, 3, 4}).format() == r.format());
}

TEST_CASE("report text") {
  EvalReport r;
  r.fingerprint = "fp";
  r.seed = 3;
  r.n_splits = 2;
  r.test_per_class = 1;
  r.classes = {"a", "b"};
  r.split_accuracy = {1.0, 0.5};
  r.mean_accuracy = 0.75;
  r.std_accuracy = 0.25;
  r.confusion = {{1.0, 0.0}, {0.5, 0.5}};
  CHECK(r.format() ==
        "# phasetopo evaluation report\nfingerprint fp\nseed 3\nsplits 2\ntest_per_class 1\nk 1\nclasses a b\n"
        "mean_accuracy 0.75\nstd_accuracy 0.25  # population std of the accuracy fraction\n"
        "split_accuracy 0 1\nsplit_accuracy 1 0.5\n"
        "# confusion rows: true class; columns: predicted class in class order\n"
        "confusion a 1 0\nconfusion b 0.5 0.5\n");
}
