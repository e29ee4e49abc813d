#include "phasetopo/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "phasetopo/error.hpp"
#include "phasetopo/parallel.hpp"
#include "phasetopo/random.hpp"
#include "phasetopo/text_io.hpp"

namespace phasetopo {

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::MissingFile, "cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

void DatasetManifest::validate() const {
  const std::set<std::string> known(classes.begin(), classes.end());
  if (known.size() != classes.size()) throw Error(ErrorCode::InvalidArgument, "manifest class list has duplicates");
  std::set<std::string> ids;
  for (const auto& e : entries) {
    if (!known.contains(e.label)) {
      throw Error(ErrorCode::InvalidArgument, "sample '" + e.sample_id + "' has label '" + e.label +
                                                  "' missing from the class list");
    }
    if (!ids.insert(e.sample_id).second) {
      throw Error(ErrorCode::InvalidArgument, "duplicate sample id '" + e.sample_id + "'");
    }
  }
}

std::string DatasetManifest::resolve(const ManifestEntry& entry) const {
  const std::filesystem::path p(entry.path);
  if (p.is_absolute() || base_dir.empty()) return p.string();
  return (std::filesystem::path(base_dir) / p).string();
}

DatasetManifest parse_manifest(const std::string& text, const std::string& base_dir) {
  DatasetManifest manifest;
  manifest.base_dir = base_dir;
  bool have_classes = false;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto fields = split(body, ',');
    if (trim(fields[0]) == "classes") {
      for (std::size_t i = 1; i < fields.size(); ++i) manifest.classes.emplace_back(trim(fields[i]));
      have_classes = true;
      continue;
    }
    if (fields.size() != 4) {
      throw Error(ErrorCode::ParseError,
                  "manifest line " + std::to_string(line_no) + ": expected path,label,sample_id,checksum");
    }
    manifest.entries.push_back({std::string(trim(fields[0])), std::string(trim(fields[1])),
                                std::string(trim(fields[2])), std::string(trim(fields[3]))});
  }
  if (!have_classes) {
    // Without an explicit class list, classes are the labels in first-appearance order.
    for (const auto& e : manifest.entries) {
      if (std::find(manifest.classes.begin(), manifest.classes.end(), e.label) == manifest.classes.end()) {
        manifest.classes.push_back(e.label);
      }
    }
  }
  manifest.validate();
  return manifest;
}

DatasetManifest read_manifest_file(const std::string& path) {
  return parse_manifest(slurp(path), std::filesystem::path(path).parent_path().string());
}

void write_manifest(std::ostream& out, const DatasetManifest& manifest) {
  out << "# phasetopo dataset manifest: path,label,sample_id,checksum\n";
  out << "classes";
  for (const auto& c : manifest.classes) out << ',' << c;
  out << '\n';
  for (const auto& e : manifest.entries) {
    out << e.path << ',' << e.label << ',' << e.sample_id << ',' << e.checksum << '\n';
  }
}

std::vector<TimeSeries> parse_csv(const std::string& text, const std::string& source, bool allow_ragged) {
  std::istringstream in(text);
  std::string line;
  std::size_t row = 0;
  std::vector<TimeSeries> channels;
  std::vector<char> ended;
  const auto fail = [&](std::size_t column, const std::string& what) {
    throw Error(ErrorCode::ParseError,
                source + ": row " + std::to_string(row) + ", column " + std::to_string(column) + ": " + what);
  };

  while (std::getline(in, line)) {
    ++row;
    const std::string_view body = trim(line);
    if (!body.empty() && body.front() == '#') continue;
    if (channels.empty()) {
      if (body.empty()) fail(1, "missing header row");
      for (const auto field : split(body, ',')) {
        const auto id = trim(field);
        if (id.empty()) fail(channels.size() + 1, "empty channel id");
        channels.push_back(TimeSeries{std::string(id), {}});
      }
      ended.assign(channels.size(), 0);
      continue;
    }
    if (body.empty()) continue;
    const auto fields = split(body, ',');
    if (fields.size() != channels.size()) {
      fail(std::min(fields.size(), channels.size()) + 1,
           "expected " + std::to_string(channels.size()) + " values, found " + std::to_string(fields.size()));
    }
    for (std::size_t c = 0; c < fields.size(); ++c) {
      if (allow_ragged && trim(fields[c]).empty()) {
        ended[c] = 1;
        continue;
      }
      if (ended[c]) fail(c + 1, "value after the channel ended");
      const auto value = parse_double(fields[c]);
      if (!value) fail(c + 1, "not a number: '" + std::string(trim(fields[c])) + "'");
      if (!std::isfinite(*value)) fail(c + 1, "non-finite value");
      channels[c].samples.push_back(*value);
    }
  }
  if (channels.empty()) {
    row = 1;
    fail(1, "missing header row");
  }
  return channels;
}

std::vector<TimeSeries> read_csv_file(const std::string& path, bool allow_ragged) {
  return parse_csv(slurp(path), path, allow_ragged);
}

void write_csv(std::ostream& out, std::span<const TimeSeries> channels) {
  if (channels.empty()) throw Error(ErrorCode::InvalidArgument, "no channels to write");
  const std::size_t length = channels.front().size();
  for (const auto& c : channels) {
    if (c.size() != length) throw Error(ErrorCode::InvalidArgument, "channels differ in length");
  }
  for (std::size_t c = 0; c < channels.size(); ++c) out << (c ? "," : "") << channels[c].id;
  out << '\n';
  for (std::size_t i = 0; i < length; ++i) {
    for (std::size_t c = 0; c < channels.size(); ++c) out << (c ? "," : "") << format_double(channels[c].samples[i]);
    out << '\n';
  }
}

void write_csv_file(const std::string& path, std::span<const TimeSeries> channels) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  write_csv(out, channels);
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

void zscore(TimeSeries& series) {
  if (series.samples.empty()) return;
  const double n = static_cast<double>(series.size());
  double mean = 0.0;
  for (double x : series.samples) mean += x;
  mean /= n;
  double var = 0.0;
  for (double x : series.samples) var += (x - mean) * (x - mean);
  const double sd = std::sqrt(var / n);
  for (double& x : series.samples) {
    x -= mean;
    if (sd > 0.0) x /= sd;
  }
}

std::vector<ActionSample> load_dataset(const DatasetManifest& manifest, const LoadOptions& options) {
  manifest.validate();
  std::vector<ActionSample> samples(manifest.entries.size());
  parallel_for(samples.size(), options.threads, [&](std::size_t i) {
    const auto& entry = manifest.entries[i];
    const std::string path = manifest.resolve(entry);
    if (!std::filesystem::exists(path)) throw Error(ErrorCode::MissingFile, "missing data file " + path);
    const std::string bytes = slurp(path);
    if (entry.checksum != "-" && fnv1a_hex(bytes) != entry.checksum) {
      throw Error(ErrorCode::ChecksumMismatch, path + ": expected " + entry.checksum + ", got " + fnv1a_hex(bytes));
    }
    ActionSample& s = samples[i];
    s.sample_id = entry.sample_id;
    s.label = entry.label;
    s.channels = parse_csv(bytes, path, options.allow_ragged);
    for (const auto& c : s.channels) {
      if (c.samples.empty()) throw Error(ErrorCode::ParseError, path + ": channel '" + c.id + "' has no samples");
      if (!options.allow_ragged && c.size() != s.channels.front().size()) {
        throw Error(ErrorCode::ParseError, path + ": channel '" + c.id + "' differs in length");
      }
    }
    if (options.zscore) {
      for (auto& c : s.channels) zscore(c);
    }
  });

  for (const auto& s : samples) {
    if (s.channels.size() != samples.front().channels.size()) {
      throw Error(ErrorCode::ChannelCountMismatch, "sample '" + s.sample_id + "' has " +
                                                       std::to_string(s.channels.size()) + " channels, expected " +
                                                       std::to_string(samples.front().channels.size()));
    }
  }
  return samples;
}

std::vector<Split> make_splits(std::span<const std::string> labels, std::size_t n_splits, std::size_t test_per_class,
                               std::uint64_t seed) {
  std::map<std::string, std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < labels.size(); ++i) members[labels[i]].push_back(i);
  for (const auto& [label, idx] : members) {
    if (idx.size() <= test_per_class) {
      throw Error(ErrorCode::ClassTooSmall, "class '" + label + "' has " + std::to_string(idx.size()) +
                                                " samples, needs more than " + std::to_string(test_per_class));
    }
  }

  Rng rng(seed);
  std::vector<Split> splits(n_splits);
  for (auto& split : splits) {
    std::vector<char> is_test(labels.size(), 0);
    for (const auto& [label, idx] : members) {
      // Partial Fisher-Yates: the first test_per_class slots become the test draw.
      std::vector<std::size_t> pool = idx;
      for (std::size_t k = 0; k < test_per_class; ++k) {
        const std::size_t j = k + static_cast<std::size_t>(rng.below(pool.size() - k));
        std::swap(pool[k], pool[j]);
        is_test[pool[k]] = 1;
      }
    }
    for (std::size_t i = 0; i < labels.size(); ++i) (is_test[i] ? split.test : split.train).push_back(i);
  }
  return splits;
}

std::vector<Split> make_splits(std::span<const ActionSample> samples, std::size_t n_splits,
                               std::size_t test_per_class, std::uint64_t seed) {
  std::vector<std::string> labels;
  labels.reserve(samples.size());
  for (const auto& s : samples) labels.push_back(s.label);
  return make_splits(labels, n_splits, test_per_class, seed);
}

}  // namespace phasetopo
