#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "phasetopo/embedding.hpp"

namespace phasetopo {

/// D parallel scalar channels recorded for one action instance.
struct ActionSample {
  std::string sample_id;
  std::string label;
  std::vector<TimeSeries> channels;
};

struct ManifestEntry {
  std::string path;      ///< resolved against the manifest's base directory when relative
  std::string label;
  std::string sample_id;
  std::string checksum;  ///< fnv1a_hex of the file bytes, or "-" to skip verification
};

/// Text form, comma separated, `#` starts a comment line:
///   classes,<label>,<label>,...
///   <path>,<label>,<sample_id>,<checksum>
struct DatasetManifest {
  std::vector<ManifestEntry> entries;
  std::vector<std::string> classes;
  std::string base_dir;

  /// Labels must come from `classes`, sample ids must be unique.
  void validate() const;
  std::string resolve(const ManifestEntry& entry) const;
};

DatasetManifest parse_manifest(const std::string& text, const std::string& base_dir = "");
DatasetManifest read_manifest_file(const std::string& path);
void write_manifest(std::ostream& out, const DatasetManifest& manifest);

/// CSV with a header row of channel ids and one row per sample tick. Blank lines and
/// `#` comment lines are ignored; every row has one field per channel. With
/// `allow_ragged`, a channel may end early by leaving its remaining cells empty. Throws
/// ParseError naming the 1-based row and column.
std::vector<TimeSeries> parse_csv(const std::string& text, const std::string& source = "csv",
                                  bool allow_ragged = false);
std::vector<TimeSeries> read_csv_file(const std::string& path, bool allow_ragged = false);
/// Channels must share one length.
void write_csv(std::ostream& out, std::span<const TimeSeries> channels);
void write_csv_file(const std::string& path, std::span<const TimeSeries> channels);

struct LoadOptions {
  bool allow_ragged = false;  ///< accept channels of differing lengths
  bool zscore = false;        ///< standardize every channel to zero mean, unit variance
  unsigned threads = 1;
};

/// One ActionSample per manifest entry, in manifest order. Throws MissingFile,
/// ParseError, ChannelCountMismatch or ChecksumMismatch.
std::vector<ActionSample> load_dataset(const DatasetManifest& manifest, const LoadOptions& options = {});

/// Subtracts the mean and divides by the population standard deviation; constant
/// channels are only centered.
void zscore(TimeSeries& series);

struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Each split draws `test_per_class` test items per class without replacement; the
/// rest are training items. Classes are visited in sorted label order and all index
/// lists are ascending. Throws ClassTooSmall unless every class has more than
/// `test_per_class` members.
std::vector<Split> make_splits(std::span<const std::string> labels, std::size_t n_splits,
                               std::size_t test_per_class, std::uint64_t seed);
std::vector<Split> make_splits(std::span<const ActionSample> samples, std::size_t n_splits,
                               std::size_t test_per_class, std::uint64_t seed);

}  // namespace phasetopo
