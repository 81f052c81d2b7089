#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace linklab::corpus {

// Canonical form of a name: uppercase, trimmed, internal whitespace runs
// collapsed to a single space. Non-letter characters are kept so that
// scanning-error names like "SM8TH" stay representable. Idempotent.
std::string normalize(const std::string& raw);

// Sorted, deduplicated list of normalized names.
class NameList {
 public:
  NameList() = default;
  // Normalizes, drops empties and duplicates, sorts.
  explicit NameList(std::vector<std::string> raw);

  const std::vector<std::string>& names() const { return names_; }
  std::size_t size() const { return names_.size(); }
  bool empty() const { return names_.empty(); }
  bool contains(const std::string& name) const;

  auto begin() const { return names_.begin(); }
  auto end() const { return names_.end(); }

 private:
  std::vector<std::string> names_;  // sorted, unique
};

struct LoadReport {
  NameList list;
  std::size_t dropped = 0;  // duplicates + lines empty after normalization
};

// One name per line, UTF-8. Throws on unreadable file or when no valid
// name survives normalization.
LoadReport load_names(const std::filesystem::path& path);

struct FrequencyTable {
  std::map<std::string, std::uint64_t> entries;  // normalized name -> count
  std::uint64_t total = 0;
};

// CSV `name,count`; a header row is skipped when the second field is not
// numeric. Counts for names that normalize to the same value are summed.
// Throws on malformed rows or negative counts.
FrequencyTable load_frequencies(const std::filesystem::path& path);

// round(fraction * |list|) names, uniform without replacement. Uses a
// partial Fisher-Yates shuffle driven by mt19937_64 with modulo draws, so
// results are identical across platforms, and samples for the same seed
// are nested: sample(f1) is a subset of sample(f2) whenever f1 <= f2.
// Output is sorted. Throws when fraction is outside (0, 1].
NameList sample_names(const NameList& list, double fraction, std::uint64_t seed);

}  // namespace linklab::corpus
