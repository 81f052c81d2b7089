#include "linklab/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <random>
#include <stdexcept>

#include "linklab/io.hpp"

namespace linklab::corpus {

std::string normalize(const std::string& raw) {
  std::string out;
  out.reserve(raw.size());
  bool pending_space = false;
  for (unsigned char c : raw) {
    if (std::isspace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(static_cast<char>(std::toupper(c)));
  }
  return out;
}

NameList::NameList(std::vector<std::string> raw) {
  names_.reserve(raw.size());
  for (auto& r : raw) {
    std::string n = normalize(r);
    if (!n.empty()) names_.push_back(std::move(n));
  }
  std::sort(names_.begin(), names_.end());
  names_.erase(std::unique(names_.begin(), names_.end()), names_.end());
}

bool NameList::contains(const std::string& name) const {
  return std::binary_search(names_.begin(), names_.end(), name);
}

LoadReport load_names(const std::filesystem::path& path) {
  auto lines = io::read_lines(path);
  std::vector<std::string> normalized;
  normalized.reserve(lines.size());
  std::size_t non_empty = 0;
  for (const auto& line : lines) {
    std::string n = normalize(line);
    if (n.empty()) continue;
    ++non_empty;
    normalized.push_back(std::move(n));
  }
  std::size_t blank = lines.size() - non_empty;
  NameList list(std::move(normalized));
  if (list.empty()) {
    throw std::runtime_error("zero valid names in " + path.string());
  }
  LoadReport report;
  report.dropped = blank + (non_empty - list.size());
  report.list = std::move(list);
  return report;
}

FrequencyTable load_frequencies(const std::filesystem::path& path) {
  auto lines = io::read_lines(path);
  FrequencyTable table;
  bool first = true;
  std::size_t lineno = 0;
  for (const auto& line : lines) {
    ++lineno;
    if (line.empty()) continue;
    auto fields = io::split_csv_line(line);
    if (fields.size() != 2) {
      throw std::runtime_error("malformed frequency row at line " + std::to_string(lineno));
    }
    std::string name = normalize(fields[0]);
    const std::string& count_str = fields[1];
    char* end = nullptr;
    long long count = std::strtoll(count_str.c_str(), &end, 10);
    bool numeric = end != count_str.c_str() && *end == '\0' && !count_str.empty();
    if (!numeric) {
      // Header row: only tolerated as the very first line.
      if (first) {
        first = false;
        continue;
      }
      throw std::runtime_error("non-numeric count at line " + std::to_string(lineno));
    }
    first = false;
    if (count < 0) {
      throw std::runtime_error("negative count at line " + std::to_string(lineno));
    }
    if (name.empty()) {
      throw std::runtime_error("empty name at line " + std::to_string(lineno));
    }
    table.entries[name] += static_cast<std::uint64_t>(count);
    table.total += static_cast<std::uint64_t>(count);
  }
  return table;
}

NameList sample_names(const NameList& list, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0) || fraction > 1.0) {
    throw std::invalid_argument("fraction must be in (0, 1]");
  }
  const std::size_t n = list.size();
  auto k = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n) + 0.5));
  if (k > n) k = n;

  // Partial Fisher-Yates; taking the first k of the permutation makes
  // samples nested across fractions for a fixed seed.
  std::vector<std::uint32_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = static_cast<std::uint32_t>(i);
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng() % (n - i));
    std::swap(idx[i], idx[j]);
  }

  std::vector<std::string> picked;
  picked.reserve(k);
  for (std::size_t i = 0; i < k; ++i) picked.push_back(list.names()[idx[i]]);
  return NameList(std::move(picked));
}

}  // namespace linklab::corpus
