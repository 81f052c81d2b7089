#include "linklab/fingerprint.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace linklab::fingerprint {

namespace {

Fingerprint row_fp(std::span<const simtable::SimRecord> row, const std::string& id) {
  Fingerprint fp;
  fp.reserve(row.size());
  for (const auto& r : row) {
    if (r.right == id) continue;  // self-record
    fp.push_back(r.score);
  }
  std::sort(fp.begin(), fp.end());
  return fp;
}

struct FpHash {
  std::size_t operator()(const Fingerprint& fp) const {
    std::size_t h = fp.size();
    for (int v : fp) h = h * 1000003u + static_cast<std::size_t>(v) + 0x9e3779b9u;
    return h;
  }
};

// id -> fingerprint for every left row, plus occurrence counts.
struct FingerprintIndex {
  std::unordered_map<std::string, Fingerprint> by_id;
  std::unordered_map<Fingerprint, std::vector<const std::string*>, FpHash> owners;

  explicit FingerprintIndex(const simtable::SimilarityTable& table) {
    for (const auto& id : table.left_ids()) {
      by_id.emplace(id, row_fp(table.row(id), id));
    }
    for (const auto& [id, fp] : by_id) owners[fp].push_back(&id);
  }

  bool is_unique(const Fingerprint& fp) const {
    auto it = owners.find(fp);
    return it != owners.end() && it->second.size() == 1;
  }
};

}  // namespace

Fingerprint row_fingerprint(const simtable::SimilarityTable& table, const std::string& id) {
  return row_fp(table.row(id), id);
}

UniquenessReport uniqueness_rate(const simtable::SimilarityTable& table) {
  if (table.records().empty()) throw std::invalid_argument("empty table");
  FingerprintIndex index(table);
  UniquenessReport report;
  report.n_rows = index.by_id.size();
  for (const auto& [id, fp] : index.by_id) {
    if (index.owners.at(fp).size() == 1) report.unique_ids.insert(id);
  }
  report.fraction = report.n_rows == 0
                        ? 0.0
                        : static_cast<double>(report.unique_ids.size()) /
                              static_cast<double>(report.n_rows);
  return report;
}

RecoveryResult match_fingerprints(const simtable::SimilarityTable& tagged,
                                  const simtable::SimilarityTable& rebuilt) {
  if (tagged.threshold() != rebuilt.threshold()) {
    throw std::invalid_argument("threshold mismatch between tagged and rebuilt tables");
  }
  RecoveryResult result;
  result.iterations = 1;
  FingerprintIndex tagged_index(tagged);
  for (const auto& [fp, ids] : tagged_index.owners) {
    if (ids.size() == 1) ++result.n_unique;
  }
  if (rebuilt.records().empty()) return result;
  FingerprintIndex rebuilt_index(rebuilt);

  for (const auto& [fp, tag_ids] : tagged_index.owners) {
    if (tag_ids.size() != 1) continue;
    auto it = rebuilt_index.owners.find(fp);
    if (it == rebuilt_index.owners.end() || it->second.size() != 1) continue;
    result.assignments.emplace(*tag_ids.front(), *it->second.front());
    result.iteration.emplace(*tag_ids.front(), 1);
  }
  result.n_recovered = result.assignments.size();
  return result;
}

RecoveryResult chain_recovery(const simtable::SimilarityTable& tagged,
                              const simtable::SimilarityTable& rebuilt,
                              const std::unordered_map<std::string, std::string>& seeds) {
  if (seeds.empty()) throw std::invalid_argument("no seeds");
  if (tagged.threshold() != rebuilt.threshold()) {
    throw std::invalid_argument("threshold mismatch between tagged and rebuilt tables");
  }
  FingerprintIndex tagged_index(tagged);
  FingerprintIndex rebuilt_index(rebuilt);

  RecoveryResult result;
  for (const auto& [fp, ids] : tagged_index.owners) {
    if (ids.size() == 1) ++result.n_unique;
  }

  std::unordered_set<std::string> used_names;
  auto assign = [&](const std::string& t, const std::string& name, int iter) {
    auto it = result.assignments.find(t);
    if (it != result.assignments.end()) {
      if (it->second != name) {
        throw std::runtime_error("contradiction: tag assigned to both '" + it->second + "' and '" +
                                 name + "'");
      }
      return false;
    }
    if (used_names.count(name)) return false;  // keep the map injective
    result.assignments.emplace(t, name);
    result.iteration.emplace(t, iter);
    used_names.insert(name);
    return true;
  };

  std::deque<std::string> frontier;
  for (const auto& [t, name] : seeds) {
    if (!tagged.has_row(t)) throw std::invalid_argument("seed tag has no row: " + t);
    if (!rebuilt.has_row(name)) throw std::invalid_argument("seed name has no row: " + name);
    if (assign(t, name, 0)) frontier.push_back(t);
  }

  int iter = 0;
  while (!frontier.empty()) {
    ++iter;
    std::deque<std::string> next;
    for (const auto& t : frontier) {
      const std::string& name = result.assignments.at(t);
      // Unassigned plaintext neighborhood of the paired name.
      std::vector<const std::string*> plain_neighbors;
      for (const auto& r : rebuilt.row(name)) {
        if (r.right == name || used_names.count(r.right)) continue;
        if (!rebuilt.has_row(r.right)) continue;
        plain_neighbors.push_back(&r.right);
      }
      for (const auto& r : tagged.row(t)) {
        if (r.right == t || result.assignments.count(r.right)) continue;
        if (!tagged.has_row(r.right)) continue;
        const Fingerprint& fp = tagged_index.by_id.at(r.right);
        // Neighborhood-scoped match first.
        const std::string* candidate = nullptr;
        bool ambiguous = false;
        for (const auto* p : plain_neighbors) {
          if (used_names.count(*p)) continue;
          if (rebuilt_index.by_id.at(*p) != fp) continue;
          if (candidate) {
            ambiguous = true;
            break;
          }
          candidate = p;
        }
        if (!ambiguous && candidate) {
          if (assign(r.right, *candidate, iter)) next.push_back(r.right);
          continue;
        }
        if (ambiguous) continue;
        // Fall back to global uniqueness on both sides.
        if (!tagged_index.is_unique(fp)) continue;
        auto it = rebuilt_index.owners.find(fp);
        if (it == rebuilt_index.owners.end() || it->second.size() != 1) continue;
        const std::string& global_name = *it->second.front();
        if (used_names.count(global_name)) continue;
        if (assign(r.right, global_name, iter)) next.push_back(r.right);
      }
    }
    frontier = std::move(next);
  }
  result.iterations = iter;
  result.n_recovered = result.assignments.size();
  return result;
}

std::vector<RankedCandidate> frequency_attack(
    const std::map<std::string, std::uint64_t>& tag_counts, const corpus::FrequencyTable& freq,
    std::size_t top_k) {
  if (top_k < 1) throw std::invalid_argument("top_k must be >= 1");
  if (tag_counts.empty() || freq.entries.empty()) throw std::invalid_argument("empty inputs");

  auto ranked = [](const auto& counts) {
    std::vector<std::pair<std::string, std::uint64_t>> v(counts.begin(), counts.end());
    // Descending count; lexicographic tie-break keeps output deterministic.
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      return a.first < b.first;
    });
    return v;
  };
  auto tags = ranked(tag_counts);
  auto names = ranked(freq.entries);

  std::size_t k = std::min({top_k, tags.size(), names.size()});
  std::vector<RankedCandidate> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    out.push_back({tags[i].first, names[i].first, static_cast<int>(i + 1)});
  }
  return out;
}

std::string RecoveryResult::summary_json(std::size_t n_rows, double uniqueness) const {
  nlohmann::json j{
      {"n_rows", n_rows},
      {"n_unique", n_unique},
      {"uniqueness_rate", uniqueness},
      {"n_recovered", n_recovered},
      {"iterations", iterations},
  };
  return j.dump(2);
}

}  // namespace linklab::fingerprint
