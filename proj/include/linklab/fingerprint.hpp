#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "linklab/corpus.hpp"
#include "linklab/simtable.hpp"

namespace linklab::fingerprint {

// Ascending multiset of one row's non-self similarity scores. Rows whose
// fingerprint is unique across the table index their id directly.
using Fingerprint = std::vector<int>;

Fingerprint row_fingerprint(const simtable::SimilarityTable& table, const std::string& id);

struct UniquenessReport {
  double fraction = 0.0;                      // unique rows / all rows
  std::unordered_set<std::string> unique_ids; // left ids with a unique fingerprint
  std::size_t n_rows = 0;
};

UniquenessReport uniqueness_rate(const simtable::SimilarityTable& table);

struct RecoveryResult {
  std::unordered_map<std::string, std::string> assignments;  // tag -> name
  std::unordered_map<std::string, int> iteration;            // tag -> round recovered
  std::size_t n_unique = 0;    // unique fingerprints in the tagged table
  std::size_t n_recovered = 0;
  int iterations = 0;

  std::string summary_json(std::size_t n_rows, double uniqueness) const;
};

// Assigns tag -> name whenever both fingerprints are unique within their
// own tables and equal. Requires matching thresholds and a tagged/plaintext
// table pair.
RecoveryResult match_fingerprints(const simtable::SimilarityTable& tagged,
                                  const simtable::SimilarityTable& rebuilt);

// Breadth-first expansion from seed assignments: each recovered node's
// unrecovered neighbors are matched by fingerprint against the paired
// plaintext node's neighbors; a neighbor with exactly one candidate in that
// neighborhood is assigned, with a fall-back to global fingerprint
// uniqueness. Runs to fixpoint. A contradiction aborts.
RecoveryResult chain_recovery(const simtable::SimilarityTable& tagged,
                              const simtable::SimilarityTable& rebuilt,
                              const std::unordered_map<std::string, std::string>& seeds);

struct RankedCandidate {
  std::string tag;
  std::string name;
  int rank = 0;  // 1-based
};

// Aligns the k most frequent tags with the k most frequent names by rank.
// Ties broken by lexicographic order of tag / name so output is stable.
std::vector<RankedCandidate> frequency_attack(
    const std::map<std::string, std::uint64_t>& tag_counts,
    const corpus::FrequencyTable& freq, std::size_t top_k);

}  // namespace linklab::fingerprint
