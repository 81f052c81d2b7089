#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "linklab/corpus.hpp"
#include "linklab/pseudonym.hpp"

namespace linklab::simtable {

// Weighted edit-operation costs for the asymmetric spelling distance.
// score(left, right) = floor(100 * cost(right -> left) / len(left)), where
// cost is the minimal weighted sequence of substitutions, insertions,
// deletions and adjacent transpositions turning `right` into `left`.
// Operations touching the first character of either string cost
// first_char_multiplier times more. Asymmetry comes from the by-left-length
// normalization and from insert != delete cost.
struct CostModel {
  double substitute = 1.0;
  double insert = 1.0;
  double del = 0.5;
  double transpose = 0.5;
  double first_char_multiplier = 2.0;

  void validate() const;  // throws std::invalid_argument on bad values
};

int score(const std::string& left, const std::string& right, const CostModel& model);

enum class IdKind { plaintext, tagged };

struct SimRecord {
  std::string left;
  std::string right;
  int score = 0;

  bool operator==(const SimRecord&) const = default;
};

// Thresholded directed similarity table. Contains the self-record (x,x,0)
// for every left id plus every (a,b,score(a,b)) with score <= threshold.
// Records are sorted by (left, right) and grouped by left id.
class SimilarityTable {
 public:
  SimilarityTable() = default;
  SimilarityTable(int threshold, IdKind kind, std::vector<SimRecord> records);

  int threshold() const { return threshold_; }
  IdKind id_kind() const { return id_kind_; }
  const std::vector<SimRecord>& records() const { return records_; }

  bool has_row(const std::string& left_id) const;
  // All records for one left id (includes the self-record).
  std::span<const SimRecord> row(const std::string& left_id) const;
  std::vector<std::string> left_ids() const;

 private:
  int threshold_ = 0;
  IdKind id_kind_ = IdKind::plaintext;
  std::vector<SimRecord> records_;
  std::unordered_map<std::string, std::pair<std::size_t, std::size_t>> rows_;
};

// Exact thresholded join over the corpus. Candidate pruning (length window
// plus a bigram count filter) never drops a pair whose true score is within
// the threshold, so the record set equals the naive all-pairs computation.
// When `tagging` is given, ids are replaced by their HMAC tags.
SimilarityTable build_table(const corpus::NameList& names, int threshold,
                            const CostModel& model,
                            const std::optional<pseudonym::MacKey>& tagging = std::nullopt);

// Ids that occur in the right column only. With defender-injected "error"
// names confined to the right column, this set intersection strips them.
std::unordered_set<std::string> right_only_tags(const SimilarityTable& table);

// CSV `left,right,score` plus sidecar metadata JSON at <path>.meta.json.
void save_table(const SimilarityTable& table, const std::filesystem::path& path,
                const CostModel& model, std::size_t corpus_size);
SimilarityTable load_table(const std::filesystem::path& path);

}  // namespace linklab::simtable
