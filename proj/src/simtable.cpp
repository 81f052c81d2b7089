#include "linklab/simtable.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "linklab/io.hpp"

namespace linklab::simtable {

void CostModel::validate() const {
  if (substitute < 0 || insert < 0 || del < 0 || transpose < 0) {
    throw std::invalid_argument("edit costs must be non-negative");
  }
  if (first_char_multiplier < 1.0) {
    throw std::invalid_argument("first_char_multiplier must be >= 1");
  }
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEps = 1e-9;

// Minimal weighted cost turning `source` into `target`. Row-wise DP over
// source prefixes; transpositions need the i-2 row. Abandons once two
// consecutive row minima exceed `budget` (a transposition can skip a single
// row, never two).
double edit_cost(const std::string& target, const std::string& source, const CostModel& m,
                 double budget = kInf) {
  const std::size_t lt = target.size();
  const std::size_t ls = source.size();
  auto first_mult = [&](std::size_t i, std::size_t j) {
    return (i == 1 || j == 1) ? m.first_char_multiplier : 1.0;
  };

  std::vector<double> prev2(lt + 1), prev(lt + 1), cur(lt + 1);
  prev[0] = 0.0;
  for (std::size_t j = 1; j <= lt; ++j) {
    prev[j] = prev[j - 1] + m.insert * first_mult(0, j);
  }
  double prev_min = *std::min_element(prev.begin(), prev.end());

  for (std::size_t i = 1; i <= ls; ++i) {
    cur[0] = prev[0] + m.del * first_mult(i, 0);
    double row_min = cur[0];
    for (std::size_t j = 1; j <= lt; ++j) {
      double best = prev[j] + m.del * first_mult(i, 0);
      best = std::min(best, cur[j - 1] + m.insert * first_mult(0, j));
      double sub = (source[i - 1] == target[j - 1])
                       ? 0.0
                       : m.substitute * first_mult(i, j);
      best = std::min(best, prev[j - 1] + sub);
      if (i >= 2 && j >= 2 && source[i - 2] == target[j - 1] && source[i - 1] == target[j - 2]) {
        best = std::min(best, prev2[j - 2] + m.transpose * ((i == 2 || j == 2) ? m.first_char_multiplier : 1.0));
      }
      cur[j] = best;
      row_min = std::min(row_min, best);
    }
    if (row_min > budget && prev_min > budget) return kInf;
    prev_min = row_min;
    std::swap(prev2, prev);
    std::swap(prev, cur);
  }
  return prev[lt];
}

int cost_to_score(double cost, std::size_t left_len) {
  if (cost == kInf) return std::numeric_limits<int>::max();
  return static_cast<int>(std::floor(100.0 * cost / static_cast<double>(left_len) + kEps));
}

}  // namespace

int score(const std::string& left, const std::string& right, const CostModel& model) {
  model.validate();
  if (left.empty() || right.empty()) throw std::invalid_argument("empty name");
  return cost_to_score(edit_cost(left, right, model), left.size());
}

SimilarityTable::SimilarityTable(int threshold, IdKind kind, std::vector<SimRecord> records)
    : threshold_(threshold), id_kind_(kind), records_(std::move(records)) {
  if (threshold < 0) throw std::invalid_argument("threshold must be >= 0");
  std::sort(records_.begin(), records_.end(), [](const SimRecord& a, const SimRecord& b) {
    return std::tie(a.left, a.right) < std::tie(b.left, b.right);
  });
  for (std::size_t i = 0; i < records_.size(); ++i) {
    const auto& r = records_[i];
    if (r.score < 0 || r.score > threshold_) {
      throw std::invalid_argument("record score outside [0, threshold]");
    }
    if (r.left == r.right && r.score != 0) {
      throw std::invalid_argument("self-record must score 0");
    }
    if (i > 0 && records_[i - 1].left == r.left && records_[i - 1].right == r.right) {
      throw std::invalid_argument("duplicate (left, right) pair: " + r.left + "," + r.right);
    }
  }
  // Row ranges, grouped by left id.
  std::size_t start = 0;
  for (std::size_t i = 1; i <= records_.size(); ++i) {
    if (i == records_.size() || records_[i].left != records_[start].left) {
      rows_.emplace(records_[start].left, std::make_pair(start, i));
      start = i;
    }
  }
}

bool SimilarityTable::has_row(const std::string& left_id) const {
  return rows_.count(left_id) > 0;
}

std::span<const SimRecord> SimilarityTable::row(const std::string& left_id) const {
  auto it = rows_.find(left_id);
  if (it == rows_.end()) throw std::out_of_range("unknown left id: " + left_id);
  return {records_.data() + it->second.first, it->second.second - it->second.first};
}

std::vector<std::string> SimilarityTable::left_ids() const {
  std::vector<std::string> ids;
  ids.reserve(rows_.size());
  for (std::size_t i = 0; i < records_.size(); ++i) {
    if (i == 0 || records_[i - 1].left != records_[i].left) ids.push_back(records_[i].left);
  }
  return ids;
}

namespace {

using Gram = std::uint16_t;

std::vector<Gram> bigrams(const std::string& s) {
  if (s.size() < 2) return {};
  std::vector<Gram> grams;
  grams.reserve(s.size() - 1);
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    grams.push_back(static_cast<Gram>((static_cast<unsigned char>(s[i]) << 8) |
                                      static_cast<unsigned char>(s[i + 1])));
  }
  std::sort(grams.begin(), grams.end());
  return grams;
}

std::size_t common_grams(const std::vector<Gram>& a, const std::vector<Gram>& b) {
  std::size_t i = 0, j = 0, common = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) {
      ++common;
      ++i;
      ++j;
    } else if (a[i] < b[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  return common;
}

}  // namespace

SimilarityTable build_table(const corpus::NameList& names, int threshold, const CostModel& model,
                            const std::optional<pseudonym::MacKey>& tagging) {
  model.validate();
  if (names.empty()) throw std::invalid_argument("empty corpus");
  if (threshold < 0) throw std::invalid_argument("threshold must be >= 0");

  const auto& list = names.names();
  const std::size_t n = list.size();
  const double cmin = std::min({model.substitute, model.insert, model.del, model.transpose});

  std::vector<std::vector<Gram>> grams(n);
  for (std::size_t i = 0; i < n; ++i) grams[i] = bigrams(list[i]);

  // Inverted bigram index (distinct grams per name).
  std::unordered_map<Gram, std::vector<std::uint32_t>> index;
  for (std::size_t i = 0; i < n; ++i) {
    Gram last = 0;
    bool first = true;
    for (Gram g : grams[i]) {
      if (first || g != last) index[g].push_back(static_cast<std::uint32_t>(i));
      last = g;
      first = false;
    }
  }

  std::vector<SimRecord> records;
  std::vector<std::uint32_t> stamp(n, 0);
  std::uint32_t round = 0;
  std::vector<std::uint32_t> candidates;

  for (std::size_t a = 0; a < n; ++a) {
    const std::string& left = list[a];
    const std::size_t lt = left.size();
    // score <= threshold  <=>  cost < (threshold + 1) * lt / 100
    const double budget = (threshold + 1) * static_cast<double>(lt) / 100.0;

    records.push_back({left, left, 0});

    // A pair sharing no bigram needs at least |grams(left)| / 3 edits. When
    // even that is affordable the index cannot prune, so fall back to a full
    // scan for this left id (short or cheap-model cases only).
    bool scan_all = grams[a].empty() || (static_cast<double>(grams[a].size()) / 3.0) * cmin < budget;

    candidates.clear();
    if (scan_all) {
      for (std::uint32_t b = 0; b < n; ++b) candidates.push_back(b);
    } else {
      ++round;
      Gram last = 0;
      bool first = true;
      for (Gram g : grams[a]) {
        if (!first && g == last) continue;
        last = g;
        first = false;
        auto it = index.find(g);
        if (it == index.end()) continue;
        for (std::uint32_t b : it->second) {
          if (stamp[b] != round) {
            stamp[b] = round;
            candidates.push_back(b);
          }
        }
      }
    }

    for (std::uint32_t b : candidates) {
      if (b == a) continue;
      const std::string& right = list[b];
      const std::size_t lr = right.size();
      // Length window: surplus source characters must be deleted, missing
      // ones inserted.
      double len_cost = lr > lt ? (lr - lt) * model.del : (lt - lr) * model.insert;
      if (len_cost >= budget - kEps) continue;
      if (!scan_all) {
        std::size_t common = common_grams(grams[a], grams[b]);
        double gram_cost = (static_cast<double>(grams[a].size() - common) / 3.0) * cmin;
        if (gram_cost >= budget - kEps) continue;
      }
      double cost = edit_cost(left, right, model, budget);
      int s = cost_to_score(cost, lt);
      if (s <= threshold) records.push_back({left, right, s});
    }
  }

  if (tagging) {
    auto tagmap = pseudonym::tag_corpus(names, *tagging);
    for (auto& r : records) {
      r.left = tagmap.forward.at(r.left);
      r.right = tagmap.forward.at(r.right);
    }
    return SimilarityTable(threshold, IdKind::tagged, std::move(records));
  }
  return SimilarityTable(threshold, IdKind::plaintext, std::move(records));
}

std::unordered_set<std::string> right_only_tags(const SimilarityTable& table) {
  std::unordered_set<std::string> lefts;
  for (const auto& r : table.records()) lefts.insert(r.left);
  std::unordered_set<std::string> result;
  for (const auto& r : table.records()) {
    if (!lefts.count(r.right)) result.insert(r.right);
  }
  return result;
}

void save_table(const SimilarityTable& table, const std::filesystem::path& path,
                const CostModel& model, std::size_t corpus_size) {
  std::ostringstream out;
  out << "left,right,score\n";
  for (const auto& r : table.records()) {
    out << r.left << ',' << r.right << ',' << r.score << '\n';
  }
  io::write_file(path, out.str());

  nlohmann::json meta{
      {"threshold", table.threshold()},
      {"id_kind", table.id_kind() == IdKind::tagged ? "tagged" : "plaintext"},
      {"corpus_size", corpus_size},
      {"cost_model",
       {{"substitute", model.substitute},
        {"insert", model.insert},
        {"delete", model.del},
        {"transpose", model.transpose},
        {"first_char_multiplier", model.first_char_multiplier}}},
  };
  io::write_file(path.string() + ".meta.json", meta.dump(2) + "\n");
}

SimilarityTable load_table(const std::filesystem::path& path) {
  auto lines = io::read_lines(path);
  std::vector<SimRecord> records;
  int max_score = 0;
  bool first = true;
  std::size_t lineno = 0;
  for (const auto& line : lines) {
    ++lineno;
    if (line.empty()) continue;
    auto fields = io::split_csv_line(line);
    if (first && fields.size() == 3 && fields[2] == "score") {
      first = false;
      continue;
    }
    first = false;
    if (fields.size() != 3) {
      throw std::runtime_error("malformed table row at line " + std::to_string(lineno) + " of " +
                               path.string());
    }
    char* end = nullptr;
    long s = std::strtol(fields[2].c_str(), &end, 10);
    if (end == fields[2].c_str() || *end != '\0') {
      throw std::runtime_error("non-numeric score at line " + std::to_string(lineno) + " of " +
                               path.string());
    }
    records.push_back({fields[0], fields[1], static_cast<int>(s)});
    max_score = std::max(max_score, static_cast<int>(s));
  }

  int threshold = max_score;
  IdKind kind = IdKind::plaintext;
  std::filesystem::path meta_path = path.string() + ".meta.json";
  if (std::filesystem::exists(meta_path)) {
    auto meta = nlohmann::json::parse(io::read_file(meta_path));
    threshold = meta.at("threshold").get<int>();
    kind = meta.at("id_kind").get<std::string>() == "tagged" ? IdKind::tagged : IdKind::plaintext;
  } else if (!records.empty()) {
    // No sidecar: infer the id kind from the shape of the ids.
    const std::string& id = records.front().left;
    bool hexish = id.size() == 64 && id.find_first_not_of("0123456789abcdef") == std::string::npos;
    kind = hexish ? IdKind::tagged : IdKind::plaintext;
  }
  return SimilarityTable(threshold, kind, std::move(records));
}

}  // namespace linklab::simtable
