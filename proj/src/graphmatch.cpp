#include "linklab/graphmatch.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <stdexcept>

#include "linklab/corpus.hpp"
#include "linklab/pseudonym.hpp"

namespace linklab::graphmatch {

namespace {

// Sorted-vector multiset containment.
bool contained(const std::vector<int>& sub, const std::vector<int>& full) {
  std::size_t i = 0, j = 0;
  while (i < sub.size()) {
    if (j == full.size()) return false;
    if (sub[i] == full[j]) {
      ++i;
      ++j;
    } else if (sub[i] > full[j]) {
      ++j;
    } else {
      return false;
    }
  }
  return true;
}

NodeSignature signature_at(const simgraph::SimGraph& g, int node) {
  NodeSignature sig;
  sig.out_weights.reserve(g.out[node].size());
  for (const auto& e : g.out[node]) sig.out_weights.push_back(e.weight);
  sig.in_weights.reserve(g.in[node].size());
  for (const auto& e : g.in[node]) sig.in_weights.push_back(e.weight);
  std::sort(sig.out_weights.begin(), sig.out_weights.end());
  std::sort(sig.in_weights.begin(), sig.in_weights.end());
  return sig;
}

std::vector<NodeSignature> all_signatures(const simgraph::SimGraph& g) {
  std::vector<NodeSignature> sigs(g.node_count());
  for (std::size_t u = 0; u < g.node_count(); ++u) sigs[u] = signature_at(g, static_cast<int>(u));
  return sigs;
}

struct SigHash {
  std::size_t operator()(const NodeSignature& s) const {
    std::size_t h = 0x9e3779b97f4a7c15ull;
    for (int v : s.out_weights) h = h * 1000003u + static_cast<std::size_t>(v) + 1;
    h = h * 1000003u + 0xabcdu;
    for (int v : s.in_weights) h = h * 1000003u + static_cast<std::size_t>(v) + 1;
    return h;
  }
};

bool compatible(const NodeSignature& sub, const NodeSignature& full, Strategy strategy) {
  if (strategy == Strategy::equality) return sub == full;
  return signature_contained(sub, full);
}

// Inverted weight -> node lists over the full graph, used to narrow
// containment candidates to nodes that at least carry one of the sub
// node's weights.
struct WeightIndex {
  std::unordered_map<int, std::vector<int>> out_lists;
  std::unordered_map<int, std::vector<int>> in_lists;

  explicit WeightIndex(const std::vector<NodeSignature>& sigs) {
    for (std::size_t u = 0; u < sigs.size(); ++u) {
      int last = -1;
      for (int w : sigs[u].out_weights) {
        if (w != last) out_lists[w].push_back(static_cast<int>(u));
        last = w;
      }
      last = -1;
      for (int w : sigs[u].in_weights) {
        if (w != last) in_lists[w].push_back(static_cast<int>(u));
        last = w;
      }
    }
  }

  // Shortest candidate list covering the signature, or nullptr when the
  // signature is empty (every node is then a candidate).
  const std::vector<int>* best_list(const NodeSignature& sig) const {
    const std::vector<int>* best = nullptr;
    static const std::vector<int> kEmpty;
    for (int w : sig.out_weights) {
      auto it = out_lists.find(w);
      if (it == out_lists.end()) return &kEmpty;
      if (!best || it->second.size() < best->size()) best = &it->second;
    }
    for (int w : sig.in_weights) {
      auto it = in_lists.find(w);
      if (it == in_lists.end()) return &kEmpty;
      if (!best || it->second.size() < best->size()) best = &it->second;
    }
    return best;
  }
};

}  // namespace

bool signature_contained(const NodeSignature& sub, const NodeSignature& full) {
  return contained(sub.out_weights, full.out_weights) && contained(sub.in_weights, full.in_weights);
}

NodeSignature node_signature(const simgraph::SimGraph& graph, const std::string& id) {
  return signature_at(graph, graph.node_of(id));
}

MatchState seed_matches(const simgraph::SimGraph& sub, const simgraph::SimGraph& full,
                        Strategy strategy) {
  if (sub.threshold != full.threshold) {
    throw std::invalid_argument("threshold mismatch between subgraph and full graph");
  }
  auto sub_sigs = all_signatures(sub);
  auto full_sigs = all_signatures(full);

  MatchState state;
  state.assignment.assign(sub.node_count(), -1);
  state.reverse.assign(full.node_count(), -1);

  // Occurrence counts inside the subgraph; only sub-unique signatures are
  // worth searching for.
  std::unordered_map<NodeSignature, int, SigHash> sub_counts;
  for (const auto& s : sub_sigs) ++sub_counts[s];

  std::unordered_map<NodeSignature, std::vector<int>, SigHash> full_by_sig;
  std::optional<WeightIndex> weight_index;
  if (strategy == Strategy::equality) {
    for (std::size_t u = 0; u < full_sigs.size(); ++u) {
      auto& v = full_by_sig[full_sigs[u]];
      if (v.size() < 2) v.push_back(static_cast<int>(u));  // two is already "duplicate"
    }
  } else {
    weight_index.emplace(full_sigs);
  }

  for (std::size_t u = 0; u < sub_sigs.size(); ++u) {
    if (sub_counts.at(sub_sigs[u]) != 1) continue;
    ++state.unique_in_subgraph;

    int candidate = -1;
    bool duplicate = false;
    if (strategy == Strategy::equality) {
      auto it = full_by_sig.find(sub_sigs[u]);
      if (it == full_by_sig.end()) continue;
      duplicate = it->second.size() > 1;
      candidate = it->second.front();
    } else {
      const std::vector<int>* list = weight_index->best_list(sub_sigs[u]);
      if (list) {
        for (int v : *list) {
          if (!compatible(sub_sigs[u], full_sigs[v], strategy)) continue;
          if (candidate >= 0) {
            duplicate = true;  // stop at the second hit
            break;
          }
          candidate = v;
        }
      } else {
        // Empty signature: every full node qualifies.
        duplicate = full.node_count() > 1;
        candidate = full.node_count() == 1 ? 0 : -1;
      }
    }
    if (duplicate || candidate < 0) continue;
    ++state.unique_in_simgraph;
    if (state.reverse[candidate] != -1) {
      throw std::runtime_error("seeding contradiction: full node '" + full.ids[candidate] +
                               "' matched twice");
    }
    state.assignment[u] = candidate;
    state.reverse[candidate] = static_cast<int>(u);
    state.frontier.push_back(static_cast<int>(u));
    ++state.n_assigned;
  }
  return state;
}

void propagate(const simgraph::SimGraph& sub, const simgraph::SimGraph& full, MatchState& state,
               Strategy strategy) {
  auto sub_sigs = all_signatures(sub);
  auto full_sigs = all_signatures(full);

  auto assign = [&](int t, int target) {
    if (state.assignment[t] != -1 || state.reverse[target] != -1) {
      throw std::runtime_error("propagation contradiction at sub node '" + sub.ids[t] + "'");
    }
    state.assignment[t] = target;
    state.reverse[target] = t;
    ++state.n_assigned;
  };

  std::deque<int> worklist(state.frontier.begin(), state.frontier.end());
  state.frontier.clear();

  // Outer passes repeat until one completes without a new label.
  while (true) {
    ++state.iterations;
    std::size_t assigned_before = state.n_assigned;

    while (!worklist.empty()) {
      int u = worklist.front();
      worklist.pop_front();
      int U = state.assignment[u];

      // Out-edges to currently unlabelled targets, grouped by weight.
      std::unordered_map<int, std::vector<int>> sub_targets, full_targets;
      for (const auto& e : sub.out[u]) {
        if (state.assignment[e.node] == -1) sub_targets[e.weight].push_back(e.node);
      }
      for (const auto& e : full.out[U]) {
        if (state.reverse[e.node] == -1) full_targets[e.weight].push_back(e.node);
      }

      for (auto& [w, subs] : sub_targets) {
        auto fit = full_targets.find(w);
        if (fit == full_targets.end()) continue;
        auto& fulls = fit->second;

        auto alive = [&](int v) { return state.reverse[v] == -1; };
        if (subs.size() == 1 && fulls.size() == 1) {
          if (state.assignment[subs[0]] == -1 && alive(fulls[0])) {
            assign(subs[0], fulls[0]);
            worklist.push_back(subs[0]);
          }
          continue;
        }
        // Several edges share this weight: disambiguate by the target
        // signatures, depth 1 only.
        for (int t : subs) {
          if (state.assignment[t] != -1) continue;
          int candidate = -1;
          bool ambiguous = false;
          for (int T : fulls) {
            if (!alive(T)) continue;
            if (!compatible(sub_sigs[t], full_sigs[T], strategy)) continue;
            if (candidate >= 0) {
              ambiguous = true;
              break;
            }
            candidate = T;
          }
          if (ambiguous || candidate < 0) continue;
          assign(t, candidate);
          worklist.push_back(t);
        }
      }
    }

    if (state.n_assigned == assigned_before) break;
    // Re-examine every labelled node: freshly labelled neighbors change
    // which edges count as leading to unlabelled targets.
    for (std::size_t v = 0; v < sub.node_count(); ++v) {
      if (state.assignment[v] != -1) worklist.push_back(static_cast<int>(v));
    }
  }
}

EvalReport evaluate(const simgraph::SimGraph& sub, const simgraph::SimGraph& full,
                    const MatchState& state,
                    const std::unordered_map<std::string, std::string>& truth_sub,
                    const std::unordered_map<std::string, std::string>& truth_full) {
  EvalReport report;
  report.subgraph_nodes = sub.node_count();
  report.unique_in_subgraph = state.unique_in_subgraph;
  report.unique_in_simgraph = state.unique_in_simgraph;
  for (std::size_t u = 0; u < state.assignment.size(); ++u) {
    int U = state.assignment[u];
    if (U == -1) continue;
    ++report.matches;
    auto su = truth_sub.find(sub.ids[u]);
    auto fu = truth_full.find(full.ids[U]);
    if (su == truth_sub.end() || fu == truth_full.end()) {
      throw std::invalid_argument("ground truth missing for assigned node");
    }
    if (su->second == fu->second) {
      ++report.true_positives;
    } else {
      ++report.false_positives;
    }
  }
  if (report.subgraph_nodes > 0) {
    report.pct_recovered =
        100.0 * static_cast<double>(report.matches) / static_cast<double>(report.subgraph_nodes);
  }
  return report;
}

namespace {

simgraph::SimGraph rename_graph(const simgraph::SimGraph& g,
                                const std::unordered_map<std::string, std::string>& mapping) {
  simgraph::SimGraph out;
  out.threshold = g.threshold;
  out.ids.reserve(g.node_count());
  for (const auto& id : g.ids) out.ids.push_back(mapping.at(id));
  std::vector<int> order(g.node_count());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return out.ids[a] < out.ids[b]; });
  std::vector<std::string> sorted_ids(g.node_count());
  std::vector<int> new_index(g.node_count());
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    sorted_ids[pos] = out.ids[order[pos]];
    new_index[order[pos]] = static_cast<int>(pos);
  }
  out.ids = std::move(sorted_ids);
  for (std::size_t i = 0; i < out.ids.size(); ++i) out.index.emplace(out.ids[i], static_cast<int>(i));
  out.out.resize(g.node_count());
  out.in.resize(g.node_count());
  out.has_self_loop.assign(g.node_count(), false);
  for (std::size_t u = 0; u < g.node_count(); ++u) {
    int nu = new_index[u];
    out.has_self_loop[nu] = g.has_self_loop[u];
    for (const auto& e : g.out[u]) out.out[nu].push_back({new_index[e.node], e.weight});
    for (const auto& e : g.in[u]) out.in[nu].push_back({new_index[e.node], e.weight});
  }
  return out;
}

}  // namespace

std::vector<EvalReport> run_experiment(const simtable::SimilarityTable& table,
                                       const std::vector<double>& fractions, std::uint64_t seed,
                                       Strategy strategy) {
  auto full_plain = simgraph::build_graph(table);
  corpus::NameList names(std::vector<std::string>(full_plain.ids.begin(), full_plain.ids.end()));

  auto key = pseudonym::generate_key(256, seed);
  auto tagmap = pseudonym::tag_corpus(names, key);
  auto full_tagged = rename_graph(full_plain, tagmap.forward);

  std::unordered_map<std::string, std::string> truth_sub;
  for (const auto& id : full_plain.ids) truth_sub.emplace(id, id);
  const auto& truth_full = tagmap.reverse;

  std::vector<EvalReport> reports;
  for (double f : fractions) {
    auto sample = corpus::sample_names(names, f, seed);
    std::unordered_set<std::string> keep(sample.begin(), sample.end());
    auto sub = simgraph::induce_subgraph(full_plain, keep);

    auto state = seed_matches(sub, full_tagged, strategy);
    propagate(sub, full_tagged, state, strategy);
    auto report = evaluate(sub, full_tagged, state, truth_sub, truth_full);
    report.sample_fraction = f;
    reports.push_back(report);
  }
  return reports;
}

std::string EvalReport::csv_header() {
  return "sample_size,subgraph_nodes,unique_in_subgraph,unique_in_similarity_graph,matches,"
         "true_positives,false_positives,pct_recovered";
}

std::string EvalReport::csv_row() const {
  std::ostringstream out;
  out << sample_fraction << ',' << subgraph_nodes << ',' << unique_in_subgraph << ','
      << unique_in_simgraph << ',' << matches << ',' << true_positives << ',' << false_positives
      << ',' << pct_recovered;
  return out.str();
}

}  // namespace linklab::graphmatch
