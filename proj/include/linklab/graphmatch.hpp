#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "linklab/simgraph.hpp"
#include "linklab/simtable.hpp"

namespace linklab::graphmatch {

// Inbound plus outbound edge-weight multisets of a node, self-loop
// excluded. Equality and containment are pairwise multiset relations.
struct NodeSignature {
  std::vector<int> out_weights;  // ascending
  std::vector<int> in_weights;   // ascending

  bool operator==(const NodeSignature&) const = default;
  bool empty() const { return out_weights.empty() && in_weights.empty(); }
};

// True when every weight of `sub` occurs in `full` with at least the same
// multiplicity, on both sides.
bool signature_contained(const NodeSignature& sub, const NodeSignature& full);

NodeSignature node_signature(const simgraph::SimGraph& graph, const std::string& id);

// How a subgraph node's signature is matched against full-graph nodes.
// The true counterpart always satisfies containment when the subgraph is
// induced, which is what makes containment matches provably correct;
// equality mirrors the uniqueness check as literally described.
enum class Strategy { equality, containment };

struct MatchState {
  // sub node index -> full node index; -1 = unassigned. reverse is the
  // inverse. Injectivity in both directions is maintained throughout.
  std::vector<int> assignment;
  std::vector<int> reverse;
  std::vector<int> frontier;  // newly labelled sub nodes awaiting a pass
  int iterations = 0;
  std::size_t unique_in_subgraph = 0;
  std::size_t unique_in_simgraph = 0;  // sub-unique nodes that seeded a match

  std::size_t n_assigned = 0;
};

// Seeds the match: every sub node with a signature unique inside the
// subgraph is searched for in the full graph; the scan for compatible full
// nodes stops early at the second hit. Exactly-one-candidate nodes are
// assigned. Thresholds must agree.
MatchState seed_matches(const simgraph::SimGraph& sub, const simgraph::SimGraph& full,
                        Strategy strategy);

// Label propagation: drains the frontier, matching each labelled node's
// out-edges to unlabelled targets by weight uniqueness, falling back to
// signature comparison when several edges share a weight. Whole passes
// repeat until one adds nothing. Contradictions abort.
void propagate(const simgraph::SimGraph& sub, const simgraph::SimGraph& full,
               MatchState& state, Strategy strategy);

struct EvalReport {
  double sample_fraction = 0.0;
  std::size_t subgraph_nodes = 0;
  std::size_t unique_in_subgraph = 0;
  std::size_t unique_in_simgraph = 0;
  std::size_t matches = 0;
  std::size_t true_positives = 0;
  std::size_t false_positives = 0;
  double pct_recovered = 0.0;

  static std::string csv_header();
  std::string csv_row() const;
};

// Scores an assignment against ground truth (id -> underlying name). Ground
// truth is consulted here and nowhere else in the attack.
EvalReport evaluate(const simgraph::SimGraph& sub, const simgraph::SimGraph& full,
                    const MatchState& state,
                    const std::unordered_map<std::string, std::string>& truth_sub,
                    const std::unordered_map<std::string, std::string>& truth_full);

// Full pipeline per fraction: sample names from the plaintext table's left
// ids, induce the plaintext subgraph, tag the full graph with a key derived
// from `seed`, seed + propagate, evaluate. Samples for one seed are nested
// across fractions.
std::vector<EvalReport> run_experiment(const simtable::SimilarityTable& table,
                                       const std::vector<double>& fractions,
                                       std::uint64_t seed, Strategy strategy);

}  // namespace linklab::graphmatch
