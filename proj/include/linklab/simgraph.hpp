#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "linklab/simtable.hpp"

namespace linklab::simgraph {

// Directed weighted graph view of a similarity table. Nodes hold every id
// seen in either column; one edge per non-self record. The zero-weight
// self-loop every node carries is tracked as a flag, never as an edge, so
// degree and signature computations exclude it by construction.
struct Edge {
  int node = 0;  // target for out-edges, source for in-edges
  int weight = 0;
};

class SimGraph {
 public:
  int threshold = 0;
  std::vector<std::string> ids;  // sorted; node index = position
  std::unordered_map<std::string, int> index;
  std::vector<std::vector<Edge>> out;  // non-self edges, sorted by (node)
  std::vector<std::vector<Edge>> in;
  std::vector<bool> has_self_loop;

  std::size_t node_count() const { return ids.size(); }
  int node_of(const std::string& id) const;  // throws on unknown id
};

SimGraph build_graph(const simtable::SimilarityTable& table);

// Node set = keep; edges survive iff both endpoints are kept. Every kept
// node retains its self-loop flag. Throws if keep contains an unknown id.
SimGraph induce_subgraph(const SimGraph& graph, const std::unordered_set<std::string>& keep);

struct ComponentStats {
  std::size_t n_nodes = 0;
  std::size_t num_singletons = 0;
  std::vector<std::size_t> component_sizes;  // sizes >= 2, descending
  double singleton_fraction = 0.0;
  double giant_fraction = 0.0;

  std::string to_json() const;
};

// Weakly connected components over non-self edges, via iterative
// union-find. Singletons (no non-self edges at all) are counted apart.
ComponentStats components(const SimGraph& graph);

}  // namespace linklab::simgraph
