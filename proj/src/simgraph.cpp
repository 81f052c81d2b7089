#include "linklab/simgraph.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace linklab::simgraph {

int SimGraph::node_of(const std::string& id) const {
  auto it = index.find(id);
  if (it == index.end()) throw std::out_of_range("unknown node: " + id);
  return it->second;
}

SimGraph build_graph(const simtable::SimilarityTable& table) {
  SimGraph g;
  g.threshold = table.threshold();

  for (const auto& r : table.records()) {
    g.ids.push_back(r.left);
    g.ids.push_back(r.right);
  }
  std::sort(g.ids.begin(), g.ids.end());
  g.ids.erase(std::unique(g.ids.begin(), g.ids.end()), g.ids.end());
  g.index.reserve(g.ids.size());
  for (std::size_t i = 0; i < g.ids.size(); ++i) g.index.emplace(g.ids[i], static_cast<int>(i));

  g.out.resize(g.ids.size());
  g.in.resize(g.ids.size());
  g.has_self_loop.assign(g.ids.size(), false);
  for (const auto& r : table.records()) {
    int u = g.index.at(r.left);
    int v = g.index.at(r.right);
    if (u == v) {
      g.has_self_loop[u] = true;
      continue;
    }
    g.out[u].push_back({v, r.score});
    g.in[v].push_back({u, r.score});
  }
  return g;
}

SimGraph induce_subgraph(const SimGraph& graph, const std::unordered_set<std::string>& keep) {
  SimGraph g;
  g.threshold = graph.threshold;
  g.ids.reserve(keep.size());
  for (const auto& id : keep) {
    if (!graph.index.count(id)) throw std::out_of_range("unknown node in keep set: " + id);
    g.ids.push_back(id);
  }
  std::sort(g.ids.begin(), g.ids.end());
  g.index.reserve(g.ids.size());
  for (std::size_t i = 0; i < g.ids.size(); ++i) g.index.emplace(g.ids[i], static_cast<int>(i));

  g.out.resize(g.ids.size());
  g.in.resize(g.ids.size());
  g.has_self_loop.assign(g.ids.size(), false);
  for (std::size_t i = 0; i < g.ids.size(); ++i) {
    int old = graph.index.at(g.ids[i]);
    g.has_self_loop[i] = graph.has_self_loop[old];
    for (const Edge& e : graph.out[old]) {
      auto it = g.index.find(graph.ids[e.node]);
      if (it == g.index.end()) continue;
      g.out[i].push_back({it->second, e.weight});
      g.in[it->second].push_back({static_cast<int>(i), e.weight});
    }
  }
  return g;
}

namespace {

// Iterative union-find with path halving; recursion-free so the giant
// component at full corpus scale cannot blow the stack.
struct UnionFind {
  std::vector<int> parent;
  std::vector<int> size;

  explicit UnionFind(std::size_t n) : parent(n), size(n, 1) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (size[a] < size[b]) std::swap(a, b);
    parent[b] = a;
    size[a] += size[b];
  }
};

}  // namespace

ComponentStats components(const SimGraph& graph) {
  const std::size_t n = graph.node_count();
  UnionFind uf(n);
  for (std::size_t u = 0; u < n; ++u) {
    for (const Edge& e : graph.out[u]) uf.unite(static_cast<int>(u), e.node);
  }

  std::vector<std::size_t> comp_size(n, 0);
  for (std::size_t u = 0; u < n; ++u) comp_size[uf.find(static_cast<int>(u))]++;

  ComponentStats stats;
  stats.n_nodes = n;
  for (std::size_t u = 0; u < n; ++u) {
    if (comp_size[u] == 1) {
      ++stats.num_singletons;
    } else if (comp_size[u] >= 2) {
      stats.component_sizes.push_back(comp_size[u]);
    }
  }
  std::sort(stats.component_sizes.rbegin(), stats.component_sizes.rend());
  if (n > 0) {
    stats.singleton_fraction = static_cast<double>(stats.num_singletons) / static_cast<double>(n);
    if (!stats.component_sizes.empty()) {
      stats.giant_fraction =
          static_cast<double>(stats.component_sizes.front()) / static_cast<double>(n);
    }
  }
  return stats;
}

std::string ComponentStats::to_json() const {
  nlohmann::json sizes = nlohmann::json::array();
  for (std::size_t i = 0; i < component_sizes.size() && i < 10; ++i) sizes.push_back(component_sizes[i]);
  nlohmann::json j{
      {"n_nodes", n_nodes},
      {"n_singletons", num_singletons},
      {"singleton_fraction", singleton_fraction},
      {"component_sizes_top10", sizes},
      {"giant_fraction", giant_fraction},
  };
  return j.dump(2);
}

}  // namespace linklab::simgraph
