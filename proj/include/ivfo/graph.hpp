#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ivfo/errors.hpp"

namespace ivfo {

// Simple undirected graph over string ids. Vertex order is insertion order;
// adjacency lists are kept sorted.
class Graph {
 public:
  using Vertex = std::uint32_t;

  Graph() = default;
  explicit Graph(std::vector<std::string> ids) {
    for (auto& id : ids) add_vertex(std::move(id));
  }

  Vertex add_vertex(std::string id) {
    if (index_.count(id)) throw ValidationError("duplicate vertex id '" + id + "'");
    Vertex v = static_cast<Vertex>(ids_.size());
    index_.emplace(id, v);
    ids_.push_back(std::move(id));
    adj_.emplace_back();
    return v;
  }

  void add_edge(Vertex a, Vertex b) {
    if (a == b) throw ValidationError("loop at vertex '" + ids_[a] + "'");
    insert_sorted(adj_[a], b);
    insert_sorted(adj_[b], a);
  }
  void add_edge(const std::string& a, const std::string& b) { add_edge(at(a), at(b)); }

  std::size_t size() const { return ids_.size(); }
  const std::string& id(Vertex v) const { return ids_[v]; }
  const std::vector<std::string>& ids() const { return ids_; }
  const std::vector<Vertex>& neighbors(Vertex v) const { return adj_[v]; }
  std::size_t degree(Vertex v) const { return adj_[v].size(); }

  bool contains(const std::string& id) const { return index_.count(id) != 0; }
  Vertex at(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw ValidationError("unknown vertex '" + id + "'");
    return it->second;
  }

  bool has_edge(Vertex a, Vertex b) const { return std::binary_search(adj_[a].begin(), adj_[a].end(), b); }

  std::size_t edge_count() const {
    std::size_t m = 0;
    for (const auto& a : adj_) m += a.size();
    return m / 2;
  }

  std::size_t max_degree() const {
    std::size_t d = 0;
    for (const auto& a : adj_) d = std::max(d, a.size());
    return d;
  }

  // Edges as ordered id pairs (smaller id first).
  std::set<std::pair<std::string, std::string>> edge_set() const {
    std::set<std::pair<std::string, std::string>> out;
    for (Vertex v = 0; v < adj_.size(); ++v)
      for (Vertex w : adj_[v])
        if (v < w) out.insert(std::minmax(ids_[v], ids_[w]));
    return out;
  }

  Graph induced(const std::vector<Vertex>& keep) const {
    Graph g;
    std::vector<std::int64_t> map(size(), -1);
    for (Vertex v : keep) map[v] = g.add_vertex(ids_[v]);
    for (Vertex v : keep)
      for (Vertex w : adj_[v])
        if (map[w] >= 0 && v < w) g.add_edge(static_cast<Vertex>(map[v]), static_cast<Vertex>(map[w]));
    return g;
  }

  Graph without(Vertex removed) const {
    std::vector<Vertex> keep;
    for (Vertex v = 0; v < size(); ++v)
      if (v != removed) keep.push_back(v);
    return induced(keep);
  }

  // Same vertex ids (as sets) and the same edges by id.
  friend bool same_graph(const Graph& a, const Graph& b) {
    if (a.size() != b.size()) return false;
    for (const auto& id : a.ids_)
      if (!b.contains(id)) return false;
    return a.edge_set() == b.edge_set();
  }

  // Unweighted BFS distances from v; -1 for unreachable.
  std::vector<int> distances_from(Vertex v) const {
    std::vector<int> dist(size(), -1);
    std::vector<Vertex> queue{v};
    dist[v] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      Vertex u = queue[head];
      for (Vertex w : adj_[u])
        if (dist[w] < 0) {
          dist[w] = dist[u] + 1;
          queue.push_back(w);
        }
    }
    return dist;
  }

 private:
  static void insert_sorted(std::vector<Vertex>& list, Vertex x) {
    auto it = std::lower_bound(list.begin(), list.end(), x);
    if (it == list.end() || *it != x) list.insert(it, x);
  }

  std::vector<std::string> ids_;
  std::unordered_map<std::string, Vertex> index_;
  std::vector<std::vector<Vertex>> adj_;
};

namespace graphs {

inline Graph complete(int n, const std::string& prefix = "v") {
  Graph g;
  for (int i = 0; i < n; ++i) g.add_vertex(prefix + std::to_string(i + 1));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) g.add_edge(static_cast<Graph::Vertex>(i), static_cast<Graph::Vertex>(j));
  return g;
}

inline Graph path(int n, const std::string& prefix = "v") {
  Graph g;
  for (int i = 0; i < n; ++i) g.add_vertex(prefix + std::to_string(i + 1));
  for (int i = 0; i + 1 < n; ++i) g.add_edge(static_cast<Graph::Vertex>(i), static_cast<Graph::Vertex>(i + 1));
  return g;
}

inline Graph cycle(int n, const std::string& prefix = "v") {
  Graph g = path(n, prefix);
  if (n > 2) g.add_edge(static_cast<Graph::Vertex>(n - 1), 0);
  return g;
}

inline Graph edgeless(int n, const std::string& prefix = "v") {
  Graph g;
  for (int i = 0; i < n; ++i) g.add_vertex(prefix + std::to_string(i + 1));
  return g;
}

// Labeled graph on n vertices whose edges are selected by the bits of mask,
// pairs (i,j), i<j, in lexicographic order.
inline Graph from_mask(int n, std::uint64_t mask, const std::string& prefix = "v") {
  Graph g = edgeless(n, prefix);
  int bit = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j, ++bit)
      if (mask >> bit & 1U) g.add_edge(static_cast<Graph::Vertex>(i), static_cast<Graph::Vertex>(j));
  return g;
}

}  // namespace graphs

}  // namespace ivfo
