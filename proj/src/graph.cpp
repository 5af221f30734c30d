#include "latnet/graph.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace latnet {

Graph Graph::simple(int n, std::vector<std::pair<int, int>> edges) {
  if (n < 0) throw ShapeMismatch("negative node count");
  for (auto& [i, j] : edges) {
    if (i < 0 || i >= n || j < 0 || j >= n)
      throw ShapeMismatch("edge (" + std::to_string(i) + ", " + std::to_string(j) +
                          ") outside node range");
    if (i == j)
      throw ShapeMismatch("self-loop at node " + std::to_string(i) +
                          " (simple graphs only)");
    if (i > j) std::swap(i, j);
  }
  std::sort(edges.begin(), edges.end());
  for (std::size_t k = 1; k < edges.size(); ++k)
    if (edges[k] == edges[k - 1])
      throw ShapeMismatch("duplicate edge (" + std::to_string(edges[k].first) + ", " +
                          std::to_string(edges[k].second) + ")");
  Graph g;
  g.n = n;
  g.edges = std::move(edges);
  g.nbrs.assign(n, {});
  g.incident.assign(n, {});
  for (int e = 0; e < int(g.edges.size()); ++e) {
    auto [i, j] = g.edges[e];
    g.nbrs[i].push_back(j);
    g.nbrs[j].push_back(i);
    g.incident[i].emplace_back(e, j);
    g.incident[j].emplace_back(e, i);
  }
  for (auto& v : g.nbrs) std::sort(v.begin(), v.end());
  return g;
}

int Graph::edge_between(int i, int j) const {
  if (i > j) std::swap(i, j);
  auto it = std::lower_bound(edges.begin(), edges.end(), std::make_pair(i, j));
  if (it != edges.end() && *it == std::make_pair(i, j)) return int(it - edges.begin());
  return -1;
}

std::vector<int> bfs_distances(const Graph& g, int src) {
  std::vector<int> dist(g.n, -1);
  std::vector<int> queue{src};
  dist[src] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    int v = queue[head];
    for (int w : g.nbrs[v])
      if (dist[w] < 0) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
  }
  return dist;
}

bool is_connected(const Graph& g) {
  if (g.n == 0) return true;
  auto d = bfs_distances(g, 0);
  return std::find(d.begin(), d.end(), -1) == d.end();
}

int diameter(const Graph& g) {
  int best = 0;
  for (int s = 0; s < g.n; ++s) {
    auto d = bfs_distances(g, s);
    for (int v : d) {
      if (v < 0) return -1;
      best = std::max(best, v);
    }
  }
  return best;
}

GeometricGraph random_geometric_graph(int n, double radius, SplitMix64& rng) {
  GeometricGraph out;
  out.points.reserve(n);
  for (int i = 0; i < n; ++i) {
    double x = rng.next_double();
    double y = rng.next_double();
    out.points.emplace_back(x, y);
  }
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double dx = out.points[i].first - out.points[j].first;
      double dy = out.points[i].second - out.points[j].second;
      if (std::sqrt(dx * dx + dy * dy) <= radius) edges.emplace_back(i, j);
    }
  out.graph = Graph::simple(n, std::move(edges));
  return out;
}

Graph random_connected_graph(int n, double extra_edge_prob, SplitMix64& rng) {
  std::vector<std::pair<int, int>> edges;
  for (int v = 1; v < n; ++v) edges.emplace_back(rng.below_int(v), v);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (rng.coin(extra_edge_prob)) edges.emplace_back(i, j);
    }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return Graph::simple(n, std::move(edges));
}

}  // namespace latnet
