#pragma once

#include <utility>
#include <vector>

#include "latnet/errors.hpp"
#include "latnet/rng.hpp"

namespace latnet {

// Simple undirected graph. Edges are stored with endpoints ordered
// (min, max), sorted lexicographically and deduplicated; an edge's "minus"
// end is its smaller endpoint and its "plus" end the larger, which fixes the
// orientation used by the coboundary maps.
struct Graph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;
  std::vector<std::vector<int>> nbrs;                       // sorted neighbor lists
  std::vector<std::vector<std::pair<int, int>>> incident;   // node -> (edge, other end)

  static Graph simple(int n, std::vector<std::pair<int, int>> edges);

  int minus_end(int e) const { return edges[e].first; }
  int plus_end(int e) const { return edges[e].second; }
  bool adjacent(int i, int j) const { return edge_between(i, j) >= 0; }
  int edge_between(int i, int j) const;  // -1 when not adjacent
  int degree(int i) const { return int(nbrs[i].size()); }
};

// BFS hop distances from src; -1 marks unreachable nodes.
std::vector<int> bfs_distances(const Graph& g, int src);
bool is_connected(const Graph& g);
int diameter(const Graph& g);  // -1 when disconnected

// Geometric random graph: n points uniform in the unit square, an edge
// whenever the Euclidean distance is <= radius. The result may be
// disconnected; no rejection is applied. The rng stream consumes exactly
// 2n doubles (x_0, y_0, x_1, y_1, ...).
struct GeometricGraph {
  Graph graph;
  std::vector<std::pair<double, double>> points;
};
GeometricGraph random_geometric_graph(int n, double radius, SplitMix64& rng);

// Random connected graph: a random attachment tree plus independent extra
// edges with probability extra_edge_prob each.
Graph random_connected_graph(int n, double extra_edge_prob, SplitMix64& rng);

}  // namespace latnet
