#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <utility>
#include <vector>

namespace cascade_clock {

using Vertex = std::uint32_t;

/// Sorted, duplicate-free list of vertices.
using VertexSet = std::vector<Vertex>;

using Edge = std::pair<Vertex, Vertex>;

/// Sorts and deduplicates `vs` in place and returns it.
VertexSet normalized(VertexSet vs);

/// Undirected simple graph on vertices 0..n-1. Immutable once built, so a
/// single instance can be shared by concurrent trials.
class Graph {
 public:
  Graph() = default;

  /// Builds a graph from an edge list. Throws ParameterError on self-loops,
  /// duplicate edges (in either orientation) or out-of-range endpoints.
  static Graph from_edges(std::size_t n, std::span<const Edge> edges);

  std::size_t num_vertices() const { return adjacency_.size(); }
  std::size_t num_edges() const { return num_edges_; }

  /// Neighbors of `v` in ascending order.
  std::span<const Vertex> neighbors(Vertex v) const { return adjacency_[v]; }
  std::size_t degree(Vertex v) const { return adjacency_[v].size(); }

  bool has_edge(Vertex u, Vertex v) const;

  /// All edges as (u, v) with u < v, lexicographically sorted.
  std::vector<Edge> edges() const;

  bool operator==(const Graph&) const = default;

 private:
  std::vector<std::vector<Vertex>> adjacency_;
  std::size_t num_edges_ = 0;
};

/// G(n, p): every unordered pair independently with probability p.
Graph generate_er(std::size_t n, double p, std::uint64_t seed);

/// Stochastic block model. Vertices are numbered block by block in the order
/// of `block_sizes`.
Graph generate_sbm(std::span<const std::size_t> block_sizes, double p_intra,
                   double p_inter, std::uint64_t seed);

/// |adj(v) ∩ w|.
std::size_t degree_into(const Graph& g, Vertex v, std::span<const Vertex> w);

/// Union of adj(v) over v in s. May intersect s.
VertexSet neighborhood(const Graph& g, std::span<const Vertex> s);

// Text format: "n <count>" followed by one "u v" line per edge with u < v.
void save_graph(const Graph& g, const std::filesystem::path& path);
Graph load_graph(const std::filesystem::path& path);

}  // namespace cascade_clock
