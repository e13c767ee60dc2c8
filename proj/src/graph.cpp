#include "cascade_clock/graph.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <string>

#include "cascade_clock/errors.hpp"
#include "cascade_clock/random.hpp"

namespace cascade_clock {
namespace {

void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ParameterError(std::string(name) + " must lie in [0, 1], got " +
                         std::to_string(p));
  }
}

void check_vertex(const Graph& g, Vertex v) {
  if (v >= g.num_vertices()) {
    throw ParameterError("vertex " + std::to_string(v) + " out of range for n = " +
                         std::to_string(g.num_vertices()));
  }
}

// Pairs (lo + i, lo + j), i > j, of a block of `size` vertices, visited with
// geometric skipping row by row.
void sample_block(Vertex lo, std::size_t size, double p, Rng& rng,
                  std::vector<Edge>& out) {
  if (size < 2 || p <= 0.0) return;
  const std::uint64_t pairs = static_cast<std::uint64_t>(size) * (size - 1) / 2;
  // Row i holds pairs (i, 0..i-1); row start = i(i-1)/2.
  std::uint64_t row = 1;
  std::uint64_t row_start = 0;
  for_each_success(pairs, p, rng, [&](std::uint64_t k) {
    while (k >= row_start + row) {
      row_start += row;
      ++row;
    }
    const auto col = static_cast<Vertex>(k - row_start);
    out.emplace_back(lo + col, lo + static_cast<Vertex>(row));
  });
}

void sample_bipartite(Vertex lo_a, std::size_t size_a, Vertex lo_b, std::size_t size_b,
                      double p, Rng& rng, std::vector<Edge>& out) {
  const std::uint64_t total = static_cast<std::uint64_t>(size_a) * size_b;
  for_each_success(total, p, rng, [&](std::uint64_t k) {
    out.emplace_back(lo_a + static_cast<Vertex>(k / size_b),
                     lo_b + static_cast<Vertex>(k % size_b));
  });
}

}  // namespace

VertexSet normalized(VertexSet vs) {
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  return vs;
}

Graph Graph::from_edges(std::size_t n, std::span<const Edge> edges) {
  if (n > std::numeric_limits<Vertex>::max()) {
    throw ParameterError("vertex count exceeds 32-bit vertex ids");
  }
  Graph g;
  g.adjacency_.resize(n);
  for (const auto& [u, v] : edges) {
    if (u >= n || v >= n) {
      throw ParameterError("edge (" + std::to_string(u) + ", " + std::to_string(v) +
                           ") out of range for n = " + std::to_string(n));
    }
    if (u == v) throw ParameterError("self-loop at vertex " + std::to_string(u));
    g.adjacency_[u].push_back(v);
    g.adjacency_[v].push_back(u);
  }
  for (Vertex v = 0; v < n; ++v) {
    auto& adj = g.adjacency_[v];
    std::sort(adj.begin(), adj.end());
    if (std::adjacent_find(adj.begin(), adj.end()) != adj.end()) {
      throw ParameterError("duplicate edge at vertex " + std::to_string(v));
    }
  }
  g.num_edges_ = edges.size();
  return g;
}

bool Graph::has_edge(Vertex u, Vertex v) const {
  if (u >= num_vertices() || v >= num_vertices()) return false;
  const auto& adj = adjacency_[u];
  return std::binary_search(adj.begin(), adj.end(), v);
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(num_edges_);
  for (Vertex u = 0; u < num_vertices(); ++u) {
    for (Vertex v : adjacency_[u]) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

Graph generate_er(std::size_t n, double p, std::uint64_t seed) {
  if (n < 1) throw ParameterError("n must be at least 1");
  check_probability(p, "p");
  Rng rng(seed);
  std::vector<Edge> edges;
  sample_block(0, n, p, rng, edges);
  return Graph::from_edges(n, edges);
}

Graph generate_sbm(std::span<const std::size_t> block_sizes, double p_intra,
                   double p_inter, std::uint64_t seed) {
  if (block_sizes.empty()) throw ParameterError("block list is empty");
  check_probability(p_intra, "p_intra");
  check_probability(p_inter, "p_inter");
  std::vector<Vertex> offsets;
  std::size_t n = 0;
  for (std::size_t size : block_sizes) {
    if (size == 0) throw ParameterError("block sizes must be positive");
    offsets.push_back(static_cast<Vertex>(n));
    n += size;
  }
  Rng rng(seed);
  std::vector<Edge> edges;
  for (std::size_t a = 0; a < block_sizes.size(); ++a) {
    sample_block(offsets[a], block_sizes[a], p_intra, rng, edges);
    for (std::size_t b = a + 1; b < block_sizes.size(); ++b) {
      sample_bipartite(offsets[a], block_sizes[a], offsets[b], block_sizes[b], p_inter,
                       rng, edges);
    }
  }
  return Graph::from_edges(n, edges);
}

std::size_t degree_into(const Graph& g, Vertex v, std::span<const Vertex> w) {
  check_vertex(g, v);
  for (Vertex x : w) check_vertex(g, x);
  const VertexSet targets = normalized(VertexSet(w.begin(), w.end()));
  const auto adj = g.neighbors(v);
  std::size_t count = 0;
  auto it = adj.begin();
  for (Vertex x : targets) {
    it = std::lower_bound(it, adj.end(), x);
    if (it == adj.end()) break;
    if (*it == x) ++count;
  }
  return count;
}

VertexSet neighborhood(const Graph& g, std::span<const Vertex> s) {
  VertexSet out;
  for (Vertex v : s) {
    check_vertex(g, v);
    const auto adj = g.neighbors(v);
    out.insert(out.end(), adj.begin(), adj.end());
  }
  return normalized(std::move(out));
}

void save_graph(const Graph& g, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << "n " << g.num_vertices() << '\n';
  for (const auto& [u, v] : g.edges()) out << u << ' ' << v << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

Graph load_graph(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());

  std::string line;
  std::size_t line_no = 0;
  std::size_t n = 0;
  bool have_header = false;
  std::vector<Edge> edges;
  std::set<Edge> seen;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream fields(line);
    if (!have_header) {
      std::string tag;
      long long count = -1;
      if (!(fields >> tag >> count) || tag != "n" || count < 0) {
        throw ParseError("expected header 'n <vertex_count>'", line_no);
      }
      std::string rest;
      if (fields >> rest) throw ParseError("trailing data after header", line_no);
      n = static_cast<std::size_t>(count);
      have_header = true;
      continue;
    }
    long long u = -1;
    long long v = -1;
    std::string rest;
    if (!(fields >> u >> v) || (fields >> rest)) {
      throw ParseError("expected 'u v'", line_no);
    }
    if (u < 0 || v < 0 || static_cast<std::size_t>(u) >= n ||
        static_cast<std::size_t>(v) >= n) {
      throw ParseError("vertex index out of range for n = " + std::to_string(n), line_no);
    }
    if (u >= v) throw ParseError("edge must satisfy u < v", line_no);
    const Edge e{static_cast<Vertex>(u), static_cast<Vertex>(v)};
    if (!seen.insert(e).second) throw ParseError("duplicate edge", line_no);
    edges.push_back(e);
  }
  if (!have_header) throw ParseError("missing header 'n <vertex_count>'", line_no);
  return Graph::from_edges(n, edges);
}

}  // namespace cascade_clock
