#pragma once

#include <unistd.h>

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "cascade_clock/graph.hpp"

namespace fixtures {

using cascade_clock::Edge;
using cascade_clock::Graph;
using cascade_clock::Vertex;

// Center 0, leaves 1..leaves.
inline Graph star(Vertex leaves) {
  std::vector<Edge> edges;
  for (Vertex v = 1; v <= leaves; ++v) edges.emplace_back(0, v);
  return Graph::from_edges(leaves + 1, edges);
}

inline Graph path(Vertex n) {
  std::vector<Edge> edges;
  for (Vertex v = 0; v + 1 < n; ++v) edges.emplace_back(v, v + 1);
  return Graph::from_edges(n, edges);
}

inline Graph triangle() {
  const std::vector<Edge> edges{{0, 1}, {0, 2}, {1, 2}};
  return Graph::from_edges(3, edges);
}

// Complete binary tree with `depth` levels below the root; level sizes 1, 2, 4, ...
inline Graph binary_tree(int depth) {
  const Vertex n = (Vertex{1} << (depth + 1)) - 1;
  std::vector<Edge> edges;
  for (Vertex v = 1; v < n; ++v) edges.emplace_back((v - 1) / 2, v);
  return Graph::from_edges(n, edges);
}

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("cascade_clock_test_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace fixtures
