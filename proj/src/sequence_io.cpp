#include "cascade_clock/sequence_io.hpp"

#include <algorithm>
#include <fstream>
#include <json.hpp>
#include <limits>
#include <sstream>

#include "cascade_clock/errors.hpp"

namespace cascade_clock {

std::string sequence_to_json(std::span<const VertexSet> steps) {
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& s : steps) doc.push_back(s);
  return doc.dump();
}

std::vector<VertexSet> sequence_from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_array()) throw ParseError("sequence must be a JSON array of arrays");
  std::vector<VertexSet> steps;
  for (std::size_t t = 0; t < doc.size(); ++t) {
    const auto& step = doc[t];
    if (!step.is_array()) {
      throw ParseError("step " + std::to_string(t) + " is not an array");
    }
    VertexSet s;
    for (const auto& v : step) {
      if (!v.is_number_unsigned() ||
          v.get<std::uint64_t>() > std::numeric_limits<Vertex>::max()) {
        throw ParseError("step " + std::to_string(t) +
                         " contains a non-vertex value: " + v.dump());
      }
      s.push_back(v.get<Vertex>());
    }
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end()) {
      throw ParseError("step " + std::to_string(t) + " repeats a vertex");
    }
    steps.push_back(std::move(s));
  }
  return steps;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw IoError("write failed: " + path.string());
}

void write_sequence_file(const std::filesystem::path& path,
                         std::span<const VertexSet> steps) {
  write_text_file(path, sequence_to_json(steps) + "\n");
}

std::vector<VertexSet> read_sequence_file(const std::filesystem::path& path) {
  return sequence_from_json(read_text_file(path));
}

}  // namespace cascade_clock
