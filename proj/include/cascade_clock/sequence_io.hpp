#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cascade_clock/graph.hpp"

namespace cascade_clock {

// Sequences of vertex sets are stored as a JSON array of arrays, e.g.
// [[2,8,10],[1,3,4,7,9],[6]]. Sets are written in ascending order; on read
// each set is sorted and repeats inside a set are rejected.

std::string sequence_to_json(std::span<const VertexSet> steps);
std::vector<VertexSet> sequence_from_json(std::string_view text);

void write_sequence_file(const std::filesystem::path& path,
                         std::span<const VertexSet> steps);
std::vector<VertexSet> read_sequence_file(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace cascade_clock
