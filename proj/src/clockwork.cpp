#include "cascade_clock/clockwork.hpp"

#include <algorithm>
#include <json.hpp>

#include "cascade_clock/errors.hpp"
#include "cascade_clock/random.hpp"
#include "cascade_clock/sequence_io.hpp"

namespace cascade_clock {
namespace {

std::uint64_t choose2(std::uint64_t m) { return m < 2 ? 0 : m * (m - 1) / 2; }

// Σ over intervals of C(mass, 2), intervals given by sorted boundaries.
std::uint64_t unordered_pairs(std::span<const std::uint64_t> sizes,
                              std::span<const std::size_t> boundaries) {
  std::uint64_t total = 0;
  std::size_t j = 0;
  for (std::size_t end : boundaries) {
    std::uint64_t mass = 0;
    for (; j <= end; ++j) mass += sizes[j];
    total += choose2(mass);
  }
  return total;
}

std::uint64_t check_distance_args(std::span<const std::uint64_t> sizes, const Clock& c0,
                                  const Clock& c1) {
  if (sizes.empty()) throw ParameterError("observed sequence is empty");
  const std::size_t last = sizes.size() - 1;
  if (c0.last_index() != last || c1.last_index() != last) {
    throw ParameterError("clocks must partition the timeline 0.." + std::to_string(last));
  }
  std::uint64_t n = 0;
  for (auto s : sizes) n += s;
  if (n < 2) throw ParameterError("distance needs at least two vertices");
  return n;
}

}  // namespace

std::vector<std::uint64_t> observed_sizes(const ObservedSequence& obs) {
  std::vector<std::uint64_t> sizes;
  sizes.reserve(obs.size());
  for (const auto& s : obs.steps) sizes.push_back(s.size());
  return sizes;
}

Clock Clock::from_boundaries(std::vector<std::size_t> boundaries) {
  if (boundaries.empty()) throw ParameterError("clock has no intervals");
  for (std::size_t i = 1; i < boundaries.size(); ++i) {
    if (boundaries[i] <= boundaries[i - 1]) {
      throw ParameterError("clock boundaries must be strictly increasing");
    }
  }
  return Clock(std::move(boundaries));
}

Clock Clock::from_counts(std::span<const std::size_t> counts) {
  if (counts.empty()) throw ParameterError("clock has no intervals");
  std::vector<std::size_t> b;
  std::size_t next = 0;
  for (std::size_t c : counts) {
    if (c == 0) throw ParameterError("oversampling clock counts must be positive");
    next += c;
    b.push_back(next - 1);
  }
  return Clock(std::move(b));
}

Clock Clock::identity(std::size_t last_index) {
  std::vector<std::size_t> b(last_index + 1);
  for (std::size_t j = 0; j <= last_index; ++j) b[j] = j;
  return Clock(std::move(b));
}

Clock Clock::single(std::size_t last_index) { return Clock({last_index}); }

std::vector<std::size_t> Clock::counts() const {
  std::vector<std::size_t> c;
  std::size_t start = 0;
  for (std::size_t end : boundaries_) {
    c.push_back(end + 1 - start);
    start = end + 1;
  }
  return c;
}

std::vector<std::size_t> Clock::interval_index() const {
  std::vector<std::size_t> idx(last_index() + 1);
  std::size_t j = 0;
  for (std::size_t k = 0; k < boundaries_.size(); ++k) {
    for (; j <= boundaries_[k]; ++j) idx[j] = k;
  }
  return idx;
}

Distortion stretch_distort(const InfectionSequence& seq, std::size_t stretch,
                           std::uint64_t seed) {
  if (stretch < 1) throw ParameterError("stretch factor must be at least 1");
  if (seq.steps.empty()) throw ParameterError("infection sequence is empty");
  Rng rng(seed);
  ObservedSequence obs;
  obs.steps.resize(seq.size() * stretch);
  std::vector<std::size_t> boundaries;
  for (std::size_t j = 0; j < seq.size(); ++j) {
    const std::size_t base = j * stretch;
    for (Vertex v : seq.steps[j]) {
      obs.steps[base + uniform_below(rng, stretch)].push_back(v);
    }
    boundaries.push_back(base + stretch - 1);
  }
  for (auto& s : obs.steps) std::sort(s.begin(), s.end());
  return {std::move(obs), Clock::from_boundaries(std::move(boundaries))};
}

InfectionSequence aggregate(const ObservedSequence& obs, const Clock& clock) {
  if (obs.steps.empty() || clock.last_index() != obs.last_index()) {
    throw ParameterError("clock must end at the last observation index");
  }
  InfectionSequence seq;
  std::size_t j = 0;
  for (std::size_t end : clock.boundaries()) {
    VertexSet merged;
    for (; j <= end; ++j) {
      merged.insert(merged.end(), obs.steps[j].begin(), obs.steps[j].end());
    }
    std::sort(merged.begin(), merged.end());
    seq.steps.push_back(std::move(merged));
  }
  return seq;
}

bool is_consistent(const InfectionSequence& seq, const ObservedSequence& obs,
                   const Clock& clock) {
  if (obs.steps.empty() || clock.last_index() != obs.last_index()) return false;
  if (seq.size() != clock.num_intervals()) return false;
  return aggregate(obs, clock) == seq;
}

double distance(std::span<const std::uint64_t> obs_sizes, const Clock& c0,
                const Clock& c1) {
  const std::uint64_t n = check_distance_args(obs_sizes, c0, c1);
  std::vector<std::size_t> merged;
  std::set_union(c0.boundaries().begin(), c0.boundaries().end(),
                 c1.boundaries().begin(), c1.boundaries().end(),
                 std::back_inserter(merged));
  const std::uint64_t a0 = unordered_pairs(obs_sizes, c0.boundaries());
  const std::uint64_t a1 = unordered_pairs(obs_sizes, c1.boundaries());
  const std::uint64_t a01 = unordered_pairs(obs_sizes, merged);
  return static_cast<double>(a0 + a1 - 2 * a01) / static_cast<double>(choose2(n));
}

double distance_bruteforce(std::span<const std::uint64_t> obs_sizes, const Clock& c0,
                           const Clock& c1) {
  const std::uint64_t n = check_distance_args(obs_sizes, c0, c1);
  const auto idx0 = c0.interval_index();
  const auto idx1 = c1.interval_index();
  // One entry per vertex: the interval it falls into under each clock.
  std::vector<std::size_t> in0;
  std::vector<std::size_t> in1;
  in0.reserve(n);
  in1.reserve(n);
  for (std::size_t j = 0; j < obs_sizes.size(); ++j) {
    for (std::uint64_t k = 0; k < obs_sizes[j]; ++k) {
      in0.push_back(idx0[j]);
      in1.push_back(idx1[j]);
    }
  }
  std::uint64_t disagreements = 0;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      const bool ordered0 = in0[a] != in0[b];
      const bool ordered1 = in1[a] != in1[b];
      disagreements += ordered0 != ordered1 ? 1 : 0;
    }
  }
  return static_cast<double>(disagreements) / static_cast<double>(choose2(n));
}

std::string clock_to_json(const Clock& clock) {
  return nlohmann::json(std::vector<std::size_t>(clock.boundaries().begin(),
                                                 clock.boundaries().end()))
      .dump();
}

Clock clock_from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_array()) throw ParseError("clock must be a JSON array of integers");
  std::vector<std::size_t> boundaries;
  for (const auto& v : doc) {
    if (!v.is_number_unsigned()) {
      throw ParseError("clock boundary is not a non-negative integer: " + v.dump());
    }
    boundaries.push_back(v.get<std::size_t>());
  }
  try {
    return Clock::from_boundaries(std::move(boundaries));
  } catch (const ParameterError& e) {
    throw ParseError(e.what());
  }
}

void write_clock_file(const std::filesystem::path& path, const Clock& clock) {
  write_text_file(path, clock_to_json(clock) + "\n");
}

Clock read_clock_file(const std::filesystem::path& path) {
  return clock_from_json(read_text_file(path));
}

}  // namespace cascade_clock
