#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cascade_clock/cascade.hpp"

namespace cascade_clock {

/// Observed sequence Ŝ_0..Ŝ_N. Sets are pairwise disjoint; empty sets are
/// allowed.
struct ObservedSequence {
  std::vector<VertexSet> steps;

  std::size_t size() const { return steps.size(); }
  /// Index of the last observation, N.
  std::size_t last_index() const { return steps.size() - 1; }
  bool operator==(const ObservedSequence&) const = default;
};

/// |Ŝ_j| for every j.
std::vector<std::uint64_t> observed_sizes(const ObservedSequence& obs);

/// Oversampling clock in boundary form: t_0 < t_1 < ... < t_K = N defines
/// the intervals [0..t_0], [t_0+1..t_1], ..., [t_{K-1}+1..t_K].
class Clock {
 public:
  /// Throws ParameterError unless the list is nonempty and strictly increasing.
  static Clock from_boundaries(std::vector<std::size_t> boundaries);

  /// From the count form (C(0), ..., C(K)); every count must be positive.
  static Clock from_counts(std::span<const std::size_t> counts);

  /// Every observation index is its own interval: boundaries 0, 1, ..., N.
  static Clock identity(std::size_t last_index);

  /// One interval [0..N].
  static Clock single(std::size_t last_index);

  std::span<const std::size_t> boundaries() const { return boundaries_; }
  std::size_t num_intervals() const { return boundaries_.size(); }
  std::size_t last_index() const { return boundaries_.back(); }

  /// Interval widths (C(0), ..., C(K)).
  std::vector<std::size_t> counts() const;

  /// interval_index()[j] is the interval containing observation j.
  std::vector<std::size_t> interval_index() const;

  bool operator==(const Clock&) const = default;
  auto operator<=>(const Clock&) const = default;

 private:
  explicit Clock(std::vector<std::size_t> b) : boundaries_(std::move(b)) {}

  std::vector<std::size_t> boundaries_;
};

struct Distortion {
  ObservedSequence observed;
  Clock clock;
};

/// Splits every ground-truth step into `stretch` observed steps and places
/// each vertex into one of them uniformly at random.
Distortion stretch_distort(const InfectionSequence& seq, std::size_t stretch,
                           std::uint64_t seed);

/// Step k of the result is the union of the observed sets in interval k.
InfectionSequence aggregate(const ObservedSequence& obs, const Clock& clock);

/// True iff aggregate(obs, clock) == seq.
bool is_consistent(const InfectionSequence& seq, const ObservedSequence& obs,
                   const Clock& clock);

/// Fraction of vertex pairs ordered by exactly one of the two clocks, from
/// the per-observation vertex counts. Computed in closed form as
/// (a_0 + a_1 - 2 a_01) / C(n, 2), where a_b sums C(mass, 2) over the
/// intervals of clock b and a_01 does the same over the common refinement.
double distance(std::span<const std::uint64_t> obs_sizes, const Clock& c0,
                const Clock& c1);

/// Same quantity by explicit enumeration of all vertex pairs. O(n^2); meant
/// as a test oracle.
double distance_bruteforce(std::span<const std::uint64_t> obs_sizes, const Clock& c0,
                           const Clock& c1);

std::string clock_to_json(const Clock& clock);
Clock clock_from_json(std::string_view text);
void write_clock_file(const std::filesystem::path& path, const Clock& clock);
Clock read_clock_file(const std::filesystem::path& path);

}  // namespace cascade_clock
