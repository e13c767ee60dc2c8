#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "cascade_clock/graph.hpp"

namespace cascade_clock {

/// Independent-cascade parameters: per-step edge transmission probability
/// and per-step external infection probability.
struct CascadeParams {
  double p_n = 0.0;
  double p_e = 0.0;

  /// Throws ParameterError unless both lie in [0, 1].
  void validate() const;
};

/// Ground-truth infection sequence S_0..S_T. Sets are pairwise disjoint and
/// each is kept sorted.
struct InfectionSequence {
  std::vector<VertexSet> steps;

  std::size_t size() const { return steps.size(); }
  std::size_t total_infected() const;
  bool operator==(const InfectionSequence&) const = default;
};

/// Throws ParameterError if any vertex is >= n, any set is unsorted or has
/// repeats, or two sets intersect.
void validate_disjoint(std::span<const VertexSet> steps, std::size_t n);

InfectionSequence simulate_ic(const Graph& g, const CascadeParams& params,
                              VertexSet s0, std::size_t max_steps, std::uint64_t seed);

/// Runs up to `extra_steps` further IC steps after `prefix`, treating the
/// last set of the prefix as the active set. The returned sequence starts
/// with the prefix.
InfectionSequence continue_ic(const Graph& g, const CascadeParams& params,
                              const InfectionSequence& prefix, std::size_t extra_steps,
                              std::uint64_t seed);

/// Linear threshold process with explicit per-vertex thresholds. A vertex
/// joins at the first step where the infected fraction of its neighbors
/// strictly exceeds its threshold; isolated vertices never join.
InfectionSequence simulate_lt(const Graph& g, std::span<const double> thresholds,
                              VertexSet s0, std::size_t max_steps);

/// Same with thresholds drawn uniformly from [0, 1).
InfectionSequence simulate_lt(const Graph& g, VertexSet s0, std::size_t max_steps,
                              std::uint64_t seed);

/// Uninfected neighbors of S_t: N(S_t) minus S_0 ∪ ... ∪ S_t.
VertexSet frontier(const Graph& g, const InfectionSequence& seq, std::size_t t);

/// (1 - p_e)(1 - p_n)^deg: probability that an uninfected vertex with `deg`
/// active neighbors stays uninfected for one step.
double survival_probability(const CascadeParams& params, std::size_t active_degree);

/// E[|S_{t+1}| | S_0..S_t] under IC, where the prefix is S_0..S_t.
double expected_next(const Graph& g, const CascadeParams& params,
                     std::span<const VertexSet> prefix);

/// Log-probability that exactly `newly_infected` are infected in one IC step
/// given the infected history and the active set. May return -infinity.
double log_likelihood_step(const Graph& g, const CascadeParams& params,
                           std::span<const Vertex> infected_before,
                           std::span<const Vertex> active,
                           std::span<const Vertex> newly_infected);

/// Incremental infected-set bookkeeping. `expected_next` touches only the
/// edges incident to the active set.
class CascadeState {
 public:
  CascadeState(const Graph& g, const CascadeParams& params);

  void infect(std::span<const Vertex> vertices);
  bool is_infected(Vertex v) const { return infected_[v] != 0; }
  std::size_t infected_count() const { return infected_count_; }

  /// μ for the next step with `active` as the most recent infection set.
  double expected_next(std::span<const Vertex> active);

 private:
  const Graph* graph_;
  CascadeParams params_;
  std::vector<std::uint8_t> infected_;
  std::size_t infected_count_ = 0;
  std::vector<std::uint32_t> scratch_degree_;
  std::vector<Vertex> touched_;
};

}  // namespace cascade_clock
