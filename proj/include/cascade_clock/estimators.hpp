#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "cascade_clock/cascade.hpp"
#include "cascade_clock/clockwork.hpp"

namespace cascade_clock {

/// Everything a clock estimator sees. |S_0| is assumed known.
struct EstimationInput {
  const Graph& graph;
  CascadeParams params;
  const ObservedSequence& observed;
  std::size_t s0_size = 1;
};

/// Smallest j with |Ŝ_0 ∪ ... ∪ Ŝ_j| == s0_size. Throws InitialSetMismatch
/// when no prefix has that size.
std::size_t initial_boundary(const ObservedSequence& observed, std::size_t s0_size);

/// Greedy expectation-matching estimator. Each new interval is extended as
/// far as the observed mass stays within μ_t(1 + μ_t^{-1/3}), where μ_t is
/// the expected size of the next step given the history estimated so far.
/// Every interval covers at least one observation. Runs in O(N + n + m).
Clock fastclock(const EstimationInput& input);

struct LikelihoodEstimate {
  Clock clock;
  double log_likelihood = 0.0;
  /// Set when every segmentation has probability zero; `clock` then falls
  /// back to the s0 prefix followed by singleton intervals.
  bool model_mismatch = false;
};

/// Sum of one-step IC log-likelihoods of the sequence that `clock` induces
/// on the observations (S~_0 itself contributes nothing).
double segmentation_log_likelihood(const EstimationInput& input, const Clock& clock);

/// Maximum-likelihood segmentation by dynamic programming over the last two
/// boundaries. The first boundary is fixed by the s0 prefix. Ties go to
/// fewer intervals, then to the lexicographically smallest boundary list.
LikelihoodEstimate dp_mlp(const EstimationInput& input);

/// Same objective and tie-breaking as dp_mlp by enumerating all clocks.
/// Refuses (SizeError) when N exceeds `max_last_index`.
LikelihoodEstimate exhaustive_best(const EstimationInput& input,
                                   std::size_t max_last_index = 20);

enum class EstimatorKind { FastClock, Dp };

std::string_view to_string(EstimatorKind kind);
/// Accepts "fastclock" and "dp".
EstimatorKind estimator_from_string(std::string_view name);

struct TimedEstimate {
  EstimatorKind estimator = EstimatorKind::FastClock;
  Clock clock;
  std::int64_t time_ns = 0;
  std::optional<double> log_likelihood;
  bool model_mismatch = false;
};

/// Runs one estimator and measures the wall-clock time of the call alone.
TimedEstimate run_estimator(EstimatorKind kind, const EstimationInput& input);

/// {"estimator": ..., "time_ns": ..., "log_likelihood": ... | null, ...}
std::string estimate_metadata_json(const TimedEstimate& estimate);

}  // namespace cascade_clock
