#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cascade_clock/cascade.hpp"
#include "cascade_clock/clockwork.hpp"
#include "cascade_clock/estimators.hpp"
#include "cascade_clock/graph.hpp"

namespace cascade_clock {

/// G(n, p) with p = n^{-1/alpha} unless `p` is set explicitly.
struct ErSpec {
  std::size_t n = 3000;
  double alpha = 3.0;
  std::optional<double> p;

  double edge_probability() const;
};

/// Stochastic block model. Without explicit sizes: two blocks of
/// round(n/sqrt(n)) and n - round(n/sqrt(n)) vertices.
struct SbmSpec {
  std::size_t n = 5000;
  std::vector<std::size_t> sizes;
  double p_intra = 0.2;
  double p_inter = 0.01;

  std::vector<std::size_t> block_sizes() const;
};

/// A prebuilt graph shared by every trial.
struct FixedGraph {
  std::shared_ptr<const Graph> graph;
};

using GraphSpec = std::variant<ErSpec, SbmSpec, FixedGraph>;

struct TrialConfig {
  GraphSpec graph = ErSpec{};
  CascadeParams params{0.1, 1e-7};
  /// S_0 is drawn uniformly (s0_size distinct vertices) unless given.
  std::size_t s0_size = 1;
  std::optional<VertexSet> s0_vertices;
  std::size_t stretch = 2;
  std::vector<EstimatorKind> estimators{EstimatorKind::FastClock, EstimatorKind::Dp};
  std::uint64_t seed = 0;
  std::size_t max_steps = 100;
  /// DP runs only when the observed sequence has N <= dp_cap.
  std::size_t dp_cap = 60;

  /// Throws ConfigError on invalid settings.
  void validate() const;
};

struct EstimatorOutcome {
  EstimatorKind estimator = EstimatorKind::FastClock;
  bool skipped = false;
  double distance = 0.0;
  std::int64_t time_ns = 0;
  std::optional<Clock> clock;
};

struct TrialResult {
  std::uint64_t seed = 0;
  /// The cascade never left S_0 (T = 0); no estimator was run.
  bool degenerate = false;
  std::size_t cascade_steps = 0;   // T
  std::size_t observed_steps = 0;  // N
  std::optional<Clock> truth;
  std::vector<EstimatorOutcome> outcomes;
};

/// `k` distinct vertices of 0..n-1, uniformly at random.
VertexSet sample_initial_set(std::size_t n, std::size_t k, std::uint64_t seed);

/// generate -> simulate -> distort -> estimate -> score. Deterministic in cfg.
TrialResult run_trial(const TrialConfig& cfg);

/// Sweep axes: n, p_n, density_alpha, stretch, inter_block, sbm_p_n.
TrialConfig with_axis_value(TrialConfig cfg, std::string_view axis, double value);

struct SweepRow {
  std::string axis;
  double value = 0.0;
  EstimatorKind estimator = EstimatorKind::FastClock;
  double mean_distance = 0.0;
  double sd_distance = 0.0;
  double mean_time_ns = 0.0;
  double sd_time_ns = 0.0;
  /// Trials that contributed; degenerate cascades and DP runs above the cap
  /// are excluded and counted separately.
  std::size_t trials = 0;
  std::size_t degenerate = 0;
  std::size_t skipped = 0;
};

using SweepTable = std::vector<SweepRow>;

/// Trial i of every point uses seed derive_seed(base.seed, i). `threads` = 0
/// reads CASCADE_CLOCK_THREADS, falling back to the hardware concurrency.
SweepTable sweep(const TrialConfig& base, std::string_view axis,
                 const std::vector<double>& values, std::size_t trials_per_point,
                 std::size_t threads = 0);

inline constexpr std::string_view kResultsHeader =
    "axis,value,estimator,mean_distance,sd_distance,mean_time_ns,sd_time_ns,trials";

std::string results_to_csv(const SweepTable& table);
void write_results(const SweepTable& table, const std::filesystem::path& path);

struct SweepConfig {
  TrialConfig base;
  std::string axis = "n";
  std::vector<double> values;
  std::size_t trials = 50;
};

/// JSON mirror of TrialConfig plus a "sweep" object; see README.
SweepConfig sweep_config_from_json(std::string_view text);
SweepConfig load_sweep_config(const std::filesystem::path& path);

/// Shortest round-trip decimal form, always with a '.' or exponent
/// ("0.0", "0.25", "1e-07"); "nan" for NaN.
std::string format_real(double x);

/// Worker count from CASCADE_CLOCK_THREADS, else hardware concurrency.
std::size_t default_thread_count();

}  // namespace cascade_clock
