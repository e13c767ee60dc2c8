#include "cascade_clock/estimators.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>
#include <json.hpp>
#include <limits>
#include <vector>

#include "cascade_clock/errors.hpp"

namespace cascade_clock {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void validate_input(const EstimationInput& input) {
  input.params.validate();
  if (input.observed.steps.empty()) throw ParameterError("observed sequence is empty");
  if (input.s0_size < 1) throw ParameterError("s0_size must be at least 1");
  validate_disjoint(input.observed.steps, input.graph.num_vertices());
}

Clock prefix_then_singletons(std::size_t first, std::size_t last) {
  std::vector<std::size_t> b;
  for (std::size_t j = first; j <= last; ++j) b.push_back(j);
  return Clock::from_boundaries(std::move(b));
}

// Orders candidate segmentations: higher score, then fewer intervals, then
// lexicographically smaller boundaries.
bool preferred(double score, const std::vector<std::size_t>& boundaries,
               double best_score, const std::vector<std::size_t>& best_boundaries) {
  if (score != best_score) return score > best_score;
  if (boundaries.size() != best_boundaries.size()) {
    return boundaries.size() < best_boundaries.size();
  }
  return boundaries < best_boundaries;
}

// Log-likelihood of the step "active = observations (a..b], newly infected =
// observations (b..c]" for every c > b, built incrementally in c.
class StepScorer {
 public:
  StepScorer(const Graph& g, const CascadeParams& params, const ObservedSequence& obs)
      : graph_(g),
        obs_(obs),
        log_pe_(params.p_e > 0.0 ? std::log(params.p_e) : kNegInf),
        log_not_pe_(params.p_e < 1.0 ? std::log1p(-params.p_e) : kNegInf),
        params_(params),
        obs_index_(g.num_vertices(), kUnobserved),
        degree_(g.num_vertices(), 0) {
    for (std::size_t j = 0; j < obs.size(); ++j) {
      for (Vertex v : obs.steps[j]) obs_index_[v] = j;
    }
    cumulative_.resize(obs.size());
    std::size_t total = 0;
    for (std::size_t j = 0; j < obs.size(); ++j) {
      total += obs.steps[j].size();
      cumulative_[j] = total;
    }
  }

  // Active set = observations first..b (inclusive); everything observed at
  // or before b is infected.
  void reset(std::size_t first, std::size_t b) {
    for (Vertex w : frontier_) degree_[w] = 0;
    frontier_.clear();
    for (std::size_t j = first; j <= b; ++j) {
      for (Vertex v : obs_.steps[j]) {
        for (Vertex w : graph_.neighbors(v)) {
          if (obs_index_[w] != kUnobserved && obs_index_[w] <= b) continue;
          if (degree_[w]++ == 0) frontier_.push_back(w);
        }
      }
    }
    finite_sum_ = 0.0;
    impossible_ = 0;
    for (Vertex w : frontier_) add_term(miss_log(w));
    outside_ = graph_.num_vertices() - cumulative_[b] - frontier_.size();
    outside_hit_ = 0;
    next_ = b + 1;
  }

  // Extends the newly infected set through observation c (c >= next) and
  // returns the step log-likelihood.
  double score_through(std::size_t c) {
    for (; next_ <= c; ++next_) {
      for (Vertex v : obs_.steps[next_]) {
        if (degree_[v] > 0) {
          remove_term(miss_log(v));
          add_term(hit_log(v));
        } else {
          ++outside_hit_;
        }
      }
    }
    if (impossible_ > 0) return kNegInf;
    double total = finite_sum_;
    const std::size_t miss = outside_ - outside_hit_;
    if (outside_hit_ > 0) {
      if (log_pe_ == kNegInf) return kNegInf;
      total += static_cast<double>(outside_hit_) * log_pe_;
    }
    if (miss > 0) {
      if (log_not_pe_ == kNegInf) return kNegInf;
      total += static_cast<double>(miss) * log_not_pe_;
    }
    return total;
  }

 private:
  static constexpr std::size_t kUnobserved = std::numeric_limits<std::size_t>::max();

  double miss_log(Vertex w) const {
    const double q = survival_probability(params_, degree_[w]);
    return q > 0.0 ? std::log(q) : kNegInf;
  }
  double hit_log(Vertex w) const {
    const double p = 1.0 - survival_probability(params_, degree_[w]);
    return p > 0.0 ? std::log(p) : kNegInf;
  }
  void add_term(double x) {
    if (x == kNegInf) {
      ++impossible_;
    } else {
      finite_sum_ += x;
    }
  }
  void remove_term(double x) {
    if (x == kNegInf) {
      --impossible_;
    } else {
      finite_sum_ -= x;
    }
  }

  const Graph& graph_;
  const ObservedSequence& obs_;
  double log_pe_;
  double log_not_pe_;
  CascadeParams params_;
  std::vector<std::size_t> obs_index_;
  std::vector<std::size_t> cumulative_;
  std::vector<std::uint32_t> degree_;
  std::vector<Vertex> frontier_;
  std::size_t next_ = 0;
  double finite_sum_ = 0.0;
  std::size_t impossible_ = 0;
  std::size_t outside_ = 0;
  std::size_t outside_hit_ = 0;
};

}  // namespace

std::size_t initial_boundary(const ObservedSequence& observed, std::size_t s0_size) {
  std::size_t total = 0;
  for (std::size_t j = 0; j < observed.size(); ++j) {
    total += observed.steps[j].size();
    if (total == s0_size) return j;
    if (total > s0_size) break;
  }
  throw InitialSetMismatch("no prefix of the observed sequence contains exactly " +
                           std::to_string(s0_size) + " vertices");
}

Clock fastclock(const EstimationInput& input) {
  validate_input(input);
  const auto& obs = input.observed.steps;
  const std::size_t last = input.observed.last_index();

  std::size_t t_obs = initial_boundary(input.observed, input.s0_size);
  std::vector<std::size_t> boundaries{t_obs};

  CascadeState state(input.graph, input.params);
  VertexSet active;
  for (std::size_t j = 0; j <= t_obs; ++j) {
    active.insert(active.end(), obs[j].begin(), obs[j].end());
  }
  state.infect(active);

  while (t_obs != last) {
    const double mu = state.expected_next(active);
    const double threshold = mu > 0.0 ? mu * (1.0 + std::pow(mu, -1.0 / 3.0)) : 0.0;

    // Δ >= 1 even if the first candidate set alone overflows the threshold.
    std::size_t end = t_obs + 1;
    std::size_t mass = obs[end].size();
    while (end < last && static_cast<double>(mass + obs[end + 1].size()) <= threshold) {
      ++end;
      mass += obs[end].size();
    }

    active.clear();
    for (std::size_t j = t_obs + 1; j <= end; ++j) {
      active.insert(active.end(), obs[j].begin(), obs[j].end());
    }
    state.infect(active);
    boundaries.push_back(end);
    t_obs = end;
  }
  return Clock::from_boundaries(std::move(boundaries));
}

double segmentation_log_likelihood(const EstimationInput& input, const Clock& clock) {
  const InfectionSequence induced = aggregate(input.observed, clock);
  VertexSet infected;
  double total = 0.0;
  for (std::size_t k = 1; k < induced.size(); ++k) {
    infected.insert(infected.end(), induced.steps[k - 1].begin(),
                    induced.steps[k - 1].end());
    total += log_likelihood_step(input.graph, input.params, infected,
                                 induced.steps[k - 1], induced.steps[k]);
    if (total == kNegInf) return kNegInf;
  }
  return total;
}

LikelihoodEstimate dp_mlp(const EstimationInput& input) {
  validate_input(input);
  const std::size_t last = input.observed.last_index();
  const std::size_t first = initial_boundary(input.observed, input.s0_size);
  if (first == last) return {Clock::single(last), 0.0, false};

  // Boundary positions first..last map to slots 0..K-1; slot K stands for
  // "no previous boundary" (the first interval starts at observation 0).
  const std::size_t slots = last - first + 1;
  const std::size_t start = slots;
  struct Cell {
    double score = kNegInf;
    std::size_t prev = 0;
    bool reached = false;
  };
  std::vector<Cell> table((slots + 1) * slots);
  auto cell = [&](std::size_t a, std::size_t b) -> Cell& { return table[a * slots + b]; };

  auto boundaries_of = [&](std::size_t a, std::size_t b) {
    std::vector<std::size_t> out;
    while (true) {
      out.push_back(first + b);
      if (a == start) break;
      const std::size_t prev = cell(a, b).prev;
      b = a;
      a = prev;
    }
    std::reverse(out.begin(), out.end());
    return out;
  };

  cell(start, 0) = {0.0, start, true};
  StepScorer scorer(input.graph, input.params, input.observed);

  for (std::size_t b = 0; b + 1 < slots; ++b) {
    for (std::size_t a = 0; a <= slots; ++a) {
      if (a != start && a >= b) continue;
      const Cell& from = cell(a, b);
      if (!from.reached || from.score == kNegInf) continue;
      const std::size_t active_first = a == start ? 0 : first + a + 1;
      scorer.reset(active_first, first + b);
      for (std::size_t c = b + 1; c < slots; ++c) {
        const double step = scorer.score_through(first + c);
        if (step == kNegInf) continue;
        const double score = from.score + step;
        Cell& to = cell(b, c);
        bool take = !to.reached;
        if (!take) {
          // Both candidates end with (b, c); compare prefixes through b.
          take = preferred(score, boundaries_of(a, b), to.score,
                           boundaries_of(to.prev, b));
        }
        if (take) to = {score, a, true};
      }
    }
  }

  bool found = false;
  double best_score = kNegInf;
  std::vector<std::size_t> best;
  for (std::size_t a = 0; a <= slots; ++a) {
    if (a != start && a >= slots - 1) continue;
    const Cell& c = cell(a, slots - 1);
    if (!c.reached) continue;
    auto candidate = boundaries_of(a, slots - 1);
    if (!found || preferred(c.score, candidate, best_score, best)) {
      found = true;
      best_score = c.score;
      best = std::move(candidate);
    }
  }
  if (!found) {
    std::cerr << "warning: dp_mlp found no segmentation with nonzero likelihood; "
                 "returning singleton intervals\n";
    return {prefix_then_singletons(first, last), kNegInf, true};
  }
  return {Clock::from_boundaries(std::move(best)), best_score, false};
}

LikelihoodEstimate exhaustive_best(const EstimationInput& input,
                                   std::size_t max_last_index) {
  validate_input(input);
  const std::size_t last = input.observed.last_index();
  if (last > max_last_index) {
    throw SizeError("exhaustive search refuses N = " + std::to_string(last) +
                    " (limit " + std::to_string(max_last_index) + ")");
  }
  const std::size_t first = initial_boundary(input.observed, input.s0_size);
  if (first == last) return {Clock::single(last), 0.0, false};

  // Optional boundaries sit at first+1 .. last-1.
  const std::size_t free_positions = last - first - 1;
  bool found = false;
  double best_score = kNegInf;
  std::vector<std::size_t> best;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << free_positions); ++mask) {
    std::vector<std::size_t> boundaries{first};
    for (std::size_t i = 0; i < free_positions; ++i) {
      if ((mask >> i) & 1U) boundaries.push_back(first + 1 + i);
    }
    boundaries.push_back(last);
    const double score =
        segmentation_log_likelihood(input, Clock::from_boundaries(boundaries));
    if (score == kNegInf) continue;
    if (!found || preferred(score, boundaries, best_score, best)) {
      found = true;
      best_score = score;
      best = std::move(boundaries);
    }
  }
  if (!found) return {prefix_then_singletons(first, last), kNegInf, true};
  return {Clock::from_boundaries(std::move(best)), best_score, false};
}

std::string_view to_string(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::FastClock:
      return "fastclock";
    case EstimatorKind::Dp:
      return "dp";
  }
  return "unknown";
}

EstimatorKind estimator_from_string(std::string_view name) {
  if (name == "fastclock") return EstimatorKind::FastClock;
  if (name == "dp") return EstimatorKind::Dp;
  throw ParameterError("unknown estimator '" + std::string(name) +
                       "' (expected fastclock or dp)");
}

TimedEstimate run_estimator(EstimatorKind kind, const EstimationInput& input) {
  using SteadyClock = std::chrono::steady_clock;
  TimedEstimate out{kind, Clock::single(0), 0, std::nullopt, false};
  const auto begin = SteadyClock::now();
  if (kind == EstimatorKind::FastClock) {
    out.clock = fastclock(input);
  } else {
    LikelihoodEstimate est = dp_mlp(input);
    out.clock = std::move(est.clock);
    out.log_likelihood = est.log_likelihood;
    out.model_mismatch = est.model_mismatch;
  }
  const auto elapsed = SteadyClock::now() - begin;
  out.time_ns = std::max<std::int64_t>(
      1, std::chrono::duration_cast<std::chrono::nanoseconds>(elapsed).count());
  return out;
}

std::string estimate_metadata_json(const TimedEstimate& estimate) {
  nlohmann::json doc;
  doc["estimator"] = std::string(to_string(estimate.estimator));
  doc["time_ns"] = estimate.time_ns;
  if (estimate.log_likelihood && std::isfinite(*estimate.log_likelihood)) {
    doc["log_likelihood"] = *estimate.log_likelihood;
  } else {
    doc["log_likelihood"] = nullptr;
  }
  doc["model_mismatch"] = estimate.model_mismatch;
  return doc.dump(2);
}

}  // namespace cascade_clock
