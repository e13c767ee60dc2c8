#include "cascade_clock/cascade.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cascade_clock/errors.hpp"
#include "cascade_clock/random.hpp"

namespace cascade_clock {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double int_pow(double base, std::size_t exp) {
  double result = 1.0;
  while (exp > 0) {
    if (exp & 1U) result *= base;
    base *= base;
    exp >>= 1U;
  }
  return result;
}

std::vector<std::uint8_t> membership(std::size_t n, std::span<const Vertex> vs,
                                     const char* what) {
  std::vector<std::uint8_t> flags(n, 0);
  for (Vertex v : vs) {
    if (v >= n) {
      throw ParameterError(std::string(what) + " contains out-of-range vertex " +
                           std::to_string(v));
    }
    flags[v] = 1;
  }
  return flags;
}

void check_seed_set(const Graph& g, const VertexSet& s0) {
  if (s0.empty()) throw ParameterError("initial set S_0 is empty");
  for (Vertex v : s0) {
    if (v >= g.num_vertices()) {
      throw ParameterError("initial vertex " + std::to_string(v) + " out of range");
    }
  }
}

// One IC step from `active`. Edge transmissions first, then external
// infections; both land in the returned set.
VertexSet ic_step(const Graph& g, const CascadeParams& params,
                  std::vector<std::uint8_t>& infected, std::span<const Vertex> active,
                  Rng& rng) {
  VertexSet fresh;
  if (params.p_n > 0.0) {
    for (Vertex v : active) {
      for (Vertex w : g.neighbors(v)) {
        if (infected[w] == 0 && bernoulli(rng, params.p_n)) {
          infected[w] = 1;
          fresh.push_back(w);
        }
      }
    }
  }
  for_each_success(g.num_vertices(), params.p_e, rng, [&](std::uint64_t k) {
    const auto w = static_cast<Vertex>(k);
    if (infected[w] == 0) {
      infected[w] = 1;
      fresh.push_back(w);
    }
  });
  std::sort(fresh.begin(), fresh.end());
  return fresh;
}

InfectionSequence run_ic(const Graph& g, const CascadeParams& params,
                         InfectionSequence seq, std::vector<std::uint8_t> infected,
                         std::size_t infected_count, std::size_t extra_steps, Rng& rng) {
  const std::size_t n = g.num_vertices();
  for (std::size_t step = 0; step < extra_steps && infected_count < n; ++step) {
    VertexSet fresh = ic_step(g, params, infected, seq.steps.back(), rng);
    if (fresh.empty() && params.p_e == 0.0) break;
    infected_count += fresh.size();
    seq.steps.push_back(std::move(fresh));
  }
  return seq;
}

}  // namespace

void CascadeParams::validate() const {
  if (!(p_n >= 0.0 && p_n <= 1.0)) {
    throw ParameterError("p_n must lie in [0, 1], got " + std::to_string(p_n));
  }
  if (!(p_e >= 0.0 && p_e <= 1.0)) {
    throw ParameterError("p_e must lie in [0, 1], got " + std::to_string(p_e));
  }
}

std::size_t InfectionSequence::total_infected() const {
  std::size_t total = 0;
  for (const auto& s : steps) total += s.size();
  return total;
}

void validate_disjoint(std::span<const VertexSet> steps, std::size_t n) {
  std::vector<std::uint8_t> seen(n, 0);
  for (std::size_t t = 0; t < steps.size(); ++t) {
    const auto& s = steps[t];
    for (std::size_t i = 0; i < s.size(); ++i) {
      const Vertex v = s[i];
      if (v >= n) {
        throw ParameterError("step " + std::to_string(t) + " contains vertex " +
                             std::to_string(v) + " >= n = " + std::to_string(n));
      }
      if (i > 0 && s[i - 1] >= v) {
        throw ParameterError("step " + std::to_string(t) + " is not sorted and unique");
      }
      if (seen[v] != 0) {
        throw ParameterError("vertex " + std::to_string(v) + " appears in two steps");
      }
      seen[v] = 1;
    }
  }
}

InfectionSequence simulate_ic(const Graph& g, const CascadeParams& params,
                              VertexSet s0, std::size_t max_steps, std::uint64_t seed) {
  params.validate();
  s0 = normalized(std::move(s0));
  check_seed_set(g, s0);
  std::vector<std::uint8_t> infected = membership(g.num_vertices(), s0, "S_0");
  const std::size_t count = s0.size();
  InfectionSequence seq;
  seq.steps.push_back(std::move(s0));
  Rng rng(seed);
  return run_ic(g, params, std::move(seq), std::move(infected), count, max_steps, rng);
}

InfectionSequence continue_ic(const Graph& g, const CascadeParams& params,
                              const InfectionSequence& prefix, std::size_t extra_steps,
                              std::uint64_t seed) {
  params.validate();
  if (prefix.steps.empty()) throw ParameterError("prefix is empty");
  validate_disjoint(prefix.steps, g.num_vertices());
  std::vector<std::uint8_t> infected(g.num_vertices(), 0);
  for (const auto& s : prefix.steps) {
    for (Vertex v : s) infected[v] = 1;
  }
  Rng rng(seed);
  return run_ic(g, params, prefix, std::move(infected), prefix.total_infected(),
                extra_steps, rng);
}

InfectionSequence simulate_lt(const Graph& g, std::span<const double> thresholds,
                              VertexSet s0, std::size_t max_steps) {
  const std::size_t n = g.num_vertices();
  if (thresholds.size() != n) {
    throw ParameterError("need one threshold per vertex");
  }
  for (double theta : thresholds) {
    if (!(theta >= 0.0 && theta <= 1.0)) {
      throw ParameterError("threshold outside [0, 1]: " + std::to_string(theta));
    }
  }
  s0 = normalized(std::move(s0));
  check_seed_set(g, s0);

  std::vector<std::uint8_t> infected = membership(n, s0, "S_0");
  std::vector<std::uint32_t> infected_neighbors(n, 0);
  std::size_t infected_count = s0.size();
  InfectionSequence seq;
  seq.steps.push_back(std::move(s0));

  for (std::size_t step = 0; step < max_steps && infected_count < n; ++step) {
    // Only neighbors of the last step have a changed infected fraction.
    VertexSet candidates;
    for (Vertex v : seq.steps.back()) {
      for (Vertex w : g.neighbors(v)) {
        ++infected_neighbors[w];
        if (infected[w] == 0) candidates.push_back(w);
      }
    }
    candidates = normalized(std::move(candidates));
    VertexSet fresh;
    for (Vertex w : candidates) {
      const double fraction = static_cast<double>(infected_neighbors[w]) /
                              static_cast<double>(g.degree(w));
      if (fraction > thresholds[w]) fresh.push_back(w);
    }
    if (fresh.empty()) break;
    for (Vertex w : fresh) infected[w] = 1;
    infected_count += fresh.size();
    seq.steps.push_back(std::move(fresh));
  }
  return seq;
}

InfectionSequence simulate_lt(const Graph& g, VertexSet s0, std::size_t max_steps,
                              std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> thresholds(g.num_vertices());
  for (double& theta : thresholds) theta = uniform01(rng);
  return simulate_lt(g, thresholds, std::move(s0), max_steps);
}

VertexSet frontier(const Graph& g, const InfectionSequence& seq, std::size_t t) {
  if (t >= seq.size()) {
    throw ParameterError("step " + std::to_string(t) + " out of range for sequence of " +
                         std::to_string(seq.size()) + " steps");
  }
  std::vector<std::uint8_t> infected(g.num_vertices(), 0);
  for (std::size_t j = 0; j <= t; ++j) {
    for (Vertex v : seq.steps[j]) {
      if (v >= g.num_vertices()) throw ParameterError("vertex out of range");
      infected[v] = 1;
    }
  }
  VertexSet out;
  for (Vertex w : neighborhood(g, seq.steps[t])) {
    if (infected[w] == 0) out.push_back(w);
  }
  return out;
}

double survival_probability(const CascadeParams& params, std::size_t active_degree) {
  return (1.0 - params.p_e) * int_pow(1.0 - params.p_n, active_degree);
}

CascadeState::CascadeState(const Graph& g, const CascadeParams& params)
    : graph_(&g),
      params_(params),
      infected_(g.num_vertices(), 0),
      scratch_degree_(g.num_vertices(), 0) {
  params_.validate();
}

void CascadeState::infect(std::span<const Vertex> vertices) {
  for (Vertex v : vertices) {
    if (v >= infected_.size()) {
      throw ParameterError("vertex " + std::to_string(v) + " out of range");
    }
    if (infected_[v] == 0) {
      infected_[v] = 1;
      ++infected_count_;
    }
  }
}

double CascadeState::expected_next(std::span<const Vertex> active) {
  touched_.clear();
  for (Vertex v : active) {
    for (Vertex w : graph_->neighbors(v)) {
      if (infected_[w] != 0) continue;
      if (scratch_degree_[w]++ == 0) touched_.push_back(w);
    }
  }
  const double p_e = params_.p_e;
  const double outside = static_cast<double>(graph_->num_vertices() - touched_.size() -
                                             infected_count_);
  double mu = p_e * outside;
  for (Vertex w : touched_) {
    mu += p_e + (1.0 - p_e) * (1.0 - int_pow(1.0 - params_.p_n, scratch_degree_[w]));
    scratch_degree_[w] = 0;
  }
  return mu;
}

double expected_next(const Graph& g, const CascadeParams& params,
                     std::span<const VertexSet> prefix) {
  if (prefix.empty()) throw ParameterError("prefix is empty");
  validate_disjoint(prefix, g.num_vertices());
  CascadeState state(g, params);
  for (const auto& s : prefix) state.infect(s);
  return state.expected_next(prefix.back());
}

double log_likelihood_step(const Graph& g, const CascadeParams& params,
                           std::span<const Vertex> infected_before,
                           std::span<const Vertex> active,
                           std::span<const Vertex> newly_infected) {
  params.validate();
  const std::size_t n = g.num_vertices();
  const auto infected = membership(n, infected_before, "infected_before");
  const auto fresh = membership(n, newly_infected, "newly_infected");
  for (Vertex v : active) {
    if (v >= n || infected[v] == 0) {
      throw ParameterError("active set is not contained in infected_before");
    }
  }
  for (Vertex v : newly_infected) {
    if (infected[v] != 0) {
      throw ParameterError("newly_infected intersects infected_before");
    }
  }

  std::vector<std::uint32_t> active_degree(n, 0);
  VertexSet frontier_set;
  for (Vertex v : normalized(VertexSet(active.begin(), active.end()))) {
    for (Vertex w : g.neighbors(v)) {
      if (infected[w] != 0) continue;
      if (active_degree[w]++ == 0) frontier_set.push_back(w);
    }
  }

  std::size_t uninfected = 0;
  for (std::size_t v = 0; v < n; ++v) uninfected += infected[v] == 0 ? 1 : 0;
  std::size_t fresh_count = 0;
  for (std::size_t v = 0; v < n; ++v) fresh_count += fresh[v];

  double total = 0.0;
  std::size_t fresh_in_frontier = 0;
  for (Vertex w : frontier_set) {
    const double q = survival_probability(params, active_degree[w]);
    const bool hit = fresh[w] != 0;
    fresh_in_frontier += hit ? 1 : 0;
    const double p = hit ? 1.0 - q : q;
    if (p <= 0.0) return kNegInf;
    total += std::log(p);
  }

  // Uninfected vertices outside the frontier only face external infection.
  const std::size_t outside = uninfected - frontier_set.size();
  const std::size_t outside_hit = fresh_count - fresh_in_frontier;
  const std::size_t outside_miss = outside - outside_hit;
  if (outside_hit > 0) {
    if (params.p_e <= 0.0) return kNegInf;
    total += static_cast<double>(outside_hit) * std::log(params.p_e);
  }
  if (outside_miss > 0) {
    if (params.p_e >= 1.0) return kNegInf;
    total += static_cast<double>(outside_miss) * std::log1p(-params.p_e);
  }
  return total;
}

}  // namespace cascade_clock
