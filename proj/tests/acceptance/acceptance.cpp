// Acceptance suite: one PASS/FAIL line per criterion, each with its own
// wall-clock budget. Exit status is nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "../instances.hpp"
#include "cascade_clock/cascade.hpp"
#include "cascade_clock/clockwork.hpp"
#include "cascade_clock/estimators.hpp"
#include "cascade_clock/experiments.hpp"
#include "cascade_clock/random.hpp"

using namespace cascade_clock;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  std::string name;
  double budget_seconds;
  std::function<Outcome()> run;
};

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c);
  return buf;
}

Clock random_clock(std::size_t last, Rng& rng) {
  std::vector<std::size_t> b;
  const double density = uniform01(rng);
  for (std::size_t j = 0; j < last; ++j) {
    if (uniform01(rng) < density) b.push_back(j);
  }
  b.push_back(last);
  return Clock::from_boundaries(std::move(b));
}

// Observation sizes for a clock timeline of last+1 steps with total mass in
// [2, max_mass].
std::vector<std::uint64_t> random_sizes(std::size_t last, std::uint64_t max_mass,
                                        Rng& rng) {
  std::vector<std::uint64_t> sizes(last + 1, 0);
  const std::uint64_t mass = 2 + uniform_below(rng, max_mass - 1);
  for (std::uint64_t i = 0; i < mass; ++i) ++sizes[uniform_below(rng, last + 1)];
  return sizes;
}

Outcome metric_oracle() {
  Rng rng(1);
  int mismatches = 0;
  for (int i = 0; i < 200; ++i) {
    const std::size_t last = uniform_below(rng, 51);
    const auto sizes = random_sizes(last, 200, rng);
    const Clock a = random_clock(last, rng);
    const Clock b = random_clock(last, rng);
    if (distance(sizes, a, b) != distance_bruteforce(sizes, a, b)) ++mismatches;
  }
  return {mismatches == 0, std::to_string(mismatches) + " of 200 instances differ"};
}

Outcome round_trip() {
  int failures = 0;
  int checks = 0;
  for (std::uint64_t i = 0; i < 100; ++i) {
    Rng rng(derive_seed(2, i));
    const Graph g = generate_er(60 + uniform_below(rng, 140), 0.05, rng());
    const CascadeParams params{0.1 + 0.5 * uniform01(rng), 0.005 * uniform01(rng)};
    const auto seq = simulate_ic(g, params, {0}, 10, rng());
    for (std::size_t l : {1, 2, 3, 5}) {
      const auto d = stretch_distort(seq, l, rng());
      ++checks;
      if (!(aggregate(d.observed, d.clock) == seq)) ++failures;
    }
  }
  return {failures == 0,
          std::to_string(failures) + " of " + std::to_string(checks) + " round trips differ"};
}

Outcome mu_consistency() {
  int failures = 0;
  double worst = 0.0;
  for (std::uint64_t inst = 0; inst < 20; ++inst) {
    Rng rng(derive_seed(3, inst));
    const std::size_t n = 50 + uniform_below(rng, 250);
    const Graph g = generate_er(n, (2.0 + 8.0 * uniform01(rng)) / static_cast<double>(n),
                                rng());
    const CascadeParams params{0.1 + 0.6 * uniform01(rng),
                               uniform01(rng) < 0.5 ? 0.0 : 0.01 * uniform01(rng)};
    const auto full = simulate_ic(g, params, {static_cast<Vertex>(uniform_below(rng, n))},
                                  6, rng());
    const std::size_t t = uniform_below(rng, full.size());
    const InfectionSequence prefix{
        std::vector<VertexSet>(full.steps.begin(), full.steps.begin() + t + 1)};
    const double mu = expected_next(g, params, prefix.steps);

    const int runs = 10000;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (int r = 0; r < runs; ++r) {
      const auto cont = continue_ic(g, params, prefix, 1, derive_seed(rng(), r));
      const double x = cont.size() > prefix.size()
                           ? static_cast<double>(cont.steps[prefix.size()].size())
                           : 0.0;
      sum += x;
      sum_sq += x * x;
    }
    const double mean = sum / runs;
    const double se =
        std::sqrt(std::max(0.0, (sum_sq - runs * mean * mean) / (runs - 1)) / runs);
    const double z = se > 0 ? std::abs(mean - mu) / se : (mean == mu ? 0.0 : 1e9);
    worst = std::max(worst, z);
    if (std::abs(mean - mu) > 3 * se) ++failures;
  }
  return {failures == 0, std::to_string(failures) + " of 20 outside 3 SE; worst |z| = " +
                             fmt("%.2f", worst)};
}

Outcome dp_optimality() {
  int failures = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto inst = fixtures::small_instance(derive_seed(4, seed), 10);
    const EstimationInput input{inst.graph, inst.params, inst.observed, inst.s0_size};
    const auto dp = dp_mlp(input);
    const auto brute = exhaustive_best(input);
    const double a = dp.log_likelihood;
    const double b = brute.log_likelihood;
    const bool equal = a == b || std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b));
    if (!equal || dp.model_mismatch != brute.model_mismatch) ++failures;
  }
  return {failures == 0, std::to_string(failures) + " of 50 likelihoods differ"};
}

Outcome star_fixture() {
  const auto star = std::make_shared<const Graph>([] {
    std::vector<Edge> edges;
    for (Vertex v = 1; v <= 8; ++v) edges.emplace_back(0, v);
    return Graph::from_edges(9, edges);
  }());
  int failures = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    TrialConfig cfg;
    cfg.graph = FixedGraph{star};
    cfg.params = CascadeParams{1.0, 0.0};
    cfg.s0_vertices = VertexSet{0};
    cfg.stretch = 2;
    cfg.seed = seed;
    const TrialResult r = run_trial(cfg);
    if (r.degenerate || r.outcomes.size() != 2) {
      ++failures;
      continue;
    }
    for (const auto& o : r.outcomes) {
      // Equivalent clocks (same vertex partial order) are at distance 0.
      if (o.skipped || o.distance != 0.0) ++failures;
    }
  }
  return {failures == 0, std::to_string(failures) + " failures over 20 seeds x 2 estimators"};
}

TrialConfig fig1_defaults() {
  TrialConfig cfg;
  cfg.graph = ErSpec{3000, 3.0, std::nullopt};
  cfg.params = CascadeParams{0.1, 1e-7};
  cfg.stretch = 2;
  return cfg;
}

Outcome fig1a_trend() {
  TrialConfig base = fig1_defaults();
  base.estimators = {EstimatorKind::FastClock};
  base.seed = 2024;
  const auto table = sweep(base, "n", {1000, 3000, 4000}, 50, 1);
  const double d1000 = table[0].mean_distance;
  const double d3000 = table[1].mean_distance;
  const double d4000 = table[2].mean_distance;
  const bool pass = d4000 <= d1000 && d3000 <= 0.05;
  return {pass, fmt("mean distance n=1000: %.4g, n=3000: %.4g, n=4000: %.4g", d1000, d3000,
                    d4000) +
                    " (degenerate excluded: " +
                    std::to_string(table[0].degenerate + table[1].degenerate +
                                   table[2].degenerate) +
                    ")"};
}

// Mean over instances of the median FastClock time of repeated calls.
double fastclock_time(std::size_t n, double mean_degree, int instances) {
  std::vector<double> per_instance;
  for (int i = 0; per_instance.size() < static_cast<std::size_t>(instances); ++i) {
    const std::uint64_t seed = derive_seed(n, i);
    const Graph g = generate_er(n, mean_degree / static_cast<double>(n), seed);
    const CascadeParams params{0.1, 1e-7};
    auto seq = simulate_ic(g, params, {0}, 100, seed + 1);
    while (seq.size() > 1 && seq.steps.back().empty()) seq.steps.pop_back();
    if (seq.size() < 2) continue;
    const auto d = stretch_distort(seq, 2, seed + 2);
    const EstimationInput input{g, params, d.observed, 1};
    std::vector<double> times;
    for (int rep = 0; rep < 7; ++rep) {
      times.push_back(static_cast<double>(run_estimator(EstimatorKind::FastClock, input).time_ns));
    }
    std::nth_element(times.begin(), times.begin() + 3, times.end());
    per_instance.push_back(times[3]);
  }
  double sum = 0.0;
  for (double t : per_instance) sum += t;
  return sum / static_cast<double>(per_instance.size());
}

Outcome linear_scaling() {
  const double mean_degree = 2000.0 * std::pow(2000.0, -1.0 / 3.0);
  const double t2000 = fastclock_time(2000, mean_degree, 20);
  const double t4000 = fastclock_time(4000, mean_degree, 20);
  const double ratio = t4000 / t2000;
  return {ratio <= 3.0,
          fmt("mean time n=2000: %.0f ns, n=4000: %.0f ns, ratio %.2f", t2000, t4000, ratio)};
}

Outcome relative_speed() {
  TrialConfig base = fig1_defaults();
  base.seed = 7;
  base.dp_cap = 60;
  const auto table = sweep(base, "n", {3000}, 50, 1);
  const double fast = table[0].mean_time_ns;
  const double dp = table[1].mean_time_ns;
  const double speedup = dp / fast;
  return {table[1].trials > 0 && speedup >= 10.0,
          fmt("mean FastClock %.0f ns, mean DP %.0f ns, speedup %.1fx", fast, dp, speedup) +
              " (DP trials " + std::to_string(table[1].trials) + ", skipped " +
              std::to_string(table[1].skipped) + ")"};
}

Outcome pseudometric() {
  Rng rng(9);
  int failures = 0;
  for (int i = 0; i < 100; ++i) {
    const std::size_t last = 1 + uniform_below(rng, 40);
    const auto sizes = random_sizes(last, 150, rng);
    const Clock a = random_clock(last, rng);
    const Clock b = random_clock(last, rng);
    const Clock c = random_clock(last, rng);
    const bool ok = distance(sizes, a, a) == 0.0 && distance(sizes, b, b) == 0.0 &&
                    distance(sizes, a, b) == distance(sizes, b, a) &&
                    distance(sizes, a, c) <=
                        distance(sizes, a, b) + distance(sizes, b, c) + 1e-15;
    if (!ok) ++failures;
  }
  return {failures == 0, std::to_string(failures) + " of 100 triples violate an axiom"};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"metric oracle equivalence", 1.0, metric_oracle},
      {"round-trip identity", 1.0, round_trip},
      {"mu_t Monte Carlo consistency", 30.0, mu_consistency},
      {"DP optimality", 60.0, dp_optimality},
      {"deterministic recovery fixture", 1.0, star_fixture},
      {"Fig. 1a distance trend", 600.0, fig1a_trend},
      {"linear-time scaling", 120.0, linear_scaling},
      {"relative speed vs DP", 600.0, relative_speed},
      {"metric pseudometric suite", 1.0, pseudometric},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    const auto begin = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - begin).count();
    const bool in_budget = seconds < c.budget_seconds;
    const bool pass = out.pass && in_budget;
    failed += pass ? 0 : 1;
    std::printf("%s  %-32s %s [%.2fs / %.0fs budget%s]\n", pass ? "PASS" : "FAIL",
                c.name.c_str(), out.detail.c_str(), seconds, c.budget_seconds,
                in_budget ? "" : ", over budget");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
