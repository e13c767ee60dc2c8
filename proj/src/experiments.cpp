#include "cascade_clock/experiments.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <json.hpp>
#include <limits>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "cascade_clock/errors.hpp"
#include "cascade_clock/random.hpp"
#include "cascade_clock/sequence_io.hpp"

namespace cascade_clock {
namespace {

// Sub-seed streams of a trial.
enum Stream : std::uint64_t { kGraph = 1, kSeedSet = 2, kCascade = 3, kDistort = 4 };

Graph build_graph(const GraphSpec& spec, std::uint64_t seed) {
  if (const auto* er = std::get_if<ErSpec>(&spec)) {
    return generate_er(er->n, er->edge_probability(), seed);
  }
  if (const auto* sbm = std::get_if<SbmSpec>(&spec)) {
    const auto sizes = sbm->block_sizes();
    return generate_sbm(sizes, sbm->p_intra, sbm->p_inter, seed);
  }
  return *std::get<FixedGraph>(spec).graph;
}

}  // namespace

VertexSet sample_initial_set(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (k > n) throw ParameterError("cannot pick " + std::to_string(k) + " of " +
                                  std::to_string(n) + " vertices");
  // Floyd's algorithm.
  Rng rng(seed);
  std::set<Vertex> chosen;
  for (std::size_t j = n - k; j < n; ++j) {
    const auto t = static_cast<Vertex>(uniform_below(rng, j + 1));
    if (!chosen.insert(t).second) chosen.insert(static_cast<Vertex>(j));
  }
  return VertexSet(chosen.begin(), chosen.end());
}

namespace {

struct Moments {
  double mean = std::numeric_limits<double>::quiet_NaN();
  double sd = std::numeric_limits<double>::quiet_NaN();
};

Moments moments(const std::vector<double>& xs) {
  Moments m;
  if (xs.empty()) return m;
  double sum = 0.0;
  for (double x : xs) sum += x;
  m.mean = sum / static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - m.mean) * (x - m.mean);
  m.sd = xs.size() > 1 ? std::sqrt(ss / static_cast<double>(xs.size() - 1)) : 0.0;
  return m;
}

std::size_t as_count(double value, std::string_view axis) {
  if (!(value >= 1.0) || value != std::floor(value)) {
    throw ConfigError("axis " + std::string(axis) + " needs a positive integer, got " +
                      format_real(value));
  }
  return static_cast<std::size_t>(value);
}

}  // namespace

double ErSpec::edge_probability() const {
  if (p) return *p;
  return std::pow(static_cast<double>(n), -1.0 / alpha);
}

std::vector<std::size_t> SbmSpec::block_sizes() const {
  if (!sizes.empty()) return sizes;
  const auto small = static_cast<std::size_t>(
      std::llround(static_cast<double>(n) / std::sqrt(static_cast<double>(n))));
  return {small, n - small};
}

void TrialConfig::validate() const {
  try {
    params.validate();
  } catch (const ParameterError& e) {
    throw ConfigError(e.what());
  }
  std::size_t n = 0;
  if (const auto* er = std::get_if<ErSpec>(&graph)) {
    if (er->n < 1) throw ConfigError("graph n must be at least 1");
    if (!er->p && !(er->alpha > 0.0)) throw ConfigError("density alpha must be positive");
    const double p = er->edge_probability();
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("edge probability outside [0, 1]");
    n = er->n;
  } else if (const auto* sbm = std::get_if<SbmSpec>(&graph)) {
    const auto sizes = sbm->block_sizes();
    for (auto s : sizes) {
      if (s == 0) throw ConfigError("SBM block sizes must be positive");
      n += s;
    }
    if (!(sbm->p_intra >= 0.0 && sbm->p_intra <= 1.0) ||
        !(sbm->p_inter >= 0.0 && sbm->p_inter <= 1.0)) {
      throw ConfigError("SBM probabilities must lie in [0, 1]");
    }
  } else {
    const auto& fixed = std::get<FixedGraph>(graph);
    if (!fixed.graph) throw ConfigError("fixed graph is null");
    n = fixed.graph->num_vertices();
  }
  if (s0_vertices) {
    if (s0_vertices->empty()) throw ConfigError("explicit S_0 is empty");
    for (Vertex v : *s0_vertices) {
      if (v >= n) throw ConfigError("S_0 vertex out of range");
    }
  } else if (s0_size < 1 || s0_size > n) {
    throw ConfigError("s0_size " + std::to_string(s0_size) + " infeasible for n = " +
                      std::to_string(n));
  }
  if (stretch < 1) throw ConfigError("stretch must be at least 1");
  if (max_steps < 1) throw ConfigError("max_steps must be at least 1");
  if (estimators.empty()) throw ConfigError("no estimators selected");
}

TrialResult run_trial(const TrialConfig& cfg) {
  cfg.validate();
  TrialResult result;
  result.seed = cfg.seed;

  const Graph graph = build_graph(cfg.graph, derive_seed(cfg.seed, kGraph));
  VertexSet s0;
  if (cfg.s0_vertices) {
    s0 = normalized(*cfg.s0_vertices);
  } else {
    s0 = sample_initial_set(graph.num_vertices(), cfg.s0_size,
                            derive_seed(cfg.seed, kSeedSet));
  }
  const std::size_t s0_size = s0.size();

  InfectionSequence seq = simulate_ic(graph, cfg.params, std::move(s0), cfg.max_steps,
                                      derive_seed(cfg.seed, kCascade));
  while (seq.size() > 1 && seq.steps.back().empty()) seq.steps.pop_back();
  result.cascade_steps = seq.size() - 1;
  if (result.cascade_steps == 0) {
    result.degenerate = true;
    return result;
  }

  Distortion distorted = stretch_distort(seq, cfg.stretch, derive_seed(cfg.seed, kDistort));
  result.observed_steps = distorted.observed.last_index();
  const auto sizes = observed_sizes(distorted.observed);
  if (distance(sizes, distorted.clock, distorted.clock) != 0.0) {
    throw std::logic_error("ground-truth clock is not at distance 0 from itself");
  }
  result.truth = distorted.clock;

  const EstimationInput input{graph, cfg.params, distorted.observed, s0_size};
  for (EstimatorKind kind : cfg.estimators) {
    EstimatorOutcome outcome;
    outcome.estimator = kind;
    if (kind == EstimatorKind::Dp && result.observed_steps > cfg.dp_cap) {
      outcome.skipped = true;
      outcome.distance = std::numeric_limits<double>::quiet_NaN();
    } else {
      TimedEstimate est = run_estimator(kind, input);
      outcome.time_ns = est.time_ns;
      outcome.distance = distance(sizes, distorted.clock, est.clock);
      outcome.clock = std::move(est.clock);
    }
    result.outcomes.push_back(std::move(outcome));
  }
  return result;
}

TrialConfig with_axis_value(TrialConfig cfg, std::string_view axis, double value) {
  auto* er = std::get_if<ErSpec>(&cfg.graph);
  auto* sbm = std::get_if<SbmSpec>(&cfg.graph);
  if (axis == "n") {
    const std::size_t n = as_count(value, axis);
    if (er) {
      er->n = n;
    } else if (sbm) {
      sbm->n = n;
      sbm->sizes.clear();
    } else {
      throw ConfigError("axis n needs an ER or SBM graph");
    }
  } else if (axis == "p_n") {
    cfg.params.p_n = value;
  } else if (axis == "density_alpha") {
    if (!er) throw ConfigError("axis density_alpha needs an ER graph");
    er->alpha = value;
    er->p.reset();
  } else if (axis == "stretch") {
    cfg.stretch = as_count(value, axis);
  } else if (axis == "inter_block") {
    if (!sbm) throw ConfigError("axis inter_block needs an SBM graph");
    sbm->p_inter = value;
  } else if (axis == "sbm_p_n") {
    if (!sbm) throw ConfigError("axis sbm_p_n needs an SBM graph");
    cfg.params.p_n = value;
  } else {
    throw ConfigError("unknown sweep axis '" + std::string(axis) +
                      "' (expected n, p_n, density_alpha, stretch, inter_block, sbm_p_n)");
  }
  return cfg;
}

std::size_t default_thread_count() {
  if (const char* env = std::getenv("CASCADE_CLOCK_THREADS")) {
    char* end = nullptr;
    const long parsed = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && parsed >= 1) return static_cast<std::size_t>(parsed);
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

SweepTable sweep(const TrialConfig& base, std::string_view axis,
                 const std::vector<double>& values, std::size_t trials_per_point,
                 std::size_t threads) {
  std::vector<TrialConfig> points;
  for (double v : values) {
    points.push_back(with_axis_value(base, axis, v));
    points.back().validate();
  }
  if (trials_per_point < 1) throw ConfigError("trials per point must be at least 1");

  const std::size_t jobs = points.size() * trials_per_point;
  std::vector<TrialResult> results(jobs);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t job = next++; job < jobs; job = next++) {
      try {
        TrialConfig cfg = points[job / trials_per_point];
        cfg.seed = derive_seed(base.seed, job % trials_per_point);
        results[job] = run_trial(cfg);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (threads == 0) threads = default_thread_count();
  threads = std::min(threads, std::max<std::size_t>(jobs, 1));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  SweepTable table;
  for (std::size_t p = 0; p < points.size(); ++p) {
    for (std::size_t e = 0; e < base.estimators.size(); ++e) {
      SweepRow row;
      row.axis = std::string(axis);
      row.value = values[p];
      row.estimator = base.estimators[e];
      std::vector<double> distances;
      std::vector<double> times;
      for (std::size_t t = 0; t < trials_per_point; ++t) {
        const TrialResult& r = results[p * trials_per_point + t];
        if (r.degenerate) {
          ++row.degenerate;
          continue;
        }
        const EstimatorOutcome& o = r.outcomes[e];
        if (o.skipped) {
          ++row.skipped;
          continue;
        }
        distances.push_back(o.distance);
        times.push_back(static_cast<double>(o.time_ns));
      }
      const Moments d = moments(distances);
      const Moments tm = moments(times);
      row.mean_distance = d.mean;
      row.sd_distance = d.sd;
      row.mean_time_ns = tm.mean;
      row.sd_time_ns = tm.sd;
      row.trials = distances.size();
      table.push_back(std::move(row));
    }
  }
  return table;
}

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  std::string s(buf, end);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

std::string results_to_csv(const SweepTable& table) {
  std::ostringstream out;
  out << kResultsHeader << '\n';
  for (const auto& row : table) {
    out << row.axis << ',' << format_real(row.value) << ',' << to_string(row.estimator)
        << ',' << format_real(row.mean_distance) << ',' << format_real(row.sd_distance)
        << ',' << format_real(row.mean_time_ns) << ',' << format_real(row.sd_time_ns)
        << ',' << row.trials << '\n';
  }
  return out.str();
}

void write_results(const SweepTable& table, const std::filesystem::path& path) {
  write_text_file(path, results_to_csv(table));
}

namespace {

using nlohmann::json;

template <typename T>
T get_field(const json& obj, const char* key, const T& fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config field '") + key + "' has the wrong type");
  }
}

void reject_unknown(const json& obj, std::initializer_list<std::string_view> known,
                    const char* where) {
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (auto k : known) ok = ok || key == k;
    if (!ok) throw ConfigError(std::string("unknown key '") + key + "' in " + where);
  }
}

GraphSpec graph_from_json(const json& g) {
  if (!g.is_object()) throw ConfigError("'graph' must be an object");
  const auto model = get_field<std::string>(g, "model", "er");
  if (model == "er") {
    reject_unknown(g, {"model", "n", "alpha", "p"}, "graph");
    ErSpec er;
    er.n = get_field<std::size_t>(g, "n", er.n);
    er.alpha = get_field<double>(g, "alpha", er.alpha);
    if (g.contains("p")) er.p = get_field<double>(g, "p", 0.0);
    return er;
  }
  if (model == "sbm") {
    reject_unknown(g, {"model", "n", "sizes", "p_intra", "p_inter"}, "graph");
    SbmSpec sbm;
    sbm.n = get_field<std::size_t>(g, "n", sbm.n);
    sbm.sizes = get_field<std::vector<std::size_t>>(g, "sizes", {});
    sbm.p_intra = get_field<double>(g, "p_intra", sbm.p_intra);
    sbm.p_inter = get_field<double>(g, "p_inter", sbm.p_inter);
    if (!sbm.sizes.empty()) {
      sbm.n = 0;
      for (auto s : sbm.sizes) sbm.n += s;
    }
    return sbm;
  }
  throw ConfigError("unknown graph model '" + model + "' (expected er or sbm)");
}

}  // namespace

SweepConfig sweep_config_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid config JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown(doc,
                 {"graph", "p_n", "p_e", "s0_size", "stretch", "estimators", "max_steps",
                  "dp_cap", "seed", "sweep"},
                 "config");
  SweepConfig cfg;
  TrialConfig& base = cfg.base;
  if (doc.contains("graph")) base.graph = graph_from_json(doc["graph"]);
  base.params.p_n = get_field<double>(doc, "p_n", base.params.p_n);
  base.params.p_e = get_field<double>(doc, "p_e", base.params.p_e);
  base.s0_size = get_field<std::size_t>(doc, "s0_size", base.s0_size);
  base.stretch = get_field<std::size_t>(doc, "stretch", base.stretch);
  base.max_steps = get_field<std::size_t>(doc, "max_steps", base.max_steps);
  base.dp_cap = get_field<std::size_t>(doc, "dp_cap", base.dp_cap);
  base.seed = get_field<std::uint64_t>(doc, "seed", base.seed);
  if (doc.contains("estimators")) {
    base.estimators.clear();
    for (const auto& name : get_field<std::vector<std::string>>(doc, "estimators", {})) {
      try {
        base.estimators.push_back(estimator_from_string(name));
      } catch (const ParameterError& e) {
        throw ConfigError(e.what());
      }
    }
  }
  if (doc.contains("sweep")) {
    const json& s = doc["sweep"];
    if (!s.is_object()) throw ConfigError("'sweep' must be an object");
    reject_unknown(s, {"axis", "values", "trials"}, "sweep");
    cfg.axis = get_field<std::string>(s, "axis", cfg.axis);
    cfg.values = get_field<std::vector<double>>(s, "values", {});
    cfg.trials = get_field<std::size_t>(s, "trials", cfg.trials);
  }
  return cfg;
}

SweepConfig load_sweep_config(const std::filesystem::path& path) {
  return sweep_config_from_json(read_text_file(path));
}

}  // namespace cascade_clock
