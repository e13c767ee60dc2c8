#include "cascade_clock/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "cascade_clock/cascade.hpp"
#include "cascade_clock/clockwork.hpp"
#include "cascade_clock/errors.hpp"
#include "cascade_clock/estimators.hpp"
#include "cascade_clock/experiments.hpp"
#include "cascade_clock/graph.hpp"
#include "cascade_clock/random.hpp"
#include "cascade_clock/sequence_io.hpp"

namespace cascade_clock {
namespace {

struct GenGraphArgs {
  std::string model = "er";
  std::size_t n = 0;
  std::optional<double> p;
  double alpha = 3.0;
  std::vector<std::size_t> sizes;
  double p_intra = 0.2;
  double p_inter = 0.01;
  std::uint64_t seed = 0;
  std::string out;
};

struct SimulateArgs {
  std::string graph;
  std::string model = "ic";
  double pn = 0.0;
  double pe = 0.0;
  std::vector<Vertex> s0;
  std::size_t s0_size = 0;
  std::size_t max_steps = 100;
  std::uint64_t seed = 0;
  std::string out;
};

struct DistortArgs {
  std::string sequence;
  std::size_t stretch = 1;
  std::uint64_t seed = 0;
  std::string out;
  std::string clock_out;
};

struct EstimateArgs {
  std::string graph;
  std::string observed;
  double pn = 0.0;
  double pe = 0.0;
  std::size_t s0_size = 0;
  std::string estimator = "fastclock";
  std::string out;
  std::string meta;
};

struct EvaluateArgs {
  std::string observed;
  std::vector<std::string> clocks;
};

struct SweepArgs {
  std::string config;
  std::uint64_t seed = 0;
  std::string out;
  std::optional<std::size_t> trials;
  std::optional<std::size_t> dp_cap;
  std::optional<std::size_t> n;
  std::optional<double> p;
  std::optional<double> pn;
  std::optional<double> pe;
  std::optional<std::size_t> stretch;
  std::optional<std::size_t> s0_size;
};

int gen_graph(const GenGraphArgs& a) {
  Graph g;
  if (a.model == "er") {
    ErSpec spec{a.n, a.alpha, a.p};
    g = generate_er(spec.n, spec.edge_probability(), a.seed);
  } else {
    SbmSpec spec{a.n, a.sizes, a.p_intra, a.p_inter};
    const auto sizes = spec.block_sizes();
    g = generate_sbm(sizes, a.p_intra, a.p_inter, a.seed);
  }
  save_graph(g, a.out);
  return 0;
}

int simulate(const SimulateArgs& a) {
  const Graph g = load_graph(a.graph);
  VertexSet s0(a.s0.begin(), a.s0.end());
  if (s0.empty()) {
    if (a.s0_size < 1 || a.s0_size > g.num_vertices()) {
      throw ParameterError("give --s0 vertices or a feasible --s0-size");
    }
    s0 = sample_initial_set(g.num_vertices(), a.s0_size, derive_seed(a.seed, 2));
  }
  InfectionSequence seq;
  if (a.model == "ic") {
    seq = simulate_ic(g, CascadeParams{a.pn, a.pe}, std::move(s0), a.max_steps, a.seed);
  } else {
    seq = simulate_lt(g, std::move(s0), a.max_steps, a.seed);
  }
  write_sequence_file(a.out, seq.steps);
  return 0;
}

int distort(const DistortArgs& a) {
  InfectionSequence seq{read_sequence_file(a.sequence)};
  std::size_t universe = 0;
  for (const auto& step : seq.steps) {
    if (!step.empty()) universe = std::max<std::size_t>(universe, step.back() + 1);
  }
  validate_disjoint(seq.steps, universe);
  const Distortion d = stretch_distort(seq, a.stretch, a.seed);
  write_sequence_file(a.out, d.observed.steps);
  write_clock_file(a.clock_out, d.clock);
  return 0;
}

int estimate(const EstimateArgs& a) {
  const Graph g = load_graph(a.graph);
  const ObservedSequence obs{read_sequence_file(a.observed)};
  const EstimationInput input{g, CascadeParams{a.pn, a.pe}, obs, a.s0_size};
  const TimedEstimate est = run_estimator(estimator_from_string(a.estimator), input);
  write_clock_file(a.out, est.clock);
  write_text_file(a.meta.empty() ? a.out + ".meta.json" : a.meta,
                  estimate_metadata_json(est) + "\n");
  return 0;
}

int evaluate(const EvaluateArgs& a, std::ostream& out) {
  const ObservedSequence obs{read_sequence_file(a.observed)};
  const Clock c0 = read_clock_file(a.clocks.at(0));
  const Clock c1 = read_clock_file(a.clocks.at(1));
  out << format_real(distance(observed_sizes(obs), c0, c1)) << '\n';
  return 0;
}

int run_sweep(const SweepArgs& a, std::ostream& err) {
  SweepConfig cfg = load_sweep_config(a.config);
  TrialConfig& base = cfg.base;
  base.seed = a.seed;
  if (a.trials) cfg.trials = *a.trials;
  if (a.dp_cap) base.dp_cap = *a.dp_cap;
  if (a.pn) base.params.p_n = *a.pn;
  if (a.pe) base.params.p_e = *a.pe;
  if (a.stretch) base.stretch = *a.stretch;
  if (a.s0_size) base.s0_size = *a.s0_size;
  if (a.n) {
    if (auto* er = std::get_if<ErSpec>(&base.graph)) er->n = *a.n;
    if (auto* sbm = std::get_if<SbmSpec>(&base.graph)) {
      sbm->n = *a.n;
      sbm->sizes.clear();
    }
  }
  if (a.p) {
    auto* er = std::get_if<ErSpec>(&base.graph);
    if (!er) throw ConfigError("--p applies to ER graphs only");
    er->p = *a.p;
  }
  if (cfg.values.empty()) throw ConfigError("sweep has no values");
  const SweepTable table = sweep(base, cfg.axis, cfg.values, cfg.trials);
  write_results(table, a.out);
  for (const auto& row : table) {
    if (row.degenerate > 0 || row.skipped > 0) {
      err << cfg.axis << '=' << format_real(row.value) << ' ' << to_string(row.estimator)
          << ": excluded " << row.degenerate << " degenerate, " << row.skipped
          << " skipped (N > dp cap)\n";
    }
  }
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Simulate cascades, distort their timelines and estimate clocks",
               "cascade-clock"};
  app.require_subcommand(1, 1);

  GenGraphArgs gg;
  auto* gen = app.add_subcommand("gen-graph", "Generate an ER or SBM graph file");
  gen->add_option("--model", gg.model, "er or sbm")
      ->check(CLI::IsMember({"er", "sbm"}));
  gen->add_option("--n", gg.n, "Vertex count")->required();
  gen->add_option("--p", gg.p, "ER edge probability (default n^(-1/alpha))");
  gen->add_option("--alpha", gg.alpha, "ER density exponent");
  gen->add_option("--sizes", gg.sizes, "SBM block sizes");
  gen->add_option("--p-intra", gg.p_intra, "SBM intra-block probability");
  gen->add_option("--p-inter", gg.p_inter, "SBM inter-block probability");
  gen->add_option("--seed", gg.seed)->required();
  gen->add_option("--out", gg.out)->required();

  SimulateArgs sa;
  auto* sim = app.add_subcommand("simulate", "Simulate a cascade on a graph file");
  sim->add_option("--graph", sa.graph)->required();
  sim->add_option("--model", sa.model, "ic or lt")->check(CLI::IsMember({"ic", "lt"}));
  sim->add_option("--pn", sa.pn, "Edge transmission probability");
  sim->add_option("--pe", sa.pe, "External infection probability");
  sim->add_option("--s0", sa.s0, "Initially infected vertices");
  sim->add_option("--s0-size", sa.s0_size, "Number of random initial vertices");
  sim->add_option("--max-steps", sa.max_steps);
  sim->add_option("--seed", sa.seed)->required();
  sim->add_option("--out", sa.out)->required();

  DistortArgs da;
  auto* dis = app.add_subcommand("distort", "Stretch a sequence into an observation");
  dis->add_option("--sequence", da.sequence)->required();
  dis->add_option("--stretch", da.stretch)->required()->check(CLI::PositiveNumber);
  dis->add_option("--seed", da.seed)->required();
  dis->add_option("--out", da.out, "Observed sequence output")->required();
  dis->add_option("--clock-out", da.clock_out, "Ground-truth clock output")->required();

  EstimateArgs ea;
  auto* est = app.add_subcommand("estimate", "Estimate the clock of an observation");
  est->add_option("--graph", ea.graph)->required();
  est->add_option("--observed", ea.observed)->required();
  est->add_option("--pn", ea.pn)->required();
  est->add_option("--pe", ea.pe);
  est->add_option("--s0-size", ea.s0_size)->required();
  est->add_option("--estimator", ea.estimator)
      ->check(CLI::IsMember({"fastclock", "dp"}));
  est->add_option("--out", ea.out)->required();
  est->add_option("--meta", ea.meta, "Metadata output (default <out>.meta.json)");

  EvaluateArgs va;
  auto* eval = app.add_subcommand("evaluate", "Distance between two clocks");
  eval->add_option("--observed", va.observed)->required();
  eval->add_option("clocks", va.clocks, "Two clock files")->required()->expected(2);

  SweepArgs wa;
  auto* sw = app.add_subcommand("sweep", "Run a parameter sweep from a JSON config");
  sw->add_option("--config", wa.config)->required();
  sw->add_option("--seed", wa.seed)->required();
  sw->add_option("--out", wa.out)->required();
  sw->add_option("--trials", wa.trials);
  sw->add_option("--dp-cap", wa.dp_cap);
  sw->add_option("--n", wa.n);
  sw->add_option("--p", wa.p);
  sw->add_option("--pn", wa.pn);
  sw->add_option("--pe", wa.pe);
  sw->add_option("--stretch", wa.stretch);
  sw->add_option("--s0-size", wa.s0_size);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 1;
  }

  try {
    if (*gen) return gen_graph(gg);
    if (*sim) return simulate(sa);
    if (*dis) return distort(da);
    if (*est) return estimate(ea);
    if (*eval) return evaluate(va, out);
    if (*sw) return run_sweep(wa, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

}  // namespace cascade_clock
