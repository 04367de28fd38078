// pamaj: command-line front end for graph generation, single runs, threshold
// numerics, structural scans and parameter sweeps.
//
// Exit status: 0 on success, 2 on a configuration error, 3 on an I/O error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "pamaj/dynamics.hpp"
#include "pamaj/harness.hpp"
#include "pamaj/pa_graph.hpp"
#include "pamaj/structure.hpp"
#include "pamaj/threshold.hpp"

using namespace pamaj;
using nlohmann::json;

namespace {

constexpr int kConfigError = 2;
constexpr int kIoError = 3;

std::string sig9(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

template <class T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

struct GenerateArgs {
  std::uint32_t t = 0;
  int m = 1;
  double delta = 0.0;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_generate(const GenerateArgs& a) {
  const PAGraph g = generate_pa(a.t, a.m, a.delta, a.seed);
  if (a.out.empty()) {
    save(g, std::cout);
  } else {
    save(g, std::filesystem::path(a.out));
  }
  return 0;
}

struct RunArgs {
  std::uint32_t t = 0;
  int m = 5;
  double delta = 0.0;
  int k = 5;
  double alpha = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t max_steps = 0;
  std::string protocol = "mpk";
  std::string graph;
  bool csv = false;
};

int cmd_run(const RunArgs& a) {
  const PAGraph g = a.graph.empty() ? generate_pa(a.t, a.m, a.delta, a.seed)
                                    : load(std::filesystem::path(a.graph));
  ProtocolConfig config;
  config.k = a.k;
  config.alpha = a.alpha;
  config.seed = a.seed;
  config.max_steps =
      a.max_steps != 0 ? a.max_steps : default_max_steps(g.t(), g.params().m, a.k);
  const Protocol protocol = a.protocol == "voter" ? Protocol::voter : Protocol::majority;
  const Trace trace = run(g, config, protocol);

  if (a.csv) {
    std::cout << "step,red\n";
    for (std::size_t s = 0; s < trace.red_counts.size(); ++s)
      std::cout << s << ',' << trace.red_counts[s] << '\n';
    return 0;
  }
  json out{{"t", g.t()},
           {"m", g.params().m},
           {"delta", g.params().delta},
           {"k", a.k},
           {"alpha", a.alpha},
           {"seed", a.seed},
           {"protocol", a.protocol},
           {"steps_run", trace.steps_run},
           {"consensus_step", opt(trace.consensus_step)},
           {"winner", trace.winner ? json(std::string(to_string(*trace.winner))) : json(nullptr)},
           {"red_counts", trace.red_counts}};
  std::cout << out.dump() << '\n';
  return 0;
}

int cmd_threshold(int d, std::optional<int> table) {
  if (table) {
    std::cout << "d,alpha_star\n";
    for (int dd = 5; dd <= *table; dd += 2) std::cout << dd << ',' << sig9(alpha_star(dd)) << '\n';
    return 0;
  }
  std::cout << sig9(alpha_star(d)) << '\n';
  return 0;
}

int cmd_schedule(int d, double eps, std::uint64_t t) {
  const ConvergenceSchedule s = schedule(d, eps, t);
  json out{{"d", s.d}, {"epsilon", s.epsilon}, {"t", s.t}, {"B", s.B}, {"tau_star", s.tau_star}};
  std::cout << out.dump() << '\n';
  return 0;
}

struct StructureArgs {
  std::string graph;
  std::optional<std::uint32_t> kappa;
  std::optional<std::uint32_t> kappa_o;
  std::uint32_t omega = 3;
  std::uint64_t samples = 1000;
  std::uint64_t seed = 0;
  std::string out;
  std::string summary;
};

int cmd_structure(const StructureArgs& a) {
  const PAGraph g = load(std::filesystem::path(a.graph));
  StructureParams p = default_structure_params(g);
  if (a.kappa) p.kappa = *a.kappa;
  if (a.kappa_o) p.kappa_o = *a.kappa_o;
  p.omega = a.omega;
  const StructureScan scan = scan_structure(g, p, p.omega, a.samples, a.seed);

  std::ofstream file;
  if (!a.out.empty()) {
    file.open(a.out);
    if (!file) throw IoError("cannot open " + a.out + " for writing");
  }
  std::ostream& csv = a.out.empty() ? std::cout : file;
  csv << "root,category,light_cycles,core_edges\n";
  for (const RootReport& r : scan.roots) {
    csv << r.root << ',' << to_string(r.category) << ',' << r.light_cycles << ',';
    if (r.core_edges) csv << *r.core_edges;
    csv << '\n';
  }

  const StructureSummary& s = scan.summary;
  json categories = json::object();
  for (int c = 0; c < 5; ++c)
    categories[std::string(to_string(static_cast<BallCategory>(c)))] = s.category_counts[c];
  json summary{{"t", g.t()},
               {"kappa", p.kappa},
               {"kappa_o", p.kappa_o},
               {"omega", p.omega},
               {"samples", s.samples},
               {"outer_samples", s.outer_samples},
               {"multi_light_cycle_rate", s.multi_light_cycle_rate()},
               {"core_edge_violation_rate", s.core_edge_violation_rate()},
               {"other_rate", s.other_rate()},
               {"categories", categories},
               {"outer_core_violations", outer_core_degree_check(g, p).size()}};
  if (a.summary.empty()) {
    std::cerr << summary.dump() << '\n';
  } else {
    std::ofstream out(a.summary);
    if (!out) throw IoError("cannot open " + a.summary + " for writing");
    out << summary.dump(2) << '\n';
  }
  return 0;
}

struct SweepArgs {
  std::string config;
  std::optional<unsigned> workers;
  std::optional<std::string> out;
  std::optional<std::string> json_out;
  std::optional<std::uint64_t> trials;
  std::optional<std::uint64_t> base_seed;
  std::optional<std::uint64_t> max_steps;
};

int cmd_sweep(const SweepArgs& a) {
  ExperimentSpec spec = load_config(a.config);
  if (a.out) spec.csv_out = *a.out;
  if (a.json_out) spec.json_out = *a.json_out;
  if (a.trials) spec.trials = *a.trials;
  if (a.base_seed) spec.base_seed = *a.base_seed;
  if (a.max_steps) spec.max_steps = *a.max_steps;
  spec.validate();

  const unsigned workers =
      a.workers ? resolve_workers(a.workers)
                : (spec.workers > 0 ? spec.workers : resolve_workers(std::nullopt));
  const SweepResult result = run_sweep(spec, workers);
  if (spec.csv_out.empty() || spec.csv_out == "-") {
    emit_csv(result, std::cout);
  } else {
    emit(result, Format::csv, spec.csv_out);
  }
  if (!spec.json_out.empty()) emit(result, Format::json, spec.json_out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Preferential attachment graphs and local majority dynamics"};
  app.require_subcommand(1);
  int status = 0;

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Sample PA_t(m, delta) and write it as text");
  g->add_option("--t", gen.t, "Number of vertices")->required()->check(CLI::PositiveNumber);
  g->add_option("--m", gen.m, "Edges per vertex")->required()->check(CLI::PositiveNumber);
  g->add_option("--delta", gen.delta, "Attachment offset (> -m)");
  g->add_option("--seed", gen.seed, "Random seed");
  g->add_option("--out", gen.out, "Output file (default stdout)");
  g->callback([&] { status = cmd_generate(gen); });

  RunArgs run_args;
  auto* r = app.add_subcommand("run", "One trial of MP^k (or the voter model); prints JSON");
  r->add_option("--t", run_args.t, "Number of vertices");
  r->add_option("--m", run_args.m, "Edges per vertex");
  r->add_option("--delta", run_args.delta, "Attachment offset");
  r->add_option("--graph", run_args.graph, "Load the graph from a file instead");
  r->add_option("--k", run_args.k, "Poll size (odd, >= 5)");
  r->add_option("--alpha", run_args.alpha, "Initial red probability")->required();
  r->add_option("--seed", run_args.seed, "Seed for the graph, colours and polls");
  r->add_option("--max-steps", run_args.max_steps, "Step budget (default 10*ceil(tau*)+100)");
  r->add_option("--protocol", run_args.protocol, "mpk or voter")
      ->check(CLI::IsMember({"mpk", "voter"}));
  r->add_flag("--csv", run_args.csv, "Print the red count per step as CSV");
  r->callback([&] {
    if (run_args.graph.empty() && run_args.t == 0)
      throw ConfigError("run needs --t or --graph");
    status = cmd_run(run_args);
  });

  int d = 5;
  std::optional<int> table;
  auto* th = app.add_subcommand("threshold", "Critical bias alpha*(d)");
  th->add_option("--d", d, "Odd degree >= 5");
  th->add_option("--table", table, "Print alpha* for every odd d from 5 to this value");
  th->callback([&] { status = cmd_threshold(d, table); });

  int sd = 5;
  double eps = 0.1;
  std::uint64_t st = 0;
  auto* sc = app.add_subcommand("schedule", "Convergence schedule tau* = B log_d log_d t");
  sc->add_option("--d", sd, "Odd degree >= 5")->required();
  sc->add_option("--eps", eps, "Epsilon > 0")->required();
  sc->add_option("--t", st, "Graph size, at least d^d")->required();
  sc->callback([&] { status = cmd_schedule(sd, eps, st); });

  StructureArgs sa;
  auto* su = app.add_subcommand("structure", "Truncated-ball census over sampled light roots");
  su->add_option("--graph", sa.graph, "Graph file from `generate`")->required();
  su->add_option("--kappa", sa.kappa, "Heavy cutoff (default ceil(t^0.3))");
  su->add_option("--kappa-o", sa.kappa_o, "Outer core cutoff (default ceil(t^0.5))");
  su->add_option("--omega", sa.omega, "Ball radius and short-structure length");
  su->add_option("--samples", sa.samples, "Number of sampled roots");
  su->add_option("--seed", sa.seed, "Sampling seed");
  su->add_option("--out", sa.out, "Per-root CSV (default stdout)");
  su->add_option("--summary", sa.summary, "Summary JSON (default stderr)");
  su->callback([&] { status = cmd_structure(sa); });

  SweepArgs sw;
  auto* sp = app.add_subcommand("sweep", "Parameter sweep from a JSON config");
  sp->add_option("--config", sw.config, "Config file")->required();
  sp->add_option("--workers", sw.workers, "Worker threads (default $PAMAJ_WORKERS or 1)");
  sp->add_option("--out", sw.out, "CSV output path (- for stdout)");
  sp->add_option("--json", sw.json_out, "JSON output path");
  sp->add_option("--trials", sw.trials, "Trials per cell");
  sp->add_option("--base-seed", sw.base_seed, "Base seed");
  sp->add_option("--max-steps", sw.max_steps, "Step budget (0 for the default)");
  sp->callback([&] { status = cmd_sweep(sw); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIoError;
  } catch (const GraphFormatError& e) {
    std::cerr << "bad graph file: " << e.what() << '\n';
    return kIoError;
  }
  return status;
}
