// Acceptance suite: one PASS/FAIL line per criterion, with wall time against
// its budget. Exit status is nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "pamaj/dynamics.hpp"
#include "pamaj/harness.hpp"
#include "pamaj/pa_graph.hpp"
#include "pamaj/stats.hpp"
#include "pamaj/structure.hpp"
#include "pamaj/threshold.hpp"

using namespace pamaj;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

unsigned workers() { return std::max(1u, std::thread::hardware_concurrency()); }

Outcome threshold_table() {
  const int ds[] = {5, 7, 9, 11};
  const double expected[] = {0.232, 0.347, 0.396, 0.421};
  bool pass = true;
  std::string detail;
  for (int i = 0; i < 4; ++i) {
    const double a = alpha_star(ds[i]);
    pass = pass && std::abs(a - expected[i]) <= 0.0005;
    detail += fmt("a*(%d)=%.6f ", ds[i], a);
  }
  return {pass, detail};
}

Outcome fixed_point() {
  double worst = 0.0;
  for (int d = 5; d <= 101; d += 2) {
    const double a = alpha_star(d);
    worst = std::max(worst, std::abs(binom_tail(d - 1, (d - 1) / 2, a) - a));
  }
  return {worst < 1e-8, fmt("max |f(a*) - a*| = %.3e over odd d in [5, 101]", worst)};
}

Outcome monotone_tails() {
  // With p = i/100, 100^n Pr(Bin(n, p) >= j) = sum_k C(n,k) i^k (100-i)^(n-k) is an
  // integer, so both sides compare exactly after scaling to 100^(2N+2).
  using boost::multiprecision::cpp_int;
  int failures = 0;
  int disagreements = 0;
  constexpr unsigned kMaxN = 102;
  for (int i = 1; i <= 49; ++i) {
    std::vector<cpp_int> pp(kMaxN + 1, cpp_int(1));
    std::vector<cpp_int> qq(kMaxN + 1, cpp_int(1));
    for (unsigned e = 1; e <= kMaxN; ++e) {
      pp[e] = pp[e - 1] * i;
      qq[e] = qq[e - 1] * (100 - i);
    }
    auto scaled_tail = [&](unsigned n, unsigned j) {
      cpp_int sum = 0;
      cpp_int choose = 1;
      for (unsigned k = 0; k <= n; ++k) {
        if (k > 0) choose = choose * (n - k + 1) / k;
        if (k >= j) sum += choose * pp[k] * qq[n - k];
      }
      return sum;
    };
    for (unsigned N = 1; N <= 50; ++N) {
      const bool exact = scaled_tail(2 * N, N) * 10000 >= scaled_tail(2 * N + 2, N + 1);
      failures += !exact;
      disagreements += exact != binprop_check(N, i / 100.0);
    }
  }
  return {failures == 0 && disagreements == 0,
          fmt("2450 cells, exact violations %d, library disagreements %d", failures,
              disagreements)};
}

Outcome tree_domination() {
  int checked = 0;
  int skipped = 0;
  int violations = 0;
  for (int d : {5, 7, 9, 11}) {
    const double a = alpha_star(d);
    for (double p : {a / 4, a / 2}) {
      if (!(f_envelope(d, p) < 1.0)) {
        skipped += 7;
        continue;
      }
      for (int h = 0; h <= 6; ++h) {
        ++checked;
        violations += tree_recursion_exact(d, p, h) > tree_root_red_bound(d, p, h) * (1 + 1e-9);
      }
    }
  }
  return {violations == 0 && checked > 0,
          fmt("%d cells checked, %d outside the envelope, %d violations", checked, skipped,
              violations)};
}

Outcome graph_invariants() {
  bool exact = true;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const PAGraph g = generate_pa(10000, 5, 0.0, seed);
    std::uint64_t min_degree = UINT64_MAX;
    std::uint64_t sum = 0;
    for (Vertex v = 0; v < g.t(); ++v) {
      min_degree = std::min(min_degree, g.degree(v));
      sum += g.degree(v);
    }
    exact = exact && g.t() == 10000 && g.edges().size() == 50000 && g.total_degree() == 100000 &&
            sum == 100000 && min_degree >= 5;
  }
  bool tail = true;
  std::string hills;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const PAGraph g = generate_pa(100000, 5, 0.0, seed);
    const DegreeStats s = degree_stats(g);
    const double h = hill_exponent(s.degree, 1000);
    tail = tail && h >= 2.5 && h <= 3.5;
    hills += fmt(" %.3f", h);
  }
  return {exact && tail, fmt("20 graphs at t=1e4: invariants %s; Hill exponents at t=1e5:%s",
                             exact ? "exact" : "BROKEN", hills.c_str())};
}

Outcome desk_scale_consensus() {
  ExperimentSpec spec;
  spec.t = {100000};
  spec.m = {5};
  spec.delta = {0.0};
  spec.k = {5};
  spec.alpha = {0.15, 0.45};
  spec.trials = 20;
  spec.base_seed = 1;
  const SweepResult r = run_sweep(spec, workers());
  const auto limit = static_cast<std::uint64_t>(std::ceil(tau_star(5, 0.1, 100000))) + 2 + 4;

  int blue = 0;
  int late = 0;
  std::uint64_t slowest = 0;
  for (const TrialRecord& rec : r.records[0]) {
    if (rec.winner != Colour::blue) continue;
    ++blue;
    slowest = std::max(slowest, *rec.consensus_step);
    late += *rec.consensus_step > limit;
  }
  const CellResult& control = r.cells[1];
  return {blue >= 18 && late == 0,
          fmt("alpha=0.15: %d/20 blue, slowest %llu steps (limit %llu); "
              "control alpha=0.45: blue %.2f red %.2f nonconv %.2f",
              blue, static_cast<unsigned long long>(slowest),
              static_cast<unsigned long long>(limit), control.blue_rate, control.red_rate,
              control.nonconv_rate)};
}

Outcome structural_certificates() {
  std::uint64_t samples = 0;
  std::uint64_t outer = 0;
  std::uint64_t multi = 0;
  std::uint64_t core = 0;
  std::uint64_t other = 0;
  std::string per_seed;
  std::vector<std::thread> pool;
  std::vector<StructureSummary> summaries(5);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    pool.emplace_back([&summaries, seed] {
      const PAGraph g = generate_pa(100000, 5, 0.0, seed);
      summaries[seed - 1] =
          scan_structure(g, default_structure_params(g), 2, 1000, seed).summary;
    });
  }
  for (auto& th : pool) th.join();
  for (const StructureSummary& s : summaries) {
    samples += s.samples;
    outer += s.outer_samples;
    multi += s.multi_light_cycles;
    core += s.core_edges_ge3;
    other += s.category_counts[static_cast<int>(BallCategory::other)];
    per_seed += fmt(" [%.3f %.3f %.3f]", s.multi_light_cycle_rate(), s.core_edge_violation_rate(),
                    s.other_rate());
  }
  const double multi_rate = static_cast<double>(multi) / samples;
  const double core_rate = static_cast<double>(core) / outer;
  const double other_rate = static_cast<double>(other) / samples;
  return {multi_rate < 0.01 && core_rate < 0.01 && other_rate < 0.01,
          fmt("pooled over %llu roots: >=2 light cycles %.4f, >=3 core-path edges %.4f "
              "(of %llu outer roots), other %.4f; per seed:%s",
              static_cast<unsigned long long>(samples), multi_rate, core_rate,
              static_cast<unsigned long long>(outer), other_rate, per_seed.c_str())};
}

Outcome urn_equivalence() {
  const int trials = 100000;
  std::vector<double> direct(trials);
  std::vector<double> urn(trials);
  const PAParams params{1, 0.0};
  for (int s = 0; s < trials; ++s) {
    direct[s] = static_cast<double>(generate_pa1(100, 0.0, 1000000 + s).degree(0));
    urn[s] = static_cast<double>(degree_evolution_urn(0, 2, 100, params, 5000000 + s));
  }
  double mean_direct = 0;
  double mean_urn = 0;
  for (int s = 0; s < trials; ++s) {
    mean_direct += direct[s] / trials;
    mean_urn += urn[s] / trials;
  }
  const double ks = ks_statistic(direct, urn);
  return {ks < 0.02, fmt("KS = %.4f; mean degree direct %.3f, urn %.3f", ks, mean_direct, mean_urn)};
}

Outcome determinism() {
  ExperimentSpec spec;
  spec.t = {3000};
  spec.m = {5};
  spec.delta = {0.0, 1.0};
  spec.k = {5, 7};
  spec.alpha = {0.1, 0.3};
  spec.trials = 8;
  spec.base_seed = 77;
  const auto dir = std::filesystem::temp_directory_path() / "pamaj_acceptance";
  std::filesystem::create_directories(dir);
  emit(run_sweep(spec, 1), Format::csv, dir / "a.csv");
  const unsigned threads = std::max(4u, workers());
  emit(run_sweep(spec, threads), Format::csv, dir / "b.csv");
  auto slurp = [](const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  };
  const std::string a = slurp(dir / "a.csv");
  const std::string b = slurp(dir / "b.csv");
  std::filesystem::remove_all(dir);
  return {a == b && !a.empty(), fmt("%zu bytes, %s across 1 and %u workers",
                                    a.size(), a == b ? "identical" : "DIFFERENT", threads)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> check;
  };
  const std::vector<Criterion> criteria{
      {1, "threshold table", 1, threshold_table},
      {2, "fixed-point property", 1, fixed_point},
      {3, "monotone binomial tails", 5, monotone_tails},
      {4, "tree-bound domination", 1, tree_domination},
      {5, "graph invariants and degree tail", 30, graph_invariants},
      {6, "consensus at desk scale", 600, desk_scale_consensus},
      {7, "structural certificates", 300, structural_certificates},
      {8, "urn/direct equivalence", 60, urn_equivalence},
      {9, "sweep determinism", 600, determinism},
  };

  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.check();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.budget_s;
    const bool pass = out.pass && in_time;
    failed += !pass;
    std::printf("[%s] %d %s (%.2f s of %.0f s%s): %s\n", pass ? "PASS" : "FAIL", c.id, c.name,
                secs, c.budget_s, in_time ? "" : ", over budget", out.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
