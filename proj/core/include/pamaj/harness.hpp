#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pamaj/dynamics.hpp"

namespace pamaj {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One point of the parameter grid.
struct Cell {
  std::uint32_t t = 0;
  int m = 1;
  double delta = 0.0;
  int k = 5;
  double alpha = 0.0;

  bool operator==(const Cell&) const = default;
};

enum class Regime { subcritical, supercritical, undefined };

/// Position of alpha relative to alpha_star(effective_d(m, k)); undefined
/// when the effective degree is below 5.
Regime regime(const Cell& cell);

struct ExperimentSpec {
  std::vector<std::uint32_t> t;
  std::vector<int> m;
  std::vector<double> delta;
  std::vector<int> k;
  std::vector<double> alpha;
  std::uint64_t trials = 1;
  std::uint64_t base_seed = 0;
  double epsilon = 0.1;
  std::uint64_t max_steps = 0;  // 0: 10 * ceil(tau*) + 100 per cell
  bool theorem_mode = true;     // every cell must have delta >= 0
  std::string csv_out;
  std::string json_out;
  unsigned workers = 0;  // 0: not set

  /// Cartesian product in t, m, delta, k, alpha order (alpha fastest).
  std::vector<Cell> cells() const;
  /// Throws ConfigError for an invalid grid.
  void validate() const;
};

/// Flat JSON object; scalar or array values for the grid keys
/// (t, m, delta, k, alpha) and scalars for trials, base_seed, epsilon,
/// max_steps, theorem_mode, out, json_out, workers. Unknown keys are rejected.
ExperimentSpec spec_from_json(const std::string& text);
ExperimentSpec load_config(const std::filesystem::path& path);

struct TrialRecord {
  std::optional<Colour> winner;
  std::optional<std::uint64_t> consensus_step;
  std::uint64_t steps_run = 0;

  bool operator==(const TrialRecord&) const = default;
};

/// One output row.
struct CellResult {
  Cell cell;
  std::uint64_t trials = 0;
  double blue_rate = 0.0;
  double red_rate = 0.0;
  double nonconv_rate = 0.0;
  std::optional<std::uint64_t> cs_p50;  // over trials that reached consensus
  std::optional<std::uint64_t> cs_p95;
  std::optional<double> tau_star;  // undefined for small t or d < 5

  bool operator==(const CellResult&) const = default;
};

struct SweepResult {
  std::vector<CellResult> cells;
  std::vector<std::vector<TrialRecord>> records;  // per cell, per trial
};

/// 64-bit hash of (base_seed, t, m, round(1e6 delta), k, round(1e6 alpha), trial):
/// independent of where the cell sits in the grid.
std::uint64_t trial_seed(std::uint64_t base_seed, const Cell& cell, std::uint64_t trial);

/// Fresh graph and colours from the trial seed, then MP^k to consensus or
/// max_steps (0 selects the default budget).
TrialRecord run_trial(const Cell& cell, std::uint64_t seed, double epsilon,
                      std::uint64_t max_steps);

CellResult aggregate(const Cell& cell, const std::vector<TrialRecord>& records, double epsilon);

/// Runs every (cell, trial) on a pool of `workers` threads. The reduction
/// is ordered by cell and trial, so the result does not depend on workers.
SweepResult run_sweep(const ExperimentSpec& spec, unsigned workers = 1);

/// Worker count: the flag when given, else $PAMAJ_WORKERS, else 1.
unsigned resolve_workers(std::optional<unsigned> flag);

enum class Format { csv, json };

void emit_csv(const SweepResult& result, std::ostream& out);
void emit_json(const SweepResult& result, std::ostream& out);
/// Throws IoError when the path cannot be written.
void emit(const SweepResult& result, Format format, const std::filesystem::path& path);

std::vector<CellResult> read_json(std::istream& in);

}  // namespace pamaj
