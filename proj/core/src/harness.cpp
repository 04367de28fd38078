#include "pamaj/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>
#include <type_traits>

#include <nlohmann/json.hpp>

#include "pamaj/pa_graph.hpp"
#include "pamaj/rng.hpp"
#include "pamaj/stats.hpp"
#include "pamaj/threshold.hpp"

namespace pamaj {

using nlohmann::json;

namespace {

constexpr std::uint64_t kGraphTag = 0x67726170;     // "grap"
constexpr std::uint64_t kDynamicsTag = 0x64796e61;  // "dyna"

std::uint64_t micro_units(double x) {
  return static_cast<std::uint64_t>(std::llround(x * 1e6));
}

std::string shortest(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::optional<double> cell_tau_star(const Cell& cell, double epsilon) {
  const int d = effective_d(cell.m, cell.k);
  if (d < 5) return std::nullopt;
  try {
    return tau_star(d, epsilon, cell.t);
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
}

// json::get converts between number kinds silently (-1 to 2^64-1, 2.5 to 2);
// integer keys must hold integers of the right sign.
template <class T>
T scalar(const json& v, const char* key) {
  const auto bad = [&](const std::string& why) {
    return ConfigError(std::string("bad value for `") + key + "`: " + why);
  };
  if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>) {
    if (!v.is_number_integer()) throw bad("expected an integer, got " + v.dump());
    if (std::is_unsigned_v<T> && !v.is_number_unsigned()) throw bad("expected a non-negative integer");
    if (v.is_number_unsigned()) {
      if (v.get<std::uint64_t>() > static_cast<std::uint64_t>(std::numeric_limits<T>::max()))
        throw bad("out of range: " + v.dump());
    } else {
      const auto x = v.get<std::int64_t>();
      if (x < static_cast<std::int64_t>(std::numeric_limits<T>::min()) ||
          x > static_cast<std::int64_t>(std::numeric_limits<T>::max()))
        throw bad("out of range: " + v.dump());
    }
  }
  try {
    return v.get<T>();
  } catch (const json::exception& e) {
    throw bad(e.what());
  }
}

template <class T>
std::vector<T> scalar_or_array(const json& v, const char* key) {
  if (!v.is_array()) return {scalar<T>(v, key)};
  std::vector<T> out;
  for (const json& x : v) out.push_back(scalar<T>(x, key));
  return out;
}

}  // namespace

Regime regime(const Cell& cell) {
  const int d = effective_d(cell.m, cell.k);
  if (d < 5) return Regime::undefined;
  return cell.alpha < alpha_star(d) ? Regime::subcritical : Regime::supercritical;
}

std::vector<Cell> ExperimentSpec::cells() const {
  std::vector<Cell> out;
  for (auto tv : t)
    for (auto mv : m)
      for (auto dv : delta)
        for (auto kv : k)
          for (auto av : alpha) out.push_back(Cell{tv, mv, dv, kv, av});
  return out;
}

void ExperimentSpec::validate() const {
  if (t.empty() || m.empty() || delta.empty() || k.empty() || alpha.empty())
    throw ConfigError("every grid axis (t, m, delta, k, alpha) needs at least one value");
  if (trials < 1) throw ConfigError("trials must be at least 1");
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  for (const Cell& c : cells()) {
    if (c.t < 1) throw ConfigError("t must be at least 1");
    if (c.m < 1) throw ConfigError("m must be at least 1");
    if (!(c.delta > -c.m)) throw ConfigError("delta must exceed -m");
    if (theorem_mode && c.delta < 0.0)
      throw ConfigError("theorem mode needs delta >= 0, got " + shortest(c.delta));
    if (c.k < 5 || c.k % 2 == 0) throw ConfigError("k must be odd and at least 5");
    if (!(c.alpha >= 0.0 && c.alpha <= 1.0)) throw ConfigError("alpha outside [0, 1]");
    if (static_cast<std::uint64_t>(c.t) * static_cast<std::uint64_t>(c.m) > UINT32_MAX)
      throw ConfigError("m*t exceeds the supported graph size");
  }
}

ExperimentSpec spec_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");

  ExperimentSpec spec;
  for (const auto& [key, value] : doc.items()) {
    if (key == "t") {
      spec.t = scalar_or_array<std::uint32_t>(value, "t");
    } else if (key == "m") {
      spec.m = scalar_or_array<int>(value, "m");
    } else if (key == "delta") {
      spec.delta = scalar_or_array<double>(value, "delta");
    } else if (key == "k") {
      spec.k = scalar_or_array<int>(value, "k");
    } else if (key == "alpha") {
      spec.alpha = scalar_or_array<double>(value, "alpha");
    } else if (key == "trials") {
      spec.trials = scalar<std::uint64_t>(value, "trials");
    } else if (key == "base_seed") {
      spec.base_seed = scalar<std::uint64_t>(value, "base_seed");
    } else if (key == "epsilon") {
      spec.epsilon = scalar<double>(value, "epsilon");
    } else if (key == "max_steps") {
      spec.max_steps = scalar<std::uint64_t>(value, "max_steps");
    } else if (key == "theorem_mode") {
      spec.theorem_mode = scalar<bool>(value, "theorem_mode");
    } else if (key == "out") {
      spec.csv_out = scalar<std::string>(value, "out");
    } else if (key == "json_out") {
      spec.json_out = scalar<std::string>(value, "json_out");
    } else if (key == "workers") {
      spec.workers = scalar<unsigned>(value, "workers");
    } else {
      throw ConfigError("unknown config key `" + key + "`");
    }
  }
  return spec;
}

ExperimentSpec load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return spec_from_json(text.str());
}

std::uint64_t trial_seed(std::uint64_t base_seed, const Cell& cell, std::uint64_t trial) {
  return hash_words({base_seed, cell.t, static_cast<std::uint64_t>(cell.m),
                     micro_units(cell.delta), static_cast<std::uint64_t>(cell.k),
                     micro_units(cell.alpha), trial});
}

TrialRecord run_trial(const Cell& cell, std::uint64_t seed, double epsilon,
                      std::uint64_t max_steps) {
  const PAGraph g = generate_pa(cell.t, cell.m, cell.delta, hash_words({seed, kGraphTag}));
  ProtocolConfig config;
  config.k = cell.k;
  config.alpha = cell.alpha;
  config.seed = hash_words({seed, kDynamicsTag});
  config.max_steps = max_steps != 0 ? max_steps : default_max_steps(cell.t, cell.m, cell.k, epsilon);
  const Trace trace = run(g, config);
  return TrialRecord{trace.winner, trace.consensus_step, trace.steps_run};
}

CellResult aggregate(const Cell& cell, const std::vector<TrialRecord>& records, double epsilon) {
  CellResult r;
  r.cell = cell;
  r.trials = records.size();
  std::uint64_t blue = 0;
  std::uint64_t red = 0;
  std::vector<std::uint64_t> steps;
  for (const TrialRecord& rec : records) {
    if (!rec.winner) continue;
    (*rec.winner == Colour::blue ? blue : red) += 1;
    steps.push_back(*rec.consensus_step);
  }
  if (r.trials > 0) {
    const double n = static_cast<double>(r.trials);
    r.blue_rate = blue / n;
    r.red_rate = red / n;
    r.nonconv_rate = static_cast<double>(r.trials - blue - red) / n;
  }
  if (!steps.empty()) {
    std::sort(steps.begin(), steps.end());
    r.cs_p50 = nearest_rank(steps, 0.5);
    r.cs_p95 = nearest_rank(steps, 0.95);
  }
  r.tau_star = cell_tau_star(cell, epsilon);
  return r;
}

unsigned resolve_workers(std::optional<unsigned> flag) {
  if (flag && *flag > 0) return *flag;
  if (const char* env = std::getenv("PAMAJ_WORKERS")) {
    unsigned value = 0;
    const char* end = env + std::char_traits<char>::length(env);
    auto res = std::from_chars(env, end, value);
    if (res.ec == std::errc{} && res.ptr == end && value > 0) return value;
  }
  return 1;
}

SweepResult run_sweep(const ExperimentSpec& spec, unsigned workers) {
  spec.validate();
  const std::vector<Cell> cells = spec.cells();
  SweepResult result;
  result.records.assign(cells.size(), std::vector<TrialRecord>(spec.trials));

  const std::uint64_t jobs = cells.size() * spec.trials;
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::uint64_t job = next++; job < jobs; job = next++) {
      const std::size_t c = job / spec.trials;
      const std::uint64_t trial = job % spec.trials;
      try {
        result.records[c][trial] = run_trial(cells[c], trial_seed(spec.base_seed, cells[c], trial),
                                             spec.epsilon, spec.max_steps);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = jobs;
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    const unsigned n = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(jobs)));
    for (unsigned w = 1; w < n; ++w) pool.emplace_back(work);
    work();
  }
  if (failure) std::rethrow_exception(failure);

  for (std::size_t c = 0; c < cells.size(); ++c)
    result.cells.push_back(aggregate(cells[c], result.records[c], spec.epsilon));
  return result;
}

void emit_csv(const SweepResult& result, std::ostream& out) {
  out << "t,m,delta,k,alpha,trials,blue_rate,red_rate,nonconv_rate,cs_p50,cs_p95,tau_star\n";
  for (const CellResult& r : result.cells) {
    out << r.cell.t << ',' << r.cell.m << ',' << shortest(r.cell.delta) << ',' << r.cell.k << ','
        << shortest(r.cell.alpha) << ',' << r.trials << ',' << shortest(r.blue_rate) << ','
        << shortest(r.red_rate) << ',' << shortest(r.nonconv_rate) << ',';
    if (r.cs_p50) out << *r.cs_p50;
    out << ',';
    if (r.cs_p95) out << *r.cs_p95;
    out << ',';
    if (r.tau_star) out << shortest(*r.tau_star);
    out << '\n';
  }
}

namespace {

template <class T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

template <class T>
std::optional<T> optional_from(const json& v) {
  if (v.is_null()) return std::nullopt;
  return v.get<T>();
}

}  // namespace

void emit_json(const SweepResult& result, std::ostream& out) {
  json rows = json::array();
  for (const CellResult& r : result.cells) {
    rows.push_back({{"t", r.cell.t},
                    {"m", r.cell.m},
                    {"delta", r.cell.delta},
                    {"k", r.cell.k},
                    {"alpha", r.cell.alpha},
                    {"trials", r.trials},
                    {"blue_rate", r.blue_rate},
                    {"red_rate", r.red_rate},
                    {"nonconv_rate", r.nonconv_rate},
                    {"cs_p50", optional_json(r.cs_p50)},
                    {"cs_p95", optional_json(r.cs_p95)},
                    {"tau_star", optional_json(r.tau_star)}});
  }
  out << rows.dump(2) << '\n';
}

std::vector<CellResult> read_json(std::istream& in) {
  const json rows = json::parse(in);
  std::vector<CellResult> out;
  for (const json& row : rows) {
    CellResult r;
    r.cell.t = row.at("t").get<std::uint32_t>();
    r.cell.m = row.at("m").get<int>();
    r.cell.delta = row.at("delta").get<double>();
    r.cell.k = row.at("k").get<int>();
    r.cell.alpha = row.at("alpha").get<double>();
    r.trials = row.at("trials").get<std::uint64_t>();
    r.blue_rate = row.at("blue_rate").get<double>();
    r.red_rate = row.at("red_rate").get<double>();
    r.nonconv_rate = row.at("nonconv_rate").get<double>();
    r.cs_p50 = optional_from<std::uint64_t>(row.at("cs_p50"));
    r.cs_p95 = optional_from<std::uint64_t>(row.at("cs_p95"));
    r.tau_star = optional_from<double>(row.at("tau_star"));
    out.push_back(r);
  }
  return out;
}

void emit(const SweepResult& result, Format format, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  if (format == Format::csv) {
    emit_csv(result, out);
  } else {
    emit_json(result, out);
  }
  out.flush();
  if (!out) throw IoError("write to " + path.string() + " failed");
}

}  // namespace pamaj
