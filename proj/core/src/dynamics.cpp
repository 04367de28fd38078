#include "pamaj/dynamics.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>
#include <string>
#include <thread>

#include "pamaj/threshold.hpp"

namespace pamaj {

namespace {

constexpr std::uint64_t kInitTag = 0x696e6974;  // "init"

bool is_consensus(std::uint64_t red, std::uint64_t t) { return red == 0 || red == t; }

}  // namespace

std::string_view to_string(Colour c) { return c == Colour::red ? "red" : "blue"; }

std::uint64_t ColourState::red_count() const {
  return static_cast<std::uint64_t>(std::count(colours.begin(), colours.end(), std::uint8_t{1}));
}

void ProtocolConfig::validate() const {
  if (k < 5 || k % 2 == 0)
    throw std::invalid_argument("k must be odd and at least 5, got " + std::to_string(k));
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw std::invalid_argument("alpha outside [0, 1]: " + std::to_string(alpha));
  if (max_steps == 0) throw std::invalid_argument("max_steps must be positive");
}

ColourState init_colours(std::uint32_t t, double alpha, std::uint64_t seed) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw std::invalid_argument("alpha outside [0, 1]: " + std::to_string(alpha));
  Rng rng(hash_words({seed, kInitTag}));
  ColourState s;
  s.colours.resize(t);
  for (auto& c : s.colours) c = rng.uniform() < alpha ? 1 : 0;
  return s;
}

std::size_t poll_size(std::uint64_t degree, int k) {
  if (k < 1 || k % 2 == 0) throw std::invalid_argument("k must be odd");
  if (degree >= static_cast<std::uint64_t>(k)) return static_cast<std::size_t>(k);
  return static_cast<std::size_t>(degree % 2 == 1 ? degree : degree - 1);
}

void sample_poll(const PAGraph& g, Vertex v, int k, Rng& rng, std::vector<std::uint32_t>& out) {
  const std::uint64_t n = g.degree(v);
  if (n == 0) throw std::logic_error("vertex " + std::to_string(v) + " has no slots");
  const std::size_t size = poll_size(n, k);
  const std::size_t first = out.size();
  if (size == n) {
    for (std::uint32_t i = 0; i < n; ++i) out.push_back(i);
    return;
  }
  // Floyd's algorithm: uniform size-subset of {0..n-1}.
  for (std::uint64_t j = n - size; j < n; ++j) {
    const auto pick = static_cast<std::uint32_t>(rng.below(j + 1));
    const bool taken = std::find(out.begin() + static_cast<std::ptrdiff_t>(first), out.end(),
                                 pick) != out.end();
    out.push_back(taken ? static_cast<std::uint32_t>(j) : pick);
  }
}

Rng vertex_stream(std::uint64_t seed, std::uint64_t step, Vertex v) {
  return Rng(hash_words({seed, step, v}));
}

namespace {

void majority_range(const PAGraph& g, const ColourState& prev, int k, std::uint64_t seed,
                    std::uint64_t step_index, Vertex begin, Vertex end,
                    std::vector<std::uint8_t>& next) {
  std::vector<std::uint32_t> picks;
  for (Vertex v = begin; v < end; ++v) {
    Rng rng = vertex_stream(seed, step_index, v);
    picks.clear();
    sample_poll(g, v, k, rng, picks);
    assert(picks.size() % 2 == 1);
    const auto slots = g.slots(v);
    std::size_t red = 0;
    for (std::uint32_t i : picks) red += prev.colours[slots[i].neighbour];
    next[v] = 2 * red > picks.size() ? 1 : 0;
  }
}

}  // namespace

ColourState step(const PAGraph& g, const ColourState& state, int k, std::uint64_t seed,
                 unsigned workers) {
  if (state.colours.size() != g.t())
    throw std::invalid_argument("colour state does not match the graph size");
  ColourState next;
  next.step = state.step + 1;
  next.colours.resize(g.t());
  const Vertex t = g.t();
  if (workers <= 1 || t < 4096) {
    majority_range(g, state, k, seed, next.step, 0, t, next.colours);
    return next;
  }
  std::vector<std::jthread> pool;
  const Vertex chunk = (t + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const Vertex begin = std::min<Vertex>(t, w * chunk);
    const Vertex end = std::min<Vertex>(t, begin + chunk);
    if (begin == end) break;
    pool.emplace_back([&, begin, end] {
      majority_range(g, state, k, seed, next.step, begin, end, next.colours);
    });
  }
  pool.clear();
  return next;
}

ColourState voter_step(const PAGraph& g, const ColourState& state, std::uint64_t seed) {
  if (state.colours.size() != g.t())
    throw std::invalid_argument("colour state does not match the graph size");
  ColourState next;
  next.step = state.step + 1;
  next.colours.resize(g.t());
  for (Vertex v = 0; v < g.t(); ++v) {
    Rng rng = vertex_stream(seed, next.step, v);
    const auto slots = g.slots(v);
    next.colours[v] = state.colours[slots[rng.below(slots.size())].neighbour];
  }
  return next;
}

std::uint64_t default_max_steps(std::uint64_t t, int m, int k, double epsilon) {
  const int d = effective_d(m, k);
  double tau = 0.0;
  try {
    tau = tau_star(d, epsilon, t);
  } catch (const std::invalid_argument&) {
    tau = 0.0;
  }
  return 10 * static_cast<std::uint64_t>(std::ceil(tau)) + 100;
}

Trace run_from(const PAGraph& g, ColourState initial, const ProtocolConfig& config,
               Protocol protocol) {
  if (protocol == Protocol::majority) {
    config.validate();
  } else if (config.max_steps == 0) {
    throw std::invalid_argument("max_steps must be positive");
  }
  if (initial.colours.size() != g.t())
    throw std::invalid_argument("colour state does not match the graph size");

  Trace trace;
  ColourState state = std::move(initial);
  state.step = 0;
  std::uint64_t red = state.red_count();
  trace.red_counts.push_back(red);
  while (!is_consensus(red, g.t()) && trace.steps_run < config.max_steps) {
    state = protocol == Protocol::majority ? step(g, state, config.k, config.seed)
                                           : voter_step(g, state, config.seed);
    ++trace.steps_run;
    red = state.red_count();
    trace.red_counts.push_back(red);
  }
  if (is_consensus(red, g.t())) {
    trace.consensus_step = trace.steps_run;
    trace.winner = red == 0 ? Colour::blue : Colour::red;
  }
  return trace;
}

Trace run(const PAGraph& g, const ProtocolConfig& config, Protocol protocol) {
  if (!(config.alpha >= 0.0 && config.alpha <= 1.0))
    throw std::invalid_argument("alpha outside [0, 1]: " + std::to_string(config.alpha));
  return run_from(g, init_colours(g.t(), config.alpha, config.seed), config, protocol);
}

}  // namespace pamaj
