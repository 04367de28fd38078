#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "pamaj/pa_graph.hpp"
#include "pamaj/rng.hpp"

namespace pamaj {

enum class Colour : std::uint8_t { blue = 0, red = 1 };

std::string_view to_string(Colour c);

struct ColourState {
  std::vector<std::uint8_t> colours;  // 1 = red, 0 = blue
  std::uint64_t step = 0;

  std::uint64_t red_count() const;
  bool operator==(const ColourState&) const = default;
};

struct ProtocolConfig {
  int k = 5;           // odd, >= 5
  double alpha = 0.0;  // initial red probability
  std::uint64_t seed = 0;
  std::uint64_t max_steps = 100;

  void validate() const;
};

enum class Protocol { majority, voter };

struct Trace {
  std::vector<std::uint64_t> red_counts;  // index = step, starting at 0
  std::optional<std::uint64_t> consensus_step;
  std::optional<Colour> winner;
  std::uint64_t steps_run = 0;
};

/// Each vertex red independently with probability alpha.
ColourState init_colours(std::uint32_t t, double alpha, std::uint64_t seed);

/// Number of slots MP^k polls at a vertex of the given degree: k when the
/// degree allows it, otherwise the largest odd number not above the degree.
std::size_t poll_size(std::uint64_t degree, int k);

/// Appends to `out` the positions (within g.slots(v)) of a uniform sample,
/// without replacement, of poll_size(deg(v), k) slots of v.
void sample_poll(const PAGraph& g, Vertex v, int k, Rng& rng, std::vector<std::uint32_t>& out);

/// Randomness for vertex v at step `step` of a trial with the given seed.
/// Keyed per (vertex, step) so updates are independent of evaluation order.
Rng vertex_stream(std::uint64_t seed, std::uint64_t step, Vertex v);

/// One synchronous MP^k round: every vertex takes the strict majority of the
/// previous colours on its polled slots. `workers` > 1 splits vertices over
/// threads; the result does not depend on it.
ColourState step(const PAGraph& g, const ColourState& state, int k, std::uint64_t seed,
                 unsigned workers = 1);

/// One synchronous voter round: every vertex copies the previous colour of
/// one uniformly chosen slot.
ColourState voter_step(const PAGraph& g, const ColourState& state, std::uint64_t seed);

/// Default step budget 10 * ceil(tau*) + 100, with tau* for epsilon and
/// d = effective_d(m, k); tau* is taken as 0 where it is undefined.
std::uint64_t default_max_steps(std::uint64_t t, int m, int k, double epsilon = 0.1);

/// Colours from init_colours(t, alpha, seed), then rounds until one colour
/// remains or max_steps rounds have run.
Trace run(const PAGraph& g, const ProtocolConfig& config, Protocol protocol = Protocol::majority);

/// Same as run, from a given initial state (its step is taken as 0).
Trace run_from(const PAGraph& g, ColourState initial, const ProtocolConfig& config,
               Protocol protocol = Protocol::majority);

}  // namespace pamaj
