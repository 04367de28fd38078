#include "pamaj/pa_graph.hpp"

#include <bit>
#include <cassert>
#include <cmath>
#include <string>

#include "pamaj/rng.hpp"

namespace pamaj {

void PAParams::validate() const {
  if (m < 1) throw std::invalid_argument("m must be at least 1, got " + std::to_string(m));
  if (!(delta > -m) || !std::isfinite(delta))
    throw std::invalid_argument("delta must exceed -m (m=" + std::to_string(m) +
                                ", delta=" + std::to_string(delta) + ")");
}

PAGraph::PAGraph(std::uint32_t t, PAParams params, std::uint64_t seed, std::vector<Edge> edges)
    : t_(t), params_(params), seed_(seed), edges_(std::move(edges)) {
  params_.validate();
  if (t_ == 0) throw std::invalid_argument("graph must have at least one vertex");
  const auto m = static_cast<std::uint64_t>(params_.m);
  if (edges_.size() != m * t_)
    throw GraphFormatError("expected " + std::to_string(m * t_) + " edges, found " +
                           std::to_string(edges_.size()));

  std::vector<std::size_t> degree(t_, 0);
  for (std::size_t j = 0; j < edges_.size(); ++j) {
    const Edge& e = edges_[j];
    if (e.child != j / m)
      throw GraphFormatError("edge " + std::to_string(j) + " belongs to vertex " +
                             std::to_string(j / m) + " but names child " +
                             std::to_string(e.child));
    if (e.target > e.child)
      throw GraphFormatError("edge (" + std::to_string(e.child) + ", " +
                             std::to_string(e.target) + ") attaches to a later vertex");
    ++degree[e.child];
    ++degree[e.target];
  }

  offsets_.assign(t_ + 1, 0);
  for (Vertex v = 0; v < t_; ++v) offsets_[v + 1] = offsets_[v] + degree[v];
  slots_.resize(offsets_[t_]);
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (std::size_t j = 0; j < edges_.size(); ++j) {
    const Edge& e = edges_[j];
    const auto id = static_cast<std::uint32_t>(j);
    slots_[fill[e.child]++] = Slot{e.target, id};
    slots_[fill[e.target]++] = Slot{e.child, id};
  }
}

DegreeStats degree_stats(const PAGraph& g) {
  DegreeStats s;
  s.degree.resize(g.t());
  s.prefix.resize(g.t());
  std::uint64_t running = 0;
  for (Vertex v = 0; v < g.t(); ++v) {
    s.degree[v] = g.degree(v);
    running += s.degree[v];
    s.prefix[v] = running;
  }
  return s;
}

namespace {

// Fenwick tree over integer degrees. Each node also knows how many vertices
// it covers, so the descent can search the weights D_i + delta exactly even
// though delta is real and possibly negative.
class DegreeFenwick {
 public:
  explicit DegreeFenwick(std::uint32_t capacity) : tree_(capacity + 1, 0) {
    top_ = std::bit_floor(static_cast<std::uint32_t>(tree_.size() - 1));
  }

  void add(std::uint32_t index, std::uint64_t amount) {
    for (std::uint32_t i = index + 1; i < tree_.size(); i += i & (0 - i)) tree_[i] += amount;
  }

  /// Smallest index j < count with sum_{i<=j} (D_i + delta) > x.
  std::uint32_t find(double x, double delta, std::uint32_t count) const {
    std::uint32_t pos = 0;
    for (std::uint32_t step = top_; step != 0; step >>= 1) {
      const std::uint32_t next = pos + step;
      if (next > count) continue;
      const double w = static_cast<double>(tree_[next]) + step * delta;
      if (w <= x) {
        x -= w;
        pos = next;
      }
    }
    // Rounding can push x past the final prefix; clamp to the last vertex.
    return pos < count ? pos : count - 1;
  }

 private:
  std::vector<std::uint64_t> tree_;
  std::uint32_t top_;
};

}  // namespace

PAGraph generate_pa1(std::uint32_t t, double delta, std::uint64_t seed) {
  if (t == 0) throw std::invalid_argument("t must be at least 1");
  PAParams params{1, delta};
  params.validate();

  Rng rng(seed);
  std::vector<Edge> edges;
  edges.reserve(t);
  edges.push_back({0, 0});

  const double self_weight = 1.0 + delta;
  if (delta >= 0.0) {
    // Mixture form of the attachment law: a uniform edge-endpoint (weight 2s,
    // i.e. proportional to degree), a uniform existing vertex (weight s*delta),
    // or the new vertex itself (weight 1+delta).
    std::vector<Vertex> endpoints;
    endpoints.reserve(2 * static_cast<std::size_t>(t));
    endpoints.push_back(0);
    endpoints.push_back(0);
    for (std::uint32_t s = 1; s < t; ++s) {
      const double by_degree = 2.0 * s;
      const double by_offset = s * delta;
      const double total = s * (2.0 + delta) + self_weight;
      assert(std::abs(by_degree + by_offset + self_weight - total) <= 1e-12 * total);
      const double x = rng.uniform() * total;
      Vertex target;
      if (x < by_degree) {
        target = endpoints[rng.below(endpoints.size())];
      } else if (x < by_degree + by_offset) {
        target = static_cast<Vertex>(rng.below(s));
      } else {
        target = s;
      }
      edges.push_back({s, target});
      endpoints.push_back(s);
      endpoints.push_back(target);
    }
  } else {
    DegreeFenwick fenwick(t);
    fenwick.add(0, 2);
    for (std::uint32_t s = 1; s < t; ++s) {
      const double existing = 2.0 * s + s * delta;
      const double total = s * (2.0 + delta) + self_weight;
      assert(std::abs(existing + self_weight - total) <= 1e-12 * total);
      const double x = rng.uniform() * total;
      const Vertex target = x < existing ? fenwick.find(x, delta, s) : s;
      edges.push_back({s, target});
      fenwick.add(s, 1);
      fenwick.add(target, 1);
    }
  }
  return PAGraph(t, params, seed, std::move(edges));
}

namespace {

PAGraph contract_with(const PAGraph& g, int m, double delta) {
  if (g.params().m != 1) throw std::invalid_argument("contract expects an m=1 graph");
  if (m < 1) throw std::invalid_argument("m must be at least 1");
  const auto block = static_cast<std::uint32_t>(m);
  if (g.t() % block != 0)
    throw std::invalid_argument("vertex count " + std::to_string(g.t()) +
                                " is not divisible by m=" + std::to_string(m));
  std::vector<Edge> edges;
  edges.reserve(g.edges().size());
  for (const Edge& e : g.edges()) edges.push_back({e.child / block, e.target / block});
  return PAGraph(g.t() / block, PAParams{m, delta}, g.seed(), std::move(edges));
}

}  // namespace

PAGraph contract(const PAGraph& g, int m) { return contract_with(g, m, g.params().delta * m); }

PAGraph generate_pa(std::uint32_t t, int m, double delta, std::uint64_t seed) {
  PAParams{m, delta}.validate();
  if (t == 0) throw std::invalid_argument("t must be at least 1");
  const std::uint64_t total = static_cast<std::uint64_t>(t) * static_cast<std::uint64_t>(m);
  if (total > UINT32_MAX) throw std::invalid_argument("m*t exceeds the supported vertex range");
  return contract_with(generate_pa1(static_cast<std::uint32_t>(total), delta / m, seed), m, delta);
}

std::uint64_t degree_evolution_urn(Vertex v, int a, std::uint32_t t, const PAParams& params,
                                   std::uint64_t seed) {
  params.validate();
  if (a < params.m || a > 2 * params.m)
    throw std::invalid_argument("initial degree a=" + std::to_string(a) + " outside [m, 2m]");
  if (v >= t) throw std::invalid_argument("vertex outside the graph");

  const auto m = static_cast<std::uint64_t>(params.m);
  const double sub_delta = params.delta / params.m;
  const std::uint64_t core = static_cast<std::uint64_t>(v) + 1;

  Rng rng(seed);
  std::uint64_t red = static_cast<std::uint64_t>(a);
  std::uint64_t black = 2 * m * core - red;
  const double black_offset = static_cast<double>(v) * params.delta;
  for (std::uint64_t s = m * core; s < m * t; ++s) {
    const double total = s * (2.0 + sub_delta) + (1.0 + sub_delta);
    const double red_weight = static_cast<double>(red) + params.delta;
    const double black_weight = static_cast<double>(black) + black_offset;
    const double x = rng.uniform() * total;
    if (x < red_weight) {
      ++red;
    } else if (x < red_weight + black_weight) {
      ++black;
    }
  }
  return red;
}

}  // namespace pamaj
