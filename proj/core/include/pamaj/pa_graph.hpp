#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace pamaj {

/// Vertices are numbered 0..t-1 in arrival order. Vertex v here is vertex
/// v+1 in the usual 1-based notation [t] = {1, ..., t}.
using Vertex = std::uint32_t;

class GraphFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PAParams {
  int m = 1;           // edges per arriving vertex
  double delta = 0.0;  // attachment offset, delta > -m

  /// Degree-growth exponent 1 / (2 + delta/m); lies in (0, 1) whenever delta > -m.
  double gamma() const { return 1.0 / (2.0 + delta / m); }

  void validate() const;

  bool operator==(const PAParams&) const = default;
};

/// One growth step: `child` threw an edge that landed on `target`.
/// target <= child always; target == child is a self-loop.
struct Edge {
  Vertex child = 0;
  Vertex target = 0;

  bool is_loop() const { return child == target; }
  bool operator==(const Edge&) const = default;
};

/// An incident edge-endpoint of a vertex. A self-loop yields two slots, both
/// pointing back at the vertex itself; parallel edges yield one slot each.
struct Slot {
  Vertex neighbour = 0;
  std::uint32_t edge = 0;  // index into PAGraph::edges()
};

/// The preferential attachment multigraph PA_t(m, delta).
///
/// Immutable once built; the constructor checks the arrival-order invariants
/// (m edges per vertex, listed in arrival order, target <= child) and builds
/// a CSR table of slots.
class PAGraph {
 public:
  PAGraph(std::uint32_t t, PAParams params, std::uint64_t seed, std::vector<Edge> edges);

  std::uint32_t t() const { return t_; }
  const PAParams& params() const { return params_; }
  std::uint64_t seed() const { return seed_; }
  const std::vector<Edge>& edges() const { return edges_; }

  std::uint64_t degree(Vertex v) const { return offsets_[v + 1] - offsets_[v]; }
  std::span<const Slot> slots(Vertex v) const {
    return {slots_.data() + offsets_[v], slots_.data() + offsets_[v + 1]};
  }
  std::uint64_t total_degree() const { return slots_.size(); }

  /// Equality of the generated object: size, parameters, seed and the exact
  /// edge sequence (order and multiplicity).
  bool operator==(const PAGraph& other) const {
    return t_ == other.t_ && params_ == other.params_ && seed_ == other.seed_ &&
           edges_ == other.edges_;
  }

 private:
  std::uint32_t t_;
  PAParams params_;
  std::uint64_t seed_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_;
  std::vector<Slot> slots_;
};

struct DegreeStats {
  std::vector<std::uint64_t> degree;  // D_v(t)
  std::vector<std::uint64_t> prefix;  // prefix[v] = sum of degrees of vertices 0..v
};

DegreeStats degree_stats(const PAGraph& g);

/// PA_t(1, delta): starts from one vertex with a self-loop; vertex s (s >= 1)
/// attaches to itself with weight 1+delta and to existing vertex i with
/// weight D_i(s)+delta. Requires t >= 1 and delta > -1.
PAGraph generate_pa1(std::uint32_t t, double delta, std::uint64_t seed);

/// Merges consecutive blocks {v*m, ..., v*m+m-1} of an m=1 graph into single
/// vertices, keeping every loop and parallel edge. The input offset is taken
/// to be delta/m, so the result carries offset m * g.params().delta.
PAGraph contract(const PAGraph& g, int m);

/// PA_t(m, delta) = contract(PA_{mt}(1, delta/m), m).
PAGraph generate_pa(std::uint32_t t, int m, double delta, std::uint64_t seed);

/// Samples D_v(t) for vertex v of PA_t(m, delta) given D_v(v+1) = a, through
/// the two-colour weighted urn: a red balls (the degree of v) and 2m(v+1)-a
/// black balls (the rest of the core {0..v}), with red weight R+delta and
/// black weight B+v*delta. Each later m=1 growth step adds a ball to the urn
/// with probability equal to the weight of the core over the total
/// attachment weight, which is a deterministic function of the step; this
/// reproduces the joint law of (D_v(t), S_v(t)) of direct generation.
std::uint64_t degree_evolution_urn(Vertex v, int a, std::uint32_t t, const PAParams& params,
                                   std::uint64_t seed);

/// Plain text: header `t m delta seed`, then m*t lines `child target` in
/// arrival order.
void save(const PAGraph& g, const std::filesystem::path& path);
void save(const PAGraph& g, std::ostream& out);
PAGraph load(const std::filesystem::path& path);
PAGraph load(std::istream& in);

}  // namespace pamaj
