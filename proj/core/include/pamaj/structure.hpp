#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "pamaj/pa_graph.hpp"

namespace pamaj {

/// Core cutoffs and the short-structure radius. Vertex v is heavy when
/// v < kappa (the first kappa arrivals) and lies in the outer core when
/// v < kappa_o.
struct StructureParams {
  std::uint32_t omega = 3;
  std::uint32_t kappa = 1;
  std::uint32_t kappa_o = 1;
  double gamma = 0.5;

  bool heavy(Vertex v) const { return v < kappa; }
  void validate(std::uint32_t t) const;
};

/// kappa = ceil(t^0.3), kappa_o = ceil(t^0.5), omega = 3, gamma from the graph.
StructureParams default_structure_params(const PAGraph& g);

/// A vertex set with a list of edge ids into PAGraph::edges(). Vertex lists
/// are sorted; edge lists are sorted and free of duplicates.
struct Subgraph {
  std::vector<Vertex> vertices;
  std::vector<std::uint32_t> edges;

  bool contains(Vertex v) const;
};

/// All vertices within distance r of v, with every edge of g joining two of
/// them (loops and parallel edges included). Distances ignore multiplicity.
Subgraph ball(const PAGraph& g, Vertex v, std::uint32_t r);

enum class BallCategory {
  tree_all_light,
  acyclic_with_few_heavy,
  root_on_light_cycle,
  light_cycle_via_path,
  other,
};

std::string_view to_string(BallCategory c);

struct TruncatedBall {
  Vertex root = 0;
  std::uint32_t radius = 0;
  std::vector<Vertex> component;           // root's light component after core edges are cut
  std::vector<std::uint32_t> light_edges;  // edges of the ball inside `component`
  std::vector<std::uint32_t> core_edges;   // re-added edges from the core into `component`
  std::vector<Vertex> heavy;               // core vertices touched by `core_edges`
  BallCategory category = BallCategory::other;

  /// Union of light_edges and core_edges.
  std::vector<std::uint32_t> edges() const;
};

/// Cuts every edge of ball(v, r) at a heavy vertex, keeps the root's
/// component, then re-attaches the cut edges from heavy vertices into that
/// component, and classifies the result. Categories are tested in the order
/// listed in BallCategory; the first that matches wins:
///  - tree_all_light: no cycle at all and no heavy vertex;
///  - acyclic_with_few_heavy: no cycle, one or two heavy vertices;
///  - root_on_light_cycle: the light part has exactly one cycle, it is short
///    (at most 2*omega+1 vertices), v lies on it, and no edge at v outside
///    the cycle leads to a heavy vertex;
///  - light_cycle_via_path: the light part has exactly one short cycle, v
///    reaches it by a light path P of length at most omega, and at most one
///    edge slot at v outside P leads to a heavy vertex;
///  - other: anything else.
/// Throws if v is heavy.
TruncatedBall truncated_ball(const PAGraph& g, Vertex v, std::uint32_t r,
                             const StructureParams& params);

/// Cyclomatic number of the light part of ball(v, r): |E| - |V| + components,
/// where loops and parallel pairs each count as a cycle. Throws if v is heavy.
std::uint64_t light_cycle_census(const PAGraph& g, Vertex v, std::uint32_t r,
                                 const StructureParams& params);

/// Number of edges at v (loops excluded, parallel edges counted separately)
/// lying on a path of length at most r from v into the inner core. Requires
/// v >= kappa_o.
std::uint64_t short_paths_into_core(const PAGraph& g, Vertex v, std::uint32_t r,
                                    const StructureParams& params);

/// Outer-core vertices whose degree is below (t/kappa_o)^gamma / kappa_o^2.
std::vector<Vertex> outer_core_degree_check(const PAGraph& g, const StructureParams& params);

/// Cyclomatic number of the multigraph on `vertices` using `edges` (ids into
/// g.edges(); both endpoints of every edge must be in `vertices`).
std::uint64_t cyclomatic_number(const PAGraph& g, const std::vector<Vertex>& vertices,
                                const std::vector<std::uint32_t>& edges);

struct RootReport {
  Vertex root = 0;
  BallCategory category = BallCategory::other;
  std::uint64_t light_cycles = 0;
  std::optional<std::uint64_t> core_edges;  // set for roots >= kappa_o
};

struct StructureSummary {
  std::uint64_t samples = 0;
  std::uint64_t outer_samples = 0;  // sampled roots >= kappa_o
  std::uint64_t multi_light_cycles = 0;
  std::uint64_t core_edges_ge3 = 0;
  std::uint64_t category_counts[5] = {};

  double multi_light_cycle_rate() const;
  double core_edge_violation_rate() const;
  double other_rate() const;
};

struct StructureScan {
  std::vector<RootReport> roots;
  StructureSummary summary;
};

/// Uniformly samples `samples` light roots (with replacement) and reports the
/// truncated-ball category, light cycle count and core-path edge count of
/// each, all at ball radius r. Deterministic given the seed.
StructureScan scan_structure(const PAGraph& g, const StructureParams& params, std::uint32_t r,
                             std::uint64_t samples, std::uint64_t seed);

}  // namespace pamaj
