#include "pamaj/structure.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>

#include "pamaj/rng.hpp"

namespace pamaj {

void StructureParams::validate(std::uint32_t t) const {
  if (omega < 1) throw std::invalid_argument("omega must be at least 1");
  if (kappa < 1 || kappa > kappa_o || kappa_o > t)
    throw std::invalid_argument("need 1 <= kappa <= kappa_o <= t (kappa=" +
                                std::to_string(kappa) + ", kappa_o=" + std::to_string(kappa_o) +
                                ", t=" + std::to_string(t) + ")");
}

StructureParams default_structure_params(const PAGraph& g) {
  const double t = g.t();
  StructureParams p;
  p.omega = 3;
  p.kappa = static_cast<std::uint32_t>(std::ceil(std::pow(t, 0.3)));
  p.kappa_o = static_cast<std::uint32_t>(std::ceil(std::pow(t, 0.5)));
  p.kappa_o = std::min(p.kappa_o, g.t());
  p.kappa = std::min(p.kappa, p.kappa_o);
  p.gamma = g.params().gamma();
  return p;
}

bool Subgraph::contains(Vertex v) const {
  return std::binary_search(vertices.begin(), vertices.end(), v);
}

std::string_view to_string(BallCategory c) {
  switch (c) {
    case BallCategory::tree_all_light:
      return "tree-all-light";
    case BallCategory::acyclic_with_few_heavy:
      return "acyclic-with-1-or-2-heavy";
    case BallCategory::root_on_light_cycle:
      return "root-on-light-cycle";
    case BallCategory::light_cycle_via_path:
      return "light-cycle-via-path";
    case BallCategory::other:
      return "other";
  }
  return "other";
}

std::vector<std::uint32_t> TruncatedBall::edges() const {
  std::vector<std::uint32_t> all;
  all.reserve(light_edges.size() + core_edges.size());
  std::merge(light_edges.begin(), light_edges.end(), core_edges.begin(), core_edges.end(),
             std::back_inserter(all));
  return all;
}

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[b] = a;
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

// Small multigraph on a sorted vertex list, addressed by local index.
class LocalGraph {
 public:
  using Arc = std::pair<std::uint32_t, std::uint32_t>;  // local neighbour, edge id

  LocalGraph(const PAGraph& g, std::vector<Vertex> vertices,
             const std::vector<std::uint32_t>& edges)
      : vertices_(std::move(vertices)), adj_(vertices_.size()) {
    for (std::uint32_t id : edges) {
      const Edge& e = g.edges()[id];
      const std::uint32_t a = index(e.child);
      const std::uint32_t b = index(e.target);
      adj_[a].emplace_back(b, id);
      adj_[b].emplace_back(a, id);
    }
  }

  std::uint32_t index(Vertex v) const {
    auto it = std::lower_bound(vertices_.begin(), vertices_.end(), v);
    if (it == vertices_.end() || *it != v) throw std::logic_error("vertex not in local graph");
    return static_cast<std::uint32_t>(it - vertices_.begin());
  }

  Vertex vertex(std::uint32_t i) const { return vertices_[i]; }
  std::size_t size() const { return vertices_.size(); }
  const std::vector<Arc>& arcs(std::uint32_t i) const { return adj_[i]; }

 private:
  std::vector<Vertex> vertices_;
  std::vector<std::vector<Arc>> adj_;
};

void require_light(Vertex v, const StructureParams& params) {
  if (params.heavy(v))
    throw std::invalid_argument("root " + std::to_string(v) + " is heavy (kappa=" +
                                std::to_string(params.kappa) + ")");
}

// Whether the part of `tb` reachable from `start` without passing through
// `avoid` contains a heavy vertex.
bool reaches_heavy(const LocalGraph& tb, std::uint32_t start, std::uint32_t avoid,
                   const StructureParams& params) {
  std::vector<char> seen(tb.size(), 0);
  std::deque<std::uint32_t> queue{start};
  seen[start] = 1;
  seen[avoid] = 1;
  while (!queue.empty()) {
    const std::uint32_t i = queue.front();
    queue.pop_front();
    if (params.heavy(tb.vertex(i))) return true;
    for (auto [j, id] : tb.arcs(i)) {
      if (!seen[j]) {
        seen[j] = 1;
        queue.push_back(j);
      }
    }
  }
  return false;
}

BallCategory classify(const PAGraph& g, const TruncatedBall& tb, const StructureParams& params) {
  std::vector<Vertex> all_vertices;
  std::merge(tb.component.begin(), tb.component.end(), tb.heavy.begin(), tb.heavy.end(),
             std::back_inserter(all_vertices));
  const auto all_edges = tb.edges();
  const std::uint64_t cycles_all = cyclomatic_number(g, all_vertices, all_edges);
  if (cycles_all == 0 && tb.heavy.empty()) return BallCategory::tree_all_light;
  if (cycles_all == 0 && tb.heavy.size() <= 2) return BallCategory::acyclic_with_few_heavy;

  const std::uint64_t cycles_light = cyclomatic_number(g, tb.component, tb.light_edges);
  if (cycles_light != 1) return BallCategory::other;

  // The light part is connected and unicyclic: peeling leaves leaves the cycle.
  const LocalGraph light(g, tb.component, tb.light_edges);
  std::vector<std::size_t> degree(light.size());
  std::vector<char> removed(light.size(), 0);
  std::deque<std::uint32_t> leaves;
  for (std::uint32_t i = 0; i < light.size(); ++i) {
    degree[i] = light.arcs(i).size();
    if (degree[i] <= 1) leaves.push_back(i);
  }
  while (!leaves.empty()) {
    const std::uint32_t i = leaves.front();
    leaves.pop_front();
    removed[i] = 1;
    for (auto [j, id] : light.arcs(i)) {
      if (!removed[j] && --degree[j] == 1) leaves.push_back(j);
    }
  }
  std::vector<std::uint32_t> cycle_edges;
  std::size_t cycle_size = 0;
  for (std::uint32_t i = 0; i < light.size(); ++i) {
    if (removed[i]) continue;
    ++cycle_size;
    for (auto [j, id] : light.arcs(i))
      if (!removed[j]) cycle_edges.push_back(id);
  }
  std::sort(cycle_edges.begin(), cycle_edges.end());
  cycle_edges.erase(std::unique(cycle_edges.begin(), cycle_edges.end()), cycle_edges.end());
  if (cycle_size > 2 * static_cast<std::size_t>(params.omega) + 1) return BallCategory::other;

  const LocalGraph whole(g, all_vertices, all_edges);
  const std::uint32_t root = whole.index(tb.root);
  const std::uint32_t light_root = light.index(tb.root);

  // Edge slots at the root, other than `allowed`, whose branch meets the core.
  auto heavy_branches = [&](auto&& allowed) {
    std::size_t count = 0;
    for (auto [j, id] : whole.arcs(root)) {
      if (j == root || allowed(id)) continue;
      if (reaches_heavy(whole, j, root, params)) ++count;
    }
    return count;
  };

  if (!removed[light_root]) {
    const auto on_cycle = [&](std::uint32_t id) {
      return std::binary_search(cycle_edges.begin(), cycle_edges.end(), id);
    };
    return heavy_branches(on_cycle) == 0 ? BallCategory::root_on_light_cycle
                                         : BallCategory::other;
  }

  // Shortest light path from the root to the cycle; its first edge is the
  // only edge at the root that lies on it.
  std::vector<std::uint32_t> dist(light.size(), UINT32_MAX);
  std::vector<std::uint32_t> first_edge(light.size(), UINT32_MAX);
  std::deque<std::uint32_t> queue{light_root};
  dist[light_root] = 0;
  std::uint32_t path_length = UINT32_MAX;
  std::uint32_t path_edge = UINT32_MAX;
  while (!queue.empty()) {
    const std::uint32_t i = queue.front();
    queue.pop_front();
    if (!removed[i]) {
      path_length = dist[i];
      path_edge = first_edge[i];
      break;
    }
    for (auto [j, id] : light.arcs(i)) {
      if (dist[j] != UINT32_MAX) continue;
      dist[j] = dist[i] + 1;
      first_edge[j] = i == light_root ? id : first_edge[i];
      queue.push_back(j);
    }
  }
  if (path_length > params.omega) return BallCategory::other;
  const auto on_path = [&](std::uint32_t id) { return id == path_edge; };
  return heavy_branches(on_path) <= 1 ? BallCategory::light_cycle_via_path : BallCategory::other;
}

}  // namespace

Subgraph ball(const PAGraph& g, Vertex v, std::uint32_t r) {
  if (v >= g.t()) throw std::invalid_argument("vertex outside the graph");
  std::unordered_map<Vertex, std::uint32_t> dist{{v, 0}};
  std::vector<Vertex> frontier{v};
  for (std::uint32_t d = 1; d <= r && !frontier.empty(); ++d) {
    std::vector<Vertex> next;
    for (Vertex u : frontier) {
      for (const Slot& s : g.slots(u)) {
        if (dist.emplace(s.neighbour, d).second) next.push_back(s.neighbour);
      }
    }
    frontier = std::move(next);
  }

  Subgraph out;
  out.vertices.reserve(dist.size());
  for (const auto& [u, d] : dist) out.vertices.push_back(u);
  std::sort(out.vertices.begin(), out.vertices.end());
  for (Vertex u : out.vertices) {
    for (const Slot& s : g.slots(u)) {
      // Each edge is listed from its child's side (twice for a loop).
      if (g.edges()[s.edge].child == u && dist.count(s.neighbour)) out.edges.push_back(s.edge);
    }
  }
  std::sort(out.edges.begin(), out.edges.end());
  out.edges.erase(std::unique(out.edges.begin(), out.edges.end()), out.edges.end());
  return out;
}

std::uint64_t cyclomatic_number(const PAGraph& g, const std::vector<Vertex>& vertices,
                                const std::vector<std::uint32_t>& edges) {
  DisjointSets sets(vertices.size());
  auto index = [&](Vertex v) {
    auto it = std::lower_bound(vertices.begin(), vertices.end(), v);
    if (it == vertices.end() || *it != v) throw std::logic_error("edge leaves the vertex set");
    return static_cast<std::size_t>(it - vertices.begin());
  };
  std::uint64_t cycles = 0;
  for (std::uint32_t id : edges) {
    const Edge& e = g.edges()[id];
    if (!sets.unite(index(e.child), index(e.target))) ++cycles;
  }
  return cycles;
}

TruncatedBall truncated_ball(const PAGraph& g, Vertex v, std::uint32_t r,
                             const StructureParams& params) {
  params.validate(g.t());
  require_light(v, params);
  const Subgraph b = ball(g, v, r);

  std::vector<std::uint32_t> light_edges;
  for (std::uint32_t id : b.edges) {
    const Edge& e = g.edges()[id];
    if (!params.heavy(e.child) && !params.heavy(e.target)) light_edges.push_back(id);
  }
  const LocalGraph cut(g, b.vertices, light_edges);

  std::vector<char> in_component(cut.size(), 0);
  std::deque<std::uint32_t> queue{cut.index(v)};
  in_component[queue.front()] = 1;
  while (!queue.empty()) {
    const std::uint32_t i = queue.front();
    queue.pop_front();
    for (auto [j, id] : cut.arcs(i)) {
      if (!in_component[j]) {
        in_component[j] = 1;
        queue.push_back(j);
      }
    }
  }
  auto member = [&](Vertex u) { return in_component[cut.index(u)] != 0; };

  TruncatedBall tb;
  tb.root = v;
  tb.radius = r;
  for (std::uint32_t i = 0; i < cut.size(); ++i)
    if (in_component[i]) tb.component.push_back(cut.vertex(i));
  for (std::uint32_t id : light_edges)
    if (member(g.edges()[id].child)) tb.light_edges.push_back(id);
  for (std::uint32_t id : b.edges) {
    const Edge& e = g.edges()[id];
    const bool hc = params.heavy(e.child);
    const bool ht = params.heavy(e.target);
    if (hc == ht) continue;
    const Vertex light_end = hc ? e.target : e.child;
    if (member(light_end)) {
      tb.core_edges.push_back(id);
      tb.heavy.push_back(hc ? e.child : e.target);
    }
  }
  std::sort(tb.heavy.begin(), tb.heavy.end());
  tb.heavy.erase(std::unique(tb.heavy.begin(), tb.heavy.end()), tb.heavy.end());
  tb.category = classify(g, tb, params);
  return tb;
}

std::uint64_t light_cycle_census(const PAGraph& g, Vertex v, std::uint32_t r,
                                 const StructureParams& params) {
  params.validate(g.t());
  require_light(v, params);
  const Subgraph b = ball(g, v, r);
  std::vector<Vertex> light;
  for (Vertex u : b.vertices)
    if (!params.heavy(u)) light.push_back(u);
  std::vector<std::uint32_t> edges;
  for (std::uint32_t id : b.edges) {
    const Edge& e = g.edges()[id];
    if (!params.heavy(e.child) && !params.heavy(e.target)) edges.push_back(id);
  }
  return cyclomatic_number(g, light, edges);
}

std::uint64_t short_paths_into_core(const PAGraph& g, Vertex v, std::uint32_t r,
                                    const StructureParams& params) {
  params.validate(g.t());
  if (v >= g.t()) throw std::invalid_argument("vertex outside the graph");
  if (v < params.kappa_o)
    throw std::invalid_argument("vertex " + std::to_string(v) + " lies in the outer core");
  if (r == 0) return 0;

  // Whether u reaches the core within `budget` steps without visiting v.
  auto near_core = [&](Vertex u, std::uint32_t budget) {
    if (params.heavy(u)) return true;
    std::unordered_map<Vertex, std::uint32_t> seen{{v, 0}, {u, 0}};
    std::vector<Vertex> frontier{u};
    for (std::uint32_t d = 1; d <= budget && !frontier.empty(); ++d) {
      std::vector<Vertex> next;
      for (Vertex x : frontier) {
        for (const Slot& s : g.slots(x)) {
          if (!seen.emplace(s.neighbour, d).second) continue;
          if (params.heavy(s.neighbour)) return true;
          next.push_back(s.neighbour);
        }
      }
      frontier = std::move(next);
    }
    return false;
  };

  std::unordered_map<Vertex, bool> cache;
  std::uint64_t count = 0;
  for (const Slot& s : g.slots(v)) {
    if (s.neighbour == v) continue;
    auto it = cache.find(s.neighbour);
    if (it == cache.end()) it = cache.emplace(s.neighbour, near_core(s.neighbour, r - 1)).first;
    if (it->second) ++count;
  }
  return count;
}

std::vector<Vertex> outer_core_degree_check(const PAGraph& g, const StructureParams& params) {
  params.validate(g.t());
  const double ko = params.kappa_o;
  const double threshold = std::pow(g.t() / ko, params.gamma) / (ko * ko);
  std::vector<Vertex> violating;
  for (Vertex i = 0; i < params.kappa_o; ++i)
    if (static_cast<double>(g.degree(i)) < threshold) violating.push_back(i);
  return violating;
}

double StructureSummary::multi_light_cycle_rate() const {
  return samples == 0 ? 0.0 : static_cast<double>(multi_light_cycles) / samples;
}

double StructureSummary::core_edge_violation_rate() const {
  return outer_samples == 0 ? 0.0 : static_cast<double>(core_edges_ge3) / outer_samples;
}

double StructureSummary::other_rate() const {
  return samples == 0
             ? 0.0
             : static_cast<double>(category_counts[static_cast<int>(BallCategory::other)]) /
                   samples;
}

StructureScan scan_structure(const PAGraph& g, const StructureParams& params, std::uint32_t r,
                             std::uint64_t samples, std::uint64_t seed) {
  params.validate(g.t());
  if (params.kappa >= g.t()) throw std::invalid_argument("no light vertices to sample");
  Rng rng(hash_words({seed, 0x73747275ULL}));
  StructureScan scan;
  scan.roots.reserve(samples);
  for (std::uint64_t i = 0; i < samples; ++i) {
    const auto v = static_cast<Vertex>(params.kappa + rng.below(g.t() - params.kappa));
    RootReport report;
    report.root = v;
    report.category = truncated_ball(g, v, r, params).category;
    report.light_cycles = light_cycle_census(g, v, r, params);
    if (v >= params.kappa_o) report.core_edges = short_paths_into_core(g, v, r, params);

    auto& s = scan.summary;
    ++s.samples;
    ++s.category_counts[static_cast<int>(report.category)];
    if (report.light_cycles >= 2) ++s.multi_light_cycles;
    if (report.core_edges) {
      ++s.outer_samples;
      if (*report.core_edges >= 3) ++s.core_edges_ge3;
    }
    scan.roots.push_back(report);
  }
  return scan;
}

}  // namespace pamaj
