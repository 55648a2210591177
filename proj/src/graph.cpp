#include "thermolab/graph.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace thermolab {

SiteGraph::SiteGraph(int n_sites, std::vector<std::vector<int>> edges, SystemKind kind,
                     std::vector<int> local_dims)
    : n_sites_(n_sites), kind_(kind), local_dims_(std::move(local_dims)) {
  if (n_sites <= 0) throw precondition_error("SiteGraph: n_sites must be positive");
  if (local_dims_.empty()) local_dims_.assign(n_sites, 2);
  if (static_cast<int>(local_dims_.size()) != n_sites)
    throw precondition_error("SiteGraph: local_dims size mismatch");
  for (int d : local_dims_)
    if (d < 2) throw precondition_error("SiteGraph: local dimensions must be >= 2");
  if (kind_ == SystemKind::fermion)
    for (int d : local_dims_)
      if (d != 2) throw precondition_error("SiteGraph: fermionic modes have local dimension 2");

  std::set<std::vector<int>> dedup;
  for (auto& e : edges) {
    if (e.empty()) throw precondition_error("SiteGraph: empty edge");
    std::sort(e.begin(), e.end());
    e.erase(std::unique(e.begin(), e.end()), e.end());
    for (int s : e)
      if (s < 0 || s >= n_sites) throw precondition_error("SiteGraph: edge site out of range");
    dedup.insert(e);
  }
  edges_.assign(dedup.begin(), dedup.end());
}

long SiteGraph::dim() const {
  long d = 1;
  for (int ld : local_dims_) d *= ld;
  return d;
}

long SiteGraph::dim_of(const std::vector<int>& sites) const {
  long d = 1;
  for (int s : sites) d *= local_dims_[s];
  return d;
}

namespace {
bool overlaps(const std::vector<int>& sorted_edge, const std::vector<bool>& mask) {
  for (int s : sorted_edge)
    if (mask[s]) return true;
  return false;
}
}  // namespace

std::vector<int> SiteGraph::boundary_edges(const std::vector<int>& region) const {
  std::vector<bool> in(n_sites_, false), out(n_sites_, true);
  for (int s : region) {
    in[s] = true;
    out[s] = false;
  }
  std::vector<int> result;
  for (int i = 0; i < static_cast<int>(edges_.size()); ++i)
    if (overlaps(edges_[i], in) && overlaps(edges_[i], out)) result.push_back(i);
  return result;
}

std::vector<int> SiteGraph::overlapping_edges(const std::vector<int>& region) const {
  std::vector<bool> in(n_sites_, false);
  for (int s : region) in[s] = true;
  std::vector<int> result;
  for (int i = 0; i < static_cast<int>(edges_.size()); ++i)
    if (overlaps(edges_[i], in)) result.push_back(i);
  return result;
}

SiteGraph SiteGraph::chain(int n_sites, SystemKind kind, bool periodic) {
  std::vector<std::vector<int>> edges;
  for (int i = 0; i + 1 < n_sites; ++i) edges.push_back({i, i + 1});
  if (periodic && n_sites > 2) edges.push_back({n_sites - 1, 0});
  return SiteGraph(n_sites, std::move(edges), kind);
}

std::optional<int> graph_distance(const SiteGraph& graph, const std::vector<int>& x,
                                  const std::vector<int>& y) {
  if (x.empty() || y.empty()) throw precondition_error("graph_distance: empty site set");
  const int n = graph.n_sites();
  std::vector<bool> in_x(n, false), in_y(n, false);
  for (int s : x) in_x[s] = true;
  for (int s : y) in_y[s] = true;
  for (int s : x)
    if (in_y[s]) return 0;

  // Breadth-first search over edges; two edges are adjacent when they share a
  // site. The cost of a path is the number of edges in the connecting chain.
  const auto& edges = graph.edges();
  const int m = static_cast<int>(edges.size());
  std::vector<std::vector<int>> edges_at_site(n);
  for (int i = 0; i < m; ++i)
    for (int s : edges[i]) edges_at_site[s].push_back(i);

  std::vector<int> dist(m, -1);
  std::deque<int> queue;
  for (int i = 0; i < m; ++i)
    if (overlaps(edges[i], in_x)) {
      dist[i] = 1;
      queue.push_back(i);
    }
  while (!queue.empty()) {
    int e = queue.front();
    queue.pop_front();
    if (overlaps(edges[e], in_y)) return dist[e];
    for (int s : edges[e])
      for (int f : edges_at_site[s])
        if (dist[f] < 0) {
          dist[f] = dist[e] + 1;
          queue.push_back(f);
        }
  }
  return std::nullopt;
}

}  // namespace thermolab
