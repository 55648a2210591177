#pragma once

#include <optional>
#include <vector>

#include "thermolab/types.hpp"

namespace thermolab {

enum class SystemKind { spin, fermion };

// Interaction (hyper)graph of a locally interacting system. Sites are
// 0-indexed internally; edges are sorted, deduplicated site subsets.
class SiteGraph {
 public:
  SiteGraph(int n_sites, std::vector<std::vector<int>> edges, SystemKind kind = SystemKind::spin,
            std::vector<int> local_dims = {});

  int n_sites() const { return n_sites_; }
  SystemKind kind() const { return kind_; }
  const std::vector<std::vector<int>>& edges() const { return edges_; }
  int local_dim(int site) const { return local_dims_[site]; }
  const std::vector<int>& local_dims() const { return local_dims_; }

  // Total Hilbert space dimension (product of local dimensions).
  long dim() const;
  // Dimension of the subsystem spanned by `sites`.
  long dim_of(const std::vector<int>& sites) const;

  // Edges that overlap both `region` and its complement.
  std::vector<int> boundary_edges(const std::vector<int>& region) const;
  // Edges that overlap `region` at all.
  std::vector<int> overlapping_edges(const std::vector<int>& region) const;

  static SiteGraph chain(int n_sites, SystemKind kind = SystemKind::spin, bool periodic = false);

 private:
  int n_sites_;
  std::vector<std::vector<int>> edges_;
  SystemKind kind_;
  std::vector<int> local_dims_;
};

// Graph distance dist(X, Y): zero when the site sets overlap, otherwise the
// size of the smallest edge subset forming a chain of pairwise-overlapping
// edges from X to Y. Returns nullopt when X and Y are not connected.
std::optional<int> graph_distance(const SiteGraph& graph, const std::vector<int>& x,
                                  const std::vector<int>& y);

}  // namespace thermolab
