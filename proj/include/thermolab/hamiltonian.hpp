#pragma once

#include <vector>

#include "thermolab/graph.hpp"
#include "thermolab/operators.hpp"
#include "thermolab/rng.hpp"

namespace thermolab {

// Locally interacting Hamiltonian: a graph plus a Hermitian term per edge.
class LocalHamiltonian {
 public:
  LocalHamiltonian(SiteGraph graph, std::vector<LocalOperator> terms);

  const SiteGraph& graph() const { return graph_; }
  const std::vector<LocalOperator>& terms() const { return terms_; }

  // Sum of all embedded terms.
  MatrixC assemble() const;
  // Sum of the terms fully contained in `region`, embedded in the full space.
  MatrixC restricted(const std::vector<int>& region) const;
  // The same sum truncated to the tensor factor of `region` (ascending order).
  MatrixC restricted_truncated(const std::vector<int>& region) const;

  // max_X ||H_X||_inf over the terms.
  double local_interaction_strength() const;

 private:
  SiteGraph graph_;
  std::vector<LocalOperator> terms_;
};

// Model builders used throughout the scenario catalog. Couplings follow the
// conventions spelled out in the README model-format section.
namespace models {

// H = -J sum sz.sz - hx sum sx - hz sum sz on a chain or ring.
LocalHamiltonian transverse_field_ising(int n, double j, double hx, double hz = 0.0,
                                        bool periodic = false);

// H = sum S.S + sum h_i S^z with spin-1/2 operators S = sigma/2.
LocalHamiltonian heisenberg(int n, const std::vector<double>& fields, bool periodic = false);

// Random-field Heisenberg chain, h_i uniform on [-w, w].
LocalHamiltonian disordered_heisenberg(int n, double w, Rng& rng, bool periodic = false);

// Nearest-neighbour chain with Gaussian random two-site couplings in the
// Pauli basis plus random single-site fields; generic non-integrable model.
LocalHamiltonian random_local_chain(int n, Rng& rng, double coupling_scale = 1.0);

// Spinless fermions: hopping sum f^dag_x f_{x+1} + h.c. plus density-density
// interaction u sum n_x n_{x+1}, via Jordan-Wigner two-site blocks.
LocalHamiltonian spinless_fermion_chain(int n, double t_hop, double u, bool periodic = false);

}  // namespace models

}  // namespace thermolab
