#pragma once

#include <vector>

#include "thermolab/graph.hpp"
#include "thermolab/operators.hpp"

namespace thermolab {

// Reduced state on `keep` (ascending site order). Fermionic systems require a
// contiguous block of modes in Jordan-Wigner order; the string operators then
// cancel for all even observables and the spin partial trace is exact.
MatrixC partial_trace(const MatrixC& rho, const std::vector<int>& keep, const SiteGraph& graph);

// Reduced state of a pure state vector, avoiding the full density matrix.
MatrixC partial_trace_pure(const VectorC& psi, const std::vector<int>& keep, const SiteGraph& graph);

// sum_j w_j Tr_env |col_j><col_j| for a set of column vectors; the workhorse
// for reduced Gibbs and micro-canonical states straight from an eigenbasis.
MatrixC weighted_reduction(const MatrixC& columns, const VectorR& weights,
                           const std::vector<int>& keep, const SiteGraph& graph);

// Trace distance (1/2)||rho - sigma||_1 via the spectrum of the difference.
double trace_distance(const MatrixC& rho, const MatrixC& sigma);

// Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
double fidelity(const MatrixC& rho, const MatrixC& sigma);

// Tr(rho A B) - Tr(rho A) Tr(rho B). Real part is the symmetric correlation;
// clustering checks use the modulus.
cxd covariance(const MatrixC& rho, const MatrixC& a, const MatrixC& b);

// Von Neumann entropy in bits.
double von_neumann_entropy(const MatrixC& rho);

// Entanglement entropy of a pure state across region | complement. p = 1
// selects the von Neumann entropy, otherwise the Renyi-p entropy (bits).
double entanglement_entropy(const VectorC& psi, const std::vector<int>& region,
                            const SiteGraph& graph, double renyi_p = 1.0);

// A POVM whose elements act on the tensor factor of `support` (ascending site
// order). Empty support means the elements act on the full space.
struct Povm {
  std::vector<MatrixC> elements;
  std::vector<int> support;
};

class PovmSet {
 public:
  explicit PovmSet(std::vector<Povm> povms);

  const std::vector<Povm>& povms() const { return povms_; }
  bool empty() const { return povms_.empty(); }
  // Number of distinct (support, element) pairs across the set.
  int distinct_element_count() const;
  // Union of the supports of all elements; empty means full space.
  std::vector<int> support() const;
  bool full_space_support() const;

  // Spectral POVM of a Hermitian observable given on the support factor.
  static Povm spectral(const MatrixC& observable, const std::vector<int>& support = {});
  // Symmetric informationally complete four-element qubit POVM.
  static Povm qubit_sic();
  // Tensor products of single-site SIC POVMs over a region; informationally
  // complete on the region.
  static Povm informationally_complete(const std::vector<int>& region);

 private:
  std::vector<Povm> povms_;
};

// max over POVMs of (1/2) sum_k |Tr(M_k rho) - Tr(M_k sigma)|. Elements with
// declared support are evaluated against the reduced states.
double restricted_distinguishability(const MatrixC& rho, const MatrixC& sigma, const PovmSet& m,
                                     const SiteGraph& graph);
// Full-space-only variant for POVMs without declared support.
double restricted_distinguishability(const MatrixC& rho, const MatrixC& sigma, const PovmSet& m);

}  // namespace thermolab
