#pragma once

#include "thermolab/equilibration.hpp"
#include "thermolab/rng.hpp"

namespace thermolab {

// Normalised Gaussian-coefficient vector in the span of an orthonormal basis
// (columns). The induced distribution is the uniform measure on the subspace.
VectorC haar_state(const MatrixC& subspace_basis, Rng& rng);

// Haar-distributed unitary via QR of a complex Ginibre matrix with the phase
// convention fixed by the R diagonal.
MatrixC haar_unitary(int dim, Rng& rng);

// Product of `depth` gates drawn uniformly from a fixed universal set
// {Hadamard, T, CNOT} placed on uniformly random (adjacent pairs of) qubits.
MatrixC random_circuit_unitary(int n_qubits, int depth, Rng& rng);

// U G U^dag; same spectrum as G with rotated eigenstates.
MatrixC random_hamiltonian(const MatrixC& g, const MatrixC& u);

inline constexpr double concentration_constant = 1.0 / (36.0 * M_PI * M_PI * M_PI);

struct ConcentrationReport {
  double epsilon;
  int n_samples;
  long subspace_dim;
  double empirical_frequency;   // fraction of samples deviating >= epsilon
  double bound;                 // theoretical tail bound (may exceed 1)
  double binomial_sigma;        // sqrt(p(1-p)/n) at p = min(bound, 1)
  bool satisfied;               // empirical <= bound + 3 sigma
};

// Deviation of <A> in Haar states of the subspace from the subspace average,
// against 2 exp(-C d_R eps^2 / ||A||^2).
ConcentrationReport concentration_experiment_observable(const MatrixC& observable,
                                                        const MatrixC& subspace_basis,
                                                        int n_samples, double epsilon, Rng& rng);

// Restricted distinguishability from the subspace micro-canonical state,
// against 2 h(M)^2 exp(-C d_R eps^2 / h(M)^2) with h = min(|distinct|, dim supp).
ConcentrationReport concentration_experiment_povm(const PovmSet& m, const SiteGraph& graph,
                                                  const MatrixC& subspace_basis, int n_samples,
                                                  double epsilon, Rng& rng);

struct HaarEquilibrationPoint {
  double t;
  double threshold;             // theorem deviation threshold at this time
  double empirical_frequency;   // fraction of sampled U with D > threshold
  bool vacuous;                 // threshold >= 1, no information
  bool satisfied;               // frequency < epsilon (asserted for Haar draws)
};

struct HaarEquilibrationReport {
  std::vector<HaarEquilibrationPoint> points;
  double epsilon;
  long g_degeneracy;            // max eigenvalue multiplicity of G
  int n_samples;
  bool circuit_variant;         // circuit term reported symbolically, not asserted
  int circuit_depth = 0;
};

// Frequency over random U of D(rho^S(t), omega^S_{U G U^dag}) exceeding
// sqrt(d_S)/(2 eps) * sqrt(|f_G(t)|^4 + g_G^2/d^2 + 7/d_B). With a circuit
// depth given, U comes from the random circuit ensemble and the additional
// d^3 2^(-alpha C/N) term with unknown alpha is left unasserted.
HaarEquilibrationReport haar_equilibration_experiment(const MatrixC& g, const VectorC& psi0,
                                                      const std::vector<int>& region,
                                                      const SiteGraph& graph,
                                                      const std::vector<double>& t_grid,
                                                      int n_samples, double epsilon, Rng& rng,
                                                      int circuit_depth = -1);

}  // namespace thermolab
