#pragma once

#include "thermolab/ensembles.hpp"

namespace thermolab {

// cov^tau_rho(A, B) = Tr(rho^tau A rho^(1-tau) B) - Tr(rho A) Tr(rho B).
// Eigenvalues of rho below `floor` are clamped before powering; the applied
// regularisation magnitude is returned through *regularisation when given.
cxd generalized_covariance(const MatrixC& rho, const MatrixC& a, const MatrixC& b, double tau,
                           double floor = 1e-14, double* regularisation = nullptr);

// Same, with the state given spectrally (weights on the basis columns).
cxd generalized_covariance_spectral(const SpectralDecomposition& spec, const VectorR& weights,
                                    const MatrixC& a, const MatrixC& b, double tau);

// Gauss-Legendre nodes and weights on [0, 1].
void gauss_legendre_01(int n, std::vector<double>& nodes, std::vector<double>& weights);

struct TruncationReport {
  double lhs;          // Tr(A g[H_B]) - Tr(A g[H]) exactly
  double rhs;          // beta * double integral of the generalised covariance
  double residual;     // |lhs - rhs|
  int quad_points;
  int boundary_edge_count;
};

// Verifies the exact integral representation of the truncation error of a
// thermal expectation value, with the interpolating Hamiltonian
// H(s) = H - (1-s) * (boundary terms of region B).
TruncationReport truncation_check(const LocalHamiltonian& h, const std::vector<int>& region_b,
                                  const LocalOperator& a, double beta, int quad_points);

// Certified growth-constant upper bound: 2 D e for D-dimensional cubic
// nearest-neighbour lattices.
double growth_constant_cubic(int dimension);

// beta* = ln((1 + sqrt(1 + 4/alpha))/2) / (2 J).
double critical_beta(double j_strength, double alpha);

// xi(beta) = |1 / ln(alpha e^(2|b|J) (e^(2|b|J) - 1))|; requires |beta| < beta*.
double correlation_length(double beta, double j_strength, double alpha);

struct ClusteringPair {
  int site_a;
  int site_b;
  int distance;
  double covariance_abs;
  double bound;
  bool meets_distance_condition;
  bool satisfied;  // only asserted when the distance condition holds
};

struct ClusteringReport {
  double beta;
  double tau;
  double beta_star;
  double xi;
  std::vector<ClusteringPair> pairs;
  double fitted_decay_length;  // from ln|cov| vs distance regression, 0 if not fit
  bool all_qualifying_satisfied;
};

// |cov^tau| of single-site sigma_z pairs against the exponential clustering
// bound at |beta| < beta*.
ClusteringReport clustering_check(const LocalHamiltonian& h, double beta, double tau,
                                  const std::vector<std::pair<int, int>>& site_pairs, double alpha);

struct LocalityReport {
  double beta;
  double beta_star;
  double xi;
  int distance;          // dist(S, boundary of B)
  double lhs;            // D(g^S[H], g^S[H_B])
  double rhs;
  bool meets_distance_condition;
  bool satisfied;
};

// Reduced thermal states on S from the full Hamiltonian and from the
// restriction to B, against the universal high-temperature locality bound.
LocalityReport universal_locality_check(const LocalHamiltonian& h, double beta,
                                        const std::vector<int>& region_s,
                                        const std::vector<int>& region_b, double alpha);

}  // namespace thermolab
