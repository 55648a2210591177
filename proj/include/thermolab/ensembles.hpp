#pragma once

#include <optional>

#include "thermolab/dynamics.hpp"
#include "thermolab/rng.hpp"

namespace thermolab {

// Energy window [lo, hi] for micro-canonical constructions.
struct EnergyWindow {
  double lo;
  double hi;
  double width() const { return hi - lo; }
  bool contains(double e) const { return e >= lo && e <= hi; }
};

// exp(-beta H)/Z from the spectrum, with the ground-energy shift for stability.
MatrixC gibbs_state(const SpectralDecomposition& spec, double beta);
MatrixC gibbs_state(const MatrixC& h, double beta);

// ln Z(beta); Z(0) = dim.
double log_partition_function(const SpectralDecomposition& spec, double beta);

// Tr(H g(beta)).
double gibbs_energy(const SpectralDecomposition& spec, double beta);

// Normalised sum of the spectral projectors with energy in the window.
MatrixC microcanonical_state(const SpectralDecomposition& spec, const EnergyWindow& window);

// Rank of the micro-canonical projector over the window.
long microcanonical_rank(const SpectralDecomposition& spec, const EnergyWindow& window);

// Inverts the strictly decreasing map beta -> Tr(H g(beta)) by bisection.
double beta_from_energy(const SpectralDecomposition& spec, double e_target,
                        double rel_tol = 1e-10);

// Maximum entropy state subject to commuting constraints <A_i> = target_i.
struct Constraint {
  MatrixC observable;
  double target;
};

struct MaxEntropyResult {
  MatrixC state;
  std::vector<double> multipliers;    // beta_A per constraint
  double entropy_bits;
  int newton_iterations;
  double residual;                    // max |<A_i> - target_i|
  bool converged;
  std::vector<int> dropped_constraints;  // indices removed as linearly dependent
};

MaxEntropyResult max_entropy_state(const SpectralDecomposition& spec,
                                   const std::vector<Constraint>& constraints,
                                   double target_tol = 1e-8, int max_iterations = 200);

// Reduction of the micro-canonical state of a non-interacting H0 = HS + HB on
// the leading factor against the best thermal fit; the subsystem factor comes
// first in the tensor ordering.
struct CountingReductionReport {
  double best_distance;      // min over beta of D(reduced microcanonical, g[HS](beta))
  double best_beta;
  double counting_slope;     // affine fit slope of ln #_Delta[HB] over the relevant window
  double counting_fit_rms;   // rms residual of the affine fit
  long window_rank;
  bool low_statistics;       // fewer bath levels than 10 * dim(S) in the window
};

CountingReductionReport counting_reduction_check(const MatrixC& h_s, const MatrixC& h_b,
                                                 const EnergyWindow& window);

// ||P - P'||_1 against (rank P + rank P') ||H - H'||_inf / eps + rank P_eps + rank P'_eps.
struct StabilityReport {
  double lhs;
  double rhs;
  bool satisfied;
  double epsilon;
  long rank_p, rank_p_prime, rank_edge, rank_edge_prime;
};

StabilityReport projector_stability_bound(const MatrixC& h, const MatrixC& h_prime,
                                          const EnergyWindow& window, double epsilon);

// Trace-distance stability of micro-canonical states under perturbations.
struct MicrocanonicalStabilityReport {
  double lhs;
  double rhs;
  bool satisfied;
  double epsilon;
  double heuristic_epsilon;  // sqrt(||H - H'|| Delta / 2)
  long omega_min, omega_max, omega_edge;
};

MicrocanonicalStabilityReport microcanonical_stability_bound(const MatrixC& h,
                                                             const MatrixC& h_prime,
                                                             const EnergyWindow& window,
                                                             double epsilon);

// State whose de-phasing is the micro-canonical state of the window: random
// phases across levels, one chain per degeneracy slot. Pure when every level
// in the window is non-degenerate.
struct RectangularState {
  MatrixC state;
  bool pure;
};

RectangularState rectangular_state(const SpectralDecomposition& spec, const EnergyWindow& window,
                                   Rng& rng);

// Counting-plus-perturbation thermalisation pipeline for a bipartition with
// the subsystem on the leading sites.
struct ThermalisationReport {
  double time_averaged_distance;   // avg_t D(rho^S(t), g[HS](beta_hat))
  double beta_hat;                 // slope of the bath counting fit
  double interaction_norm;         // ||H - HS - HB||_inf
  double weak_coupling_product;    // beta_hat * ||H_I||
  double window_width_check;       // 1 / (beta_hat * Delta)
  double counting_residual;        // counting_reduction_check distance at H_I = 0
  bool weak_coupling_ok;           // beta_hat * ||H_I|| below threshold and window wide enough
  bool initial_state_pure;
};

ThermalisationReport thermalisation_pipeline(const LocalHamiltonian& h, int n_system_sites,
                                             const EnergyWindow& window, Rng& rng,
                                             const std::vector<double>& grid,
                                             double weak_coupling_threshold = 0.1);

// Finite-size equivalence-of-ensembles scan row.
struct EnsembleEquivalenceRow {
  int n_sites;
  int region_size;
  double window_center;    // E_V
  double window_width;     // Delta_V (energy standard deviation in the Gibbs state)
  double distance;         // D(microcanonical^X, gibbs^X)
};

std::vector<EnsembleEquivalenceRow> equivalence_of_ensembles_scan(
    const std::vector<LocalHamiltonian>& family, double beta, const std::vector<int>& region_sizes);

}  // namespace thermolab
