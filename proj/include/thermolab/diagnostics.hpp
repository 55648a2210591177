#pragma once

#include "thermolab/correlations.hpp"

namespace thermolab {

struct EthWindowStat {
  double center;
  double mean;
  double variance;
  double spread;         // max - min of diagonal elements in the window
  double thermal_value;  // Tr(A g(beta(center))), NaN when beta is not attainable
  int count;
};

struct EthScan {
  std::vector<double> energies;            // per eigenstate (raw, with multiplicity)
  std::vector<double> diagonal_elements;   // <E_k|A|E_k>
  std::vector<double> level_spread;        // per level: extremal spread inside the block
  std::vector<EthWindowStat> windows;
  std::vector<double> offdiagonal_samples; // |<E_k|A|E_l>| for nearby k != l
};

// Diagonal matrix elements of an observable across the spectrum with
// micro-canonical window statistics; characterisation only, never a pass/fail.
EthScan eth_scan(const MatrixC& observable, const SpectralDecomposition& spec,
                 double window_width, int offdiagonal_band = 8);

// R_{S|B}(psi) = sum_k p_k D(Tr_B(Pi_k psi Pi_k)/p_k, psi^S).
double effective_eigenbasis_entanglement(const VectorC& psi, const SpectralDecomposition& spec,
                                         const std::vector<int>& region, const SiteGraph& graph);

struct MemoryBoundReport {
  double lhs;       // D(omega^S(1), omega^S(2))
  double initial;   // D(psi1^S, psi2^S)
  double r1, r2;    // effective eigenbasis entanglement of either input
  double rhs;       // initial - r1 - r2
  bool satisfied;   // lhs >= rhs - 1e-9
};

// Distinguishability of de-phased states for product inputs sharing the bath
// factor; the subsystem lives on the leading sites.
MemoryBoundReport initial_state_memory_bound(const VectorC& psi_s1, const VectorC& psi_s2,
                                             const VectorC& psi_bath,
                                             const SpectralDecomposition& spec,
                                             const std::vector<int>& region,
                                             const SiteGraph& graph);

// Single-particle Anderson chain: hopping 1 between neighbours plus
// lambda * V_x with V_x iid uniform on [-width/2, width/2]; open boundaries.
MatrixC anderson_hamiltonian(int length, double lambda, double disorder_width, Rng& rng);

struct LocalizationReport {
  std::vector<double> ipr;           // per eigenvector inverse participation ratio
  std::vector<double> decay_length;  // exponential-envelope fit, NaN when not fit
  double median_ipr;
  double median_decay_length;
};

LocalizationReport eigenfunction_localization(const SpectralDecomposition& single_particle);

// <|X - x0|^q> along the single-particle evolution of a site-localised state.
Trajectory transport_moments(int start_site, const SpectralDecomposition& single_particle,
                             const std::vector<double>& grid, double q);

// Total spin-z conserving sector tools for spin-1/2 chains. Basis states are
// computational bitstrings with a fixed number of up spins, site 0 being the
// most significant bit.
std::vector<long> sz_sector_basis(int n_sites, int n_up);
MatrixC sector_matrix(const LocalHamiltonian& h, const std::vector<long>& basis_states);
// Embeds a sector vector back into the full Hilbert space.
VectorC sector_to_full(const VectorC& v, const std::vector<long>& basis_states, long full_dim);

// Neel state |up down up down ...> as a full-space basis vector index.
long neel_index(int n_sites);

// I(t) = (N_A - N_B) / (N_A + N_B) from a Neel start, N_A the up-spin count
// on the initially-up sublattice.
Trajectory imbalance_trajectory(const SpectralDecomposition& sector_spec,
                                const std::vector<long>& basis_states, int n_sites,
                                const std::vector<double>& grid);
// Long-time (dephased) imbalance value.
double imbalance_infinite_time(const SpectralDecomposition& sector_spec,
                               const std::vector<long>& basis_states, int n_sites);

struct MblRow {
  double disorder;
  double mean_r;                 // mid-spectrum third, disorder averaged
  double imbalance_infty;
  double entanglement_log_r2;    // fit quality of E(t) ~ a + b ln t
  double entanglement_linear_r2; // fit quality of E(t) ~ a + b t
  double eigenstate_entropy_mean;
};

struct MblReport {
  std::vector<MblRow> rows;
  double crossover_disorder;  // W where mean r crosses (r_goe + r_poisson)/2
};

// Disorder-averaged MBL markers over the random-field Heisenberg chain at
// half filling. Realizations use sub-seeds (seed, realization_index).
MblReport mbl_report(int n_sites, const std::vector<double>& disorder_grid, int realizations,
                     Rng& rng, int entanglement_grid_points = 24, double entanglement_t_max = 100.0);

// Disorder-averaged mean r alone (cheaper; used by the acceptance suite).
double mbl_mean_r(int n_sites, double disorder, int realizations, Rng& rng);

}  // namespace thermolab
