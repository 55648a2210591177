#pragma once

#include <optional>

#include "thermolab/dynamics.hpp"

namespace thermolab {

// d_eff = 1 / sum_k p_k^2.
double effective_dimension(const std::vector<double>& populations);
double effective_dimension(const MatrixC& rho0, const SpectralDecomposition& spec);

// g(p) = min(sum p_k^2, 3 * second largest p_k). With fewer than two levels
// the second branch is undefined and the first is returned.
struct GOccupations {
  double sum_squares;
  double three_second_max;  // NaN when undefined
  double value;
  bool second_branch_defined;
};
GOccupations g_occupations(const std::vector<double>& populations);

// h(M) = min(|distinct elements| / 4, dim(support factor) / 2).
struct HPovm {
  double element_branch;
  double dimension_branch;
  double value;
};
HPovm h_povm(const PovmSet& m, const SiteGraph& graph);

struct EquilibrationBoundReport {
  double lhs = 0.0;            // brute-force finite-time average
  double rhs = 0.0;            // theorem right-hand side
  bool satisfied = false;      // lhs <= rhs + 1e-9
  double epsilon = 0.0;
  double t_window = 0.0;
  long n_epsilon = 0;          // N(epsilon)
  double f_factor = 0.0;       // 1 + 8 log2(d') / (epsilon T)
  double g_value = 0.0;
  double g_sum_squares = 0.0;
  double g_three_second_max = 0.0;
  double h_value = 0.0;        // POVM reading only
  double h_element_branch = 0.0;
  double h_dimension_branch = 0.0;
  int n_levels = 0;
  std::optional<double> lhs_infinite_time;  // exact oracle when dim permits
  double margin() const { return rhs - lhs; }
};

// Picks epsilon minimising the bound over a log grid when epsilon <= 0.
double optimal_epsilon_observable(const MatrixC& observable, const std::vector<double>& populations,
                                  const SpectralDecomposition& spec, double t_window,
                                  int grid_points = 64);

// Time-averaged squared deviation of <A> from its equilibrium value against
// ||A||^2 N(eps) f(eps T) g(p).
EquilibrationBoundReport equilibration_bound_observable(const MatrixC& observable,
                                                        const MatrixC& rho0,
                                                        const SpectralDecomposition& spec,
                                                        double epsilon, double t_window,
                                                        int grid_points = 2048,
                                                        long oracle_dim_cap = 1024);

// Time-averaged restricted distinguishability from the de-phased state against
// h(M) sqrt(N(eps) f(eps T) g(p)).
EquilibrationBoundReport equilibration_bound_povm(const PovmSet& m, const MatrixC& rho0,
                                                  const SpectralDecomposition& spec,
                                                  const SiteGraph& graph, double epsilon,
                                                  double t_window, int grid_points = 2048);

// eta(Delta) = sup_E sum of populations with energy in [E, E+Delta].
double eta_population_window(const SpectralDecomposition& spec,
                             const std::vector<double>& populations, double delta);

// Low-rank measurement equilibration: time-averaged distinguishability under
// {(Pi, 1 - Pi)} against C sqrt(eta(1/T) K), C = 5 pi / (4 sqrt(1 - 1/e)) + 1.
inline const double low_rank_constant = 5.0 * M_PI / (4.0 * std::sqrt(1.0 - std::exp(-1.0))) + 1.0;

EquilibrationBoundReport low_rank_equilibration(const MatrixC& projector, const MatrixC& rho0,
                                                const SpectralDecomposition& spec, double t_window,
                                                int grid_points = 1024);

struct SubsystemScan {
  Trajectory distance;          // D(rho^S(t), omega^S)
  double time_average = 0.0;
  double fraction_above_twice_average = 0.0;
};

SubsystemScan subsystem_equilibration_scan(const MatrixC& rho0, const SpectralDecomposition& spec,
                                           const std::vector<int>& region, const SiteGraph& graph,
                                           const std::vector<double>& grid);

}  // namespace thermolab
