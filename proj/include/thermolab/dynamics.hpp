#pragma once

#include <vector>

#include "thermolab/hamiltonian.hpp"
#include "thermolab/spectral.hpp"
#include "thermolab/states.hpp"

namespace thermolab {

struct Trajectory {
  std::vector<double> times;
  std::vector<double> values;

  void push(double t, double v) {
    times.push_back(t);
    values.push_back(v);
  }
  std::size_t size() const { return times.size(); }
};

std::vector<double> uniform_grid(double t_max, int n_points, double t_min = 0.0);

// rho(t) = U(t)^dag rho U(t) with U(t) = sum_k exp(-i E_k t) Pi_k.
MatrixC evolve_state(const SpectralDecomposition& spec, const MatrixC& rho0, double t);
VectorC evolve_state(const SpectralDecomposition& spec, const VectorC& psi0, double t);

// Precomputed data for fast expectation-value trajectories: <A>(t) is a
// quadratic form in the phase vector z_j = exp(-i E_j t).
class ExpectationEvolver {
 public:
  ExpectationEvolver(const MatrixC& observable, const MatrixC& rho0,
                     const SpectralDecomposition& spec);
  ExpectationEvolver(const MatrixC& observable, const VectorC& psi0,
                     const SpectralDecomposition& spec);

  double value(double t) const;
  double equilibrium_value() const { return equilibrium_; }  // dephased expectation

 private:
  const std::vector<double>* energies_;
  MatrixC m_;            // M_jk = (U^dag A U)_kj (U^dag rho U)_jk
  double equilibrium_;   // sum of the level-diagonal part
};

Trajectory expectation_trajectory(const MatrixC& observable, const MatrixC& rho0,
                                  const SpectralDecomposition& spec,
                                  const std::vector<double>& grid);
Trajectory expectation_trajectory(const MatrixC& observable, const VectorC& psi0,
                                  const SpectralDecomposition& spec,
                                  const std::vector<double>& grid);

// De-phasing map: project onto the block diagonal of the spectral projectors;
// equal to the infinite-time average state.
MatrixC dephase(const MatrixC& rho0, const SpectralDecomposition& spec);

// Trapezoidal (1/T) integral over the trajectory's grid.
double finite_time_average(const Trajectory& traj);

// Exact infinite-time average of (<A>(t) - <A>_omega)^2, grouping energy gaps
// equal within gap_tol * spectral range.
double infinite_time_avg_sq_deviation(const MatrixC& observable, const MatrixC& rho0,
                                      const SpectralDecomposition& spec,
                                      double gap_tol = tol::degeneracy);
double infinite_time_avg_sq_deviation(const MatrixC& observable, const VectorC& psi0,
                                      const SpectralDecomposition& spec,
                                      double gap_tol = tol::degeneracy);

// Piecewise-constant schedule: exact evolution per segment.
struct RampSegment {
  MatrixC hamiltonian;
  double duration;
};
MatrixC ramp_evolve(const std::vector<RampSegment>& schedule, const MatrixC& rho0,
                    double degeneracy_tol = tol::degeneracy);

// ||[A, B(t)]||_inf trajectory with B(t) = exp(-iHt) B exp(iHt), plus an
// arrival-time fit against distance when profiles for several distances are
// collected by the caller.
struct LiebRobinsonProfile {
  Trajectory commutator_norms;
  bool supports_overlap = false;
};
LiebRobinsonProfile lieb_robinson_profile(const SpectralDecomposition& spec, const MatrixC& a,
                                          const MatrixC& b, const std::vector<double>& grid,
                                          bool supports_overlap = false);

// Fit arrival times (first crossing of threshold * ||A|| ||B||) against
// distance; the slope of distance vs arrival time is the velocity estimate.
struct VelocityFit {
  double velocity = 0.0;
  int n_points = 0;
};
VelocityFit fit_arrival_velocity(const std::vector<int>& distances,
                                 const std::vector<LiebRobinsonProfile>& profiles,
                                 double norm_product, double threshold = 1e-3);

// Entanglement entropy of a region along the evolution of a pure product state.
Trajectory entanglement_growth(const VectorC& psi0, const SpectralDecomposition& spec,
                               const std::vector<int>& region, const SiteGraph& graph,
                               const std::vector<double>& grid);

// F(t) = |<psi| exp(-iHt) |psi>|^2.
Trajectory survival_probability(const VectorC& psi0, const SpectralDecomposition& spec,
                                const std::vector<double>& grid);

}  // namespace thermolab
