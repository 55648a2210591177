#include "thermolab/equilibration.hpp"

#include <algorithm>
#include <cmath>

namespace thermolab {

double effective_dimension(const std::vector<double>& populations) {
  double s2 = 0.0;
  for (double p : populations) s2 += p * p;
  if (s2 <= 0) throw precondition_error("effective_dimension: populations vanish");
  return 1.0 / s2;
}

double effective_dimension(const MatrixC& rho0, const SpectralDecomposition& spec) {
  return effective_dimension(spec.level_populations(rho0));
}

GOccupations g_occupations(const std::vector<double>& populations) {
  GOccupations out{};
  for (double p : populations) out.sum_squares += p * p;
  if (populations.size() < 2) {
    out.three_second_max = std::numeric_limits<double>::quiet_NaN();
    out.second_branch_defined = false;
    out.value = out.sum_squares;
    return out;
  }
  double max1 = -1.0, max2 = -1.0;
  for (double p : populations) {
    if (p > max1) {
      max2 = max1;
      max1 = p;
    } else if (p > max2) {
      max2 = p;
    }
  }
  out.three_second_max = 3.0 * max2;
  out.second_branch_defined = true;
  out.value = std::min(out.sum_squares, out.three_second_max);
  return out;
}

HPovm h_povm(const PovmSet& m, const SiteGraph& graph) {
  HPovm out{};
  out.element_branch = m.distinct_element_count() / 4.0;
  const long support_dim = m.full_space_support() ? graph.dim() : graph.dim_of(m.support());
  out.dimension_branch = static_cast<double>(support_dim) / 2.0;
  out.value = std::min(out.element_branch, out.dimension_branch);
  return out;
}

namespace {

double operator_norm_exact(const MatrixC& a) {
  if (is_hermitian(a, 1e-10)) return hermitian_eigenvalues(a).cwiseAbs().maxCoeff();
  Eigen::JacobiSVD<MatrixC> svd(a);
  return svd.singularValues().maxCoeff();
}

double f_factor(int n_levels, double epsilon, double t_window) {
  return 1.0 + 8.0 * std::log2(static_cast<double>(n_levels)) / (epsilon * t_window);
}

}  // namespace

double optimal_epsilon_observable(const MatrixC&, const std::vector<double>& populations,
                                  const SpectralDecomposition& spec, double t_window,
                                  int grid_points) {
  const double range = spec.spectral_range();
  if (range <= 0) return 1.0;
  const GOccupations g = g_occupations(populations);
  double best_eps = range / (spec.n_levels() * static_cast<double>(spec.n_levels()));
  double best_rhs = std::numeric_limits<double>::infinity();
  const double lo = std::log(range) - 2.0 * std::log(static_cast<double>(spec.n_levels())) - 2.0;
  const double hi = std::log(2.0 * range);
  for (int i = 0; i < grid_points; ++i) {
    const double eps = std::exp(lo + (hi - lo) * i / (grid_points - 1));
    const double rhs =
        static_cast<double>(gap_count(spec, eps)) * f_factor(spec.n_levels(), eps, t_window) * g.value;
    if (rhs < best_rhs) {
      best_rhs = rhs;
      best_eps = eps;
    }
  }
  return best_eps;
}

EquilibrationBoundReport equilibration_bound_observable(const MatrixC& observable,
                                                        const MatrixC& rho0,
                                                        const SpectralDecomposition& spec,
                                                        double epsilon, double t_window,
                                                        int grid_points, long oracle_dim_cap) {
  if (t_window <= 0) throw precondition_error("equilibration bound: T must be positive");
  const std::vector<double> populations = spec.level_populations(rho0);
  if (epsilon <= 0) epsilon = optimal_epsilon_observable(observable, populations, spec, t_window);

  EquilibrationBoundReport rep;
  rep.epsilon = epsilon;
  rep.t_window = t_window;
  rep.n_levels = spec.n_levels();
  rep.n_epsilon = gap_count(spec, epsilon);
  rep.f_factor = f_factor(spec.n_levels(), epsilon, t_window);
  const GOccupations g = g_occupations(populations);
  rep.g_value = g.value;
  rep.g_sum_squares = g.sum_squares;
  rep.g_three_second_max = g.three_second_max;

  const double norm_a = operator_norm_exact(observable);
  rep.rhs = norm_a * norm_a * static_cast<double>(rep.n_epsilon) * rep.f_factor * rep.g_value;

  ExpectationEvolver ev(observable, rho0, spec);
  Trajectory sq;
  for (double t : uniform_grid(t_window, grid_points)) {
    const double dev = ev.value(t) - ev.equilibrium_value();
    sq.push(t, dev * dev);
  }
  rep.lhs = finite_time_average(sq);
  if (spec.dim() <= oracle_dim_cap)
    rep.lhs_infinite_time = infinite_time_avg_sq_deviation(observable, rho0, spec);
  rep.satisfied = rep.lhs <= rep.rhs + 1e-9;
  return rep;
}

EquilibrationBoundReport equilibration_bound_povm(const PovmSet& m, const MatrixC& rho0,
                                                  const SpectralDecomposition& spec,
                                                  const SiteGraph& graph, double epsilon,
                                                  double t_window, int grid_points) {
  if (t_window <= 0) throw precondition_error("equilibration bound: T must be positive");
  const std::vector<double> populations = spec.level_populations(rho0);
  if (epsilon <= 0) epsilon = optimal_epsilon_observable(MatrixC(), populations, spec, t_window);

  EquilibrationBoundReport rep;
  rep.epsilon = epsilon;
  rep.t_window = t_window;
  rep.n_levels = spec.n_levels();
  rep.n_epsilon = gap_count(spec, epsilon);
  rep.f_factor = f_factor(spec.n_levels(), epsilon, t_window);
  const GOccupations g = g_occupations(populations);
  rep.g_value = g.value;
  rep.g_sum_squares = g.sum_squares;
  rep.g_three_second_max = g.three_second_max;
  const HPovm h = h_povm(m, graph);
  rep.h_value = h.value;
  rep.h_element_branch = h.element_branch;
  rep.h_dimension_branch = h.dimension_branch;

  rep.rhs = h.value * std::sqrt(static_cast<double>(rep.n_epsilon) * rep.f_factor * rep.g_value);

  struct ElementEvolver {
    ExpectationEvolver evolver;
    int povm_index;
  };
  std::vector<ElementEvolver> evolvers;
  int povm_index = 0;
  for (const auto& povm : m.povms()) {
    for (const auto& el : povm.elements) {
      const MatrixC full =
          povm.support.empty() ? el : embed_local_operator(el, povm.support, graph);
      evolvers.push_back({ExpectationEvolver(full, rho0, spec), povm_index});
    }
    ++povm_index;
  }

  Trajectory dist;
  const int n_povms = povm_index;
  for (double t : uniform_grid(t_window, grid_points)) {
    std::vector<double> per_povm(n_povms, 0.0);
    for (const auto& e : evolvers)
      per_povm[e.povm_index] += std::abs(e.evolver.value(t) - e.evolver.equilibrium_value());
    dist.push(t, 0.5 * *std::max_element(per_povm.begin(), per_povm.end()));
  }
  rep.lhs = finite_time_average(dist);
  rep.satisfied = rep.lhs <= rep.rhs + 1e-9;
  return rep;
}

double eta_population_window(const SpectralDecomposition& spec,
                             const std::vector<double>& populations, double delta) {
  if (delta < 0) throw precondition_error("eta: delta must be nonnegative");
  const auto& e = spec.energies();
  const int n = static_cast<int>(e.size());
  double best = 0.0;
  int j = 0;
  double window_sum = 0.0;
  for (int i = 0; i < n; ++i) {
    if (j < i) {
      j = i;
      window_sum = 0.0;
    }
    while (j < n && e[j] <= e[i] + delta) {
      window_sum += populations[j];
      ++j;
    }
    best = std::max(best, window_sum);
    window_sum -= populations[i];
  }
  return best;
}

EquilibrationBoundReport low_rank_equilibration(const MatrixC& projector, const MatrixC& rho0,
                                                const SpectralDecomposition& spec, double t_window,
                                                int grid_points) {
  if (spec.n_levels() != spec.dim())
    throw precondition_error("low_rank_equilibration: Hamiltonian must be non-degenerate");
  if (operator_norm_bound(MatrixC(projector * projector - projector)) > 1e-8)
    throw precondition_error("low_rank_equilibration: measurement operator is not a projector");
  const double rank = projector.trace().real();
  if (rank < 0.5) throw precondition_error("low_rank_equilibration: projector rank must be >= 1");

  const std::vector<double> populations = spec.level_populations(rho0);
  const double eta = eta_population_window(spec, populations, 1.0 / t_window);

  EquilibrationBoundReport rep;
  rep.t_window = t_window;
  rep.n_levels = spec.n_levels();
  rep.g_value = eta;  // eta recorded in the g slot
  rep.rhs = low_rank_constant * std::sqrt(eta * rank);

  ExpectationEvolver ev(projector, rho0, spec);
  Trajectory dist;
  for (double t : uniform_grid(t_window, grid_points))
    dist.push(t, std::abs(ev.value(t) - ev.equilibrium_value()));
  rep.lhs = finite_time_average(dist);
  rep.satisfied = rep.lhs <= rep.rhs + 1e-9;
  return rep;
}

SubsystemScan subsystem_equilibration_scan(const MatrixC& rho0, const SpectralDecomposition& spec,
                                           const std::vector<int>& region, const SiteGraph& graph,
                                           const std::vector<double>& grid) {
  const MatrixC omega_s = partial_trace(dephase(rho0, spec), region, graph);

  Eigen::SelfAdjointEigenSolver<MatrixC> es(rho0);
  const bool pure = es.eigenvalues().maxCoeff() > 1.0 - 1e-10;

  SubsystemScan scan;
  if (pure) {
    const VectorC psi = es.eigenvectors().col(es.eigenvalues().size() - 1);
    const VectorC amp = spec.to_eigenbasis(psi);
    const auto& energies = spec.column_energies();
    for (double t : grid) {
      VectorC shifted = amp;
      for (long j = 0; j < shifted.size(); ++j) shifted(j) *= std::exp(cxd(0, -energies[j] * t));
      const VectorC psi_t = spec.from_eigenbasis(shifted);
      scan.distance.push(t, trace_distance(partial_trace_pure(psi_t, region, graph), omega_s));
    }
  } else {
    for (double t : grid)
      scan.distance.push(
          t, trace_distance(partial_trace(evolve_state(spec, rho0, t), region, graph), omega_s));
  }
  scan.time_average = finite_time_average(scan.distance);
  int above = 0;
  for (double v : scan.distance.values)
    if (v > 2.0 * scan.time_average) ++above;
  scan.fraction_above_twice_average =
      static_cast<double>(above) / static_cast<double>(scan.distance.size());
  return scan;
}

}  // namespace thermolab
