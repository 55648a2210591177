#include "thermolab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace thermolab {

std::vector<double> uniform_grid(double t_max, int n_points, double t_min) {
  if (n_points < 2) throw precondition_error("uniform_grid: need at least two points");
  std::vector<double> g(n_points);
  for (int i = 0; i < n_points; ++i)
    g[i] = t_min + (t_max - t_min) * static_cast<double>(i) / (n_points - 1);
  return g;
}

namespace {
VectorC phase_vector(const std::vector<double>& energies, double t) {
  VectorC z(static_cast<long>(energies.size()));
  for (std::size_t j = 0; j < energies.size(); ++j) z(j) = std::exp(cxd(0, -energies[j] * t));
  return z;
}
}  // namespace

MatrixC evolve_state(const SpectralDecomposition& spec, const MatrixC& rho0, double t) {
  MatrixC rt = spec.to_eigenbasis(rho0);
  const VectorC z = phase_vector(spec.column_energies(), t);
  for (long j = 0; j < rt.rows(); ++j)
    for (long k = 0; k < rt.cols(); ++k) rt(j, k) *= z(j) * std::conj(z(k));
  return spec.from_eigenbasis(rt);
}

VectorC evolve_state(const SpectralDecomposition& spec, const VectorC& psi0, double t) {
  VectorC amp = spec.to_eigenbasis(psi0);
  const VectorC z = phase_vector(spec.column_energies(), t);
  amp.array() *= z.array();
  return spec.from_eigenbasis(amp);
}

ExpectationEvolver::ExpectationEvolver(const MatrixC& observable, const MatrixC& rho0,
                                       const SpectralDecomposition& spec)
    : energies_(&spec.column_energies()) {
  const MatrixC a_tilde = spec.to_eigenbasis(observable);
  const MatrixC rho_tilde = spec.to_eigenbasis(rho0);
  m_ = a_tilde.transpose().cwiseProduct(rho_tilde);
  // equilibrium: keep only within-level blocks
  equilibrium_ = 0.0;
  for (int k = 0; k < spec.n_levels(); ++k) {
    const int off = spec.level_offset(k), mult = spec.multiplicity(k);
    equilibrium_ += m_.block(off, off, mult, mult).sum().real();
  }
}

ExpectationEvolver::ExpectationEvolver(const MatrixC& observable, const VectorC& psi0,
                                       const SpectralDecomposition& spec)
    : ExpectationEvolver(observable, MatrixC(psi0 * psi0.adjoint()), spec) {}

double ExpectationEvolver::value(double t) const {
  const VectorC z = phase_vector(*energies_, t);
  const VectorC w = m_ * z.conjugate();
  return (z.transpose() * w).value().real();
}

Trajectory expectation_trajectory(const MatrixC& observable, const MatrixC& rho0,
                                  const SpectralDecomposition& spec,
                                  const std::vector<double>& grid) {
  ExpectationEvolver ev(observable, rho0, spec);
  Trajectory out;
  for (double t : grid) out.push(t, ev.value(t));
  return out;
}

Trajectory expectation_trajectory(const MatrixC& observable, const VectorC& psi0,
                                  const SpectralDecomposition& spec,
                                  const std::vector<double>& grid) {
  return expectation_trajectory(observable, MatrixC(psi0 * psi0.adjoint()), spec, grid);
}

MatrixC dephase(const MatrixC& rho0, const SpectralDecomposition& spec) {
  MatrixC rt = spec.to_eigenbasis(rho0);
  MatrixC blocks = MatrixC::Zero(rt.rows(), rt.cols());
  for (int k = 0; k < spec.n_levels(); ++k) {
    const int off = spec.level_offset(k), mult = spec.multiplicity(k);
    blocks.block(off, off, mult, mult) = rt.block(off, off, mult, mult);
  }
  return spec.from_eigenbasis(blocks);
}

double finite_time_average(const Trajectory& traj) {
  if (traj.size() < 2) throw precondition_error("finite_time_average: need at least two samples");
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < traj.size(); ++i) {
    const double dt = traj.times[i + 1] - traj.times[i];
    if (dt <= 0) throw precondition_error("finite_time_average: times must be strictly ascending");
    acc += 0.5 * (traj.values[i] + traj.values[i + 1]) * dt;
  }
  return acc / (traj.times.back() - traj.times.front());
}

namespace {
double infinite_time_oracle(const MatrixC& m, const SpectralDecomposition& spec, double gap_tol) {
  // Block sums of M over level pairs, then grouping of equal gaps.
  const int nl = spec.n_levels();
  struct GapTerm {
    double gap;
    cxd coeff;
  };
  std::vector<GapTerm> terms;
  terms.reserve(static_cast<std::size_t>(nl) * (nl - 1));
  for (int a = 0; a < nl; ++a)
    for (int b = 0; b < nl; ++b) {
      if (a == b) continue;
      const cxd s = m.block(spec.level_offset(a), spec.level_offset(b), spec.multiplicity(a),
                            spec.multiplicity(b))
                        .sum();
      terms.push_back({spec.energy(a) - spec.energy(b), s});
    }
  std::sort(terms.begin(), terms.end(),
            [](const GapTerm& x, const GapTerm& y) { return x.gap < y.gap; });
  const double tol_abs = gap_tol * std::max(spec.spectral_range(), 1e-300);
  double total = 0.0;
  std::size_t i = 0;
  while (i < terms.size()) {
    cxd c = terms[i].coeff;
    std::size_t j = i;
    while (j + 1 < terms.size() && terms[j + 1].gap - terms[j].gap < tol_abs) {
      ++j;
      c += terms[j].coeff;
    }
    total += std::norm(c);
    i = j + 1;
  }
  return total;
}
}  // namespace

double infinite_time_avg_sq_deviation(const MatrixC& observable, const MatrixC& rho0,
                                      const SpectralDecomposition& spec, double gap_tol) {
  const MatrixC a_tilde = spec.to_eigenbasis(observable);
  const MatrixC rho_tilde = spec.to_eigenbasis(rho0);
  const MatrixC m = a_tilde.transpose().cwiseProduct(rho_tilde);
  return infinite_time_oracle(m, spec, gap_tol);
}

double infinite_time_avg_sq_deviation(const MatrixC& observable, const VectorC& psi0,
                                      const SpectralDecomposition& spec, double gap_tol) {
  return infinite_time_avg_sq_deviation(observable, MatrixC(psi0 * psi0.adjoint()), spec, gap_tol);
}

MatrixC ramp_evolve(const std::vector<RampSegment>& schedule, const MatrixC& rho0,
                    double degeneracy_tol) {
  if (schedule.empty()) throw precondition_error("ramp_evolve: empty schedule");
  MatrixC rho = rho0;
  for (const auto& seg : schedule) {
    if (seg.duration == 0.0) continue;
    const SpectralDecomposition spec = diagonalize(seg.hamiltonian, degeneracy_tol);
    rho = evolve_state(spec, rho, seg.duration);
  }
  return rho;
}

LiebRobinsonProfile lieb_robinson_profile(const SpectralDecomposition& spec, const MatrixC& a,
                                          const MatrixC& b, const std::vector<double>& grid,
                                          bool supports_overlap) {
  LiebRobinsonProfile out;
  out.supports_overlap = supports_overlap;
  const MatrixC b_tilde = spec.to_eigenbasis(b);
  for (double t : grid) {
    const VectorC z = phase_vector(spec.column_energies(), t);
    MatrixC bt_tilde = b_tilde;
    for (long j = 0; j < bt_tilde.rows(); ++j)
      for (long k = 0; k < bt_tilde.cols(); ++k) bt_tilde(j, k) *= z(j) * std::conj(z(k));
    const MatrixC bt = spec.from_eigenbasis(bt_tilde);
    const MatrixC comm = a * bt - bt * a;
    // [A, B(t)] is anti-Hermitian for Hermitian A, B; i*comm is Hermitian.
    const VectorR vals = hermitian_eigenvalues(cxd(0, 1) * comm);
    out.commutator_norms.push(t, vals.cwiseAbs().maxCoeff());
  }
  return out;
}

VelocityFit fit_arrival_velocity(const std::vector<int>& distances,
                                 const std::vector<LiebRobinsonProfile>& profiles,
                                 double norm_product, double threshold) {
  if (distances.size() != profiles.size())
    throw precondition_error("fit_arrival_velocity: size mismatch");
  std::vector<double> arrival, dist;
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    if (profiles[i].supports_overlap) continue;
    const auto& traj = profiles[i].commutator_norms;
    const double level = threshold * norm_product;
    for (std::size_t j = 0; j + 1 < traj.size(); ++j)
      if (traj.values[j] < level && traj.values[j + 1] >= level) {
        const double frac = (level - traj.values[j]) / (traj.values[j + 1] - traj.values[j]);
        arrival.push_back(traj.times[j] + frac * (traj.times[j + 1] - traj.times[j]));
        dist.push_back(distances[i]);
        break;
      }
  }
  VelocityFit fit;
  fit.n_points = static_cast<int>(arrival.size());
  if (fit.n_points < 2) return fit;
  const double n = static_cast<double>(arrival.size());
  const double st = std::accumulate(arrival.begin(), arrival.end(), 0.0);
  const double sd = std::accumulate(dist.begin(), dist.end(), 0.0);
  double stt = 0.0, std_ = 0.0;
  for (std::size_t i = 0; i < arrival.size(); ++i) {
    stt += arrival[i] * arrival[i];
    std_ += arrival[i] * dist[i];
  }
  const double denom = n * stt - st * st;
  fit.velocity = denom != 0.0 ? (n * std_ - st * sd) / denom : 0.0;
  return fit;
}

Trajectory entanglement_growth(const VectorC& psi0, const SpectralDecomposition& spec,
                               const std::vector<int>& region, const SiteGraph& graph,
                               const std::vector<double>& grid) {
  if (std::abs(psi0.norm() - 1.0) > 1e-8)
    throw precondition_error("entanglement_growth: initial state must be a normalised pure state");
  const VectorC amp = spec.to_eigenbasis(psi0);
  Trajectory out;
  for (double t : grid) {
    const VectorC z = phase_vector(spec.column_energies(), t);
    const VectorC psi_t = spec.from_eigenbasis(VectorC(amp.array() * z.array()));
    const MatrixC red = partial_trace_pure(psi_t, region, graph);
    out.push(t, von_neumann_entropy(red));
  }
  return out;
}

Trajectory survival_probability(const VectorC& psi0, const SpectralDecomposition& spec,
                                const std::vector<double>& grid) {
  if (std::abs(psi0.norm() - 1.0) > 1e-8)
    throw precondition_error("survival_probability: state must be a normalised pure state");
  const VectorC amp = spec.to_eigenbasis(psi0);
  const auto& e = spec.column_energies();
  Trajectory out;
  for (double t : grid) {
    cxd acc(0, 0);
    for (long j = 0; j < amp.size(); ++j) acc += std::norm(amp(j)) * std::exp(cxd(0, -e[j] * t));
    out.push(t, std::norm(acc));
  }
  return out;
}

}  // namespace thermolab
