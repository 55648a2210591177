#include "thermolab/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace thermolab {

namespace {

// Boltzmann weights over the raw spectrum, shifted for stability, normalised.
VectorR gibbs_weights(const std::vector<double>& energies, double beta) {
  const long d = static_cast<long>(energies.size());
  double shift = -beta * energies[0];
  for (double e : energies) shift = std::max(shift, -beta * e);
  VectorR w(d);
  double z = 0.0;
  for (long j = 0; j < d; ++j) {
    w(j) = std::exp(-beta * energies[j] - shift);
    z += w(j);
  }
  return w / z;
}

}  // namespace

MatrixC gibbs_state(const SpectralDecomposition& spec, double beta) {
  if (!std::isfinite(beta)) throw precondition_error("gibbs_state: beta must be finite");
  const VectorR w = gibbs_weights(spec.column_energies(), beta);
  const MatrixC& u = spec.basis();
  return u * w.asDiagonal() * u.adjoint();
}

MatrixC gibbs_state(const MatrixC& h, double beta) { return gibbs_state(diagonalize(h), beta); }

double log_partition_function(const SpectralDecomposition& spec, double beta) {
  const auto& e = spec.column_energies();
  double shift = -beta * e[0];
  for (double x : e) shift = std::max(shift, -beta * x);
  double acc = 0.0;
  for (double x : e) acc += std::exp(-beta * x - shift);
  return shift + std::log(acc);
}

double gibbs_energy(const SpectralDecomposition& spec, double beta) {
  const auto& e = spec.column_energies();
  const VectorR w = gibbs_weights(e, beta);
  double acc = 0.0;
  for (long j = 0; j < w.size(); ++j) acc += w(j) * e[j];
  return acc;
}

MatrixC microcanonical_state(const SpectralDecomposition& spec, const EnergyWindow& window) {
  std::vector<int> cols;
  for (int k = 0; k < spec.n_levels(); ++k)
    if (window.contains(spec.energy(k)))
      for (int c = spec.level_offset(k); c < spec.level_offset(k) + spec.multiplicity(k); ++c)
        cols.push_back(c);
  if (cols.empty()) throw precondition_error("microcanonical_state: no levels in the window");
  MatrixC w(spec.dim(), static_cast<long>(cols.size()));
  for (std::size_t i = 0; i < cols.size(); ++i) w.col(i) = spec.basis().col(cols[i]);
  return (w * w.adjoint()) / static_cast<double>(cols.size());
}

long microcanonical_rank(const SpectralDecomposition& spec, const EnergyWindow& window) {
  long rank = 0;
  for (int k = 0; k < spec.n_levels(); ++k)
    if (window.contains(spec.energy(k))) rank += spec.multiplicity(k);
  return rank;
}

double beta_from_energy(const SpectralDecomposition& spec, double e_target, double rel_tol) {
  const double range = spec.spectral_range();
  if (range <= 0) throw precondition_error("beta_from_energy: spectrum has a single level");
  if (e_target <= spec.e_min() || e_target >= spec.e_max())
    throw precondition_error(
        "beta_from_energy: target outside the attainable mean-energy range (beta diverges)");
  const double tol_abs = rel_tol * range;
  // Tr(H g(beta)) is strictly decreasing in beta; expand a bracket, then bisect.
  double lo = -1.0, hi = 1.0;
  while (gibbs_energy(spec, hi) > e_target) hi *= 2.0;
  while (gibbs_energy(spec, lo) < e_target) lo *= 2.0;
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double e = gibbs_energy(spec, mid);
    if (std::abs(e - e_target) <= tol_abs) return mid;
    if (e > e_target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

namespace {

// Simultaneous diagonalization of a commuting family, refining the level
// blocks of the Hamiltonian. Returns the joint basis and, per constraint,
// the eigenvalue of each joint basis vector.
struct JointBasis {
  MatrixC basis;
  std::vector<std::vector<double>> eigenvalues;  // [constraint][column]
};

JointBasis joint_diagonalize(const SpectralDecomposition& spec,
                             const std::vector<Constraint>& constraints) {
  const long d = spec.dim();
  MatrixC v = spec.basis();
  std::vector<std::pair<int, int>> blocks;  // (offset, size)
  for (int k = 0; k < spec.n_levels(); ++k) blocks.push_back({spec.level_offset(k), spec.multiplicity(k)});

  for (const auto& c : constraints) {
    const double scale = std::max(1.0, operator_norm_bound(c.observable));
    std::vector<std::pair<int, int>> refined;
    for (const auto& [off, size] : blocks) {
      if (size == 1) {
        refined.push_back({off, 1});
        continue;
      }
      const MatrixC sub = v.middleCols(off, size).adjoint() * c.observable * v.middleCols(off, size);
      VectorR vals;
      MatrixC vecs;
      hermitian_eigensystem(sub, vals, vecs);
      v.middleCols(off, size) = v.middleCols(off, size) * vecs;
      int i = 0;
      while (i < size) {
        int j = i;
        while (j + 1 < size && vals(j + 1) - vals(j) < 1e-10 * scale) ++j;
        refined.push_back({off + i, j - i + 1});
        i = j + 1;
      }
    }
    blocks = std::move(refined);
  }

  JointBasis out;
  out.basis = std::move(v);
  out.eigenvalues.resize(constraints.size());
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    out.eigenvalues[i].resize(d);
    const MatrixC av = constraints[i].observable * out.basis;
    for (long col = 0; col < d; ++col)
      out.eigenvalues[i][col] = out.basis.col(col).dot(av.col(col)).real();
  }
  return out;
}

}  // namespace

MaxEntropyResult max_entropy_state(const SpectralDecomposition& spec,
                                   const std::vector<Constraint>& constraints,
                                   double target_tol, int max_iterations) {
  const long d = spec.dim();
  const int m = static_cast<int>(constraints.size());
  if (m == 0) throw precondition_error("max_entropy_state: no constraints");
  // commutation checks against H and within the family
  const MatrixC h = spec.from_eigenbasis(
      MatrixC(VectorC(Eigen::Map<const VectorR>(spec.column_energies().data(), d).cast<cxd>())
                  .asDiagonal()));
  for (int i = 0; i < m; ++i) {
    const MatrixC& a = constraints[i].observable;
    if (!is_hermitian(a, 1e-10))
      throw precondition_error("max_entropy_state: constraint " + std::to_string(i) +
                               " is not Hermitian");
    const double sa = std::max(1.0, operator_norm_bound(a));
    if (operator_norm_bound(MatrixC(a * h - h * a)) >
        tol::commutation * sa * std::max(1.0, operator_norm_bound(h)))
      throw precondition_error("max_entropy_state: constraint " + std::to_string(i) +
                               " does not commute with the Hamiltonian");
    for (int j = 0; j < i; ++j) {
      const MatrixC& b = constraints[j].observable;
      if (operator_norm_bound(MatrixC(a * b - b * a)) >
          tol::commutation * sa * std::max(1.0, operator_norm_bound(b)))
        throw precondition_error("max_entropy_state: constraints " + std::to_string(i) + " and " +
                                 std::to_string(j) + " do not commute");
    }
  }

  JointBasis joint = joint_diagonalize(spec, constraints);

  // attainability: each target must lie in the range of joint eigenvalues
  for (int i = 0; i < m; ++i) {
    const auto [lo, hi] =
        std::minmax_element(joint.eigenvalues[i].begin(), joint.eigenvalues[i].end());
    if (constraints[i].target < *lo - 1e-12 || constraints[i].target > *hi + 1e-12)
      throw precondition_error("max_entropy_state: target of constraint " + std::to_string(i) +
                               " violates the hull inequality [" + std::to_string(*lo) + ", " +
                               std::to_string(*hi) + "]");
  }

  // dual Newton on F(beta) = ln Z(beta) + sum beta_i t_i over the joint
  // eigenvalue populations q_c ~ exp(-sum_i beta_i a_i(c))
  VectorR beta = VectorR::Zero(m);
  VectorR q(d);
  auto populate = [&](const VectorR& b) {
    double shift = -std::numeric_limits<double>::infinity();
    for (long c = 0; c < d; ++c) {
      double s = 0.0;
      for (int i = 0; i < m; ++i) s -= b(i) * joint.eigenvalues[i][c];
      q(c) = s;
      shift = std::max(shift, s);
    }
    double z = 0.0;
    for (long c = 0; c < d; ++c) {
      q(c) = std::exp(q(c) - shift);
      z += q(c);
    }
    q /= z;
    return std::log(z) + shift;
  };
  auto objective = [&](const VectorR& b) {
    double f = populate(b);
    for (int i = 0; i < m; ++i) f += b(i) * constraints[i].target;
    return f;
  };

  MaxEntropyResult result;
  result.converged = false;
  result.newton_iterations = 0;

  double f_curr = objective(beta);
  for (int it = 0; it < max_iterations; ++it) {
    result.newton_iterations = it + 1;
    // gradient and Hessian (constraint covariance under q)
    VectorR mean(m);
    for (int i = 0; i < m; ++i) {
      double acc = 0.0;
      for (long c = 0; c < d; ++c) acc += q(c) * joint.eigenvalues[i][c];
      mean(i) = acc;
    }
    VectorR grad(m);
    for (int i = 0; i < m; ++i) grad(i) = constraints[i].target - mean(i);
    result.residual = grad.cwiseAbs().maxCoeff();
    if (result.residual <= target_tol) {
      result.converged = true;
      break;
    }
    MatrixR hess(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j <= i; ++j) {
        double acc = 0.0;
        for (long c = 0; c < d; ++c)
          acc += q(c) * (joint.eigenvalues[i][c] - mean(i)) * (joint.eigenvalues[j][c] - mean(j));
        hess(i, j) = acc;
        hess(j, i) = acc;
      }
    // pseudo-inverse step; singular directions (dependent constraints) are dropped
    Eigen::SelfAdjointEigenSolver<MatrixR> hes(hess);
    const double cutoff = 1e-13 * std::max(hes.eigenvalues().maxCoeff(), 1e-300);
    VectorR inv_vals(m);
    result.dropped_constraints.clear();
    for (int i = 0; i < m; ++i) inv_vals(i) = hes.eigenvalues()(i) > cutoff ? 1.0 / hes.eigenvalues()(i) : 0.0;
    const VectorR step =
        -(hes.eigenvectors() * inv_vals.asDiagonal() * hes.eigenvectors().transpose() * grad);

    // Armijo backtracking on the convex dual
    double alpha = 1.0;
    const double slope = grad.dot(step);
    bool moved = false;
    for (int ls = 0; ls < 60; ++ls) {
      const VectorR trial = beta + alpha * step;
      const double f_trial = objective(trial);
      if (f_trial <= f_curr + 1e-4 * alpha * slope) {
        beta = trial;
        f_curr = f_trial;
        moved = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!moved) break;
  }
  populate(beta);

  result.multipliers.assign(beta.data(), beta.data() + m);
  result.state = joint.basis * q.cast<cxd>().asDiagonal() * joint.basis.adjoint();
  result.entropy_bits = 0.0;
  for (long c = 0; c < d; ++c)
    if (q(c) > 1e-300) result.entropy_bits -= q(c) * std::log2(q(c));
  {
    VectorR mean(m);
    for (int i = 0; i < m; ++i) {
      double acc = 0.0;
      for (long c = 0; c < d; ++c) acc += q(c) * joint.eigenvalues[i][c];
      mean(i) = acc;
    }
    double res = 0.0;
    for (int i = 0; i < m; ++i) res = std::max(res, std::abs(mean(i) - constraints[i].target));
    result.residual = res;
    result.converged = res <= target_tol;
  }
  return result;
}

namespace {

double golden_section_minimize(const std::function<double(double)>& f, double lo, double hi,
                               int iterations = 60) {
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < iterations; ++i) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = f(x2);
    }
  }
  return f1 < f2 ? x1 : x2;
}

// Minimise D(target, g[spec](beta)) over beta: coarse log grid in both signs
// refined by golden section.
std::pair<double, double> best_thermal_fit(const MatrixC& target, const SpectralDecomposition& spec) {
  const double range = std::max(spec.spectral_range(), 1e-12);
  auto dist = [&](double beta) { return trace_distance(target, gibbs_state(spec, beta)); };
  double best_beta = 0.0, best_d = dist(0.0);
  for (int sign = -1; sign <= 1; sign += 2)
    for (int i = 0; i < 64; ++i) {
      const double mag = std::exp(std::log(1e-3) + (std::log(50.0) - std::log(1e-3)) * i / 63.0);
      const double beta = sign * mag / range;
      const double d = dist(beta);
      if (d < best_d) {
        best_d = d;
        best_beta = beta;
      }
    }
  const double span = std::max(std::abs(best_beta), 1e-3 / range);
  const double refined =
      golden_section_minimize(dist, best_beta - 0.5 * span, best_beta + 0.5 * span);
  if (dist(refined) < best_d) {
    best_d = dist(refined);
    best_beta = refined;
  }
  return {best_beta, best_d};
}

}  // namespace

CountingReductionReport counting_reduction_check(const MatrixC& h_s, const MatrixC& h_b,
                                                 const EnergyWindow& window) {
  const SpectralDecomposition spec_s = diagonalize(h_s);
  const SpectralDecomposition spec_b = diagonalize(h_b);
  const auto& es = spec_s.column_energies();
  const auto& eb = spec_b.column_energies();
  const long ds = spec_s.dim();

  // reduced micro-canonical state of H0 = HS + HB on the leading factor
  std::vector<long> counts(ds, 0);
  long total = 0;
  for (long l = 0; l < ds; ++l) {
    for (double emb : eb)
      if (window.contains(es[l] + emb)) ++counts[l];
    total += counts[l];
  }
  CountingReductionReport rep{};
  rep.window_rank = total;
  rep.low_statistics = total < 10 * ds;
  if (total == 0) throw precondition_error("counting_reduction_check: empty window");

  VectorR weights(ds);
  for (long l = 0; l < ds; ++l) weights(l) = static_cast<double>(counts[l]) / total;
  const MatrixC reduced =
      spec_s.basis() * weights.cast<cxd>().asDiagonal() * spec_s.basis().adjoint();

  auto [beta, d] = best_thermal_fit(reduced, spec_s);
  rep.best_beta = beta;
  rep.best_distance = d;

  // affine fit of ln #_Delta[HB] over [window.lo - ||HS||, window.lo + ||HS||]
  const double hs_norm = hermitian_eigenvalues(h_s).cwiseAbs().maxCoeff();
  const double delta = window.width();
  const int n_grid = 41;
  std::vector<double> xs, ys;
  for (int i = 0; i < n_grid; ++i) {
    const double e = window.lo - hs_norm + 2.0 * hs_norm * i / (n_grid - 1);
    long cnt = 0;
    for (double emb : eb)
      if (emb >= e && emb <= e + delta) ++cnt;
    if (cnt > 0) {
      xs.push_back(e);
      ys.push_back(std::log(static_cast<double>(cnt)));
    }
  }
  if (xs.size() >= 2) {
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sx += xs[i];
      sy += ys[i];
      sxx += xs[i] * xs[i];
      sxy += xs[i] * ys[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / n;
    double rss = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double r = ys[i] - slope * xs[i] - intercept;
      rss += r * r;
    }
    rep.counting_slope = -slope;  // #_Delta ~ exp(-beta E) gives slope -beta
    rep.counting_fit_rms = std::sqrt(rss / n);
  } else {
    rep.counting_slope = 0.0;
    rep.counting_fit_rms = std::numeric_limits<double>::quiet_NaN();
  }
  return rep;
}

namespace {
long rank_in(const SpectralDecomposition& spec, double lo, double hi) {
  long rank = 0;
  for (int k = 0; k < spec.n_levels(); ++k)
    if (spec.energy(k) >= lo && spec.energy(k) <= hi) rank += spec.multiplicity(k);
  return rank;
}

long rank_edge_shells(const SpectralDecomposition& spec, const EnergyWindow& w, double eps) {
  // [lo, lo+eps] union [hi-eps, hi]; counted once when the shells overlap
  if (2.0 * eps >= w.width()) return rank_in(spec, w.lo, w.hi);
  return rank_in(spec, w.lo, w.lo + eps) + rank_in(spec, w.hi - eps, w.hi);
}

MatrixC window_projector(const SpectralDecomposition& spec, const EnergyWindow& w) {
  std::vector<int> cols;
  for (int k = 0; k < spec.n_levels(); ++k)
    if (w.contains(spec.energy(k)))
      for (int c = spec.level_offset(k); c < spec.level_offset(k) + spec.multiplicity(k); ++c)
        cols.push_back(c);
  MatrixC p = MatrixC::Zero(spec.dim(), spec.dim());
  if (cols.empty()) return p;
  MatrixC block(spec.dim(), static_cast<long>(cols.size()));
  for (std::size_t i = 0; i < cols.size(); ++i) block.col(i) = spec.basis().col(cols[i]);
  p = block * block.adjoint();
  return p;
}
}  // namespace

StabilityReport projector_stability_bound(const MatrixC& h, const MatrixC& h_prime,
                                          const EnergyWindow& window, double epsilon) {
  if (epsilon <= 0) throw precondition_error("projector_stability_bound: epsilon must be positive");
  const SpectralDecomposition spec = diagonalize(h);
  const SpectralDecomposition spec_p = diagonalize(h_prime);
  StabilityReport rep{};
  rep.epsilon = epsilon;
  rep.rank_p = microcanonical_rank(spec, window);
  rep.rank_p_prime = microcanonical_rank(spec_p, window);
  rep.rank_edge = rank_edge_shells(spec, window, epsilon);
  rep.rank_edge_prime = rank_edge_shells(spec_p, window, epsilon);
  const double perturbation = hermitian_eigenvalues(MatrixC(h - h_prime)).cwiseAbs().maxCoeff();
  rep.rhs = static_cast<double>(rep.rank_p + rep.rank_p_prime) * perturbation / epsilon +
            static_cast<double>(rep.rank_edge + rep.rank_edge_prime);
  const MatrixC diff = window_projector(spec, window) - window_projector(spec_p, window);
  rep.lhs = hermitian_eigenvalues(diff).cwiseAbs().sum();
  rep.satisfied = rep.lhs <= rep.rhs + 1e-9;
  return rep;
}

MicrocanonicalStabilityReport microcanonical_stability_bound(const MatrixC& h,
                                                             const MatrixC& h_prime,
                                                             const EnergyWindow& window,
                                                             double epsilon) {
  if (epsilon <= 0)
    throw precondition_error("microcanonical_stability_bound: epsilon must be positive");
  const SpectralDecomposition spec = diagonalize(h);
  const SpectralDecomposition spec_p = diagonalize(h_prime);
  MicrocanonicalStabilityReport rep{};
  rep.epsilon = epsilon;
  const long r1 = microcanonical_rank(spec, window);
  const long r2 = microcanonical_rank(spec_p, window);
  if (r1 == 0 || r2 == 0)
    throw precondition_error("microcanonical_stability_bound: empty window");
  rep.omega_min = std::min(r1, r2);
  rep.omega_max = std::max(r1, r2);
  rep.omega_edge = rank_edge_shells(spec, window, epsilon) + rank_edge_shells(spec_p, window, epsilon);
  const double perturbation = hermitian_eigenvalues(MatrixC(h - h_prime)).cwiseAbs().maxCoeff();
  rep.rhs = perturbation / epsilon +
            static_cast<double>(rep.omega_max - rep.omega_min + rep.omega_edge) /
                (2.0 * static_cast<double>(rep.omega_max));
  rep.lhs = trace_distance(microcanonical_state(spec, window), microcanonical_state(spec_p, window));
  rep.heuristic_epsilon = std::sqrt(perturbation * window.width() / 2.0);
  rep.satisfied = rep.lhs <= rep.rhs + 1e-9;
  return rep;
}

RectangularState rectangular_state(const SpectralDecomposition& spec, const EnergyWindow& window,
                                   Rng& rng) {
  // columns in the window grouped per level; chain c takes the c-th column of
  // every level that has one, so each chain meets each level at most once
  std::vector<std::vector<int>> level_cols;
  int max_mult = 0;
  long total = 0;
  for (int k = 0; k < spec.n_levels(); ++k) {
    if (!window.contains(spec.energy(k))) continue;
    std::vector<int> cols;
    for (int c = spec.level_offset(k); c < spec.level_offset(k) + spec.multiplicity(k); ++c)
      cols.push_back(c);
    max_mult = std::max(max_mult, static_cast<int>(cols.size()));
    total += static_cast<long>(cols.size());
    level_cols.push_back(std::move(cols));
  }
  if (total == 0) throw precondition_error("rectangular_state: no levels in the window");

  RectangularState out;
  out.pure = max_mult == 1;
  MatrixC rho = MatrixC::Zero(spec.dim(), spec.dim());
  for (int chain = 0; chain < max_mult; ++chain) {
    std::vector<int> members;
    for (const auto& cols : level_cols)
      if (chain < static_cast<int>(cols.size())) members.push_back(cols[chain]);
    VectorC psi = VectorC::Zero(spec.dim());
    const double amp = 1.0 / std::sqrt(static_cast<double>(members.size()));
    for (int c : members) {
      const double theta = rng.uniform(0.0, 2.0 * M_PI);
      psi += amp * std::exp(cxd(0, theta)) * spec.basis().col(c);
    }
    rho += (static_cast<double>(members.size()) / static_cast<double>(total)) *
           (psi * psi.adjoint());
  }
  out.state = rho;
  return out;
}

ThermalisationReport thermalisation_pipeline(const LocalHamiltonian& h, int n_system_sites,
                                             const EnergyWindow& window, Rng& rng,
                                             const std::vector<double>& grid,
                                             double weak_coupling_threshold) {
  const SiteGraph& graph = h.graph();
  std::vector<int> s_sites, b_sites;
  for (int i = 0; i < graph.n_sites(); ++i)
    (i < n_system_sites ? s_sites : b_sites).push_back(i);

  const MatrixC h_full = h.assemble();
  const MatrixC h_s_full = h.restricted(s_sites);
  const MatrixC h_b_full = h.restricted(b_sites);
  const MatrixC h_i = h_full - h_s_full - h_b_full;

  const MatrixC h_s = h.restricted_truncated(s_sites);
  const MatrixC h_b = h.restricted_truncated(b_sites);

  ThermalisationReport rep{};
  rep.interaction_norm = hermitian_eigenvalues(h_i).cwiseAbs().maxCoeff();

  const CountingReductionReport counting = counting_reduction_check(h_s, h_b, window);
  rep.counting_residual = counting.best_distance;
  rep.beta_hat = counting.counting_slope;
  rep.weak_coupling_product = rep.beta_hat * rep.interaction_norm;
  rep.window_width_check =
      rep.beta_hat > 0 ? 1.0 / (rep.beta_hat * window.width()) : std::numeric_limits<double>::infinity();
  rep.weak_coupling_ok =
      rep.weak_coupling_product <= weak_coupling_threshold && rep.window_width_check <= 1.0;

  const SpectralDecomposition spec = diagonalize(h_full);
  const RectangularState rect = rectangular_state(spec, window, rng);
  rep.initial_state_pure = rect.pure;

  const SpectralDecomposition spec_s = diagonalize(h_s);
  const MatrixC thermal_target = gibbs_state(spec_s, rep.beta_hat);

  Trajectory dist;
  if (rect.pure) {
    Eigen::SelfAdjointEigenSolver<MatrixC> es(rect.state);
    const VectorC psi = es.eigenvectors().col(es.eigenvalues().size() - 1);
    const VectorC amp = spec.to_eigenbasis(psi);
    const auto& energies = spec.column_energies();
    for (double t : grid) {
      VectorC shifted = amp;
      for (long j = 0; j < shifted.size(); ++j) shifted(j) *= std::exp(cxd(0, -energies[j] * t));
      const VectorC psi_t = spec.from_eigenbasis(shifted);
      dist.push(t, trace_distance(partial_trace_pure(psi_t, s_sites, graph), thermal_target));
    }
  } else {
    for (double t : grid)
      dist.push(t, trace_distance(partial_trace(evolve_state(spec, rect.state, t), s_sites, graph),
                                  thermal_target));
  }
  rep.time_averaged_distance = finite_time_average(dist);
  return rep;
}

std::vector<EnsembleEquivalenceRow> equivalence_of_ensembles_scan(
    const std::vector<LocalHamiltonian>& family, double beta, const std::vector<int>& region_sizes) {
  std::vector<EnsembleEquivalenceRow> rows;
  for (const auto& h : family) {
    const SiteGraph& graph = h.graph();
    const SpectralDecomposition spec = diagonalize(h.assemble());
    const auto& e = spec.column_energies();
    const VectorR w = [&] {
      VectorR weights(spec.dim());
      double shift = -beta * e[0], z = 0.0;
      for (double x : e) shift = std::max(shift, -beta * x);
      for (long j = 0; j < spec.dim(); ++j) {
        weights(j) = std::exp(-beta * e[j] - shift);
        z += weights(j);
      }
      return VectorR(weights / z);
    }();
    double e_v = 0.0, e2 = 0.0;
    for (long j = 0; j < spec.dim(); ++j) {
      e_v += w(j) * e[j];
      e2 += w(j) * e[j] * e[j];
    }
    const double delta_v = std::sqrt(std::max(0.0, e2 - e_v * e_v));
    const EnergyWindow window{e_v - 0.5 * delta_v, e_v + 0.5 * delta_v};

    VectorR mc_weights = VectorR::Zero(spec.dim());
    long rank = 0;
    for (long j = 0; j < spec.dim(); ++j)
      if (window.contains(e[j])) {
        mc_weights(j) = 1.0;
        ++rank;
      }
    if (rank == 0) {
      rows.push_back({graph.n_sites(), -1, e_v, delta_v,
                      std::numeric_limits<double>::quiet_NaN()});
      continue;
    }
    mc_weights /= static_cast<double>(rank);

    for (int size : region_sizes) {
      std::vector<int> region;
      const int start = std::max(0, (graph.n_sites() - size) / 2);
      for (int i = 0; i < size; ++i) region.push_back(start + i);
      const MatrixC mc_red = weighted_reduction(spec.basis(), mc_weights, region, graph);
      const MatrixC gibbs_red = weighted_reduction(spec.basis(), w, region, graph);
      rows.push_back(
          {graph.n_sites(), size, e_v, delta_v, trace_distance(mc_red, gibbs_red)});
    }
  }
  return rows;
}

}  // namespace thermolab
