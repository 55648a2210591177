#include "thermolab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace thermolab {

EthScan eth_scan(const MatrixC& observable, const SpectralDecomposition& spec, double window_width,
                 int offdiagonal_band) {
  if (window_width <= 0) throw precondition_error("eth_scan: window width must be positive");
  const MatrixC at = spec.to_eigenbasis(observable);
  const long d = spec.dim();

  EthScan scan;
  scan.energies.assign(spec.column_energies().begin(), spec.column_energies().end());
  scan.diagonal_elements.resize(d);
  for (long j = 0; j < d; ++j) scan.diagonal_elements[j] = at(j, j).real();

  scan.level_spread.resize(spec.n_levels(), 0.0);
  for (int k = 0; k < spec.n_levels(); ++k) {
    const int mult = spec.multiplicity(k);
    if (mult == 1) continue;
    const MatrixC block = at.block(spec.level_offset(k), spec.level_offset(k), mult, mult);
    const VectorR vals = hermitian_eigenvalues(block);
    scan.level_spread[k] = vals.maxCoeff() - vals.minCoeff();
  }

  for (long j = 0; j < d; ++j)
    for (long l = j + 1; l <= std::min(d - 1, j + offdiagonal_band); ++l)
      scan.offdiagonal_samples.push_back(std::abs(at(j, l)));

  // half-overlapping windows across the spectrum
  const double e_min = spec.e_min(), e_max = spec.e_max();
  for (double lo = e_min; lo < e_max; lo += 0.5 * window_width) {
    EthWindowStat w{};
    w.center = lo + 0.5 * window_width;
    double sum = 0.0, sum2 = 0.0, mn = 0.0, mx = 0.0;
    int count = 0;
    for (long j = 0; j < d; ++j) {
      const double e = scan.energies[j];
      if (e < lo || e > lo + window_width) continue;
      const double v = scan.diagonal_elements[j];
      if (count == 0) {
        mn = mx = v;
      } else {
        mn = std::min(mn, v);
        mx = std::max(mx, v);
      }
      sum += v;
      sum2 += v * v;
      ++count;
    }
    if (count == 0) continue;
    w.count = count;
    w.mean = sum / count;
    w.variance = sum2 / count - w.mean * w.mean;
    w.spread = mx - mn;
    w.thermal_value = std::numeric_limits<double>::quiet_NaN();
    if (w.center > e_min && w.center < e_max) {
      const double beta = beta_from_energy(spec, w.center);
      // Tr(A g(beta)) from the diagonal elements and Boltzmann weights
      double shift = -beta * scan.energies[0];
      for (double e : scan.energies) shift = std::max(shift, -beta * e);
      double z = 0.0, acc = 0.0;
      for (long j = 0; j < d; ++j) {
        const double g = std::exp(-beta * scan.energies[j] - shift);
        z += g;
        acc += g * scan.diagonal_elements[j];
      }
      w.thermal_value = acc / z;
    }
    scan.windows.push_back(w);
  }
  return scan;
}

double effective_eigenbasis_entanglement(const VectorC& psi, const SpectralDecomposition& spec,
                                         const std::vector<int>& region, const SiteGraph& graph) {
  if (std::abs(psi.norm() - 1.0) > 1e-8)
    throw precondition_error("effective_eigenbasis_entanglement: state must be pure and normalised");
  const VectorC amp = spec.to_eigenbasis(psi);
  const MatrixC psi_s = partial_trace_pure(psi, region, graph);
  double r = 0.0;
  for (int k = 0; k < spec.n_levels(); ++k) {
    const int off = spec.level_offset(k), mult = spec.multiplicity(k);
    VectorC proj = VectorC::Zero(psi.size());
    for (int c = off; c < off + mult; ++c) proj += amp(c) * spec.basis().col(c);
    const double pk = proj.squaredNorm();
    if (pk < 1e-14) continue;
    r += pk * trace_distance(partial_trace_pure(proj, region, graph) / pk, psi_s);
  }
  return r;
}

namespace {
VectorC kron_vec(const VectorC& a, const VectorC& b) {
  VectorC out(a.size() * b.size());
  for (long i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}
}  // namespace

MemoryBoundReport initial_state_memory_bound(const VectorC& psi_s1, const VectorC& psi_s2,
                                             const VectorC& psi_bath,
                                             const SpectralDecomposition& spec,
                                             const std::vector<int>& region,
                                             const SiteGraph& graph) {
  for (std::size_t i = 0; i < region.size(); ++i)
    if (region[i] != static_cast<int>(i))
      throw precondition_error("initial_state_memory_bound: subsystem must occupy the leading sites");
  const long d_s = graph.dim_of(region);
  if (psi_s1.size() != d_s || psi_s2.size() != d_s)
    throw precondition_error("initial_state_memory_bound: subsystem factor dimension mismatch");
  VectorC psi1 = kron_vec(psi_s1, psi_bath);
  VectorC psi2 = kron_vec(psi_s2, psi_bath);
  psi1 /= psi1.norm();
  psi2 /= psi2.norm();

  MemoryBoundReport rep{};
  rep.r1 = effective_eigenbasis_entanglement(psi1, spec, region, graph);
  rep.r2 = effective_eigenbasis_entanglement(psi2, spec, region, graph);
  const MatrixC omega1 = partial_trace(dephase(psi1 * psi1.adjoint(), spec), region, graph);
  const MatrixC omega2 = partial_trace(dephase(psi2 * psi2.adjoint(), spec), region, graph);
  rep.lhs = trace_distance(omega1, omega2);
  rep.initial = trace_distance(partial_trace_pure(psi1, region, graph),
                               partial_trace_pure(psi2, region, graph));
  rep.rhs = rep.initial - rep.r1 - rep.r2;
  rep.satisfied = rep.lhs >= rep.rhs - 1e-9;
  return rep;
}

MatrixC anderson_hamiltonian(int length, double lambda, double disorder_width, Rng& rng) {
  if (length < 2) throw precondition_error("anderson_hamiltonian: need at least two sites");
  MatrixR h = MatrixR::Zero(length, length);
  for (int x = 0; x + 1 < length; ++x) {
    h(x, x + 1) = 1.0;
    h(x + 1, x) = 1.0;
  }
  for (int x = 0; x < length; ++x)
    h(x, x) = lambda * rng.uniform(-disorder_width / 2.0, disorder_width / 2.0);
  return h.cast<cxd>();
}

LocalizationReport eigenfunction_localization(const SpectralDecomposition& single_particle) {
  const long l = single_particle.dim();
  LocalizationReport rep;
  for (long c = 0; c < l; ++c) {
    const VectorC v = single_particle.basis().col(c);
    double ipr = 0.0;
    long peak = 0;
    double peak_amp = 0.0;
    for (long x = 0; x < l; ++x) {
      const double p = std::norm(v(x));
      ipr += p * p;
      if (p > peak_amp) {
        peak_amp = p;
        peak = x;
      }
    }
    rep.ipr.push_back(ipr);
    // log-amplitude regression beyond the peak
    std::vector<double> xs, ys;
    for (long x = 0; x < l; ++x) {
      const double amp = std::abs(v(x));
      const long dist = std::abs(x - peak);
      if (dist >= 1 && amp > 1e-13) {
        xs.push_back(static_cast<double>(dist));
        ys.push_back(std::log(amp));
      }
    }
    if (xs.size() >= 3) {
      const double n = static_cast<double>(xs.size());
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
      }
      const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
      rep.decay_length.push_back(slope < 0 ? -1.0 / slope
                                           : std::numeric_limits<double>::quiet_NaN());
    } else {
      rep.decay_length.push_back(std::numeric_limits<double>::quiet_NaN());
    }
  }
  auto median = [](std::vector<double> v) {
    v.erase(std::remove_if(v.begin(), v.end(), [](double x) { return std::isnan(x); }), v.end());
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
  };
  rep.median_ipr = median(rep.ipr);
  rep.median_decay_length = median(rep.decay_length);
  return rep;
}

Trajectory transport_moments(int start_site, const SpectralDecomposition& single_particle,
                             const std::vector<double>& grid, double q) {
  if (q <= 0) throw precondition_error("transport_moments: q must be positive");
  const long l = single_particle.dim();
  if (start_site < 0 || start_site >= l)
    throw precondition_error("transport_moments: start site out of range");
  VectorC psi0 = VectorC::Zero(l);
  psi0(start_site) = 1.0;
  const VectorC amp = single_particle.to_eigenbasis(psi0);
  const auto& e = single_particle.column_energies();
  Trajectory out;
  for (double t : grid) {
    VectorC shifted = amp;
    for (long j = 0; j < l; ++j) shifted(j) *= std::exp(cxd(0, -e[j] * t));
    const VectorC psi_t = single_particle.from_eigenbasis(shifted);
    double moment = 0.0;
    for (long x = 0; x < l; ++x)
      moment += std::norm(psi_t(x)) * std::pow(std::abs(static_cast<double>(x - start_site)), q);
    out.push(t, moment);
  }
  return out;
}

std::vector<long> sz_sector_basis(int n_sites, int n_up) {
  if (n_up < 0 || n_up > n_sites) throw precondition_error("sz_sector_basis: invalid filling");
  std::vector<long> basis;
  const long d = 1L << n_sites;
  for (long s = 0; s < d; ++s)
    if (__builtin_popcountll(static_cast<unsigned long long>(s)) == n_up) basis.push_back(s);
  return basis;
}

MatrixC sector_matrix(const LocalHamiltonian& h, const std::vector<long>& basis_states) {
  const SiteGraph& graph = h.graph();
  const int n = graph.n_sites();
  for (int s = 0; s < n; ++s)
    if (graph.local_dim(s) != 2)
      throw precondition_error("sector_matrix: only spin-1/2 chains are supported");
  const long dim = static_cast<long>(basis_states.size());
  MatrixC out = MatrixC::Zero(dim, dim);

  auto state_index = [&](long s) -> long {
    const auto it = std::lower_bound(basis_states.begin(), basis_states.end(), s);
    if (it == basis_states.end() || *it != s) return -1;
    return static_cast<long>(it - basis_states.begin());
  };

  for (const auto& term : h.terms()) {
    const int k = static_cast<int>(term.sites.size());
    const long sub = 1L << k;
    std::vector<int> bits;  // bit position of each term site, MSB convention
    for (int s : term.sites) bits.push_back(n - 1 - s);
    for (long col = 0; col < dim; ++col) {
      const long state = basis_states[col];
      long in_digits = 0;
      for (int i = 0; i < k; ++i) in_digits = (in_digits << 1) | ((state >> bits[i]) & 1);
      for (long out_digits = 0; out_digits < sub; ++out_digits) {
        const cxd amp = term.op(out_digits, in_digits);
        if (amp == cxd(0, 0)) continue;
        long new_state = state;
        for (int i = 0; i < k; ++i) {
          const long bit = (out_digits >> (k - 1 - i)) & 1;
          new_state = (new_state & ~(1L << bits[i])) | (bit << bits[i]);
        }
        const long row = state_index(new_state);
        if (row < 0) {
          if (std::abs(amp) > 1e-14)
            throw precondition_error("sector_matrix: Hamiltonian does not conserve the sector");
          continue;
        }
        out(row, col) += amp;
      }
    }
  }
  return out;
}

VectorC sector_to_full(const VectorC& v, const std::vector<long>& basis_states, long full_dim) {
  if (v.size() != static_cast<long>(basis_states.size()))
    throw precondition_error("sector_to_full: dimension mismatch");
  VectorC out = VectorC::Zero(full_dim);
  for (long i = 0; i < v.size(); ++i) out(basis_states[i]) = v(i);
  return out;
}

long neel_index(int n_sites) {
  long idx = 0;
  for (int site = 1; site < n_sites; site += 2) idx |= 1L << (n_sites - 1 - site);
  return idx;
}

namespace {
// (N_A - N_B) per sector basis state, A = even sites (initially up for Neel).
VectorR sublattice_imbalance_diagonal(const std::vector<long>& basis_states, int n_sites) {
  VectorR diag(static_cast<long>(basis_states.size()));
  for (std::size_t i = 0; i < basis_states.size(); ++i) {
    const long s = basis_states[i];
    int n_a = 0, n_b = 0;
    for (int site = 0; site < n_sites; ++site) {
      const bool up = ((s >> (n_sites - 1 - site)) & 1) == 0;
      if (!up) continue;
      if (site % 2 == 0)
        ++n_a;
      else
        ++n_b;
    }
    diag(i) = static_cast<double>(n_a - n_b);
  }
  return diag;
}
}  // namespace

Trajectory imbalance_trajectory(const SpectralDecomposition& sector_spec,
                                const std::vector<long>& basis_states, int n_sites,
                                const std::vector<double>& grid) {
  if (n_sites % 2 != 0) throw precondition_error("imbalance_trajectory: n must be even");
  const long neel = neel_index(n_sites);
  const auto it = std::lower_bound(basis_states.begin(), basis_states.end(), neel);
  if (it == basis_states.end() || *it != neel)
    throw precondition_error("imbalance_trajectory: Neel state not in the sector basis");
  VectorC psi0 = VectorC::Zero(static_cast<long>(basis_states.size()));
  psi0(static_cast<long>(it - basis_states.begin())) = 1.0;

  const VectorR diag = sublattice_imbalance_diagonal(basis_states, n_sites);
  const double total = n_sites / 2.0;  // conserved up-spin count for the Neel start
  const VectorC amp = sector_spec.to_eigenbasis(psi0);
  const auto& e = sector_spec.column_energies();
  Trajectory out;
  for (double t : grid) {
    VectorC shifted = amp;
    for (long j = 0; j < shifted.size(); ++j) shifted(j) *= std::exp(cxd(0, -e[j] * t));
    const VectorC psi_t = sector_spec.from_eigenbasis(shifted);
    double acc = 0.0;
    for (long s = 0; s < psi_t.size(); ++s) acc += std::norm(psi_t(s)) * diag(s);
    out.push(t, acc / total);
  }
  return out;
}

double imbalance_infinite_time(const SpectralDecomposition& sector_spec,
                               const std::vector<long>& basis_states, int n_sites) {
  const long neel = neel_index(n_sites);
  const auto it = std::lower_bound(basis_states.begin(), basis_states.end(), neel);
  if (it == basis_states.end() || *it != neel)
    throw precondition_error("imbalance_infinite_time: Neel state not in the sector basis");
  VectorC psi0 = VectorC::Zero(static_cast<long>(basis_states.size()));
  psi0(static_cast<long>(it - basis_states.begin())) = 1.0;
  const VectorR diag = sublattice_imbalance_diagonal(basis_states, n_sites);
  MatrixC obs = MatrixC::Zero(diag.size(), diag.size());
  obs.diagonal() = diag.cast<cxd>();
  ExpectationEvolver ev(obs, psi0, sector_spec);
  return ev.equilibrium_value() / (n_sites / 2.0);
}

namespace {
struct LinearFit {
  double slope, intercept, r2;
};
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
    syy += y[i] * y[i];
  }
  LinearFit f{};
  const double denom = n * sxx - sx * sx;
  f.slope = denom != 0 ? (n * sxy - sx * sy) / denom : 0.0;
  f.intercept = (sy - f.slope * sx) / n;
  double ss_res = 0.0;
  const double mean_y = sy / n;
  double ss_tot = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double pred = f.slope * x[i] + f.intercept;
    ss_res += (y[i] - pred) * (y[i] - pred);
    ss_tot += (y[i] - mean_y) * (y[i] - mean_y);
  }
  f.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  return f;
}
}  // namespace

double mbl_mean_r(int n_sites, double disorder, int realizations, Rng& rng) {
  double acc = 0.0;
  for (int real = 0; real < realizations; ++real) {
    Rng sub = rng.substream(static_cast<std::uint64_t>(real));
    const LocalHamiltonian h = models::disordered_heisenberg(n_sites, disorder, sub);
    const auto basis = sz_sector_basis(n_sites, n_sites / 2);
    const VectorR evals = hermitian_eigenvalues(sector_matrix(h, basis));
    const long d = evals.size();
    std::vector<double> mid(evals.data() + d / 3, evals.data() + 2 * d / 3);
    acc += level_spacing_ratios(mid).mean_ratio;
  }
  return acc / realizations;
}

MblReport mbl_report(int n_sites, const std::vector<double>& disorder_grid, int realizations,
                     Rng& rng, int entanglement_grid_points, double entanglement_t_max) {
  if (realizations < 1) throw precondition_error("mbl_report: need at least one realization");
  MblReport report;
  const auto basis = sz_sector_basis(n_sites, n_sites / 2);
  const long full_dim = 1L << n_sites;
  const SiteGraph graph = SiteGraph::chain(n_sites);
  std::vector<int> half_region;
  for (int i = 0; i < n_sites / 2; ++i) half_region.push_back(i);

  // log-spaced entanglement grid
  std::vector<double> ent_grid;
  for (int i = 0; i < entanglement_grid_points; ++i)
    ent_grid.push_back(0.5 * std::pow(entanglement_t_max / 0.5,
                                      static_cast<double>(i) / (entanglement_grid_points - 1)));

  for (std::size_t wi = 0; wi < disorder_grid.size(); ++wi) {
    const double w = disorder_grid[wi];
    MblRow row{};
    row.disorder = w;
    std::vector<double> ent_sum(ent_grid.size(), 0.0);
    for (int real = 0; real < realizations; ++real) {
      Rng sub = rng.substream(static_cast<std::uint64_t>(wi * 100000 + real));
      const LocalHamiltonian h = models::disordered_heisenberg(n_sites, w, sub);
      const MatrixC hm = sector_matrix(h, basis);
      const SpectralDecomposition spec = diagonalize(hm, 0.0);  // no clustering under disorder

      const auto& evals = spec.raw_eigenvalues();
      const long d = static_cast<long>(evals.size());
      std::vector<double> mid(evals.begin() + d / 3, evals.begin() + 2 * d / 3);
      row.mean_r += level_spacing_ratios(mid).mean_ratio;

      row.imbalance_infty += imbalance_infinite_time(spec, basis, n_sites);

      // half-chain entanglement growth from the Neel start
      const long neel = neel_index(n_sites);
      const auto it = std::lower_bound(basis.begin(), basis.end(), neel);
      VectorC psi0 = VectorC::Zero(d);
      psi0(static_cast<long>(it - basis.begin())) = 1.0;
      const VectorC amp = spec.to_eigenbasis(psi0);
      for (std::size_t ti = 0; ti < ent_grid.size(); ++ti) {
        VectorC shifted = amp;
        for (long j = 0; j < d; ++j)
          shifted(j) *= std::exp(cxd(0, -spec.column_energies()[j] * ent_grid[ti]));
        const VectorC full = sector_to_full(spec.from_eigenbasis(shifted), basis, full_dim);
        ent_sum[ti] += von_neumann_entropy(partial_trace_pure(full, half_region, graph));
      }

      // mean half-chain entanglement entropy of mid-spectrum eigenstates
      double ent_eig = 0.0;
      int count = 0;
      for (long c = d / 3; c < 2 * d / 3; ++c) {
        const VectorC full = sector_to_full(spec.basis().col(c), basis, full_dim);
        ent_eig += von_neumann_entropy(partial_trace_pure(full, half_region, graph));
        ++count;
      }
      row.eigenstate_entropy_mean += ent_eig / count;
    }
    row.mean_r /= realizations;
    row.imbalance_infty /= realizations;
    row.eigenstate_entropy_mean /= realizations;

    std::vector<double> log_t, lin_t, ent;
    for (std::size_t ti = 0; ti < ent_grid.size(); ++ti) {
      ent.push_back(ent_sum[ti] / realizations);
      log_t.push_back(std::log(ent_grid[ti]));
      lin_t.push_back(ent_grid[ti]);
    }
    row.entanglement_log_r2 = fit_line(log_t, ent).r2;
    row.entanglement_linear_r2 = fit_line(lin_t, ent).r2;
    report.rows.push_back(row);
  }

  // crossover where mean r passes the midpoint between the GOE and Poisson values
  const double mid_r = 0.5 * (r_goe + r_poisson);
  report.crossover_disorder = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i + 1 < report.rows.size(); ++i) {
    const double a = report.rows[i].mean_r - mid_r;
    const double b = report.rows[i + 1].mean_r - mid_r;
    if (a >= 0 && b < 0) {
      const double frac = a / (a - b);
      report.crossover_disorder =
          report.rows[i].disorder + frac * (report.rows[i + 1].disorder - report.rows[i].disorder);
      break;
    }
  }
  return report;
}

}  // namespace thermolab
