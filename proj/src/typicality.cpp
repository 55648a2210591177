#include "thermolab/typicality.hpp"

#include <Eigen/QR>
#include <functional>
#include <algorithm>
#include <cmath>

namespace thermolab {

VectorC haar_state(const MatrixC& subspace_basis, Rng& rng) {
  const long d_r = subspace_basis.cols();
  if (d_r < 1) throw precondition_error("haar_state: empty basis");
  const MatrixC gram = subspace_basis.adjoint() * subspace_basis;
  if (operator_norm_bound(MatrixC(gram - MatrixC::Identity(d_r, d_r))) > 1e-10)
    throw precondition_error("haar_state: basis is not orthonormal");
  VectorC coeff(d_r);
  for (long j = 0; j < d_r; ++j) coeff(j) = cxd(rng.gaussian(), rng.gaussian());
  coeff /= coeff.norm();
  return subspace_basis * coeff;
}

MatrixC haar_unitary(int dim, Rng& rng) {
  if (dim < 1) throw precondition_error("haar_unitary: dim must be positive");
  MatrixC ginibre(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) ginibre(i, j) = cxd(rng.gaussian(), rng.gaussian());
  Eigen::HouseholderQR<MatrixC> qr(ginibre);
  MatrixC q = qr.householderQ();
  const MatrixC r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j) {
    const cxd rjj = r(j, j);
    const cxd phase = std::abs(rjj) > 0 ? rjj / std::abs(rjj) : cxd(1, 0);
    q.col(j) *= phase;
  }
  return q;
}

namespace {

// Fixed universal gate set: Hadamard, T (pi/8 phase), CNOT.
const MatrixC& gate_hadamard() {
  static const MatrixC h = [] {
    MatrixC m(2, 2);
    const double s = 1.0 / std::sqrt(2.0);
    m << s, s, s, -s;
    return m;
  }();
  return h;
}

const MatrixC& gate_t() {
  static const MatrixC t = [] {
    MatrixC m = MatrixC::Zero(2, 2);
    m(0, 0) = 1;
    m(1, 1) = std::exp(cxd(0, M_PI / 4.0));
    return m;
  }();
  return t;
}

const MatrixC& gate_cnot() {
  static const MatrixC c = [] {
    MatrixC m = MatrixC::Zero(4, 4);
    m(0, 0) = 1;
    m(1, 1) = 1;
    m(2, 3) = 1;
    m(3, 2) = 1;
    return m;
  }();
  return c;
}

// Applies a one- or two-qubit gate in place to every column of u.
void apply_gate_rows(MatrixC& u, const MatrixC& gate, const std::vector<int>& qubits, int n) {
  const long d = u.rows();
  const int k = static_cast<int>(qubits.size());
  const long sub = 1L << k;
  std::vector<long> strides(k);
  for (int i = 0; i < k; ++i) strides[i] = 1L << (n - 1 - qubits[i]);
  std::vector<long> offsets(sub, 0);
  for (long a = 0; a < sub; ++a)
    for (int i = 0; i < k; ++i)
      if ((a >> (k - 1 - i)) & 1) offsets[a] += strides[i];

  std::vector<bool> visited(d, false);
  VectorC scratch(sub);
  for (long base = 0; base < d; ++base) {
    if (visited[base]) continue;
    bool is_base = true;
    for (int i = 0; i < k; ++i)
      if ((base / strides[i]) % 2) is_base = false;
    if (!is_base) continue;
    for (long col = 0; col < u.cols(); ++col) {
      for (long a = 0; a < sub; ++a) scratch(a) = u(base + offsets[a], col);
      for (long a = 0; a < sub; ++a) {
        cxd acc(0, 0);
        for (long b = 0; b < sub; ++b) acc += gate(a, b) * scratch(b);
        u(base + offsets[a], col) = acc;
      }
    }
    for (long a = 0; a < sub; ++a) visited[base + offsets[a]] = true;
  }
}

}  // namespace

MatrixC random_circuit_unitary(int n_qubits, int depth, Rng& rng) {
  if (depth < 0) throw precondition_error("random_circuit_unitary: negative depth");
  if (n_qubits < 2 && depth > 0)
    throw precondition_error("random_circuit_unitary: two-qubit gates need at least two qubits");
  const long d = 1L << n_qubits;
  MatrixC u = MatrixC::Identity(d, d);
  for (int step = 0; step < depth; ++step) {
    const int which = static_cast<int>(rng.uniform_int(3));
    if (which < 2) {
      const int q = static_cast<int>(rng.uniform_int(n_qubits));
      apply_gate_rows(u, which == 0 ? gate_hadamard() : gate_t(), {q}, n_qubits);
    } else {
      const int a = static_cast<int>(rng.uniform_int(n_qubits - 1));
      const bool flip = rng.uniform_int(2) == 1;
      std::vector<int> pair = flip ? std::vector<int>{a + 1, a} : std::vector<int>{a, a + 1};
      apply_gate_rows(u, gate_cnot(), pair, n_qubits);
    }
  }
  return u;
}

MatrixC random_hamiltonian(const MatrixC& g, const MatrixC& u) {
  if (g.rows() != u.rows()) throw precondition_error("random_hamiltonian: dimension mismatch");
  if (!is_hermitian(g, 1e-10)) throw precondition_error("random_hamiltonian: G must be Hermitian");
  return u * g * u.adjoint();
}

namespace {
ConcentrationReport run_concentration(int n_samples, double epsilon, long d_r, double bound,
                                      const std::function<double(Rng&)>& deviation, Rng& rng) {
  if (epsilon <= 0) throw precondition_error("concentration_experiment: epsilon must be positive");
  int exceed = 0;
  for (int s = 0; s < n_samples; ++s) {
    Rng sub = rng.substream(static_cast<std::uint64_t>(s));
    if (deviation(sub) >= epsilon) ++exceed;
  }
  ConcentrationReport rep{};
  rep.epsilon = epsilon;
  rep.n_samples = n_samples;
  rep.subspace_dim = d_r;
  rep.empirical_frequency = static_cast<double>(exceed) / n_samples;
  rep.bound = bound;
  const double p = std::min(bound, 1.0);
  rep.binomial_sigma = std::sqrt(p * (1.0 - p) / n_samples);
  rep.satisfied = rep.empirical_frequency <= rep.bound + 3.0 * rep.binomial_sigma;
  return rep;
}
}  // namespace

ConcentrationReport concentration_experiment_observable(const MatrixC& observable,
                                                        const MatrixC& subspace_basis,
                                                        int n_samples, double epsilon, Rng& rng) {
  const long d_r = subspace_basis.cols();
  const double norm_a = hermitian_eigenvalues(observable).cwiseAbs().maxCoeff();
  // reference value: expectation in the subspace micro-canonical state
  const MatrixC a_sub = subspace_basis.adjoint() * observable * subspace_basis;
  const double reference = a_sub.trace().real() / static_cast<double>(d_r);
  const double bound =
      2.0 * std::exp(-concentration_constant * d_r * epsilon * epsilon / (norm_a * norm_a));
  return run_concentration(
      n_samples, epsilon, d_r, bound,
      [&](Rng& sub) {
        const VectorC psi = haar_state(subspace_basis, sub);
        return std::abs((psi.adjoint() * observable * psi).value().real() - reference);
      },
      rng);
}

ConcentrationReport concentration_experiment_povm(const PovmSet& m, const SiteGraph& graph,
                                                  const MatrixC& subspace_basis, int n_samples,
                                                  double epsilon, Rng& rng) {
  const long d_r = subspace_basis.cols();
  const long support_dim = m.full_space_support() ? graph.dim() : graph.dim_of(m.support());
  const double h = std::min(static_cast<double>(m.distinct_element_count()),
                            static_cast<double>(support_dim));
  const MatrixC microcanonical =
      subspace_basis * subspace_basis.adjoint() / static_cast<double>(d_r);
  const double bound =
      2.0 * h * h * std::exp(-concentration_constant * d_r * epsilon * epsilon / (h * h));
  return run_concentration(
      n_samples, epsilon, d_r, bound,
      [&](Rng& sub) {
        const VectorC psi = haar_state(subspace_basis, sub);
        const MatrixC rho = psi * psi.adjoint();
        return restricted_distinguishability(rho, microcanonical, m, graph);
      },
      rng);
}

HaarEquilibrationReport haar_equilibration_experiment(const MatrixC& g, const VectorC& psi0,
                                                      const std::vector<int>& region,
                                                      const SiteGraph& graph,
                                                      const std::vector<double>& t_grid,
                                                      int n_samples, double epsilon, Rng& rng,
                                                      int circuit_depth) {
  if (epsilon <= 0) throw precondition_error("haar_equilibration: epsilon must be positive");
  const long d = g.rows();
  if (psi0.size() != d || graph.dim() != d)
    throw precondition_error("haar_equilibration: dimension mismatch");
  const long d_s = graph.dim_of(region);
  const long d_b = d / d_s;
  const int n_qubits = graph.n_sites();

  VectorR g_vals;
  MatrixC g_vecs;
  hermitian_eigensystem(g, g_vals, g_vecs);
  const std::vector<double> evals(g_vals.data(), g_vals.data() + d);

  // g_G = max eigenvalue multiplicity of G
  long g_degen = 1, runlen = 1;
  const double scale = std::max(1.0, g_vals.cwiseAbs().maxCoeff());
  for (long j = 1; j < d; ++j) {
    if (g_vals(j) - g_vals(j - 1) < 1e-10 * scale)
      ++runlen;
    else
      runlen = 1;
    g_degen = std::max(g_degen, runlen);
  }

  HaarEquilibrationReport rep;
  rep.epsilon = epsilon;
  rep.g_degeneracy = g_degen;
  rep.n_samples = n_samples;
  rep.circuit_variant = circuit_depth >= 0;
  rep.circuit_depth = std::max(circuit_depth, 0);

  std::vector<long> exceed(t_grid.size(), 0);
  for (int s = 0; s < n_samples; ++s) {
    Rng sub = rng.substream(static_cast<std::uint64_t>(s));
    const MatrixC u =
        rep.circuit_variant ? random_circuit_unitary(n_qubits, circuit_depth, sub) : haar_unitary(static_cast<int>(d), sub);
    // Eigenbasis of H_G(U) = (U V) diag(g_vals) (U V)^dag
    const MatrixC w = u * g_vecs;
    const VectorC amp = w.adjoint() * psi0;
    // omega^S: populations dephased in the (possibly degenerate) eigenbasis
    // degenerate levels keep within-block coherences; handle by projecting
    // per level rather than per column
    MatrixC omega_s;
    {
      VectorC block_vec = VectorC::Zero(d);
      MatrixC acc = MatrixC::Zero(d_s, d_s);
      long start = 0;
      while (start < d) {
        long end = start + 1;
        while (end < d && g_vals(end) - g_vals(end - 1) < 1e-10 * scale) ++end;
        VectorC proj = VectorC::Zero(d);
        for (long c = start; c < end; ++c) proj += amp(c) * w.col(c);
        acc += partial_trace_pure(proj, region, graph);
        start = end;
      }
      omega_s = acc;  // trace = 1 since projections are orthogonal
    }

    for (std::size_t ti = 0; ti < t_grid.size(); ++ti) {
      VectorC shifted = amp;
      for (long j = 0; j < d; ++j) shifted(j) *= std::exp(cxd(0, -g_vals(j) * t_grid[ti]));
      const VectorC psi_t = w * shifted;
      const double dist = trace_distance(partial_trace_pure(psi_t, region, graph), omega_s);
      const double f_abs = std::abs(fourier_spectrum(evals, t_grid[ti]));
      const double threshold =
          std::sqrt(static_cast<double>(d_s)) / (2.0 * epsilon) *
          std::sqrt(std::pow(f_abs, 4) +
                    static_cast<double>(g_degen) * g_degen / (static_cast<double>(d) * d) +
                    7.0 / static_cast<double>(d_b));
      if (dist > threshold) ++exceed[ti];
    }
  }

  for (std::size_t ti = 0; ti < t_grid.size(); ++ti) {
    HaarEquilibrationPoint pt{};
    pt.t = t_grid[ti];
    const double f_abs = std::abs(fourier_spectrum(evals, t_grid[ti]));
    pt.threshold = std::sqrt(static_cast<double>(d_s)) / (2.0 * epsilon) *
                   std::sqrt(std::pow(f_abs, 4) +
                             static_cast<double>(g_degen) * g_degen / (static_cast<double>(d) * d) +
                             7.0 / static_cast<double>(d_b));
    pt.empirical_frequency = static_cast<double>(exceed[ti]) / n_samples;
    pt.vacuous = pt.threshold >= 1.0;
    pt.satisfied = rep.circuit_variant || pt.empirical_frequency < epsilon;
    rep.points.push_back(pt);
  }
  return rep;
}

}  // namespace thermolab
