#include "thermolab/spectral.hpp"

#include <lapacke.h>

#include "thermolab/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace thermolab {

SpectralDecomposition::SpectralDecomposition(MatrixC basis, std::vector<double> raw_eigenvalues,
                                             std::vector<int> level_offsets,
                                             std::vector<double> level_energies)
    : basis_(std::move(basis)),
      raw_eigenvalues_(std::move(raw_eigenvalues)),
      level_offsets_(std::move(level_offsets)),
      level_energies_(std::move(level_energies)) {
  basis_is_real_ = basis_.imag().cwiseAbs().maxCoeff() == 0.0;
  column_energies_.resize(raw_eigenvalues_.size());
  for (int k = 0; k < n_levels(); ++k)
    for (int c = level_offsets_[k]; c < level_offsets_[k + 1]; ++c)
      column_energies_[c] = level_energies_[k];
}

int SpectralDecomposition::level_of_column(int col) const {
  auto it = std::upper_bound(level_offsets_.begin(), level_offsets_.end(), col);
  return static_cast<int>(it - level_offsets_.begin()) - 1;
}

const MatrixR& SpectralDecomposition::basis_real() const {
  if (!basis_is_real_) throw std::logic_error("SpectralDecomposition: basis is not real");
  if (!basis_real_cached_) {
    basis_real_cache_ = basis_.real();
    basis_real_cached_ = true;
  }
  return basis_real_cache_;
}

MatrixC SpectralDecomposition::projector(int level) const {
  const auto block = basis_.middleCols(level_offsets_[level], multiplicity(level));
  return block * block.adjoint();
}

double SpectralDecomposition::min_nonzero_gap() const {
  double g = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < level_energies_.size(); ++k)
    g = std::min(g, level_energies_[k] - level_energies_[k - 1]);
  return g;
}

MatrixC SpectralDecomposition::to_eigenbasis(const MatrixC& a) const {
  if (basis_is_real_ && a.imag().cwiseAbs().maxCoeff() == 0.0) {
    const MatrixR& u = basis_real();
    MatrixR result = u.transpose() * (a.real() * u);
    return result.cast<cxd>();
  }
  return basis_.adjoint() * (a * basis_);
}

MatrixC SpectralDecomposition::to_eigenbasis_diagonal(const VectorR& diag) const {
  if (diag.size() != basis_.rows())
    throw precondition_error("to_eigenbasis_diagonal: dimension mismatch");
  if (basis_is_real_) {
    const MatrixR& u = basis_real();
    MatrixR scaled = diag.asDiagonal() * u;
    MatrixR result = u.transpose() * scaled;
    return result.cast<cxd>();
  }
  MatrixC scaled = diag.asDiagonal() * basis_;
  return basis_.adjoint() * scaled;
}

MatrixC SpectralDecomposition::from_eigenbasis(const MatrixC& a_tilde) const {
  return basis_ * (a_tilde * basis_.adjoint());
}

VectorC SpectralDecomposition::to_eigenbasis(const VectorC& v) const { return basis_.adjoint() * v; }
VectorC SpectralDecomposition::from_eigenbasis(const VectorC& v) const { return basis_ * v; }

std::vector<double> SpectralDecomposition::level_populations(const MatrixC& rho) const {
  std::vector<double> p(n_levels(), 0.0);
  for (int k = 0; k < n_levels(); ++k) {
    const auto block = basis_.middleCols(level_offsets_[k], multiplicity(k));
    p[k] = (block.adjoint() * rho * block).trace().real();
  }
  return p;
}

std::vector<double> SpectralDecomposition::level_populations(const VectorC& psi) const {
  const VectorC amp = basis_.adjoint() * psi;
  std::vector<double> p(n_levels(), 0.0);
  for (int c = 0; c < amp.size(); ++c) p[level_of_column(c)] += std::norm(amp(c));
  return p;
}

void hermitian_eigensystem(const MatrixC& h, VectorR& eigenvalues, MatrixC& eigenvectors) {
  if (h.rows() != h.cols()) throw precondition_error("hermitian_eigensystem: matrix not square");
  const int n = static_cast<int>(h.rows());
  eigenvalues.resize(n);
  const bool real_input = h.imag().cwiseAbs().maxCoeff() == 0.0;
  if (real_input) {
    MatrixR a = h.real();
    int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, a.data(), n, eigenvalues.data());
    if (info != 0)
      throw std::runtime_error("eigensolver failed to converge, dsyevd info = " + std::to_string(info) +
                               ", dim = " + std::to_string(n));
    eigenvectors = a.cast<cxd>();
  } else {
    MatrixC a = h;
    int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'L', n,
                              reinterpret_cast<lapack_complex_double*>(a.data()), n,
                              eigenvalues.data());
    if (info != 0)
      throw std::runtime_error("eigensolver failed to converge, zheevd info = " + std::to_string(info) +
                               ", dim = " + std::to_string(n));
    eigenvectors = std::move(a);
  }
}

VectorR hermitian_eigenvalues(const MatrixC& h) {
  if (h.rows() != h.cols()) throw precondition_error("hermitian_eigenvalues: matrix not square");
  const int n = static_cast<int>(h.rows());
  VectorR w(n);
  const bool real_input = h.imag().cwiseAbs().maxCoeff() == 0.0;
  if (real_input) {
    MatrixR a = h.real();
    int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'N', 'L', n, a.data(), n, w.data());
    if (info != 0) throw std::runtime_error("dsyevd (values) failed, info = " + std::to_string(info));
  } else {
    MatrixC a = h;
    int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'N', 'L', n,
                              reinterpret_cast<lapack_complex_double*>(a.data()), n, w.data());
    if (info != 0) throw std::runtime_error("zheevd (values) failed, info = " + std::to_string(info));
  }
  return w;
}

SpectralDecomposition diagonalize(const MatrixC& h, double degeneracy_tol) {
  if (!is_hermitian(h, 1e-10)) throw precondition_error("diagonalize: input is not Hermitian");
  VectorR w;
  MatrixC u;
  hermitian_eigensystem(h, w, u);
  const int n = static_cast<int>(w.size());
  const double range = w(n - 1) - w(0);
  const double tol_abs = degeneracy_tol * std::max(range, 1e-300);

  std::vector<double> raw(w.data(), w.data() + n);
  std::vector<int> offsets = {0};
  std::vector<double> energies;
  int i = 0;
  while (i < n) {
    int j = i;
    double acc = w(i);
    while (j + 1 < n && w(j + 1) - w(j) < tol_abs) {
      ++j;
      acc += w(j);
    }
    energies.push_back(acc / (j - i + 1));
    offsets.push_back(j + 1);
    i = j + 1;
  }
  return SpectralDecomposition(std::move(u), std::move(raw), std::move(offsets),
                               std::move(energies));
}

namespace {
std::vector<double> all_signed_gaps(const SpectralDecomposition& spec) {
  const auto& e = spec.energies();
  const int m = static_cast<int>(e.size());
  std::vector<double> gaps;
  gaps.reserve(static_cast<std::size_t>(m) * (m - 1));
  for (int k = 0; k < m; ++k)
    for (int l = 0; l < m; ++l)
      if (k != l) gaps.push_back(e[k] - e[l]);
  std::sort(gaps.begin(), gaps.end());
  return gaps;
}
}  // namespace

long gap_count(const SpectralDecomposition& spec, double epsilon) {
  if (epsilon < 0) throw precondition_error("gap_count: epsilon must be nonnegative");
  if (spec.n_levels() < 2) return 0;
  // Zero-width windows still merge numerically equal gaps.
  const double width = std::max(epsilon, tol::degeneracy * spec.spectral_range());
  const std::vector<double> gaps = all_signed_gaps(spec);
  long best = 1;
  std::size_t lo = 0;
  for (std::size_t hi = 0; hi < gaps.size(); ++hi) {
    while (gaps[hi] - gaps[lo] > width) ++lo;
    best = std::max<long>(best, static_cast<long>(hi - lo + 1));
  }
  return best;
}

bool has_nondegenerate_gaps(const SpectralDecomposition& spec, double rel_tol) {
  if (spec.n_levels() < 2) return true;
  const std::vector<double> gaps = all_signed_gaps(spec);
  const double tol_abs = rel_tol * spec.spectral_range();
  for (std::size_t i = 1; i < gaps.size(); ++i)
    if (gaps[i] - gaps[i - 1] <= tol_abs) return false;
  return true;
}

GapStatistics level_spacing_ratios(const std::vector<double>& energies) {
  if (energies.size() < 3)
    throw precondition_error("level_spacing_ratios: need at least three levels");
  std::vector<double> sorted = energies;
  std::sort(sorted.begin(), sorted.end());
  GapStatistics out;
  double acc = 0.0;
  for (std::size_t j = 1; j + 1 < sorted.size(); ++j) {
    const double d1 = sorted[j] - sorted[j - 1];
    const double d2 = sorted[j + 1] - sorted[j];
    const double hi = std::max(d1, d2);
    const double r = hi > 0 ? std::min(d1, d2) / hi : 1.0;
    out.spacing_ratios.push_back(r);
    acc += r;
  }
  out.mean_ratio = acc / static_cast<double>(out.spacing_ratios.size());
  return out;
}

GapStatistics level_spacing_ratios(const SpectralDecomposition& spec) {
  return level_spacing_ratios(spec.energies());
}

long number_of_states(const SpectralDecomposition& spec, double e, double delta) {
  if (delta < 0) throw precondition_error("number_of_states: delta must be nonnegative");
  long count = 0;
  for (int k = 0; k < spec.n_levels(); ++k)
    if (spec.energy(k) >= e && spec.energy(k) <= e + delta) count += spec.multiplicity(k);
  return count;
}

cxd fourier_spectrum(const std::vector<double>& eigenvalues, double t) {
  if (eigenvalues.empty()) throw precondition_error("fourier_spectrum: empty eigenvalue list");
  cxd acc(0, 0);
  for (double e : eigenvalues) acc += std::exp(cxd(0, -e * t));
  return acc / static_cast<double>(eigenvalues.size());
}

}  // namespace thermolab
