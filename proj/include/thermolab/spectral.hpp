#pragma once

#include <vector>

#include "thermolab/types.hpp"

namespace thermolab {

// Eigendecomposition of a Hermitian operator with adjacent eigenvalues merged
// into degenerate levels. Projectors are not materialised; the decomposition
// keeps the full eigenbasis U with column ranges per level.
class SpectralDecomposition {
 public:
  SpectralDecomposition(MatrixC basis, std::vector<double> raw_eigenvalues,
                        std::vector<int> level_offsets, std::vector<double> level_energies);

  long dim() const { return basis_.rows(); }
  int n_levels() const { return static_cast<int>(level_energies_.size()); }
  double energy(int level) const { return level_energies_[level]; }
  const std::vector<double>& energies() const { return level_energies_; }
  int multiplicity(int level) const { return level_offsets_[level + 1] - level_offsets_[level]; }
  int level_offset(int level) const { return level_offsets_[level]; }
  int level_of_column(int col) const;

  const MatrixC& basis() const { return basis_; }
  const std::vector<double>& raw_eigenvalues() const { return raw_eigenvalues_; }
  // Per-column energy after clustering (level energy repeated by multiplicity).
  const std::vector<double>& column_energies() const { return column_energies_; }

  bool basis_is_real() const { return basis_is_real_; }
  // Real view of the eigenbasis; only valid when basis_is_real().
  const MatrixR& basis_real() const;

  // Materialised spectral projector of one level.
  MatrixC projector(int level) const;

  double e_min() const { return level_energies_.front(); }
  double e_max() const { return level_energies_.back(); }
  double spectral_range() const { return e_max() - e_min(); }
  double min_nonzero_gap() const;

  // Conjugation into the eigenbasis, U^dag A U.
  MatrixC to_eigenbasis(const MatrixC& a) const;
  // Same for an operator diagonal in the computational basis (single gemm).
  MatrixC to_eigenbasis_diagonal(const VectorR& diag) const;
  MatrixC from_eigenbasis(const MatrixC& a_tilde) const;
  VectorC to_eigenbasis(const VectorC& v) const;
  VectorC from_eigenbasis(const VectorC& v) const;

  // Level populations p_k = Tr(Pi_k rho).
  std::vector<double> level_populations(const MatrixC& rho) const;
  std::vector<double> level_populations(const VectorC& psi) const;

 private:
  MatrixC basis_;
  mutable MatrixR basis_real_cache_;
  mutable bool basis_real_cached_ = false;
  bool basis_is_real_ = false;
  std::vector<double> raw_eigenvalues_;
  std::vector<int> level_offsets_;  // size n_levels + 1
  std::vector<double> level_energies_;
  std::vector<double> column_energies_;
};

// Diagonalize a Hermitian matrix; adjacent eigenvalues closer than
// degeneracy_tol * (E_max - E_min) merge into one level. Uses the real
// symmetric solver when the input is real.
SpectralDecomposition diagonalize(const MatrixC& h, double degeneracy_tol = tol::degeneracy);

// Plain Hermitian eigensolve (ascending eigenvalues), no clustering.
void hermitian_eigensystem(const MatrixC& h, VectorR& eigenvalues, MatrixC& eigenvectors);
VectorR hermitian_eigenvalues(const MatrixC& h);

// Maximal number of ordered level pairs (k, l), k != l, whose gap E_k - E_l
// falls in a window [E, E+epsilon]; exact sliding-window over the sorted gap
// multiset. N(0) uses window width zero up to the clustering tolerance.
long gap_count(const SpectralDecomposition& spec, double epsilon);

bool has_nondegenerate_gaps(const SpectralDecomposition& spec, double rel_tol = tol::degeneracy);

struct GapStatistics {
  std::vector<double> spacing_ratios;  // r_j in [0, 1]
  double mean_ratio = 0.0;
};

// Ratio of consecutive level spacings r_j = min(d_j, d_j+1)/max(d_j, d_j+1).
GapStatistics level_spacing_ratios(const std::vector<double>& energies);
GapStatistics level_spacing_ratios(const SpectralDecomposition& spec);

// Reference mean spacing ratios.
inline constexpr double r_poisson = 0.38629436111989062;  // 2 ln 2 - 1
inline constexpr double r_goe = 0.5307;
inline constexpr double r_gue = 0.5996;

// Number of eigenstates (with multiplicity) with energy in [e, e + delta].
long number_of_states(const SpectralDecomposition& spec, double e, double delta);

// f(t) = (1/d) sum_k exp(-i E_k t) over eigenvalues with multiplicity.
cxd fourier_spectrum(const std::vector<double>& eigenvalues, double t);

}  // namespace thermolab
