#pragma once

#include "thermolab/rng.hpp"
#include "thermolab/types.hpp"

namespace thermolab::testing {

inline VectorC random_state_vector(Rng& rng, long dim) {
  VectorC v(dim);
  for (long i = 0; i < dim; ++i) v(i) = cxd(rng.gaussian(), rng.gaussian());
  return v / v.norm();
}

inline MatrixC random_hermitian(Rng& rng, long dim) {
  MatrixC a(dim, dim);
  for (long i = 0; i < dim; ++i)
    for (long j = 0; j < dim; ++j) a(i, j) = cxd(rng.gaussian(), rng.gaussian());
  return 0.5 * (a + a.adjoint());
}

inline MatrixC random_real_symmetric(Rng& rng, long dim) {
  MatrixC a = MatrixC::Zero(dim, dim);
  for (long i = 0; i < dim; ++i)
    for (long j = 0; j <= i; ++j) {
      const double v = rng.gaussian();
      a(i, j) = v;
      a(j, i) = v;
    }
  return a;
}

// Mixed state from a few random pure states.
inline MatrixC random_density(Rng& rng, long dim, int rank = 3) {
  MatrixC rho = MatrixC::Zero(dim, dim);
  double total = 0.0;
  for (int r = 0; r < rank; ++r) {
    const double w = rng.uniform(0.1, 1.0);
    const VectorC psi = random_state_vector(rng, dim);
    rho += w * (psi * psi.adjoint());
    total += w;
  }
  return rho / total;
}

}  // namespace thermolab::testing
