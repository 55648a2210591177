#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace thermolab {

using cxd = std::complex<double>;
using MatrixC = Eigen::MatrixXcd;
using MatrixR = Eigen::MatrixXd;
using VectorC = Eigen::VectorXcd;
using VectorR = Eigen::VectorXd;

// Tolerances used by the structural invariants of the library.
namespace tol {
inline constexpr double hermiticity = 1e-12;   // relative to the operator norm
inline constexpr double trace_one = 1e-10;
inline constexpr double positivity = 1e-12;
inline constexpr double povm_completeness = 1e-10;
inline constexpr double degeneracy = 1e-10;    // relative to the spectral range
inline constexpr double commutation = 1e-10;
}  // namespace tol

class precondition_error : public std::invalid_argument {
 public:
  explicit precondition_error(const std::string& what) : std::invalid_argument(what) {}
};

inline double operator_norm_bound(const MatrixC& a) { return a.cwiseAbs().rowwise().sum().maxCoeff(); }

}  // namespace thermolab
