#pragma once

#include <vector>

#include "thermolab/graph.hpp"
#include "thermolab/types.hpp"

namespace thermolab {

namespace pauli {
MatrixC identity(int dim = 2);
MatrixC sigma_x();
MatrixC sigma_y();
MatrixC sigma_z();
MatrixC sigma_plus();
MatrixC sigma_minus();
}  // namespace pauli

MatrixC kron(const MatrixC& a, const MatrixC& b);

bool is_hermitian(const MatrixC& a, double rel_tol = tol::hermiticity);
// Symmetrizes (a + a^dag)/2; returns the correction norm through *correction.
MatrixC hermitize(const MatrixC& a, double* correction = nullptr);
bool is_density_matrix(const MatrixC& rho, double trace_tol = tol::trace_one,
                       double pos_tol = 1e-10);

// Operator supported on an explicit site subset of a graph.
struct LocalOperator {
  MatrixC op;               // matrix on the tensor factor of `sites`, in site order
  std::vector<int> sites;   // strictly increasing site indices
};

// Canonical embedding of an operator on `region` into the full space.
// Spin systems tensor with the identity on the complement. Fermionic systems
// require an even operator on a contiguous block of modes in Jordan-Wigner
// order, where the parity strings cancel and the embedding reduces to the
// tensor one.
MatrixC embed_local_operator(const MatrixC& op, const std::vector<int>& region,
                             const SiteGraph& graph);

MatrixC embed_local_operator(const LocalOperator& lop, const SiteGraph& graph);

// sigma_z (or any single-site operator) embedded at `site` of the graph.
MatrixC embed_single_site(const MatrixC& op1, int site, const SiteGraph& graph);

// Whether a block operator on 2^k modes is an even polynomial in the
// fermionic operators, i.e. commutes with the block parity.
bool is_even_fermionic(const MatrixC& op);

}  // namespace thermolab
