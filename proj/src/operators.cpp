#include "thermolab/operators.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>

namespace thermolab {

namespace pauli {
MatrixC identity(int dim) { return MatrixC::Identity(dim, dim); }
MatrixC sigma_x() {
  MatrixC m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
MatrixC sigma_y() {
  MatrixC m(2, 2);
  m << 0, cxd(0, -1), cxd(0, 1), 0;
  return m;
}
MatrixC sigma_z() {
  MatrixC m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}
MatrixC sigma_plus() {
  MatrixC m(2, 2);
  m << 0, 1, 0, 0;
  return m;
}
MatrixC sigma_minus() {
  MatrixC m(2, 2);
  m << 0, 0, 1, 0;
  return m;
}
}  // namespace pauli

MatrixC kron(const MatrixC& a, const MatrixC& b) {
  MatrixC out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

bool is_hermitian(const MatrixC& a, double rel_tol) {
  const double scale = std::max(1.0, operator_norm_bound(a));
  return operator_norm_bound(MatrixC(a - a.adjoint())) <= rel_tol * scale;
}

MatrixC hermitize(const MatrixC& a, double* correction) {
  MatrixC h = 0.5 * (a + a.adjoint());
  if (correction) *correction = operator_norm_bound(MatrixC(a - h));
  return h;
}

bool is_density_matrix(const MatrixC& rho, double trace_tol, double pos_tol) {
  if (rho.rows() != rho.cols()) return false;
  if (!is_hermitian(rho, 1e-10)) return false;
  if (std::abs(rho.trace().real() - 1.0) > trace_tol || std::abs(rho.trace().imag()) > trace_tol)
    return false;
  Eigen::SelfAdjointEigenSolver<MatrixC> es(rho, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -pos_tol;
}

namespace {

// Index helpers for mixed-radix tensor decomposition. Site 0 is the most
// significant factor throughout the library.
struct RegionIndexer {
  std::vector<int> region_sites;
  std::vector<int> env_sites;
  std::vector<long> region_stride_full;  // stride of each region site in the full index
  std::vector<long> env_stride_full;
  std::vector<int> region_dims;
  std::vector<int> env_dims;
  long region_dim = 1, env_dim = 1;

  RegionIndexer(const SiteGraph& graph, const std::vector<int>& region) {
    const int n = graph.n_sites();
    std::vector<bool> in(n, false);
    for (int s : region) {
      if (s < 0 || s >= n) throw precondition_error("region site out of range");
      if (in[s]) throw precondition_error("region contains a repeated site");
      in[s] = true;
    }
    std::vector<long> stride(n, 1);
    for (int s = n - 2; s >= 0; --s) stride[s] = stride[s + 1] * graph.local_dim(s + 1);
    region_sites = region;
    for (int s : region_sites) {
      region_stride_full.push_back(stride[s]);
      region_dims.push_back(graph.local_dim(s));
      region_dim *= graph.local_dim(s);
    }
    for (int s = 0; s < n; ++s)
      if (!in[s]) {
        env_sites.push_back(s);
        env_stride_full.push_back(stride[s]);
        env_dims.push_back(graph.local_dim(s));
        env_dim *= graph.local_dim(s);
      }
  }

  // Full-space index of (region index a, environment index e).
  long full_index(long a, long e) const {
    long idx = 0;
    for (int i = static_cast<int>(region_dims.size()) - 1; i >= 0; --i) {
      idx += (a % region_dims[i]) * region_stride_full[i];
      a /= region_dims[i];
    }
    for (int i = static_cast<int>(env_dims.size()) - 1; i >= 0; --i) {
      idx += (e % env_dims[i]) * env_stride_full[i];
      e /= env_dims[i];
    }
    return idx;
  }
};

}  // namespace

bool is_even_fermionic(const MatrixC& op) {
  const long d = op.rows();
  // parity of the Fock basis state = (-1)^(number of occupied modes)
  for (long i = 0; i < d; ++i)
    for (long j = 0; j < d; ++j) {
      if (op(i, j) == cxd(0, 0)) continue;
      int pi = __builtin_popcountll(static_cast<unsigned long long>(i));
      int pj = __builtin_popcountll(static_cast<unsigned long long>(j));
      if (((pi ^ pj) & 1) && std::abs(op(i, j)) > 1e-14) return false;
    }
  return true;
}

MatrixC embed_local_operator(const MatrixC& op, const std::vector<int>& region,
                             const SiteGraph& graph) {
  std::vector<int> sorted = region;
  std::sort(sorted.begin(), sorted.end());
  if (sorted != region)
    throw precondition_error("embed_local_operator: region must be given in ascending site order");
  RegionIndexer ix(graph, region);
  if (op.rows() != ix.region_dim || op.cols() != ix.region_dim)
    throw precondition_error("embed_local_operator: operator dimension does not match region");

  if (graph.kind() == SystemKind::fermion) {
    if (!is_even_fermionic(op))
      throw precondition_error(
          "embed_local_operator: odd fermionic operators cannot be embedded "
          "(fermion number parity superselection)");
    for (std::size_t i = 0; i + 1 < region.size(); ++i)
      if (region[i + 1] != region[i] + 1)
        throw precondition_error(
            "embed_local_operator: fermionic embedding requires a contiguous block of modes");
  }

  const long d = graph.dim();
  MatrixC out = MatrixC::Zero(d, d);
  for (long e = 0; e < ix.env_dim; ++e)
    for (long a = 0; a < ix.region_dim; ++a) {
      const long row = ix.full_index(a, e);
      for (long b = 0; b < ix.region_dim; ++b) {
        if (op(a, b) == cxd(0, 0)) continue;
        out(row, ix.full_index(b, e)) = op(a, b);
      }
    }
  return out;
}

MatrixC embed_local_operator(const LocalOperator& lop, const SiteGraph& graph) {
  return embed_local_operator(lop.op, lop.sites, graph);
}

MatrixC embed_single_site(const MatrixC& op1, int site, const SiteGraph& graph) {
  return embed_local_operator(op1, {site}, graph);
}

}  // namespace thermolab
