#include "thermolab/hamiltonian.hpp"

#include <algorithm>

#include "thermolab/fermions.hpp"

namespace thermolab {

LocalHamiltonian::LocalHamiltonian(SiteGraph graph, std::vector<LocalOperator> terms)
    : graph_(std::move(graph)), terms_(std::move(terms)) {
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    auto& t = terms_[i];
    if (!std::is_sorted(t.sites.begin(), t.sites.end()))
      throw precondition_error("LocalHamiltonian: term sites must be ascending");
    const long expect = graph_.dim_of(t.sites);
    if (t.op.rows() != expect || t.op.cols() != expect)
      throw precondition_error("LocalHamiltonian: term " + std::to_string(i) +
                               " dimension does not match its edge");
    if (!is_hermitian(t.op))
      throw precondition_error("LocalHamiltonian: term " + std::to_string(i) + " is not Hermitian");
  }
}

MatrixC LocalHamiltonian::assemble() const {
  const long d = graph_.dim();
  MatrixC h = MatrixC::Zero(d, d);
  for (const auto& t : terms_) h += embed_local_operator(t, graph_);
  return h;
}

MatrixC LocalHamiltonian::restricted(const std::vector<int>& region) const {
  std::vector<bool> in(graph_.n_sites(), false);
  for (int s : region) in[s] = true;
  const long d = graph_.dim();
  MatrixC h = MatrixC::Zero(d, d);
  for (const auto& t : terms_) {
    bool inside = true;
    for (int s : t.sites) inside = inside && in[s];
    if (inside) h += embed_local_operator(t, graph_);
  }
  return h;
}

MatrixC LocalHamiltonian::restricted_truncated(const std::vector<int>& region) const {
  std::vector<int> sorted = region;
  std::sort(sorted.begin(), sorted.end());
  std::vector<int> pos(graph_.n_sites(), -1);
  for (std::size_t i = 0; i < sorted.size(); ++i) pos[sorted[i]] = static_cast<int>(i);

  std::vector<int> sub_dims;
  for (int s : sorted) sub_dims.push_back(graph_.local_dim(s));
  SiteGraph sub(static_cast<int>(sorted.size()), {}, graph_.kind(), sub_dims);

  const long d = sub.dim();
  MatrixC h = MatrixC::Zero(d, d);
  for (const auto& t : terms_) {
    bool inside = true;
    for (int s : t.sites) inside = inside && pos[s] >= 0;
    if (!inside) continue;
    std::vector<int> mapped;
    for (int s : t.sites) mapped.push_back(pos[s]);
    h += embed_local_operator(t.op, mapped, sub);
  }
  return h;
}

double LocalHamiltonian::local_interaction_strength() const {
  double j = 0.0;
  for (const auto& t : terms_) {
    Eigen::SelfAdjointEigenSolver<MatrixC> es(t.op, Eigen::EigenvaluesOnly);
    j = std::max(j, es.eigenvalues().cwiseAbs().maxCoeff());
  }
  return j;
}

namespace models {

LocalHamiltonian transverse_field_ising(int n, double j, double hx, double hz, bool periodic) {
  SiteGraph graph = SiteGraph::chain(n, SystemKind::spin, periodic);
  std::vector<LocalOperator> terms;
  const MatrixC zz = kron(pauli::sigma_z(), pauli::sigma_z());
  for (int i = 0; i + 1 < n; ++i) terms.push_back({-j * zz, {i, i + 1}});
  if (periodic && n > 2) terms.push_back({-j * zz, {0, n - 1}});
  for (int i = 0; i < n; ++i) {
    MatrixC field = -hx * pauli::sigma_x() - hz * pauli::sigma_z();
    if (hx != 0.0 || hz != 0.0) terms.push_back({field, {i}});
  }
  return LocalHamiltonian(std::move(graph), std::move(terms));
}

namespace {
MatrixC heisenberg_bond() {
  return 0.25 * (kron(pauli::sigma_x(), pauli::sigma_x()) + kron(pauli::sigma_y(), pauli::sigma_y()) +
                 kron(pauli::sigma_z(), pauli::sigma_z()));
}
}  // namespace

LocalHamiltonian heisenberg(int n, const std::vector<double>& fields, bool periodic) {
  if (!fields.empty() && static_cast<int>(fields.size()) != n)
    throw precondition_error("heisenberg: field list size mismatch");
  SiteGraph graph = SiteGraph::chain(n, SystemKind::spin, periodic);
  std::vector<LocalOperator> terms;
  for (int i = 0; i + 1 < n; ++i) terms.push_back({heisenberg_bond(), {i, i + 1}});
  if (periodic && n > 2) terms.push_back({heisenberg_bond(), {0, n - 1}});
  for (int i = 0; i < n && !fields.empty(); ++i)
    if (fields[i] != 0.0) terms.push_back({fields[i] * 0.5 * pauli::sigma_z(), {i}});
  return LocalHamiltonian(std::move(graph), std::move(terms));
}

LocalHamiltonian disordered_heisenberg(int n, double w, Rng& rng, bool periodic) {
  std::vector<double> fields(n);
  for (int i = 0; i < n; ++i) fields[i] = rng.uniform(-w, w);
  return heisenberg(n, fields, periodic);
}

LocalHamiltonian random_local_chain(int n, Rng& rng, double coupling_scale) {
  SiteGraph graph = SiteGraph::chain(n, SystemKind::spin, false);
  std::vector<LocalOperator> terms;
  const MatrixC paulis[3] = {pauli::sigma_x(), pauli::sigma_y(), pauli::sigma_z()};
  for (int i = 0; i + 1 < n; ++i) {
    MatrixC bond = MatrixC::Zero(4, 4);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) bond += coupling_scale * rng.gaussian() * kron(paulis[a], paulis[b]);
    terms.push_back({bond, {i, i + 1}});
  }
  for (int i = 0; i < n; ++i) {
    MatrixC field = MatrixC::Zero(2, 2);
    for (int a = 0; a < 3; ++a) field += coupling_scale * rng.gaussian() * paulis[a];
    terms.push_back({field, {i}});
  }
  return LocalHamiltonian(std::move(graph), std::move(terms));
}

LocalHamiltonian spinless_fermion_chain(int n, double t_hop, double u, bool periodic) {
  SiteGraph graph = SiteGraph::chain(n, SystemKind::fermion, periodic);
  // Two-site block of f^dag_1 f_2 + f^dag_2 f_1 and n_1 n_2 on adjacent modes;
  // the Jordan-Wigner string is internal to the block for nearest neighbours.
  const MatrixC f1 = jordan_wigner(1, 2, FermionOp::annihilate);
  const MatrixC f2 = jordan_wigner(2, 2, FermionOp::annihilate);
  const MatrixC hop = f1.adjoint() * f2 + f2.adjoint() * f1;
  const MatrixC nn = (f1.adjoint() * f1) * (f2.adjoint() * f2);
  std::vector<LocalOperator> terms;
  for (int i = 0; i + 1 < n; ++i) terms.push_back({t_hop * hop + u * nn, {i, i + 1}});
  if (periodic && n > 2)
    throw precondition_error("spinless_fermion_chain: periodic boundary crosses the Jordan-Wigner string");
  return LocalHamiltonian(std::move(graph), std::move(terms));
}

}  // namespace models

}  // namespace thermolab
