#include "thermolab/states.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <set>

namespace thermolab {

namespace {

struct SplitIndexer {
  std::vector<long> keep_index;  // full index -> (keep part, env part)
  std::vector<long> env_index;
  long keep_dim = 1, env_dim = 1;

  SplitIndexer(const SiteGraph& graph, const std::vector<int>& keep) {
    const int n = graph.n_sites();
    std::vector<bool> in(n, false);
    for (int s : keep) {
      if (s < 0 || s >= n) throw precondition_error("partial_trace: site out of range");
      in[s] = true;
    }
    if (graph.kind() == SystemKind::fermion) {
      std::vector<int> sorted = keep;
      std::sort(sorted.begin(), sorted.end());
      for (std::size_t i = 0; i + 1 < sorted.size(); ++i)
        if (sorted[i + 1] != sorted[i] + 1)
          throw precondition_error(
              "partial_trace: fermionic reduced states are only defined on contiguous "
              "Jordan-Wigner blocks");
    }
    for (int s : keep) keep_dim *= graph.local_dim(s);
    const long d = graph.dim();
    env_dim = d / keep_dim;
    keep_index.resize(d);
    env_index.resize(d);
    // Walk all full indices once, accumulating mixed-radix digits.
    std::vector<int> digits(n, 0);
    std::vector<int> keep_sorted = keep;
    std::sort(keep_sorted.begin(), keep_sorted.end());
    // keep part uses the caller's (ascending) site order
    for (long idx = 0; idx < d; ++idx) {
      long rem = idx;
      for (int s = n - 1; s >= 0; --s) {
        digits[s] = static_cast<int>(rem % graph.local_dim(s));
        rem /= graph.local_dim(s);
      }
      long k = 0, e = 0;
      for (int s : keep_sorted) k = k * graph.local_dim(s) + digits[s];
      for (int s = 0; s < n; ++s)
        if (!in[s]) e = e * graph.local_dim(s) + digits[s];
      keep_index[idx] = k;
      env_index[idx] = e;
    }
  }
};

}  // namespace

MatrixC partial_trace(const MatrixC& rho, const std::vector<int>& keep, const SiteGraph& graph) {
  if (rho.rows() != graph.dim() || rho.cols() != graph.dim())
    throw precondition_error("partial_trace: state dimension does not match the graph");
  SplitIndexer ix(graph, keep);
  MatrixC out = MatrixC::Zero(ix.keep_dim, ix.keep_dim);
  // group full indices by environment part
  std::vector<std::vector<long>> by_env(ix.env_dim);
  for (long idx = 0; idx < graph.dim(); ++idx) by_env[ix.env_index[idx]].push_back(idx);
  for (const auto& members : by_env)
    for (long r : members)
      for (long c : members) out(ix.keep_index[r], ix.keep_index[c]) += rho(r, c);
  return out;
}

MatrixC partial_trace_pure(const VectorC& psi, const std::vector<int>& keep,
                           const SiteGraph& graph) {
  if (psi.size() != graph.dim())
    throw precondition_error("partial_trace_pure: state dimension does not match the graph");
  SplitIndexer ix(graph, keep);
  // psi reshaped to keep x env, reduced state = M M^dag
  MatrixC m = MatrixC::Zero(ix.keep_dim, ix.env_dim);
  for (long idx = 0; idx < psi.size(); ++idx) m(ix.keep_index[idx], ix.env_index[idx]) = psi(idx);
  return m * m.adjoint();
}

MatrixC weighted_reduction(const MatrixC& columns, const VectorR& weights,
                           const std::vector<int>& keep, const SiteGraph& graph) {
  if (columns.rows() != graph.dim())
    throw precondition_error("weighted_reduction: column dimension does not match the graph");
  if (columns.cols() != weights.size())
    throw precondition_error("weighted_reduction: weight count mismatch");
  SplitIndexer ix(graph, keep);
  MatrixC acc = MatrixC::Zero(ix.keep_dim, ix.keep_dim);
  MatrixC m(ix.keep_dim, ix.env_dim);
  for (long c = 0; c < columns.cols(); ++c) {
    if (weights(c) == 0.0) continue;
    m.setZero();
    for (long idx = 0; idx < columns.rows(); ++idx)
      m(ix.keep_index[idx], ix.env_index[idx]) = columns(idx, c);
    acc.noalias() += weights(c) * (m * m.adjoint());
  }
  return acc;
}

double trace_distance(const MatrixC& rho, const MatrixC& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols())
    throw precondition_error("trace_distance: dimension mismatch");
  Eigen::SelfAdjointEigenSolver<MatrixC> es(rho - sigma, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

namespace {
MatrixC matrix_sqrt_psd(const MatrixC& a) {
  Eigen::SelfAdjointEigenSolver<MatrixC> es(a);
  VectorR vals = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * vals.asDiagonal() * es.eigenvectors().adjoint();
}
}  // namespace

double fidelity(const MatrixC& rho, const MatrixC& sigma) {
  if (rho.rows() != sigma.rows())
    throw precondition_error("fidelity: dimension mismatch");
  const MatrixC root = matrix_sqrt_psd(rho);
  Eigen::SelfAdjointEigenSolver<MatrixC> es(root * sigma * root, Eigen::EigenvaluesOnly);
  const double tr = es.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  return std::min(1.0, tr * tr);
}

cxd covariance(const MatrixC& rho, const MatrixC& a, const MatrixC& b) {
  if (rho.rows() != a.rows() || a.rows() != b.rows())
    throw precondition_error("covariance: dimension mismatch");
  return (rho * a * b).trace() - (rho * a).trace() * (rho * b).trace();
}

double von_neumann_entropy(const MatrixC& rho) {
  Eigen::SelfAdjointEigenSolver<MatrixC> es(rho, Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (double p : es.eigenvalues())
    if (p > 1e-15) s -= p * std::log2(p);
  return s;
}

double entanglement_entropy(const VectorC& psi, const std::vector<int>& region,
                            const SiteGraph& graph, double renyi_p) {
  if (std::abs(psi.norm() - 1.0) > 1e-8)
    throw precondition_error("entanglement_entropy: state vector is not normalised");
  if (renyi_p <= 0.0) throw precondition_error("entanglement_entropy: Renyi order must be positive");
  MatrixC red = partial_trace_pure(psi, region, graph);
  if (renyi_p == 1.0) return von_neumann_entropy(red);
  Eigen::SelfAdjointEigenSolver<MatrixC> es(red, Eigen::EigenvaluesOnly);
  double acc = 0.0;
  for (double p : es.eigenvalues())
    if (p > 1e-15) acc += std::pow(p, renyi_p);
  return std::log2(acc) / (1.0 - renyi_p);
}

PovmSet::PovmSet(std::vector<Povm> povms) : povms_(std::move(povms)) {
  if (povms_.empty()) throw precondition_error("PovmSet: empty set of POVMs");
  for (const auto& p : povms_) {
    if (p.elements.empty()) throw precondition_error("PovmSet: POVM without elements");
    const long d = p.elements.front().rows();
    MatrixC sum = MatrixC::Zero(d, d);
    for (const auto& m : p.elements) {
      if (m.rows() != d || m.cols() != d) throw precondition_error("PovmSet: element dim mismatch");
      Eigen::SelfAdjointEigenSolver<MatrixC> es(m, Eigen::EigenvaluesOnly);
      if (es.eigenvalues().minCoeff() < -tol::positivity)
        throw precondition_error("PovmSet: POVM element is not positive");
      sum += m;
    }
    if (operator_norm_bound(MatrixC(sum - MatrixC::Identity(d, d))) > tol::povm_completeness)
      throw precondition_error("PovmSet: POVM elements do not sum to the identity");
  }
}

int PovmSet::distinct_element_count() const {
  std::vector<std::pair<const std::vector<int>*, const MatrixC*>> seen;
  int count = 0;
  for (const auto& p : povms_)
    for (const auto& m : p.elements) {
      bool duplicate = false;
      for (const auto& [sup, el] : seen)
        if (*sup == p.support && el->rows() == m.rows() &&
            operator_norm_bound(MatrixC(*el - m)) <= 1e-12) {
          duplicate = true;
          break;
        }
      if (!duplicate) {
        seen.emplace_back(&p.support, &m);
        ++count;
      }
    }
  return count;
}

std::vector<int> PovmSet::support() const {
  std::set<int> sites;
  for (const auto& p : povms_) sites.insert(p.support.begin(), p.support.end());
  return {sites.begin(), sites.end()};
}

bool PovmSet::full_space_support() const {
  for (const auto& p : povms_)
    if (p.support.empty()) return true;
  return false;
}

Povm PovmSet::spectral(const MatrixC& observable, const std::vector<int>& support) {
  if (!is_hermitian(observable, 1e-10))
    throw precondition_error("PovmSet::spectral: observable is not Hermitian");
  Eigen::SelfAdjointEigenSolver<MatrixC> es(observable);
  const VectorR vals = es.eigenvalues();
  const double scale = std::max(1.0, vals.cwiseAbs().maxCoeff());
  Povm povm;
  povm.support = support;
  long i = 0;
  while (i < vals.size()) {
    long j = i;
    while (j + 1 < vals.size() && vals(j + 1) - vals(i) <= 1e-10 * scale) ++j;
    const auto block = es.eigenvectors().middleCols(i, j - i + 1);
    povm.elements.push_back(block * block.adjoint());
    i = j + 1;
  }
  return povm;
}

Povm PovmSet::qubit_sic() {
  // Tetrahedral SIC POVM: M_k = (1 + n_k . sigma) / 4.
  const double s = 1.0 / std::sqrt(3.0);
  const double dirs[4][3] = {
      {s, s, s}, {s, -s, -s}, {-s, s, -s}, {-s, -s, s}};
  Povm povm;
  for (const auto& n : dirs) {
    MatrixC m = 0.25 * (pauli::identity() + n[0] * pauli::sigma_x() + n[1] * pauli::sigma_y() +
                        n[2] * pauli::sigma_z());
    povm.elements.push_back(m);
  }
  return povm;
}

Povm PovmSet::informationally_complete(const std::vector<int>& region) {
  Povm single = qubit_sic();
  Povm out;
  out.support = region;
  out.elements = {MatrixC::Ones(1, 1)};
  for (std::size_t i = 0; i < region.size(); ++i) {
    std::vector<MatrixC> next;
    for (const auto& acc : out.elements)
      for (const auto& m : single.elements) next.push_back(kron(acc, m));
    out.elements = std::move(next);
  }
  return out;
}

namespace {
double povm_half_l1(const Povm& povm, const MatrixC& rho, const MatrixC& sigma) {
  double sum = 0.0;
  for (const auto& el : povm.elements)
    sum += std::abs(((el * rho).trace() - (el * sigma).trace()).real());
  return 0.5 * sum;
}
}  // namespace

double restricted_distinguishability(const MatrixC& rho, const MatrixC& sigma, const PovmSet& m,
                                     const SiteGraph& graph) {
  if (rho.rows() != sigma.rows()) throw precondition_error("restricted_distinguishability: dim mismatch");
  double best = 0.0;
  for (const auto& povm : m.povms()) {
    if (povm.support.empty() || povm.elements.front().rows() == rho.rows()) {
      if (povm.elements.front().rows() != rho.rows())
        throw precondition_error("restricted_distinguishability: POVM dimension mismatch");
      best = std::max(best, povm_half_l1(povm, rho, sigma));
    } else {
      best = std::max(best, povm_half_l1(povm, partial_trace(rho, povm.support, graph),
                                         partial_trace(sigma, povm.support, graph)));
    }
  }
  return best;
}

double restricted_distinguishability(const MatrixC& rho, const MatrixC& sigma, const PovmSet& m) {
  if (rho.rows() != sigma.rows()) throw precondition_error("restricted_distinguishability: dim mismatch");
  double best = 0.0;
  for (const auto& povm : m.povms()) {
    if (povm.elements.front().rows() != rho.rows())
      throw precondition_error(
          "restricted_distinguishability: POVM with local support requires the graph overload");
    best = std::max(best, povm_half_l1(povm, rho, sigma));
  }
  return best;
}

}  // namespace thermolab
