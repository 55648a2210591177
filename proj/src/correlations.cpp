#include "thermolab/correlations.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace thermolab {

cxd generalized_covariance(const MatrixC& rho, const MatrixC& a, const MatrixC& b, double tau,
                           double floor, double* regularisation) {
  if (tau < 0.0 || tau > 1.0) throw precondition_error("generalized_covariance: tau outside [0,1]");
  if (rho.rows() != a.rows() || a.rows() != b.rows())
    throw precondition_error("generalized_covariance: dimension mismatch");
  Eigen::SelfAdjointEigenSolver<MatrixC> es(rho);
  VectorR vals = es.eigenvalues();
  double reg = 0.0;
  for (long j = 0; j < vals.size(); ++j)
    if (vals(j) < floor) {
      reg = std::max(reg, floor - vals(j));
      vals(j) = floor;
    }
  if (regularisation) *regularisation = reg;
  const MatrixC at = es.eigenvectors().adjoint() * a * es.eigenvectors();
  const MatrixC bt = es.eigenvectors().adjoint() * b * es.eigenvectors();
  const VectorR wt = vals.array().pow(tau);
  const VectorR w1t = vals.array().pow(1.0 - tau);
  cxd first(0, 0);
  for (long j = 0; j < vals.size(); ++j)
    for (long k = 0; k < vals.size(); ++k) first += wt(j) * w1t(k) * at(j, k) * bt(k, j);
  cxd mean_a(0, 0), mean_b(0, 0);
  for (long j = 0; j < vals.size(); ++j) {
    mean_a += vals(j) * at(j, j);
    mean_b += vals(j) * bt(j, j);
  }
  return first - mean_a * mean_b;
}

cxd generalized_covariance_spectral(const SpectralDecomposition& spec, const VectorR& weights,
                                    const MatrixC& a, const MatrixC& b, double tau) {
  const MatrixC at = spec.to_eigenbasis(a);
  const MatrixC bt = spec.to_eigenbasis(b);
  const VectorR wt = weights.array().pow(tau);
  const VectorR w1t = weights.array().pow(1.0 - tau);
  // sum_jk w_j^tau w_k^(1-tau) A~_jk B~_kj as a bilinear form in the weights
  const MatrixC p = at.cwiseProduct(bt.transpose());
  const cxd first = (wt.cast<cxd>().transpose() * p * w1t.cast<cxd>()).value();
  cxd mean_a(0, 0), mean_b(0, 0);
  for (long j = 0; j < weights.size(); ++j) {
    mean_a += weights(j) * at(j, j);
    mean_b += weights(j) * bt(j, j);
  }
  return first - mean_a * mean_b;
}

void gauss_legendre_01(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw precondition_error("gauss_legendre_01: need at least one node");
  nodes.resize(n);
  weights.resize(n);
  // Newton iteration on Legendre P_n over [-1, 1], then affine map to [0, 1].
  for (int i = 0; i < n; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    const double dp = n * (x * p1 - p0) / (x * x - 1.0);
    nodes[i] = 0.5 * (1.0 - x);  // reversed order is irrelevant for sums
    weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
}

TruncationReport truncation_check(const LocalHamiltonian& h, const std::vector<int>& region_b,
                                  const LocalOperator& a, double beta, int quad_points) {
  const SiteGraph& graph = h.graph();
  // supp(A) must be inside B
  {
    std::vector<bool> in(graph.n_sites(), false);
    for (int s : region_b) in[s] = true;
    for (int s : a.sites)
      if (!in[s]) throw precondition_error("truncation_check: observable support outside the region");
  }
  const MatrixC a_full = embed_local_operator(a, graph);
  const std::vector<int> boundary = graph.boundary_edges(region_b);

  TruncationReport rep{};
  rep.quad_points = quad_points;
  rep.boundary_edge_count = static_cast<int>(boundary.size());

  const MatrixC h_full = h.assemble();
  const MatrixC h_b = h.restricted(region_b);

  // exact left-hand side
  const double lhs = ((a_full * gibbs_state(h_b, beta)).trace() -
                      (a_full * gibbs_state(h_full, beta)).trace())
                         .real();
  rep.lhs = lhs;

  if (boundary.empty() || beta == 0.0) {
    rep.rhs = 0.0;
    rep.residual = std::abs(rep.lhs - rep.rhs);
    return rep;
  }

  MatrixC w_boundary = MatrixC::Zero(graph.dim(), graph.dim());
  for (int ei : boundary) {
    // locate the term on this edge
    for (const auto& t : h.terms())
      if (t.sites == graph.edges()[ei]) w_boundary += embed_local_operator(t, graph);
  }

  std::vector<double> s_nodes, s_weights, tau_nodes, tau_weights;
  gauss_legendre_01(quad_points, s_nodes, s_weights);
  gauss_legendre_01(quad_points, tau_nodes, tau_weights);

  double rhs = 0.0;
  for (int is = 0; is < quad_points; ++is) {
    const MatrixC h_s = h_full - (1.0 - s_nodes[is]) * w_boundary;
    const SpectralDecomposition spec = diagonalize(h_s);
    // Gibbs weights over the interpolating Hamiltonian
    const auto& e = spec.column_energies();
    VectorR gw(spec.dim());
    double shift = -beta * e[0], z = 0.0;
    for (double x : e) shift = std::max(shift, -beta * x);
    for (long j = 0; j < spec.dim(); ++j) {
      gw(j) = std::exp(-beta * e[j] - shift);
      z += gw(j);
    }
    gw /= z;
    const MatrixC at = spec.to_eigenbasis(a_full);
    const MatrixC bt = spec.to_eigenbasis(w_boundary);
    const MatrixC p = at.cwiseProduct(bt.transpose());
    cxd mean_a(0, 0), mean_b(0, 0);
    for (long j = 0; j < spec.dim(); ++j) {
      mean_a += gw(j) * at(j, j);
      mean_b += gw(j) * bt(j, j);
    }
    cxd s_acc(0, 0);
    for (int itau = 0; itau < quad_points; ++itau) {
      const VectorR wt = gw.array().pow(tau_nodes[itau]);
      const VectorR w1t = gw.array().pow(1.0 - tau_nodes[itau]);
      const cxd cov = (wt.cast<cxd>().transpose() * p * w1t.cast<cxd>()).value() - mean_a * mean_b;
      s_acc += tau_weights[itau] * cov;
    }
    rhs += s_weights[is] * s_acc.real();
  }
  rep.rhs = beta * rhs;
  rep.residual = std::abs(rep.lhs - rep.rhs);
  return rep;
}

double growth_constant_cubic(int dimension) {
  if (dimension < 1) throw precondition_error("growth_constant_cubic: dimension must be positive");
  return 2.0 * dimension * std::exp(1.0);
}

double critical_beta(double j_strength, double alpha) {
  if (j_strength <= 0 || alpha <= 0)
    throw precondition_error("critical_beta: J and alpha must be positive");
  return std::log((1.0 + std::sqrt(1.0 + 4.0 / alpha)) / 2.0) / (2.0 * j_strength);
}

double correlation_length(double beta, double j_strength, double alpha) {
  const double beta_star = critical_beta(j_strength, alpha);
  if (std::abs(beta) >= beta_star)
    throw precondition_error("correlation_length: |beta| must be below the critical beta");
  const double x = std::exp(2.0 * std::abs(beta) * j_strength);
  const double arg = alpha * x * (x - 1.0);
  if (arg <= 0.0) return 0.0;  // beta -> 0 limit
  return std::abs(1.0 / std::log(arg));
}

namespace {
VectorR gibbs_weight_vector(const SpectralDecomposition& spec, double beta) {
  const auto& e = spec.column_energies();
  VectorR w(spec.dim());
  double shift = -beta * e[0], z = 0.0;
  for (double x : e) shift = std::max(shift, -beta * x);
  for (long j = 0; j < spec.dim(); ++j) {
    w(j) = std::exp(-beta * e[j] - shift);
    z += w(j);
  }
  return VectorR(w / z);
}

VectorR embedded_sigma_z_diagonal(int site, const SiteGraph& graph) {
  const long d = graph.dim();
  VectorR diag(d);
  // site 0 is the most significant factor
  long stride = 1;
  for (int s = graph.n_sites() - 1; s > site; --s) stride *= graph.local_dim(s);
  for (long idx = 0; idx < d; ++idx) diag(idx) = ((idx / stride) % 2 == 0) ? 1.0 : -1.0;
  return diag;
}
}  // namespace

ClusteringReport clustering_check(const LocalHamiltonian& h, double beta, double tau,
                                  const std::vector<std::pair<int, int>>& site_pairs,
                                  double alpha) {
  const SiteGraph& graph = h.graph();
  const double j_strength = h.local_interaction_strength();
  ClusteringReport rep{};
  rep.beta = beta;
  rep.tau = tau;
  rep.beta_star = critical_beta(j_strength, alpha);
  if (std::abs(beta) >= rep.beta_star)
    throw precondition_error("clustering_check: |beta| must be below the critical beta");
  rep.xi = correlation_length(beta, j_strength, alpha);

  const SpectralDecomposition spec = diagonalize(h.assemble());
  const VectorR gw = gibbs_weight_vector(spec, beta);
  const VectorR wt = gw.array().pow(tau);
  const VectorR w1t = gw.array().pow(1.0 - tau);

  std::map<int, MatrixC> transformed;  // site -> eigenbasis sigma_z
  auto get_transformed = [&](int site) -> const MatrixC& {
    auto it = transformed.find(site);
    if (it == transformed.end())
      it = transformed.emplace(site, spec.to_eigenbasis_diagonal(embedded_sigma_z_diagonal(site, graph)))
               .first;
    return it->second;
  };

  const double ln3 = std::log(3.0);
  const double decay_denominator = 1.0 - std::exp(-1.0 / rep.xi);
  rep.all_qualifying_satisfied = true;

  std::vector<double> fit_x, fit_y;
  for (const auto& [sa, sb] : site_pairs) {
    ClusteringPair pr{};
    pr.site_a = sa;
    pr.site_b = sb;
    const auto dist = graph_distance(graph, {sa}, {sb});
    pr.distance = dist.value_or(-1);
    const int a_boundary = static_cast<int>(graph.boundary_edges({sa}).size());
    const int b_boundary = static_cast<int>(graph.boundary_edges({sb}).size());
    const int min_boundary = std::min(a_boundary, b_boundary);
    const double threshold =
        rep.xi * std::abs(std::log(ln3 * decay_denominator / min_boundary));
    pr.meets_distance_condition = dist.has_value() && pr.distance >= threshold;

    const MatrixC& at = get_transformed(sa);
    const MatrixC& bt = get_transformed(sb);
    const MatrixC p = at.cwiseProduct(bt.transpose());
    cxd mean_a(0, 0), mean_b(0, 0);
    for (long j = 0; j < spec.dim(); ++j) {
      mean_a += gw(j) * at(j, j);
      mean_b += gw(j) * bt(j, j);
    }
    const cxd cov = (wt.cast<cxd>().transpose() * p * w1t.cast<cxd>()).value() - mean_a * mean_b;
    pr.covariance_abs = std::abs(cov);
    pr.bound = 4.0 * min_boundary / (ln3 * decay_denominator) *
               std::exp(-pr.distance / rep.xi);  // ||sigma_z|| = 1
    pr.satisfied = !pr.meets_distance_condition || pr.covariance_abs <= pr.bound + 1e-12;
    if (pr.meets_distance_condition && !pr.satisfied) rep.all_qualifying_satisfied = false;
    if (pr.covariance_abs > 1e-290 && pr.distance > 0) {
      fit_x.push_back(pr.distance);
      fit_y.push_back(std::log(pr.covariance_abs));
    }
    rep.pairs.push_back(pr);
  }

  if (fit_x.size() >= 2) {
    const double n = static_cast<double>(fit_x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < fit_x.size(); ++i) {
      sx += fit_x[i];
      sy += fit_y[i];
      sxx += fit_x[i] * fit_x[i];
      sxy += fit_x[i] * fit_y[i];
    }
    const double denom = n * sxx - sx * sx;
    if (denom > 0) {
      const double slope = (n * sxy - sx * sy) / denom;
      rep.fitted_decay_length = slope < 0 ? -1.0 / slope : 0.0;
    }
  }
  return rep;
}

LocalityReport universal_locality_check(const LocalHamiltonian& h, double beta,
                                        const std::vector<int>& region_s,
                                        const std::vector<int>& region_b, double alpha) {
  const SiteGraph& graph = h.graph();
  {
    std::vector<bool> in_b(graph.n_sites(), false);
    for (int s : region_b) in_b[s] = true;
    for (int s : region_s)
      if (!in_b[s]) throw precondition_error("universal_locality_check: S must be inside B");
  }
  const double j_strength = h.local_interaction_strength();
  LocalityReport rep{};
  rep.beta = beta;
  rep.beta_star = critical_beta(j_strength, alpha);
  if (std::abs(beta) >= rep.beta_star)
    throw precondition_error("universal_locality_check: |beta| must be below the critical beta");
  rep.xi = correlation_length(beta, j_strength, alpha);

  const std::vector<int> b_boundary_edges = graph.boundary_edges(region_b);
  const std::vector<int> s_boundary_edges = graph.boundary_edges(region_s);

  if (b_boundary_edges.empty()) {
    rep.distance = -1;
    rep.meets_distance_condition = false;
  } else {
    std::set<int> boundary_sites;
    for (int ei : b_boundary_edges)
      boundary_sites.insert(graph.edges()[ei].begin(), graph.edges()[ei].end());
    const auto dist = graph_distance(
        graph, region_s, std::vector<int>(boundary_sites.begin(), boundary_sites.end()));
    rep.distance = dist.value_or(-1);
    const double ln3 = std::log(3.0);
    const double threshold =
        rep.xi *
        std::abs(std::log(ln3 * (1.0 - std::exp(-1.0 / rep.xi)) /
                          std::max<std::size_t>(1, s_boundary_edges.size())));
    rep.meets_distance_condition = dist.has_value() && rep.distance >= threshold;
  }

  const SpectralDecomposition spec = diagonalize(h.assemble());
  const VectorR gw = gibbs_weight_vector(spec, beta);
  const MatrixC g_s_full = weighted_reduction(spec.basis(), gw, region_s, graph);

  // g^S[H_B] from the truncated restricted Hamiltonian
  std::vector<int> b_sorted = region_b;
  std::sort(b_sorted.begin(), b_sorted.end());
  const MatrixC h_b_trunc = h.restricted_truncated(b_sorted);
  const SpectralDecomposition spec_b = diagonalize(h_b_trunc);
  std::vector<int> dims_b;
  for (int s : b_sorted) dims_b.push_back(graph.local_dim(s));
  SiteGraph graph_b(static_cast<int>(b_sorted.size()), {}, graph.kind(), dims_b);
  std::vector<int> s_positions;
  for (int s : region_s)
    s_positions.push_back(
        static_cast<int>(std::lower_bound(b_sorted.begin(), b_sorted.end(), s) - b_sorted.begin()));
  const VectorR gw_b = gibbs_weight_vector(spec_b, beta);
  const MatrixC g_s_restricted = weighted_reduction(spec_b.basis(), gw_b, s_positions, graph_b);

  rep.lhs = trace_distance(g_s_full, g_s_restricted);
  if (b_boundary_edges.empty()) {
    rep.rhs = 0.0;
    rep.satisfied = rep.lhs <= 1e-10;
    return rep;
  }
  const double v = 4.0 * static_cast<double>(s_boundary_edges.size()) *
                   static_cast<double>(b_boundary_edges.size()) / std::log(3.0);
  rep.rhs = v * std::abs(beta) * j_strength / (1.0 - std::exp(-1.0 / rep.xi)) *
            std::exp(-rep.distance / rep.xi);
  rep.satisfied = !rep.meets_distance_condition || rep.lhs <= rep.rhs + 1e-12;
  return rep;
}

}  // namespace thermolab
