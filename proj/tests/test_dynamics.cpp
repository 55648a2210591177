#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "thermolab/dynamics.hpp"
#include "test_util.hpp"

using namespace thermolab;
using thermolab::testing::random_density;
using thermolab::testing::random_state_vector;

TEST_CASE("evolve_state basics") {
  const LocalHamiltonian h = models::transverse_field_ising(5, 1.0, 1.05, 0.3);
  const SpectralDecomposition spec = diagonalize(h.assemble());
  Rng rng(41);
  const MatrixC rho0 = random_density(rng, 32);

  SUBCASE("t = 0 is the identity") {
    CHECK(operator_norm_bound(MatrixC(evolve_state(spec, rho0, 0.0) - rho0)) < 1e-12);
  }
  SUBCASE("eigenstates are stationary") {
    const VectorC psi = spec.basis().col(7);
    const MatrixC rho = psi * psi.adjoint();
    CHECK(operator_norm_bound(MatrixC(evolve_state(spec, rho, 2.37) - rho)) < 1e-11);
  }
  SUBCASE("group property  U(t1) U(t2) = U(t1 + t2)") {
    const MatrixC once = evolve_state(spec, evolve_state(spec, rho0, 0.7), 1.9);
    const MatrixC direct = evolve_state(spec, rho0, 2.6);
    CHECK(operator_norm_bound(MatrixC(once - direct)) < 1e-10);
  }
  SUBCASE("unitarity preserves the spectrum") {
    const VectorR before = hermitian_eigenvalues(rho0);
    for (double t : {0.3, 1.7, 11.0}) {
      const VectorR after = hermitian_eigenvalues(evolve_state(spec, rho0, t));
      CHECK((before - after).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("expectation trajectories") {
  const LocalHamiltonian h = models::transverse_field_ising(4, 1.0, 0.8, 0.2);
  const MatrixC full = h.assemble();
  const SpectralDecomposition spec = diagonalize(full);
  Rng rng(42);
  const VectorC psi = random_state_vector(rng, 16);
  const auto grid = uniform_grid(5.0, 41);

  SUBCASE("conserved quantities give flat trajectories") {
    const Trajectory energy = expectation_trajectory(full, psi, spec, grid);
    for (double v : energy.values) CHECK(v == doctest::Approx(energy.values[0]).epsilon(1e-10));
    const Trajectory unit =
        expectation_trajectory(MatrixC(MatrixC::Identity(16, 16)), psi, spec, grid);
    for (double v : unit.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("driven qubit follows the cos(2t) law") {
    // H = sigma_x on one qubit, <sigma_z>(t) from |0> is cos(2t)
    const SpectralDecomposition qubit = diagonalize(pauli::sigma_x());
    VectorC up(2);
    up << 1, 0;
    const Trajectory traj = expectation_trajectory(pauli::sigma_z(), up, qubit, uniform_grid(3.0, 31));
    for (std::size_t i = 0; i < traj.size(); ++i)
      CHECK(traj.values[i] == doctest::Approx(std::cos(2.0 * traj.times[i])).epsilon(1e-10));
  }
  SUBCASE("matches direct dense evolution") {
    const MatrixC a = embed_single_site(pauli::sigma_z(), 1, h.graph());
    ExpectationEvolver ev(a, psi, spec);
    const MatrixC rho_t = evolve_state(spec, MatrixC(psi * psi.adjoint()), 1.3);
    CHECK(ev.value(1.3) == doctest::Approx((a * rho_t).trace().real()).epsilon(1e-10));
  }
}

TEST_CASE("dephasing map") {
  const LocalHamiltonian h = models::heisenberg(4, {0.3, -0.2, 0.9, 0.1});
  const SpectralDecomposition spec = diagonalize(h.assemble());
  Rng rng(43);
  const MatrixC rho0 = random_density(rng, 16);
  const MatrixC omega = dephase(rho0, spec);

  SUBCASE("commutes with H and preserves level populations") {
    const MatrixC hm = h.assemble();
    CHECK(operator_norm_bound(MatrixC(hm * omega - omega * hm)) < 1e-10);
    const auto p0 = spec.level_populations(rho0);
    const auto pw = spec.level_populations(omega);
    for (std::size_t k = 0; k < p0.size(); ++k)
      CHECK(p0[k] == doctest::Approx(pw[k]).epsilon(1e-10));
  }
  SUBCASE("idempotent and trace preserving") {
    CHECK(operator_norm_bound(MatrixC(dephase(omega, spec) - omega)) < 1e-11);
    CHECK(omega.trace().real() == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("time translation invariance") {
    const MatrixC later = dephase(evolve_state(spec, rho0, 3.1), spec);
    CHECK(operator_norm_bound(MatrixC(later - omega)) < 1e-10);
  }
  SUBCASE("eigenstates and already-dephased states are fixed points") {
    const VectorC psi = spec.basis().col(2);
    const MatrixC rho = psi * psi.adjoint();
    CHECK(operator_norm_bound(MatrixC(dephase(rho, spec) - rho)) < 1e-12);
  }
  SUBCASE("agrees with the finite-time average over T = 1e4 / min gap") {
    // oracle: (1/T) int_0^T rho(t) dt with the phase integrals done exactly
    // per matrix element, independent of the projector-block construction
    const double t_max = 1e4 / spec.min_nonzero_gap();
    const MatrixC rho_tilde = spec.to_eigenbasis(rho0);
    const auto& e = spec.column_energies();
    MatrixC averaged(16, 16);
    for (int i = 0; i < 16; ++i)
      for (int j = 0; j < 16; ++j) {
        const double gap = e[i] - e[j];
        if (std::abs(gap) * t_max < 1e-9) {
          averaged(i, j) = rho_tilde(i, j);
        } else {
          const cxd phase_avg = (cxd(1, 0) - std::exp(cxd(0, -gap * t_max))) / cxd(0, gap * t_max);
          averaged(i, j) = rho_tilde(i, j) * phase_avg;
        }
      }
    CHECK(trace_distance(spec.from_eigenbasis(averaged), omega) < 1e-3);
  }
}

TEST_CASE("finite time averages") {
  SUBCASE("constant trajectories average to the constant") {
    Trajectory t;
    for (int i = 0; i <= 10; ++i) t.push(i * 0.1, 2.5);
    CHECK(finite_time_average(t) == doctest::Approx(2.5));
  }
  SUBCASE("sine over full periods averages to zero") {
    Trajectory t;
    const int n = 2000;
    for (int i = 0; i <= n; ++i) {
      const double x = 4.0 * M_PI * i / n;
      t.push(x, std::sin(x));
    }
    CHECK(std::abs(finite_time_average(t)) < 1e-5);
  }
  SUBCASE("second-order convergence on cos (Richardson)") {
    auto average_with = [](int n) {
      Trajectory t;
      for (int i = 0; i <= n; ++i) {
        const double x = 1.0 * i / n;
        t.push(x, std::cos(x));
      }
      return finite_time_average(t);
    };
    const double exact = std::sin(1.0);
    const double err_coarse = std::abs(average_with(100) - exact);
    const double err_fine = std::abs(average_with(200) - exact);
    CHECK(err_coarse / err_fine == doctest::Approx(4.0).epsilon(0.05));
  }
  SUBCASE("single sample is rejected") {
    Trajectory t;
    t.push(0.0, 1.0);
    CHECK_THROWS_AS(finite_time_average(t), precondition_error);
  }
}

TEST_CASE("infinite time average of the squared deviation") {
  SUBCASE("eigenstate inputs and conserved observables give zero") {
    const LocalHamiltonian h = models::transverse_field_ising(4, 1.0, 0.8);
    const MatrixC full = h.assemble();
    const SpectralDecomposition spec = diagonalize(full);
    const VectorC psi = spec.basis().col(5);
    const MatrixC a = embed_single_site(pauli::sigma_z(), 0, h.graph());
    CHECK(infinite_time_avg_sq_deviation(a, psi, spec) < 1e-20);
    Rng rng(45);
    const VectorC mixed_state_vec = random_state_vector(rng, 16);
    CHECK(infinite_time_avg_sq_deviation(full, mixed_state_vec, spec) < 1e-18);
  }
  SUBCASE("two-level system gives 1/2") {
    // oracle: analytic time average of cos^2(2t)
    const SpectralDecomposition spec = diagonalize(pauli::sigma_z());
    VectorC plus(2);
    plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    CHECK(infinite_time_avg_sq_deviation(pauli::sigma_x(), plus, spec) ==
          doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("agrees with long-time quadrature on a random 6-qubit model") {
    Rng rng(46);
    const LocalHamiltonian h = models::random_local_chain(6, rng, 0.5);
    const SpectralDecomposition spec = diagonalize(h.assemble());
    const VectorC psi = random_state_vector(rng, 64);
    const MatrixC a = embed_single_site(pauli::sigma_z(), 2, h.graph());
    const double exact = infinite_time_avg_sq_deviation(a, psi, spec);
    ExpectationEvolver ev(a, psi, spec);
    Trajectory sq;
    const double t_max = 1e4 / spec.min_nonzero_gap();
    for (double t : uniform_grid(t_max, 32768)) {
      const double dev = ev.value(t) - ev.equilibrium_value();
      sq.push(t, dev * dev);
    }
    CHECK(finite_time_average(sq) == doctest::Approx(exact).epsilon(0.05));
  }
}

TEST_CASE("ramp evolution") {
  const LocalHamiltonian h = models::transverse_field_ising(2, 1.0, 0.7);
  const MatrixC full = h.assemble();
  const SpectralDecomposition spec = diagonalize(full);
  Rng rng(47);
  const MatrixC rho0 = random_density(rng, 4);

  SUBCASE("single segment equals plain evolution") {
    const MatrixC via_ramp = ramp_evolve({{full, 1.8}}, rho0);
    CHECK(operator_norm_bound(MatrixC(via_ramp - evolve_state(spec, rho0, 1.8))) < 1e-11);
  }
  SUBCASE("zero durations leave the state untouched") {
    const MatrixC out = ramp_evolve({{full, 0.0}, {full, 0.0}}, rho0);
    CHECK(operator_norm_bound(MatrixC(out - rho0)) < 1e-14);
  }
  SUBCASE("halving segments converges on a linear two-qubit sweep") {
    // self-convergence of the piecewise-constant discretization, first order
    const MatrixC h0 = models::transverse_field_ising(2, 1.0, 1.5).assemble();
    const MatrixC v = models::transverse_field_ising(2, 0.0, 0.0, 1.0).assemble();
    auto ramp_with = [&](int segments) {
      std::vector<RampSegment> schedule;
      const double total = 2.0;
      for (int i = 0; i < segments; ++i) {
        const double f = (i + 0.5) / segments;
        schedule.push_back({h0 + f * v, total / segments});
      }
      return ramp_evolve(schedule, rho0);
    };
    const MatrixC fine = ramp_with(256);
    const double err_coarse = trace_distance(ramp_with(16), fine);
    const double err_mid = trace_distance(ramp_with(32), fine);
    CHECK(err_mid < err_coarse);
    CHECK(err_coarse / err_mid > 1.5);  // roughly first order or better
  }
}

TEST_CASE("lieb-robinson commutator profile") {
  SUBCASE("10-site chain: distant sites stay quiet at early times") {
    const LocalHamiltonian h = models::transverse_field_ising(10, 1.0, 1.05, 0.5);
    const SpectralDecomposition spec = diagonalize(h.assemble());
    const MatrixC a = embed_single_site(pauli::sigma_z(), 0, h.graph());
    const MatrixC b = embed_single_site(pauli::sigma_z(), 5, h.graph());
    const LiebRobinsonProfile profile = lieb_robinson_profile(spec, a, b, {0.0, 0.1});
    CHECK(profile.commutator_norms.values[0] < 1e-12);
    // oracle: direct dense computation; smallness asserted, not a paper constant
    CHECK(profile.commutator_norms.values[1] < 1e-6);
  }
  const LocalHamiltonian h = models::transverse_field_ising(8, 1.0, 1.05, 0.5);
  const SiteGraph& graph = h.graph();
  const SpectralDecomposition spec = diagonalize(h.assemble());
  const MatrixC a = embed_single_site(pauli::sigma_z(), 0, graph);
  SUBCASE("overlapping supports reproduce the direct commutator at t = 0") {
    const MatrixC b = embed_single_site(pauli::sigma_x(), 0, graph);
    const LiebRobinsonProfile profile = lieb_robinson_profile(spec, a, b, {0.0}, true);
    const MatrixC comm = a * b - b * a;
    const double direct = hermitian_eigenvalues(MatrixC(cxd(0, 1) * comm)).cwiseAbs().maxCoeff();
    CHECK(profile.commutator_norms.values[0] == doctest::Approx(direct).epsilon(1e-10));
  }
  SUBCASE("arrival-time fit yields a finite positive velocity") {
    std::vector<int> distances;
    std::vector<LiebRobinsonProfile> profiles;
    const auto grid = uniform_grid(3.0, 25);
    for (int site : {3, 5, 7}) {
      distances.push_back(site);
      profiles.push_back(
          lieb_robinson_profile(spec, a, embed_single_site(pauli::sigma_z(), site, graph), grid));
    }
    const VelocityFit fit = fit_arrival_velocity(distances, profiles, 1.0);
    CHECK(fit.n_points == 3);
    CHECK(fit.velocity > 0.5);
    CHECK(fit.velocity < 20.0);
  }
}

TEST_CASE("entanglement growth") {
  const LocalHamiltonian h = models::transverse_field_ising(8, 1.0, 1.05, 0.5);
  const SiteGraph& graph = h.graph();
  const SpectralDecomposition spec = diagonalize(h.assemble());
  VectorC all_up = VectorC::Zero(256);
  all_up(0) = 1.0;

  SUBCASE("starts at zero and stays zero under a diagonal Hamiltonian") {
    const Trajectory traj =
        entanglement_growth(all_up, spec, {0, 1, 2, 3}, graph, uniform_grid(2.0, 9));
    CHECK(traj.values[0] == doctest::Approx(0.0).epsilon(1e-10));
    const LocalHamiltonian diag_h = models::transverse_field_ising(4, 1.0, 0.0);
    const SpectralDecomposition diag_spec = diagonalize(diag_h.assemble());
    VectorC up4 = VectorC::Zero(16);
    up4(0) = 1.0;
    const Trajectory flat =
        entanglement_growth(up4, diag_spec, {0, 1}, diag_h.graph(), uniform_grid(3.0, 7));
    for (double v : flat.values) CHECK(v < 1e-10);
  }
  SUBCASE("quench from all-up: early growth then saturation") {
    const Trajectory traj =
        entanglement_growth(all_up, spec, {0, 1, 2, 3}, graph, uniform_grid(20.0, 81));
    // early-time slope bounded by a constant times the boundary size (1 cut)
    const double early_slope = (traj.values[4] - traj.values[0]) / (traj.times[4] - traj.times[0]);
    CHECK(early_slope > 0.0);
    CHECK(early_slope < 6.0);
    // saturates: late-time mean well above the early values, bounded by 4 bits
    double late = 0.0;
    for (std::size_t i = traj.size() - 10; i < traj.size(); ++i) late += traj.values[i];
    late /= 10.0;
    CHECK(late > 0.5);
    CHECK(late <= 4.0);
  }
}

TEST_CASE("survival probability") {
  SUBCASE("eigenstates never decay; t = 0 gives one") {
    const LocalHamiltonian h = models::transverse_field_ising(4, 1.0, 0.9);
    const SpectralDecomposition spec = diagonalize(h.assemble());
    const VectorC eig = spec.basis().col(3);
    const Trajectory flat = survival_probability(eig, spec, uniform_grid(5.0, 11));
    for (double v : flat.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-10));
  }
  SUBCASE("two-level superposition follows cos^2(gap t / 2)") {
    const SpectralDecomposition spec = diagonalize(pauli::sigma_z());  // gap 2
    VectorC plus(2);
    plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    const Trajectory traj = survival_probability(plus, spec, uniform_grid(3.0, 25));
    for (std::size_t i = 0; i < traj.size(); ++i) {
      const double expected = std::pow(std::cos(traj.times[i]), 2);
      CHECK(traj.values[i] == doctest::Approx(expected).epsilon(1e-10));
    }
  }
  SUBCASE("equals an independently computed fidelity") {
    Rng rng(48);
    const LocalHamiltonian h = models::heisenberg(4, {0.2, 0.0, -0.4, 0.3});
    const SpectralDecomposition spec = diagonalize(h.assemble());
    const VectorC psi = random_state_vector(rng, 16);
    const Trajectory traj = survival_probability(psi, spec, {1.7});
    const VectorC evolved = evolve_state(spec, psi, 1.7);
    CHECK(traj.values[0] == doctest::Approx(std::norm(psi.dot(evolved))).epsilon(1e-10));
  }
}
