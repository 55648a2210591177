#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "thermolab/equilibration.hpp"
#include "test_util.hpp"

using namespace thermolab;
using thermolab::testing::random_state_vector;

namespace {
VectorC neel_state(int n) {
  VectorC psi = VectorC::Zero(1L << n);
  long idx = 0;
  for (int site = 1; site < n; site += 2) idx |= 1L << (n - 1 - site);
  psi(idx) = 1.0;
  return psi;
}
}  // namespace

TEST_CASE("effective dimension") {
  const LocalHamiltonian h = models::transverse_field_ising(4, 1.0, 1.1, 0.3);
  const SpectralDecomposition spec = diagonalize(h.assemble());
  SUBCASE("an energy eigenstate has effective dimension one") {
    const VectorC psi = spec.basis().col(2);
    CHECK(effective_dimension(MatrixC(psi * psi.adjoint()), spec) ==
          doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("uniform superposition of k distinct levels has effective dimension k") {
    VectorC psi = VectorC::Zero(16);
    for (int c : {0, 3, 7, 11}) psi += spec.basis().col(c);
    psi /= psi.norm();
    CHECK(effective_dimension(MatrixC(psi * psi.adjoint()), spec) ==
          doctest::Approx(4.0).epsilon(1e-9));
  }
  SUBCASE("maximally mixed with a non-degenerate spectrum gives the dimension") {
    Rng rng(51);
    const SpectralDecomposition generic = diagonalize(testing::random_hermitian(rng, 12));
    REQUIRE(generic.n_levels() == 12);
    CHECK(effective_dimension(MatrixC(MatrixC::Identity(12, 12) / 12.0), generic) ==
          doctest::Approx(12.0).epsilon(1e-9));
  }
  SUBCASE("never below the reciprocal largest population") {
    Rng rng(52);
    for (int trial = 0; trial < 20; ++trial) {
      const auto p = spec.level_populations(random_state_vector(rng, 16));
      double pmax = 0;
      for (double x : p) pmax = std::max(pmax, x);
      CHECK(effective_dimension(p) >= 1.0 / pmax - 1e-12);
    }
  }
}

TEST_CASE("g of the occupations") {
  SUBCASE("single level returns the sum-of-squares branch") {
    const GOccupations g = g_occupations({1.0});
    CHECK(g.value == doctest::Approx(1.0));
    CHECK(!g.second_branch_defined);
  }
  SUBCASE("near-ground-state occupation takes the second-largest branch") {
    const double delta = 1e-6;
    const GOccupations g = g_occupations({1.0 - delta, delta});
    CHECK(g.value == doctest::Approx(3.0 * delta).epsilon(1e-12));
  }
  SUBCASE("uniform occupations give 1/d'") {
    const int dprime = 10;
    std::vector<double> p(dprime, 1.0 / dprime);
    CHECK(g_occupations(p).value == doctest::Approx(1.0 / dprime).epsilon(1e-12));
  }
}

TEST_CASE("h of a POVM set") {
  SUBCASE("single two-outcome POVM on one qubit gives 1/2") {
    SiteGraph graph = SiteGraph::chain(3);
    Povm p = PovmSet::spectral(pauli::sigma_z(), {0});
    const HPovm h = h_povm(PovmSet({p}), graph);
    CHECK(h.element_branch == doctest::Approx(0.5));
    CHECK(h.dimension_branch == doctest::Approx(1.0));
    CHECK(h.value == doctest::Approx(0.5));
  }
  SUBCASE("support on two qubits caps the dimension branch at 2") {
    SiteGraph graph = SiteGraph::chain(4);
    PovmSet m({PovmSet::informationally_complete({1, 2})});
    CHECK(h_povm(m, graph).dimension_branch == doctest::Approx(2.0));
  }
  SUBCASE("many global elements fall back to the dimension branch") {
    SiteGraph graph = SiteGraph::chain(3);
    // 100-outcome global POVM: random projective measurement refined by splitting
    Rng rng(53);
    std::vector<Povm> povms;
    for (int k = 0; k < 13; ++k)
      povms.push_back(PovmSet::spectral(testing::random_hermitian(rng, 8)));
    PovmSet m(std::move(povms));
    REQUIRE(m.distinct_element_count() >= 100);
    const HPovm h = h_povm(m, graph);
    CHECK(h.value == doctest::Approx(4.0));  // dim 8 / 2
  }
}

TEST_CASE("equilibration bound for expectation values") {
  const LocalHamiltonian h = models::transverse_field_ising(8, 1.0, 1.05, 0.5);
  const SpectralDecomposition spec = diagonalize(h.assemble());
  const MatrixC a = embed_single_site(pauli::sigma_z(), 3, h.graph());

  SUBCASE("eigenstate input has vanishing lhs") {
    const VectorC psi = spec.basis().col(17);
    const auto rep = equilibration_bound_observable(a, MatrixC(psi * psi.adjoint()), spec,
                                                    spec.spectral_range() / 100.0, 50.0, 256);
    CHECK(rep.lhs < 1e-18);
    CHECK(rep.satisfied);
  }
  SUBCASE("f approaches one as T grows") {
    const VectorC psi = neel_state(8);
    const double eps = spec.spectral_range() / 500.0;
    const auto rep = equilibration_bound_observable(a, MatrixC(psi * psi.adjoint()), spec, eps,
                                                    1e9, 64);
    CHECK(rep.f_factor == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(rep.rhs == doctest::Approx(static_cast<double>(rep.n_epsilon) * rep.f_factor *
                                     rep.g_value));
  }
  SUBCASE("8-site TFIM from the Neel state is satisfied") {
    const VectorC psi = neel_state(8);
    const double dprime = spec.n_levels();
    const double eps = spec.spectral_range() / (dprime * dprime);
    const auto rep = equilibration_bound_observable(a, MatrixC(psi * psi.adjoint()), spec, eps,
                                                    1e3, 2048);
    CHECK(rep.satisfied);
    CHECK(rep.margin() >= 0.0);
    REQUIRE(rep.lhs_infinite_time.has_value());
    CHECK(rep.lhs_infinite_time.value() <= rep.rhs);
  }
  SUBCASE("theorem holds across random local models and initial states") {
    Rng rng(54);
    for (int trial = 0; trial < 4; ++trial) {
      const LocalHamiltonian hr = models::random_local_chain(6, rng, 0.7);
      const SpectralDecomposition sr = diagonalize(hr.assemble());
      const MatrixC ar = embed_single_site(pauli::sigma_x(), trial % 6, hr.graph());
      const VectorC psi = random_state_vector(rng, 64);
      const auto rep = equilibration_bound_observable(ar, MatrixC(psi * psi.adjoint()), sr, -1.0,
                                                      200.0, 512);
      CHECK(rep.satisfied);
    }
  }
}

TEST_CASE("equilibration bound for POVM sets") {
  const LocalHamiltonian h = models::transverse_field_ising(6, 1.0, 1.05, 0.5);
  const SiteGraph& graph = h.graph();
  const SpectralDecomposition spec = diagonalize(h.assemble());
  const VectorC psi = neel_state(6);
  const MatrixC rho0 = psi * psi.adjoint();

  SUBCASE("trivial POVM gives vanishing lhs") {
    Povm trivial;
    trivial.elements = {MatrixC::Identity(64, 64)};
    const auto rep = equilibration_bound_povm(PovmSet({trivial}), rho0, spec, graph, -1.0, 100.0, 128);
    CHECK(rep.lhs < 1e-12);
    CHECK(rep.satisfied);
  }
  SUBCASE("single-site spectral POVMs satisfy the bound") {
    std::vector<Povm> povms;
    for (int site = 0; site < 6; ++site)
      povms.push_back(PovmSet::spectral(pauli::sigma_z(), {site}));
    const auto rep =
        equilibration_bound_povm(PovmSet(std::move(povms)), rho0, spec, graph, -1.0, 100.0, 512);
    CHECK(rep.satisfied);
    CHECK(rep.lhs <= rep.rhs + 1e-9);
  }
  SUBCASE("informationally complete POVM upper-bounds the subsystem distance average") {
    const std::vector<int> region = {0};
    PovmSet m({PovmSet::informationally_complete(region)});
    const auto grid = uniform_grid(60.0, 256);
    const auto rep = equilibration_bound_povm(m, rho0, spec, graph, -1.0, 60.0, 256);
    const SubsystemScan scan = subsystem_equilibration_scan(rho0, spec, region, graph, grid);
    // the POVM distinguishability can only see less than the full trace distance
    CHECK(rep.lhs <= scan.time_average + 1e-9);
  }
}

TEST_CASE("eta population window") {
  const LocalHamiltonian h = models::transverse_field_ising(5, 1.0, 0.9, 0.4);
  const SpectralDecomposition spec = diagonalize(h.assemble());
  Rng rng(55);
  const auto p = spec.level_populations(random_state_vector(rng, 32));

  SUBCASE("monotone in the window width; full width captures everything") {
    double prev = 0.0;
    for (double delta : {0.0, 0.1, 0.5, 2.0, spec.spectral_range()}) {
      const double eta = eta_population_window(spec, p, delta);
      CHECK(eta >= prev - 1e-12);
      prev = eta;
    }
    CHECK(eta_population_window(spec, p, spec.spectral_range()) == doctest::Approx(1.0));
  }
  SUBCASE("never below the largest population") {
    double pmax = 0;
    for (double x : p) pmax = std::max(pmax, x);
    CHECK(eta_population_window(spec, p, 0.0) >= pmax - 1e-12);
  }
}

TEST_CASE("low rank measurement equilibration") {
  SUBCASE("the theorem constant") {
    CHECK(low_rank_constant ==
          doctest::Approx(5.0 * M_PI / (4.0 * std::sqrt(1.0 - 1.0 / std::exp(1.0))) + 1.0));
    CHECK(low_rank_constant == doctest::Approx(5.939).epsilon(1e-3));
  }
  SUBCASE("rank-1 survival measurement on a random 10-level model") {
    Rng rng(56);
    const MatrixC h = testing::random_hermitian(rng, 10);
    const SpectralDecomposition spec = diagonalize(h);
    REQUIRE(spec.n_levels() == 10);
    const VectorC psi = random_state_vector(rng, 10);
    const MatrixC projector = psi * psi.adjoint();
    const auto rep =
        low_rank_equilibration(projector, MatrixC(psi * psi.adjoint()), spec, 300.0, 1024);
    CHECK(rep.satisfied);
  }
  SUBCASE("degenerate spectra are rejected") {
    MatrixC h = MatrixC::Zero(4, 4);
    h.diagonal() << 1, 1, 2, 3;
    const SpectralDecomposition spec = diagonalize(h);
    VectorC psi = VectorC::Zero(4);
    psi(0) = 1;
    CHECK_THROWS_AS(
        low_rank_equilibration(MatrixC(psi * psi.adjoint()), MatrixC(psi * psi.adjoint()), spec,
                               10.0, 64),
        precondition_error);
  }
}

TEST_CASE("subsystem equilibration scan") {
  const LocalHamiltonian h = models::transverse_field_ising(8, 1.0, 1.05, 0.5);
  const SiteGraph& graph = h.graph();
  const SpectralDecomposition spec = diagonalize(h.assemble());

  SUBCASE("dephased and eigenstate inputs never move") {
    const VectorC eig = spec.basis().col(40);
    const auto scan = subsystem_equilibration_scan(MatrixC(eig * eig.adjoint()), spec, {0}, graph,
                                                   uniform_grid(20.0, 32));
    for (double v : scan.distance.values) CHECK(v < 1e-10);
  }
  SUBCASE("single qubit of an 8-site chain from the Neel state") {
    const VectorC psi = neel_state(8);
    const auto scan = subsystem_equilibration_scan(MatrixC(psi * psi.adjoint()), spec, {3}, graph,
                                                   uniform_grid(200.0, 512));
    // consequence of the POVM theorem with an informationally complete set
    const auto p = spec.level_populations(psi);
    const double bound = std::sqrt(4.0 * g_occupations(p).value) / 2.0 * 2.0;
    CHECK(scan.time_average < bound);
    CHECK(scan.fraction_above_twice_average < 0.5);
  }
}
