#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "thermolab/hamiltonian.hpp"
#include "thermolab/spectral.hpp"
#include "test_util.hpp"

using namespace thermolab;
using thermolab::testing::random_real_symmetric;
using thermolab::testing::random_state_vector;

namespace {
SpectralDecomposition diag_of_vector(const std::vector<double>& energies) {
  MatrixC h = MatrixC::Zero(energies.size(), energies.size());
  for (std::size_t i = 0; i < energies.size(); ++i) h(i, i) = energies[i];
  return diagonalize(h);
}

// O(d'^2) exhaustive oracle for the gap-window count.
long gap_count_brute_force(const std::vector<double>& energies, double epsilon) {
  long best = 0;
  for (std::size_t a = 0; a < energies.size(); ++a)
    for (std::size_t b = 0; b < energies.size(); ++b) {
      if (a == b) continue;
      const double start = energies[a] - energies[b];  // window anchored at a gap
      long count = 0;
      for (std::size_t k = 0; k < energies.size(); ++k)
        for (std::size_t l = 0; l < energies.size(); ++l) {
          if (k == l) continue;
          const double gap = energies[k] - energies[l];
          if (gap >= start - 1e-12 && gap <= start + epsilon + 1e-12) ++count;
        }
      best = std::max(best, count);
    }
  return best;
}
}  // namespace

TEST_CASE("diagonalize clusters degenerate levels") {
  SUBCASE("diag(1,1,2) has two levels with multiplicities (2,1)") {
    const SpectralDecomposition spec = diag_of_vector({1, 1, 2});
    REQUIRE(spec.n_levels() == 2);
    CHECK(spec.multiplicity(0) == 2);
    CHECK(spec.multiplicity(1) == 1);
    CHECK(spec.energy(0) == doctest::Approx(1.0));
  }
  SUBCASE("sigma_x has levels -1, +1 with rank-1 projectors") {
    const SpectralDecomposition spec = diagonalize(pauli::sigma_x());
    REQUIRE(spec.n_levels() == 2);
    CHECK(spec.energy(0) == doctest::Approx(-1.0));
    CHECK(spec.energy(1) == doctest::Approx(1.0));
    CHECK(spec.projector(0).trace().real() == doctest::Approx(1.0));
  }
}

TEST_CASE("spectral decomposition invariants on a Heisenberg chain") {
  const LocalHamiltonian h = models::heisenberg(6, {});
  const MatrixC full = h.assemble();
  const SpectralDecomposition spec = diagonalize(full);
  const double norm_h = hermitian_eigenvalues(full).cwiseAbs().maxCoeff();

  MatrixC sum = MatrixC::Zero(spec.dim(), spec.dim());
  MatrixC rebuilt = MatrixC::Zero(spec.dim(), spec.dim());
  for (int k = 0; k < spec.n_levels(); ++k) {
    const MatrixC p = spec.projector(k);
    sum += p;
    rebuilt += spec.energy(k) * p;
    CHECK(operator_norm_bound(MatrixC(p * p - p)) < 1e-10);
  }
  CHECK(operator_norm_bound(MatrixC(sum - MatrixC::Identity(spec.dim(), spec.dim()))) < 1e-10);
  CHECK(operator_norm_bound(MatrixC(rebuilt - full)) < 1e-9 * norm_h);
  // the Heisenberg chain has genuine degeneracies that must merge
  CHECK(spec.n_levels() < spec.dim());
}

TEST_CASE("level populations") {
  const LocalHamiltonian h = models::transverse_field_ising(4, 1.0, 0.9);
  const SpectralDecomposition spec = diagonalize(h.assemble());
  SUBCASE("eigenstate populates a single level") {
    const VectorC psi = spec.basis().col(3);
    const auto p = spec.level_populations(psi);
    const int level = spec.level_of_column(3);
    for (int k = 0; k < spec.n_levels(); ++k)
      CHECK(p[k] == doctest::Approx(k == level ? 1.0 : 0.0).epsilon(1e-10));
  }
  SUBCASE("maximally mixed state weights levels by multiplicity") {
    const MatrixC rho = MatrixC::Identity(16, 16) / 16.0;
    const auto p = spec.level_populations(rho);
    for (int k = 0; k < spec.n_levels(); ++k)
      CHECK(p[k] == doctest::Approx(spec.multiplicity(k) / 16.0).epsilon(1e-10));
  }
  SUBCASE("populations of a random pure state sum to one") {
    Rng rng(5);
    const LocalHamiltonian h6 = models::transverse_field_ising(6, 1.0, 1.1, 0.4);
    const SpectralDecomposition spec6 = diagonalize(h6.assemble());
    const auto p = spec6.level_populations(random_state_vector(rng, 64));
    double sum = 0.0;
    for (double x : p) sum += x;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("gap window count N(epsilon)") {
  SUBCASE("harmonic ladder at epsilon = 0") {
    const SpectralDecomposition spec = diag_of_vector({1, 2, 3, 4, 5});
    CHECK(gap_count(spec, 0.0) == 4);  // oracle: the unit gap appears four times
  }
  SUBCASE("generic spectrum has non-degenerate gaps") {
    Rng rng(7);
    const SpectralDecomposition spec = diagonalize(random_real_symmetric(rng, 12));
    CHECK(gap_count(spec, 0.0) == 1);
    CHECK(has_nondegenerate_gaps(spec));
  }
  SUBCASE("window covering all gaps counts every ordered pair") {
    const SpectralDecomposition spec = diag_of_vector({0.0, 0.31, 1.1, 2.9});
    const int dprime = spec.n_levels();
    CHECK(gap_count(spec, 2.0 * spec.spectral_range()) == dprime * (dprime - 1));
  }
  SUBCASE("agrees with exhaustive pair enumeration") {
    Rng rng(8);
    std::vector<double> energies;
    for (int i = 0; i < 14; ++i) energies.push_back(rng.uniform(0.0, 10.0));
    std::sort(energies.begin(), energies.end());
    const SpectralDecomposition spec = diag_of_vector(energies);
    for (double eps : {0.05, 0.3, 1.7, 5.0})
      CHECK(gap_count(spec, eps) == gap_count_brute_force(spec.energies(), eps));
  }
  SUBCASE("uncoupled sums have many degenerate gaps") {
    SiteGraph graph(2, {});
    LocalHamiltonian h(graph, {{pauli::sigma_x(), {0}}, {pauli::sigma_x(), {1}}});
    const SpectralDecomposition spec = diagonalize(h.assemble());
    CHECK(!has_nondegenerate_gaps(spec));
  }
  SUBCASE("ladder spectrum fails the non-degenerate gaps condition") {
    CHECK(!has_nondegenerate_gaps(diag_of_vector({1, 2, 3, 4, 5})));
  }
}

TEST_CASE("level spacing ratios") {
  SUBCASE("equally spaced ladder gives all ratios one") {
    const GapStatistics stats = level_spacing_ratios({1, 2, 3, 4, 5, 6});
    for (double r : stats.spacing_ratios) CHECK(r == doctest::Approx(1.0));
  }
  SUBCASE("fewer than three levels is an error") {
    CHECK_THROWS_AS(level_spacing_ratios({1.0, 2.0}), precondition_error);
  }
  SUBCASE("GOE ensemble mean near 0.53, Poisson near 0.386") {
    Rng rng(9);
    double goe_acc = 0.0, poisson_acc = 0.0;
    const int realizations = 200;
    for (int r = 0; r < realizations; ++r) {
      const VectorR vals = hermitian_eigenvalues(random_real_symmetric(rng, 12));
      goe_acc += level_spacing_ratios({vals.data(), vals.data() + 12}).mean_ratio;
      std::vector<double> uniform;
      for (int i = 0; i < 12; ++i) uniform.push_back(rng.uniform(0.0, 1.0));
      std::sort(uniform.begin(), uniform.end());
      poisson_acc += level_spacing_ratios(uniform).mean_ratio;
    }
    CHECK(std::abs(goe_acc / realizations - r_goe) < 0.03);
    CHECK(std::abs(poisson_acc / realizations - r_poisson) < 0.03);
  }
}

TEST_CASE("number of states in a window") {
  const LocalHamiltonian h = models::heisenberg(8, {});
  const SpectralDecomposition spec = diagonalize(h.assemble());
  SUBCASE("window covering the spectrum counts the full dimension") {
    CHECK(number_of_states(spec, spec.e_min() - 1, spec.spectral_range() + 2) == spec.dim());
  }
  SUBCASE("window below the spectrum is empty") {
    CHECK(number_of_states(spec, spec.e_min() - 10, 5.0) == 0);
  }
  SUBCASE("middle window matches the projector rank") {
    const double lo = spec.e_min() + 0.25 * spec.spectral_range();
    const double width = 0.5 * spec.spectral_range();
    long rank = 0;
    for (int k = 0; k < spec.n_levels(); ++k)
      if (spec.energy(k) >= lo && spec.energy(k) <= lo + width)
        rank += static_cast<long>(spec.projector(k).trace().real() + 0.5);
    CHECK(number_of_states(spec, lo, width) == rank);
  }
}

TEST_CASE("fourier transform of the spectrum") {
  SUBCASE("value one at t = 0 and for single levels") {
    CHECK(std::abs(fourier_spectrum({1.0, 2.0, 3.0}, 0.0) - cxd(1, 0)) < 1e-14);
    CHECK(std::abs(std::abs(fourier_spectrum({2.5}, 13.7)) - 1.0) < 1e-14);
  }
  SUBCASE("two equal-weight levels vanish at t = pi / gap") {
    const double omega = 1.7;
    CHECK(std::abs(fourier_spectrum({0.0, omega}, M_PI / omega)) < 1e-12);
  }
  SUBCASE("f(-t) = conj(f(t))") {
    const std::vector<double> evals = {0.3, 1.1, 2.7, 2.9};
    for (double t : {0.3, 1.9, 12.0})
      CHECK(std::abs(fourier_spectrum(evals, -t) - std::conj(fourier_spectrum(evals, t))) == 0.0);
  }
}
