#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "chanent/asymptotics.hpp"
#include "chanent/entropy.hpp"
#include "chanent/errors.hpp"
#include "test_support.hpp"

using namespace chanent;

TEST_CASE("output_spectrum: unit sum, mean-one rescaling, oracle eigenvalues") {
  const Channel phi = random_channel(4, 16, 61);
  const SchmidtSpectrum lam = sample_schmidt(4, SchmidtKind::DirichletFlat, 62);
  const SpectrumSample s = output_spectrum(phi, lam);

  REQUIRE(s.eigenvalues.size() == 16);
  CHECK(std::abs(s.eigenvalues.sum() - 1.0) < 1e-12);
  CHECK(s.rescaled.mean() == doctest::Approx(1.0).epsilon(1e-12));

  // Independent route: eigenvalues of (Phi (x) 1) psi_lambda via the extended
  // apply and Eigen's native solver.
  const DensityMatrix sigma = apply_extended(phi, schmidt_state(lam));
  CHECK(ts::maxdiff(s.eigenvalues, ts::saes_eigenvalues(sigma.mat())) < 1e-11);
}

TEST_CASE("output spectrum equals the spectrum of D (1 (x) Lambda)") {
  // The product is not Hermitian, yet its eigenvalues are those of sigma;
  // identity_dev tracks exactly this, including at rank-deficient lambda.
  for (const SchmidtKind kind :
       {SchmidtKind::Uniform, SchmidtKind::DirichletFlat,
        SchmidtKind::DirichletConc, SchmidtKind::DirichletTwo}) {
    for (const int d : {2, 4, 6}) {
      const Channel phi = random_channel(d, d * d, 100 + d);
      const SchmidtSpectrum lam = sample_schmidt(d, kind, 200 + d);
      CHECK(output_spectrum(phi, lam).identity_dev < 1e-10);
    }
  }
}

TEST_CASE("output_spectrum validates dimensions and CPTP") {
  const Channel phi = random_channel(3, 9, 5);
  CHECK_THROWS_AS(output_spectrum(phi, SchmidtSpectrum::uniform(2)),
                  DimensionMismatch);
  std::vector<ComplexMatrix> half{0.5 * ComplexMatrix::Identity(2, 2)};
  CHECK_THROWS_AS(
      output_spectrum(channel_from_kraus(std::move(half)),
                      SchmidtSpectrum::uniform(2)),
      NotCptp);
}

TEST_CASE("tr_sigma_log_gamma equals -H(lambda) - log d") {
  for (const int d : {2, 3, 5}) {
    const Channel phi = random_channel(d, d * d, 300 + d);
    const SchmidtSpectrum lam =
        sample_schmidt(d, SchmidtKind::DirichletConc, 400 + d);
    const double got = tr_sigma_log_gamma(phi, lam);
    const double expected =
        -ts::scalar_entropy(lam.lambda()) - std::log(static_cast<double>(d));
    CHECK(got == doctest::Approx(expected).epsilon(1e-10));

    // Independent route: full trace against the diagonal log-reference,
    // entry by entry on sigma itself.
    const ComplexMatrix sigma = apply_extended(phi, schmidt_state(lam)).mat();
    double direct = 0.0;
    for (int b = 0; b < d; ++b) {
      for (int j = 0; j < d; ++j) {
        direct += sigma(b * d + j, b * d + j).real() *
                  (std::log(lam.lambda()(j)) - std::log(static_cast<double>(d)));
      }
    }
    CHECK(got == doctest::Approx(direct).epsilon(1e-10));
  }
}

TEST_CASE("free_moment_check: exact first moment, small second-moment z-score") {
  const MomentReport rep =
      free_moment_check(8, 64, SchmidtKind::DirichletFlat, 20, 99);
  CHECK(rep.m1_emp == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rep.m1_pred == 1.0);
  CHECK(std::abs(rep.z1) < 1.0);  // residuals at rounding level
  CHECK(std::abs(rep.z2) < 4.0);
  CHECK(rep.m2_emp == doctest::Approx(rep.m2_pred).epsilon(0.15));
  CHECK(rep.d == 8);
  CHECK(rep.k == 64);
  CHECK(rep.trials == 20);
}

TEST_CASE("free_moment_check with a uniform input reduces to the Choi moment") {
  // For lambda = 1/d the input factor is constant: b2 = 1, so the prediction
  // is the (rescaled) Choi second moment and sigma equals the Choi state.
  const MomentReport rep =
      free_moment_check(6, 36, SchmidtKind::Uniform, 5, 12);
  CHECK(std::abs(rep.m2_emp - rep.m2_pred) < 1e-10);
  CHECK(std::abs(rep.z2) < 1.0);
}

TEST_CASE("free_moment_check validates inputs") {
  CHECK_THROWS_AS(free_moment_check(0, 4, SchmidtKind::Uniform, 5, 1),
                  InvalidParameter);
  CHECK_THROWS_AS(free_moment_check(4, 16, SchmidtKind::Uniform, 1, 1),
                  InsufficientTrials);
}

TEST_CASE("fig1_trial is deterministic and keyed on (d, kind, trial)") {
  const auto [phi_a, lam_a] = fig1_trial(3, SchmidtKind::DirichletFlat, 2, 7);
  const auto [phi_b, lam_b] = fig1_trial(3, SchmidtKind::DirichletFlat, 2, 7);
  CHECK(ts::maxdiff(choi_matrix(phi_a), choi_matrix(phi_b)) == 0.0);
  CHECK(ts::maxdiff(lam_a.lambda(), lam_b.lambda()) == 0.0);

  const auto [phi_c, lam_c] = fig1_trial(3, SchmidtKind::DirichletFlat, 3, 7);
  CHECK(ts::maxdiff(choi_matrix(phi_a), choi_matrix(phi_c)) > 1e-3);
  CHECK(ts::maxdiff(lam_a.lambda(), lam_c.lambda()) > 1e-6);
}

TEST_CASE("fig1_experiment reproduces a hand-rolled average over trials") {
  const int d = 3;
  const int trials = 4;
  const std::uint64_t seed = 2026;
  const auto points = fig1_experiment({d}, {SchmidtKind::DirichletConc}, trials, seed);
  REQUIRE(points.size() == 1);
  CHECK(points[0].d == d);
  CHECK(points[0].trials == trials);

  double acc = 0.0;
  for (int t = 0; t < trials; ++t) {
    const auto [phi, lam] = fig1_trial(d, SchmidtKind::DirichletConc, t, seed);
    const DensityMatrix sigma = apply_extended(phi, schmidt_state(lam));
    acc += std::log(static_cast<double>(d)) + ts::scalar_entropy(lam.lambda()) -
           von_neumann(sigma);
  }
  CHECK(points[0].mean_D == doctest::Approx(acc / trials).epsilon(1e-10));
  CHECK(points[0].stderr_D > 0.0);
}

TEST_CASE("fig1 at the uniform input ties to the map entropy exactly") {
  // With lambda = 1/d, sigma is the Jamiolkowski state, so each trial gives
  // D = 2 log d - H_map; the curve mean then matches the map-entropy mean.
  const int d = 2;
  const int trials = 5;
  const std::uint64_t seed = 3;
  const auto points = fig1_experiment({d}, {SchmidtKind::Uniform}, trials, seed);
  double hk = 0.0;
  for (int t = 0; t < trials; ++t) {
    hk += map_entropy(fig1_trial(d, SchmidtKind::Uniform, t, seed).first);
  }
  hk /= trials;
  CHECK(std::abs(points[0].mean_D - (2.0 * std::log(2.0) - hk)) < 1e-12);
}

TEST_CASE("fig1_experiment validates its arguments") {
  CHECK_THROWS_AS(fig1_experiment({}, {SchmidtKind::Uniform}, 2, 1),
                  InvalidParameter);
  CHECK_THROWS_AS(fig1_experiment({4, 2}, {SchmidtKind::Uniform}, 2, 1),
                  InvalidParameter);
  CHECK_THROWS_AS(fig1_experiment({2}, {SchmidtKind::Uniform}, 0, 1),
                  InvalidParameter);
  CHECK_THROWS_AS(fig1_experiment({2}, {}, 2, 1), InvalidParameter);
}

TEST_CASE("conjecture_sweep rows are internally consistent") {
  const auto rows = conjecture_sweep({2, 4}, 6, 11);
  REQUIRE(rows.size() == 2);
  for (const ConjectureRow& row : rows) {
    const double logd = std::log(static_cast<double>(row.d));
    CHECK(row.k == row.d * row.d);
    CHECK(row.trials == 6);
    // Both statistics come from the same eigenvalues, so the identity
    // mean_D = 2 log d - mean_H_map holds to rounding.
    CHECK(std::abs(row.mean_D_lower_bound - (2.0 * logd - row.mean_h_map)) <
          1e-12);
    CHECK(std::abs(row.h_map_dev - (row.mean_h_map - (2.0 * logd - 0.5))) <
          1e-14);
    CHECK(std::abs(row.D_dev - (row.mean_D_lower_bound - 0.5)) < 1e-14);
    CHECK(row.stderr_h_map > 0.0);
  }
  // The deviation from the asymptote shrinks with dimension.
  CHECK(std::abs(rows[1].D_dev) < std::abs(rows[0].D_dev));
}

TEST_CASE("conjecture_sweep is deterministic in the seed") {
  const auto a = conjecture_sweep({3}, 3, 21);
  const auto b = conjecture_sweep({3}, 3, 21);
  CHECK(a[0].mean_h_map == b[0].mean_h_map);
  CHECK(a[0].stderr_D == b[0].stderr_D);
}
