#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <vector>

#include "specnoise/chain.hpp"
#include "specnoise/errors.hpp"
#include "specnoise/noise.hpp"
#include "specnoise/spectral.hpp"
#include "support.hpp"

using namespace specnoise;

TEST_CASE("indicator profile on the complete graph") {
  Chain k5 = make_family({Family::complete, 5, 0});
  SpectralDecomposition dec = decompose(k5);
  Observable f = Observable::indicator({0}, 5);
  CHECK(f.boolean);
  SpectralProfile profile = fourier_profile(dec, f);

  CHECK(profile.mean == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(profile.variance == doctest::Approx(0.16).epsilon(1e-12));
  CHECK(profile.second_moment == doctest::Approx(0.2).epsilon(1e-12));
  // All variance sits in the single nonzero band.
  REQUIRE(profile.band_masses.size() == 2);
  CHECK(profile.band_masses[1] == doctest::Approx(0.16).epsilon(1e-12));
  // Spectral measure mean: (0.8 * 0 + 0.2/0.2 ... ) every nonzero
  // eigenvalue is 5/4, so E_f[lambda] = (variance / second moment) * 5/4.
  CHECK(profile.mean_lambda ==
        doctest::Approx(0.16 / 0.2 * 1.25).epsilon(1e-12));
}

TEST_CASE("parseval holds on random chains and functions") {
  std::mt19937_64 gen = rng_stream(501);
  for (int rep = 0; rep < 20; ++rep) {
    int n = 5 + static_cast<int>(gen() % 20);
    Chain chain = testsupport::random_reversible_chain(gen(), n);
    SpectralDecomposition dec = decompose(chain);
    Eigen::VectorXd values(n);
    std::normal_distribution<double> normal;
    for (int i = 0; i < n; ++i) values(i) = normal(gen);
    SpectralProfile profile =
        fourier_profile(dec, Observable::from_values(values));

    double second = chain.pi.dot(values.cwiseProduct(values));
    double mean = chain.pi.dot(values);
    CHECK(profile.second_moment == doctest::Approx(second).epsilon(1e-10));
    CHECK(profile.mean == doctest::Approx(mean).epsilon(1e-10));
    CHECK(profile.variance ==
          doctest::Approx(second - mean * mean).epsilon(1e-9));
  }
}

TEST_CASE("flip probability is twice the covariance deficit") {
  std::mt19937_64 gen = rng_stream(777);
  std::vector<double> alphas = {0.01, 0.1, 0.5, 1.0, 2.0, 7.0};
  for (int rep = 0; rep < 30; ++rep) {
    int n = 4 + static_cast<int>(gen() % 25);
    Chain chain = testsupport::random_reversible_chain(gen(), n);
    SpectralDecomposition dec = decompose(chain);
    Observable f =
        Observable::from_values(testsupport::random_boolean_values(gen, n));
    REQUIRE(f.boolean);
    SpectralProfile profile = fourier_profile(dec, f);

    auto cov = covariance_curve(profile, alphas);
    auto flip = flip_curve(profile, alphas);
    for (std::size_t i = 0; i < alphas.size(); ++i) {
      CHECK(std::abs(flip[i].second -
                     2.0 * (profile.variance - cov[i].second)) <= 1e-10);
      CHECK(flip[i].second >= -1e-12);
      CHECK(cov[i].second <= profile.variance + 1e-12);
    }
  }
}

TEST_CASE("band and tail masses partition the variance") {
  std::mt19937_64 gen = rng_stream(902);
  for (int rep = 0; rep < 10; ++rep) {
    int n = 6 + static_cast<int>(gen() % 18);
    Chain chain = testsupport::random_reversible_chain(gen(), n);
    SpectralDecomposition dec = decompose(chain);
    Observable f =
        Observable::from_values(testsupport::random_boolean_values(gen, n));
    SpectralProfile profile = fourier_profile(dec, f);
    for (double k : {1.5, 2.0, 4.0, 8.0}) {
      double sensitive = sensitivity_band_mass(profile, k);
      double stable = stability_tail_mass(profile, k);
      CHECK(std::abs(sensitive + stable - profile.variance) <= 1e-12);
      CHECK(sensitive >= 0.0);
      CHECK(stable >= 0.0);
    }
    CHECK(stability_tail_mass(profile, 1.0) ==
          doctest::Approx(profile.variance).epsilon(1e-12));
  }
}

TEST_CASE("rerandomize dictator has the exact two-point curves") {
  Chain rer = make_family({Family::hypercube_rerandomize, 4, 0});
  SpectralDecomposition dec = decompose(rer);
  Eigen::VectorXd values(rer.size());
  for (int i = 0; i < rer.size(); ++i)
    values(i) = rer.states[i][0] == '1' ? 1.0 : 0.0;
  SpectralProfile profile =
      fourier_profile(dec, Observable::from_values(values));

  CHECK(profile.variance == doctest::Approx(0.25).epsilon(1e-12));
  std::vector<double> alphas = {0.001, 0.1, 1.0, 3.0, 10.0};
  auto cov = covariance_curve(profile, alphas);
  auto flip = flip_curve(profile, alphas);
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    CHECK(std::abs(cov[i].second - 0.25 * std::exp(-alphas[i])) <= 1e-12);
    CHECK(std::abs(flip[i].second - 0.5 * (1.0 - std::exp(-alphas[i]))) <=
          1e-12);
  }
}

TEST_CASE("sharpness bounds hold and are tight at one band") {
  std::mt19937_64 gen = rng_stream(33);
  for (int rep = 0; rep < 15; ++rep) {
    int n = 5 + static_cast<int>(gen() % 15);
    Chain chain = testsupport::random_reversible_chain(gen(), n);
    SpectralDecomposition dec = decompose(chain);
    Observable f =
        Observable::from_values(testsupport::random_boolean_values(gen, n));
    SpectralProfile profile = fourier_profile(dec, f);
    for (double horizon : {dec.relaxation_time, 5 * dec.relaxation_time})
      for (double alpha : {0.2, 1.0, 4.0}) {
        SharpnessReport report = sharpness_bounds(profile, horizon, alpha);
        CHECK(report.cov_ok);
        CHECK(report.flip_ok);
      }
  }

  // On K_n every nonzero eigenvalue equals lambda_1, so the covariance
  // bound is met with equality by a centered unit function.
  Chain k4 = make_family({Family::complete, 4, 0});
  SpectralDecomposition dec = decompose(k4);
  SpectralProfile profile =
      fourier_profile(dec, Observable::indicator({0, 1}, 4));
  SharpnessReport report = sharpness_bounds(profile, 2.0, 1.0);
  // Var = 1/4; Cov(alpha T) = Var e^{-lambda_1 alpha T}.
  CHECK(report.cov_exact ==
        doctest::Approx(0.25 * report.cov_upper).epsilon(1e-12));
  CHECK(report.flip_exact ==
        doctest::Approx(report.flip_lower).epsilon(1e-12));
}

TEST_CASE("sensitive existence gap closed forms") {
  for (int n = 2; n <= 8; ++n) {
    SpectralDecomposition dec =
        decompose(make_family({Family::complete, n, 0}));
    double expected = (1.0 - 1.0 / n) * std::exp(-1.0);
    CHECK(sensitive_existence_gap(dec) ==
          doctest::Approx(expected).epsilon(1e-12));
  }
  for (int n = 1; n <= 6; ++n) {
    SpectralDecomposition dec =
        decompose(make_family({Family::hypercube_rerandomize, n, 0}));
    double expected = std::pow((1.0 + std::exp(-1.0)) / 2.0, n) -
                      std::pow(2.0, -n);
    CHECK(sensitive_existence_gap(dec) ==
          doctest::Approx(expected).epsilon(1e-11));
  }
}

TEST_CASE("random subset covariance expectation matches exhaustive average") {
  for (FamilySpec spec : {FamilySpec{Family::complete, 4, 0},
                          FamilySpec{Family::cycle, 3, 0}}) {
    Chain chain = make_family(spec);
    const int n = chain.size();
    SpectralDecomposition dec = decompose(chain);
    Eigen::MatrixXd kernel = transition_kernel(dec, dec.relaxation_time);
    // Joint law P(X_0 = v, X_t = w) = pi(v) H_t(v, w).
    Eigen::MatrixXd joint = chain.pi.asDiagonal() * kernel;

    for (int m = 1; m < n; ++m) {
      double total = 0.0;
      int count = 0;
      for (int mask = 1; mask < (1 << n); ++mask) {
        if (__builtin_popcount(static_cast<unsigned>(mask)) != m) continue;
        double mass = 0.0, corr = 0.0;
        for (int v = 0; v < n; ++v) {
          if (!(mask >> v & 1)) continue;
          mass += chain.pi(v);
          for (int w = 0; w < n; ++w)
            if (mask >> w & 1) corr += joint(v, w);
        }
        total += corr - mass * mass;
        ++count;
      }
      SubsetCovExpectation expectation = expected_random_subset_cov(dec, m);
      CHECK(expectation.uniform_pi);
      CHECK(std::abs(total / count - expectation.value) <= 1e-10);
    }
  }

  // Non-uniform pi: the closed form carries a caveat flag.
  Chain glued = make_family({Family::glued_cliques, 2, 0});
  SubsetCovExpectation skew =
      expected_random_subset_cov(decompose(glued), 2);
  CHECK(!skew.uniform_pi);
}

TEST_CASE("random subset indicators are seeded and sized") {
  Chain chain = make_family({Family::cycle, 5, 0});
  Observable a = random_subset_indicator(chain, 4, 99);
  Observable b = random_subset_indicator(chain, 4, 99);
  Observable c = random_subset_indicator(chain, 4, 100);
  CHECK(a.values == b.values);
  CHECK(a.values != c.values);
  CHECK(a.boolean);
  CHECK(a.values.sum() == doctest::Approx(4.0));
}

TEST_CASE("noise interface errors") {
  Chain chain = make_family({Family::complete, 4, 0});
  SpectralDecomposition dec = decompose(chain);
  Eigen::VectorXd values(4);
  values << 0.0, 0.3, 1.0, 1.0;
  SpectralProfile profile =
      fourier_profile(dec, Observable::from_values(values));
  CHECK(!profile.boolean);
  CHECK_THROWS_AS(flip_curve(profile, {1.0}), Error);
  CHECK_THROWS_AS(covariance_curve(profile, {0.0}), Error);
  CHECK_THROWS_AS(covariance_curve(profile, {-1.0}), Error);
  CHECK_THROWS_AS(sensitivity_band_mass(profile, 0.9), Error);
  CHECK_THROWS_AS(expected_random_subset_cov(dec, 0), Error);
  CHECK_THROWS_AS(expected_random_subset_cov(dec, 4), Error);
  CHECK_THROWS_AS(random_subset_indicator(chain, 5, 1), Error);
  CHECK_THROWS_AS(sharpness_bounds(profile, 0.0, 1.0), Error);
}
