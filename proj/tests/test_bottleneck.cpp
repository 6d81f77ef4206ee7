#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "specnoise/bottleneck.hpp"
#include "specnoise/chain.hpp"
#include "specnoise/errors.hpp"
#include "specnoise/noise.hpp"
#include "specnoise/spectral.hpp"
#include "support.hpp"

using namespace specnoise;

TEST_CASE("phi agrees with the brute-force definition") {
  std::mt19937_64 gen = rng_stream(1234);
  for (int rep = 0; rep < 40; ++rep) {
    int n = 4 + static_cast<int>(gen() % 12);
    Chain chain = testsupport::random_reversible_chain(gen(), n);
    std::vector<int> subset = testsupport::random_subset(gen, n);
    double expected = testsupport::naive_phi(chain, subset);
    CHECK(phi(chain, subset) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("cut report on a K4 pair") {
  Chain k4 = make_family({Family::complete, 4, 0});
  CutReport report = cut_report(k4, {0, 1});
  CHECK(report.pi_mass == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(report.boundary_flow == doctest::Approx(1.0 / 3).epsilon(1e-13));
  CHECK(report.phi == doctest::Approx(2.0 / 3).epsilon(1e-13));
  CHECK(!report.exact_minimum);

  CHECK_THROWS_AS(cut_report(k4, {}), Error);
  CHECK_THROWS_AS(cut_report(k4, {0, 1, 2, 3}), Error);
  CHECK_THROWS_AS(cut_report(k4, {0, 0}), Error);
  CHECK_THROWS_AS(cut_report(k4, {0, 7}), Error);
}

TEST_CASE("exact bottleneck on cycles, cliques, and glued cliques") {
  for (int n = 2; n <= 7; ++n) {
    Chain ring = make_family({Family::cycle, n, 0});
    CutReport report = exact_bottleneck(ring);
    CHECK(std::abs(report.phi - 1.0 / n) <= 1e-12);
    CHECK(report.exact_minimum);
    CHECK(report.method == SearchMethod::enumeration);
    // The minimizing arc has half the states.
    CHECK(static_cast<int>(report.subset.size()) == n);
  }

  CutReport k4 = exact_bottleneck(make_family({Family::complete, 4, 0}));
  CHECK(k4.phi == doctest::Approx(2.0 / 3).epsilon(1e-13));
  CHECK(k4.subset == std::vector<int>{0, 1});  // deterministic tie-break

  CutReport glued =
      exact_bottleneck(make_family({Family::glued_cliques, 3, 0}));
  CHECK(std::abs(glued.phi - 1.0 / 7) <= 1e-12);
  CHECK(glued.subset == std::vector<int>{9, 10, 11});
  CHECK(glued.pi_mass == doctest::Approx(7.0 / 80).epsilon(1e-12));
}

TEST_CASE("serial and parallel enumeration agree bitwise") {
  std::vector<Chain> chains;
  chains.push_back(make_family({Family::cycle, 6, 0}));
  chains.push_back(make_family({Family::glued_cliques, 3, 0}));
  chains.push_back(make_family({Family::regular_glue, 3, 0}));
  for (std::uint64_t seed : {61, 62, 63})
    chains.push_back(testsupport::random_reversible_chain(seed, 13));
  for (const Chain& chain : chains) {
    CutReport serial = exact_bottleneck_serial(chain);
    CutReport parallel = exact_bottleneck(chain, 24, RunMode::parallel);
    CHECK(serial.subset == parallel.subset);
    CHECK(serial.phi == parallel.phi);
    CHECK(serial.pi_mass == parallel.pi_mass);
    CHECK(serial.boundary_flow == parallel.boundary_flow);

    CutReport serial_r = nondegenerate_minimizer(chain, 24, RunMode::serial);
    CutReport parallel_r =
        nondegenerate_minimizer(chain, 24, RunMode::parallel);
    CHECK(serial_r.subset == parallel_r.subset);
    CHECK(serial_r.phi == parallel_r.phi);
  }
}

TEST_CASE("tie-breaking picks fewest states then lexicographic") {
  // On the 6-cycle all 3-arcs achieve the minimum 1/3; the lexicographically
  // smallest index set wins.
  CutReport ring = exact_bottleneck(make_family({Family::cycle, 3, 0}));
  CHECK(ring.subset == std::vector<int>{0, 1, 2});

  // On K5 all five 2-subsets tie at 3/4 and no smaller set competes.
  CutReport k5 = exact_bottleneck(make_family({Family::complete, 5, 0}));
  CHECK(k5.phi == doctest::Approx(0.75).epsilon(1e-13));
  CHECK(k5.subset == std::vector<int>{0, 1});
}

TEST_CASE("sweep cut recovers contiguous minimizers on the cycle") {
  Chain ring = make_family({Family::cycle, 4, 0});
  SpectralDecomposition dec = decompose(ring);
  CutReport sweep = sweep_cut(ring, dec);
  CHECK(!sweep.exact_minimum);
  CHECK(sweep.method == SearchMethod::sweep);
  CHECK(std::abs(sweep.phi - 0.25) <= 1e-12);

  // Always an upper bound for the exact minimum.
  std::mt19937_64 gen = rng_stream(88);
  for (int rep = 0; rep < 10; ++rep) {
    Chain chain = testsupport::random_reversible_chain(gen(), 12);
    SpectralDecomposition d = decompose(chain);
    CutReport upper = sweep_cut(chain, d);
    CutReport exact = exact_bottleneck(chain);
    CHECK(upper.phi >= exact.phi - 1e-12);
    CHECK(upper.pi_mass <= 0.5 + 1e-12);
  }

  CutReport k5 = sweep_cut(make_family({Family::complete, 5, 0}),
                           decompose(make_family({Family::complete, 5, 0})));
  CHECK(k5.phi >= 0.75 - 1e-12);
}

TEST_CASE("restricted minimizer equals phi_star on transitive families") {
  std::vector<FamilySpec> specs = {
      {Family::complete, 8, 0},  {Family::cycle, 6, 0},
      {Family::hypercube_walk, 4, 0},
      {Family::hypercube_rerandomize, 4, 0},
      {Family::slice_exclusion, 6, 2},
  };
  for (const FamilySpec& spec : specs) {
    CAPTURE(family_name(spec.family));
    Chain chain = make_family(spec);
    REQUIRE(chain.transitive);
    CutReport restricted = nondegenerate_minimizer(chain);
    CutReport star = exact_bottleneck(chain);
    CHECK(std::abs(restricted.phi - star.phi) <= 1e-10);
    CHECK(restricted.pi_mass > 0.25);
    CHECK(restricted.pi_mass <= 0.5 + 1e-12);
    REQUIRE(restricted.phi_star.has_value());
    CHECK(*restricted.phi_star == star.phi);
    CHECK(*restricted.gap_to_star <= 1e-10);
  }

  // The dumbbell is not transitive: its balanced cuts are far worse than
  // the small-clique cut.
  Chain glued = make_family({Family::glued_cliques, 3, 0});
  CutReport restricted = nondegenerate_minimizer(glued);
  CutReport star = exact_bottleneck(glued);
  CHECK(restricted.phi > star.phi + 0.1);
  CHECK(*restricted.gap_to_star > 0.1);
  CHECK(restricted.method == SearchMethod::restricted);
}

TEST_CASE("cheeger sandwich on families and random chains") {
  std::vector<Chain> chains;
  for (int n = 2; n <= 6; ++n)
    chains.push_back(make_family({Family::cycle, n, 0}));
  chains.push_back(make_family({Family::glued_cliques, 3, 0}));
  chains.push_back(make_family({Family::star, 8, 0}));
  chains.push_back(make_family({Family::regular_glue, 3, 0}));
  std::mt19937_64 gen = rng_stream(4242);
  for (int rep = 0; rep < 8; ++rep)
    chains.push_back(testsupport::random_reversible_chain(gen(), 11));
  for (const Chain& chain : chains) {
    SpectralDecomposition dec = decompose(chain);
    CheegerReport report = cheeger_check(chain, dec);
    CHECK(report.lower_ok);
    CHECK(report.upper_ok);
    CHECK(report.phi_star * report.phi_star <= 2 * report.lambda_1 + 1e-9);
    CHECK(2 * report.lambda_1 <= 4 * report.phi_star + 1e-9);
  }
}

TEST_CASE("conductance equals the spectral measure mean") {
  std::mt19937_64 gen = rng_stream(515);
  for (int rep = 0; rep < 25; ++rep) {
    int n = 4 + static_cast<int>(gen() % 14);
    Chain chain = testsupport::random_reversible_chain(gen(), n);
    SpectralDecomposition dec = decompose(chain);
    for (int s = 0; s < 4; ++s) {
      std::vector<int> subset = testsupport::random_subset(gen, n);
      SpectralIdentityReport report =
          spectral_identity_check(chain, dec, subset);
      CHECK(report.match);
      CHECK(report.phi_value ==
            doctest::Approx(report.mean_lambda).epsilon(1e-9));
    }
  }
}

TEST_CASE("flip probability respects the conductance bound") {
  std::vector<double> alphas = {0.05, 0.3, 1.0, 4.0};
  std::vector<FamilySpec> specs = {
      {Family::cycle, 4, 0},
      {Family::complete, 6, 0},
      {Family::glued_cliques, 2, 0},
      {Family::star, 5, 0},
  };
  for (const FamilySpec& spec : specs) {
    CAPTURE(family_name(spec.family));
    Chain chain = make_family(spec);
    SpectralDecomposition dec = decompose(chain);
    const int n = chain.size();
    for (int mask = 1; mask < (1 << n) - 1; ++mask) {
      std::vector<int> subset;
      for (int w = 0; w < n; ++w)
        if (mask >> w & 1) subset.push_back(w);
      std::vector<FlipBoundRow> rows =
          flip_bound_check(chain, dec, subset, alphas);
      for (const FlipBoundRow& row : rows) {
        CAPTURE(mask);
        CAPTURE(row.alpha);
        CHECK(row.holds);
        CHECK(row.flip <= row.bound + 1e-12);
      }
    }
  }
}

TEST_CASE("enumeration respects the state cap") {
  Chain star = make_family({Family::star, 25, 0});  // 26 states
  CHECK_THROWS_AS(exact_bottleneck(star), Error);
  try {
    exact_bottleneck(star);
  } catch (const Error& e) {
    CHECK(e.code() == "StateSpaceTooLarge");
  }
  Chain small = make_family({Family::complete, 6, 0});
  CHECK_THROWS_AS(exact_bottleneck(small, 4), Error);
}
