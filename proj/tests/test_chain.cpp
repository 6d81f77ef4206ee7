#include <doctest.h>

#include <Eigen/Dense>
#include <set>
#include <vector>

#include "specnoise/chain.hpp"
#include "specnoise/errors.hpp"
#include "support.hpp"

using namespace specnoise;

TEST_CASE("graph walk on a path weights pi by degree") {
  Chain chain = build_graph_walk({{"a", "b"}, {"b", "c"}});
  REQUIRE(chain.size() == 3);
  CHECK(chain.index_of("a") == 0);
  CHECK(chain.index_of("b") == 1);
  CHECK(chain.index_of("c") == 2);
  CHECK(chain.index_of("d") == -1);

  CHECK(chain.pi(0) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(chain.pi(1) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(chain.pi(2) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(chain.generator(0, 1) == 1.0);
  CHECK(chain.generator(1, 0) == 0.5);
  CHECK(chain.generator(0, 2) == 0.0);
  CHECK(validate(chain).ok());
}

TEST_CASE("graph walk rejects malformed edge lists") {
  CHECK_THROWS_AS(build_graph_walk({}), Error);
  CHECK_THROWS_AS(build_graph_walk({{"a", "a"}}), Error);
  CHECK_THROWS_AS(build_graph_walk({{"a", "b"}, {"b", "a"}}), Error);
  // Two components.
  CHECK_THROWS_AS(build_graph_walk({{"a", "b"}, {"c", "d"}}), Error);
  try {
    build_graph_walk({{"a", "b"}, {"c", "d"}});
  } catch (const Error& e) {
    CHECK(e.code() == "DisconnectedGraph");
  }
}

TEST_CASE("every family instance passes validation") {
  std::vector<FamilySpec> specs = {
      {Family::complete, 2, 0},       {Family::complete, 6, 0},
      {Family::cycle, 1, 0},          {Family::cycle, 5, 0},
      {Family::hypercube_walk, 1, 0}, {Family::hypercube_walk, 4, 0},
      {Family::hypercube_rerandomize, 3, 0},
      {Family::star, 1, 0},           {Family::star, 6, 0},
      {Family::glued_cliques, 2, 0},  {Family::glued_cliques, 3, 0},
      {Family::star_join, 1, 0},      {Family::star_join, 2, 0},
      {Family::regular_glue, 2, 0},   {Family::regular_glue, 4, 0},
      {Family::slice_exclusion, 4, 2},
      {Family::slice_exclusion, 6, 3},
  };
  for (const FamilySpec& spec : specs) {
    CAPTURE(family_name(spec.family));
    CAPTURE(spec.n);
    Chain chain = make_family(spec);
    ValidationReport report = validate(chain);
    for (const CheckResult& check : report.checks) {
      CAPTURE(check.name);
      CAPTURE(check.detail);
      CHECK(check.pass);
    }
    REQUIRE(chain.family.has_value());
    CHECK(chain.family->family == spec.family);
  }
}

TEST_CASE("family parameter validation") {
  CHECK_THROWS_AS(make_family({Family::complete, 1, 0}), Error);
  CHECK_THROWS_AS(make_family({Family::glued_cliques, 1, 0}), Error);
  CHECK_THROWS_AS(make_family({Family::slice_exclusion, 4, 0}), Error);
  CHECK_THROWS_AS(make_family({Family::slice_exclusion, 4, 4}), Error);
  CHECK_THROWS_AS(make_family({Family::hypercube_walk, 14, 0}), Error);
  CHECK_THROWS_AS(family_from_name("triangle"), Error);
  try {
    family_from_name("triangle");
  } catch (const Error& e) {
    CHECK(e.code() == "UnknownFamily");
  }
  for (const char* name :
       {"complete", "cycle", "hypercube_walk", "hypercube_rerandomize",
        "star", "glued_cliques", "star_join", "regular_glue",
        "slice_exclusion"})
    CHECK(family_name(family_from_name(name)) == name);
}

TEST_CASE("complete graph has uniform pi and rate 1/(n-1)") {
  Chain k4 = make_family({Family::complete, 4, 0});
  for (int i = 0; i < 4; ++i) {
    CHECK(k4.pi(i) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(k4.generator(i, i) == -1.0);
    for (int j = 0; j < 4; ++j)
      if (j != i) CHECK(k4.generator(i, j) == doctest::Approx(1.0 / 3));
  }
  CHECK(k4.transitive);
}

TEST_CASE("cycle family builds the 2n-cycle") {
  Chain two = make_family({Family::cycle, 1, 0});
  REQUIRE(two.size() == 2);
  CHECK(two.generator(0, 1) == 1.0);
  CHECK(two.generator(1, 0) == 1.0);

  Chain ring = make_family({Family::cycle, 4, 0});
  REQUIRE(ring.size() == 8);
  for (int i = 0; i < 8; ++i) {
    CHECK(ring.generator(i, (i + 1) % 8) == 0.5);
    CHECK(ring.generator(i, (i + 7) % 8) == 0.5);
    CHECK(ring.generator(i, (i + 2) % 8) == 0.0);
  }
}

TEST_CASE("hypercube labels are bit strings with coordinate 1 first") {
  Chain cube = make_family({Family::hypercube_walk, 3, 0});
  REQUIRE(cube.size() == 8);
  CHECK(cube.states[0] == "000");
  CHECK(cube.states[1] == "100");  // value 1 = coordinate 1 set
  CHECK(cube.states[2] == "010");
  CHECK(cube.states[7] == "111");
  // Neighbors differ in one coordinate, rate 1/n for the walk.
  CHECK(cube.generator(0, 1) == doctest::Approx(1.0 / 3));
  CHECK(cube.generator(0, 7) == 0.0);

  Chain rer = make_family({Family::hypercube_rerandomize, 3, 0});
  CHECK(rer.generator(0, 1) == 0.5);
  CHECK(rer.generator(0, 0) == -1.5);
  CHECK(rer.pi(5) == doctest::Approx(0.125).epsilon(1e-15));
}

TEST_CASE("slice_exclusion matches a brute-force ordered-pair construction") {
  const int n = 4, k = 2;
  Chain slice = make_family({Family::slice_exclusion, n, k});
  REQUIRE(slice.size() == 6);
  for (int i = 0; i < 6; ++i)
    CHECK(slice.pi(i) == doctest::Approx(1.0 / 6).epsilon(1e-15));

  // Independent construction: for every ordered pair (i, j) in [n]^2 drawn
  // at rate 1/n^2 each (two ordered pairs per unordered swap), swapping
  // positions i and j maps w to w'.
  auto mask_of = [&](const std::string& label) {
    int m = 0;
    for (int b = 0; b < n; ++b)
      if (label[b] == '1') m |= 1 << b;
    return m;
  };
  Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(6, 6);
  for (int s = 0; s < 6; ++s) {
    int w = mask_of(slice.states[s]);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        int bi = w >> i & 1, bj = w >> j & 1;
        if (bi == bj) continue;
        int v = (w & ~((1 << i) | (1 << j))) | (bj << i) | (bi << j);
        for (int t = 0; t < 6; ++t)
          if (mask_of(slice.states[t]) == v)
            expected(s, t) += 1.0 / (n * n);
      }
    expected(s, s) = -expected.row(s).sum();
  }
  CHECK((slice.generator - expected).cwiseAbs().maxCoeff() <= 1e-15);
  // Each state has k(n-k) = 4 neighbors at rate 2/16 = 1/8.
  CHECK(slice.generator(0, 0) == doctest::Approx(-0.5));
}

TEST_CASE("declared automorphisms preserve the generator and pi") {
  std::vector<FamilySpec> specs = {
      {Family::complete, 5, 0},      {Family::cycle, 4, 0},
      {Family::hypercube_walk, 3, 0},
      {Family::hypercube_rerandomize, 3, 0},
      {Family::star, 4, 0},          {Family::glued_cliques, 3, 0},
      {Family::star_join, 2, 0},     {Family::regular_glue, 3, 0},
      {Family::slice_exclusion, 5, 2},
  };
  for (const FamilySpec& spec : specs) {
    CAPTURE(family_name(spec.family));
    Chain chain = make_family(spec);
    CHECK(!chain.automorphisms.empty());
    for (const auto& sigma : chain.automorphisms) {
      REQUIRE(static_cast<int>(sigma.size()) == chain.size());
      // A permutation.
      std::set<int> image(sigma.begin(), sigma.end());
      CHECK(static_cast<int>(image.size()) == chain.size());
      for (int i = 0; i < chain.size(); ++i) {
        CHECK(chain.pi(sigma[i]) == chain.pi(i));
        for (int j = 0; j < chain.size(); ++j)
          CHECK(chain.generator(sigma[i], sigma[j]) == chain.generator(i, j));
      }
    }
  }
}

TEST_CASE("stationary solver recovers the constructed pi") {
  for (std::uint64_t seed : {1, 2, 3, 4, 5}) {
    Chain chain = testsupport::random_reversible_chain(seed, 12);
    Eigen::VectorXd solved = stationary_from_generator(chain.generator);
    CHECK((solved - chain.pi).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(validate(chain).ok());
  }
}

TEST_CASE("stationary solver rejects reducible generators") {
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(4, 4);
  q(0, 1) = q(1, 0) = 1.0;
  q(2, 3) = q(3, 2) = 1.0;
  q(0, 0) = q(1, 1) = q(2, 2) = q(3, 3) = -1.0;
  CHECK_THROWS_AS(stationary_from_generator(q), Error);
}

TEST_CASE("validate reports specific failures without throwing") {
  Chain chain = make_family({Family::complete, 3, 0});

  Chain bad_rows = chain;
  bad_rows.generator(0, 0) = 0.0;
  ValidationReport r1 = validate(bad_rows);
  CHECK(!r1.ok());
  CHECK(!r1.check("row_sums_zero").pass);

  Chain bad_sign = chain;
  bad_sign.generator(0, 1) = -0.5;
  bad_sign.generator(0, 0) = 0.0;
  CHECK(!validate(bad_sign).check("offdiagonal_nonnegative").pass);

  Chain bad_balance = chain;
  bad_balance.pi << 0.6, 0.2, 0.2;
  CHECK(!validate(bad_balance).check("detailed_balance").pass);

  Chain bad_norm = chain;
  bad_norm.pi *= 1.5;
  CHECK(!validate(bad_norm).check("pi_normalized").pass);

  ValidationReport good = validate(chain);
  CHECK(good.ok());
  for (const char* name :
       {"shape", "row_sums_zero", "offdiagonal_nonnegative", "pi_positive",
        "pi_normalized", "detailed_balance", "irreducible"})
    CHECK(good.check(name).pass);
}
