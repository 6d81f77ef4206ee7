#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace specnoise {

enum class Family {
  complete,
  cycle,
  hypercube_walk,
  hypercube_rerandomize,
  star,
  glued_cliques,
  star_join,
  regular_glue,
  slice_exclusion,
};

std::string family_name(Family f);
Family family_from_name(const std::string& name);

struct FamilySpec {
  Family family;
  int n = 0;
  int k = 0;  // slice_exclusion only
};

// Finite-state continuous-time Markov chain. `generator` is the full rate
// matrix Q (off-diagonal rates, rows sum to zero); `pi` is the stationary
// distribution satisfying detailed balance.
struct Chain {
  std::vector<std::string> states;
  Eigen::MatrixXd generator;
  Eigen::VectorXd pi;
  std::optional<FamilySpec> family;
  bool transitive = false;
  // Optional generator-preserving state permutations declared at build time.
  std::vector<std::vector<int>> automorphisms;

  int size() const { return static_cast<int>(states.size()); }
  // Returns -1 when the label is unknown.
  int index_of(const std::string& label) const;
};

struct CheckResult {
  std::string name;
  bool pass = false;
  double residual = 0.0;
  std::string detail;
};

struct ValidationReport {
  std::vector<CheckResult> checks;
  bool ok() const;
  const CheckResult& check(const std::string& name) const;
};

// Unit-rate random walk on a simple connected undirected graph:
// q_vw = 1/deg(v) per incident edge, pi(v) = deg(v)/(2|E|).
Chain build_graph_walk(
    const std::vector<std::pair<std::string, std::string>>& edges);

Chain make_family(const FamilySpec& spec);

// Solves pi Q = 0, sum(pi) = 1 for an irreducible generator.
Eigen::VectorXd stationary_from_generator(const Eigen::MatrixXd& generator);

// Checks row sums, off-diagonal signs, pi positivity/normalization,
// detailed balance, and irreducibility. Never throws on a bad chain; the
// report carries per-check residuals.
ValidationReport validate(const Chain& chain);

}  // namespace specnoise
