#pragma once

// Shared helpers for the test suites: an independent matrix-exponential
// oracle, random reversible chain generation, and a brute-force conductance
// oracle. These deliberately avoid the library's spectral code paths so the
// comparisons are meaningful.

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "specnoise/chain.hpp"
#include "specnoise/util.hpp"

namespace testsupport {

// exp(A) by scaling and squaring with a Taylor series. Accurate to ~1e-13
// for the modest norms in these tests; no eigendecomposition involved.
inline Eigen::MatrixXd expm_series(const Eigen::MatrixXd& a) {
  const int n = static_cast<int>(a.rows());
  double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  while (norm > 0.5) {
    norm /= 2.0;
    ++squarings;
  }
  Eigen::MatrixXd scaled = a / std::pow(2.0, squarings);
  Eigen::MatrixXd result = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(n, n);
  for (int k = 1; k <= 24; ++k) {
    term = (term * scaled / static_cast<double>(k)).eval();
    result += term;
  }
  for (int s = 0; s < squarings; ++s) result = (result * result).eval();
  return result;
}

// Random reversible chain: symmetric positive weights w_ij on a connected
// random graph plus per-state rate multipliers gamma_i. With s_i = sum_j
// w_ij, the generator q_ij = gamma_i w_ij / s_i is reversible with
// pi_i proportional to s_i / gamma_i.
inline specnoise::Chain random_reversible_chain(std::uint64_t seed, int n) {
  std::mt19937_64 gen = specnoise::rng_stream(seed, 1000);
  std::uniform_real_distribution<double> weight(0.2, 1.8);
  std::uniform_real_distribution<double> speed(0.5, 2.0);
  std::bernoulli_distribution edge(0.4);

  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    // Spanning-tree edge keeps the chain irreducible.
    std::uniform_int_distribution<int> parent(0, i - 1);
    int p = parent(gen);
    double v = weight(gen);
    w(i, p) = w(p, i) = v;
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (w(i, j) == 0.0 && edge(gen)) w(i, j) = w(j, i) = weight(gen);

  specnoise::Chain chain;
  chain.states.reserve(n);
  for (int i = 0; i < n; ++i) chain.states.push_back("s" + std::to_string(i));
  chain.generator = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd s = w.rowwise().sum();
  Eigen::VectorXd gamma(n);
  for (int i = 0; i < n; ++i) gamma(i) = speed(gen);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j)
      if (j != i) chain.generator(i, j) = gamma(i) * w(i, j) / s(i);
    chain.generator(i, i) = -chain.generator.row(i).sum();
  }
  Eigen::VectorXd pi = (s.array() / gamma.array()).matrix();
  chain.pi = pi / pi.sum();
  return chain;
}

// Conductance by definition, no shared code with the library kernel.
inline double naive_phi(const specnoise::Chain& chain,
                        const std::vector<int>& subset) {
  std::vector<bool> in(chain.size(), false);
  for (int i : subset) in[i] = true;
  double flow = 0.0;
  double mass = 0.0;
  for (int i = 0; i < chain.size(); ++i) {
    if (!in[i]) continue;
    mass += chain.pi(i);
    for (int j = 0; j < chain.size(); ++j)
      if (!in[j] && j != i) flow += chain.pi(i) * chain.generator(i, j);
  }
  return flow / mass;
}

// Random nonempty proper subset.
inline std::vector<int> random_subset(std::mt19937_64& gen, int n) {
  std::vector<int> subset;
  while (subset.empty() || static_cast<int>(subset.size()) == n) {
    subset.clear();
    std::bernoulli_distribution pick(0.5);
    for (int i = 0; i < n; ++i)
      if (pick(gen)) subset.push_back(i);
  }
  return subset;
}

// Random Boolean observable that is neither constant 0 nor constant 1.
inline Eigen::VectorXd random_boolean_values(std::mt19937_64& gen, int n) {
  Eigen::VectorXd values(n);
  while (true) {
    std::bernoulli_distribution pick(0.5);
    for (int i = 0; i < n; ++i) values(i) = pick(gen) ? 1.0 : 0.0;
    double sum = values.sum();
    if (sum > 0.0 && sum < n) return values;
  }
}

}  // namespace testsupport
