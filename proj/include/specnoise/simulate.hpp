#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "specnoise/chain.hpp"
#include "specnoise/noise.hpp"
#include "specnoise/util.hpp"

namespace specnoise {

struct TrajectoryEstimate {
  std::string quantity;
  double t = 0.0;
  double estimate = 0.0;
  double std_error = 0.0;  // sample standard deviation / sqrt(trials)
  std::int64_t trials = 0;
  std::uint64_t seed = 0;
};

// One stationary start and exact jump-chain evolution to time t, using the
// stream (seed, 0). Deterministic per seed.
std::pair<int, int> sample_endpoint(const Chain& chain, double t,
                                    std::uint64_t seed);

// Monte Carlo estimate of Cov(f(X_0), f(X_t)) with the exact E_pi[f]
// subtracted as a control variate. Trial i draws from stream (seed, i);
// the reduction is deterministic pairwise summation, so results are
// bit-identical across run modes and thread counts.
TrajectoryEstimate estimate_cov(const Chain& chain, const Observable& f,
                                double t, std::int64_t trials,
                                std::uint64_t seed,
                                RunMode mode = RunMode::parallel);

// Monte Carlo estimate of P(X_0 = X_t).
TrajectoryEstimate estimate_return_prob(const Chain& chain, double t,
                                        std::int64_t trials,
                                        std::uint64_t seed,
                                        RunMode mode = RunMode::parallel);

}  // namespace specnoise
