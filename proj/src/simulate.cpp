#include "specnoise/simulate.hpp"

#include <cmath>
#include <vector>

#include "specnoise/errors.hpp"

namespace specnoise {

namespace {

// Jump-chain sampler with precomputed cumulative rows. All draws go through
// inverse CDFs so trajectories are a pure function of the generator stream.
class JumpSampler {
 public:
  explicit JumpSampler(const Chain& chain)
      : n_(chain.size()), hold_rate_(n_), pi_cdf_(n_), jump_cdf_(n_) {
    double acc = 0.0;
    for (int i = 0; i < n_; ++i) {
      acc += chain.pi(i);
      pi_cdf_[i] = acc;
    }
    pi_cdf_[n_ - 1] = 1.0;
    for (int i = 0; i < n_; ++i) {
      hold_rate_[i] = -chain.generator(i, i);
      if (!(hold_rate_[i] > 0.0))
        fail("InvalidParams", "state " + chain.states[i] + " is absorbing");
      double c = 0.0;
      for (int j = 0; j < n_; ++j) {
        if (j == i) continue;
        double rate = chain.generator(i, j);
        if (rate > 0.0) {
          c += rate / hold_rate_[i];
          jump_cdf_[i].emplace_back(c, j);
        }
      }
      if (jump_cdf_[i].empty())
        fail("InvalidParams",
             "state " + chain.states[i] + " has no outgoing rates");
      jump_cdf_[i].back().first = 1.0;
    }
  }

  int stationary_draw(std::mt19937_64& g) const {
    double u = uniform01(g);
    for (int i = 0; i < n_; ++i)
      if (u < pi_cdf_[i]) return i;
    return n_ - 1;
  }

  int evolve(int start, double t, std::mt19937_64& g) const {
    int state = start;
    double remaining = t;
    for (;;) {
      double dwell = exponential_draw(g, hold_rate_[state]);
      if (dwell > remaining) return state;
      remaining -= dwell;
      double u = uniform01(g);
      for (const auto& [cum, target] : jump_cdf_[state])
        if (u < cum) {
          state = target;
          break;
        }
    }
  }

 private:
  int n_;
  std::vector<double> hold_rate_;
  std::vector<double> pi_cdf_;
  std::vector<std::vector<std::pair<double, int>>> jump_cdf_;
};

void check_args(double t, std::int64_t trials) {
  if (t < 0.0) fail("NegativeTime", "t = " + std::to_string(t));
  if (trials < 1) fail("InvalidParams", "trials must be at least 1");
}

template <typename PerTrial>
TrajectoryEstimate run_trials(const Chain& chain, std::string quantity,
                              double t, std::int64_t trials,
                              std::uint64_t seed, RunMode mode,
                              double offset, PerTrial per_trial) {
  const JumpSampler sampler(chain);
  std::vector<double> values(static_cast<std::size_t>(trials));

#pragma omp parallel for schedule(static) if (mode == RunMode::parallel)
  for (std::int64_t i = 0; i < trials; ++i) {
    auto rng = rng_stream(seed, static_cast<std::uint64_t>(i));
    int start = sampler.stationary_draw(rng);
    int end = sampler.evolve(start, t, rng);
    values[static_cast<std::size_t>(i)] = per_trial(start, end);
  }

  double mean = pairwise_sum(values.data(), values.size()) / trials;
  TrajectoryEstimate estimate;
  estimate.quantity = std::move(quantity);
  estimate.t = t;
  estimate.trials = trials;
  estimate.seed = seed;
  estimate.estimate = mean - offset;
  if (trials > 1) {
    for (auto& v : values) {
      double d = v - mean;
      v = d * d;
    }
    double var = pairwise_sum(values.data(), values.size()) / (trials - 1);
    estimate.std_error = std::sqrt(var / trials);
  }
  return estimate;
}

}  // namespace

std::pair<int, int> sample_endpoint(const Chain& chain, double t,
                                    std::uint64_t seed) {
  check_args(t, 1);
  JumpSampler sampler(chain);
  auto rng = rng_stream(seed, 0);
  int start = sampler.stationary_draw(rng);
  return {start, sampler.evolve(start, t, rng)};
}

TrajectoryEstimate estimate_cov(const Chain& chain, const Observable& f,
                                double t, std::int64_t trials,
                                std::uint64_t seed, RunMode mode) {
  check_args(t, trials);
  if (f.values.size() != chain.size())
    fail("DimensionMismatch", "observable has wrong length");
  double mean_f = (chain.pi.array() * f.values.array()).sum();
  const Eigen::VectorXd& v = f.values;
  return run_trials(
      chain, "covariance", t, trials, seed, mode, mean_f * mean_f,
      [&v](int start, int end) { return v(start) * v(end); });
}

TrajectoryEstimate estimate_return_prob(const Chain& chain, double t,
                                        std::int64_t trials,
                                        std::uint64_t seed, RunMode mode) {
  check_args(t, trials);
  return run_trials(chain, "return_probability", t, trials, seed, mode, 0.0,
                    [](int start, int end) { return start == end ? 1.0 : 0.0; });
}

}  // namespace specnoise
