#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

#include "specnoise/chain.hpp"
#include "specnoise/spectral.hpp"

namespace specnoise {

struct Observable {
  Eigen::VectorXd values;
  bool boolean = false;  // true iff every value is exactly 0 or 1

  static Observable from_values(Eigen::VectorXd v);
  static Observable indicator(const std::vector<int>& subset, int n);
};

// Fourier data of an observable in the eigenbasis: coefficients
// fhat(i) = <f, psi_i>_pi plus the derived masses. Carries a copy of the
// eigenvalues and bands so curve evaluation needs no second argument.
struct SpectralProfile {
  Eigen::VectorXd coefficients;
  Eigen::VectorXd eigenvalues;
  std::vector<Band> bands;
  double spectral_gap = 0.0;
  double mean = 0.0;           // fhat(0)
  double variance = 0.0;       // sum_{i>=1} fhat(i)^2
  double second_moment = 0.0;  // sum_i fhat(i)^2
  std::vector<double> band_masses;
  Eigen::VectorXd spectral_measure;  // fhat(i)^2 / second_moment
  double mean_lambda = 0.0;          // E_f[lambda]; NaN when f is zero
  bool boolean = false;
};

SpectralProfile fourier_profile(const SpectralDecomposition& dec,
                                const Observable& f);

// Cov(f(X_0), f(X_{alpha t_rel})) = sum_{i>=1} exp(-alpha lambda_i /
// lambda_1) fhat(i)^2, evaluated on an alpha grid.
std::vector<std::pair<double, double>> covariance_curve(
    const SpectralProfile& profile, const std::vector<double>& alphas);

// P(f(X_0) != f(X_{alpha t_rel})) = 2 sum_{i>=1} (1 - exp(-alpha lambda_i /
// lambda_1)) fhat(i)^2 for Boolean f.
std::vector<std::pair<double, double>> flip_curve(
    const SpectralProfile& profile, const std::vector<double>& alphas);

// Variance mass at or above k * lambda_1.
double stability_tail_mass(const SpectralProfile& profile, double k);

// Variance mass in [lambda_1, k * lambda_1).
double sensitivity_band_mass(const SpectralProfile& profile, double k);

// P(X_0 = X_{t_rel}) - sum_w pi(w)^2.
double sensitive_existence_gap(const SpectralDecomposition& dec);

struct SubsetCovExpectation {
  double value = 0.0;
  // The closed form is exact only for uniform pi; false flags the caveat.
  bool uniform_pi = false;
};

// E over uniform random m-subsets A of Cov(1_A(X_0), 1_A(X_{t_rel})):
// (|S|/(|S|-1)) * (m(|S|-m)/|S|^2) * sensitive_existence_gap.
SubsetCovExpectation expected_random_subset_cov(
    const SpectralDecomposition& dec, int m);

Observable random_subset_indicator(const Chain& chain, int m,
                                   std::uint64_t seed);

struct SharpnessReport {
  double alpha = 0.0;
  double horizon = 0.0;  // T
  double cov_upper = 0.0;
  double cov_exact = 0.0;
  double flip_lower = 0.0;
  double flip_exact = 0.0;
  bool cov_ok = false;
  bool flip_ok = false;
};

// Checks Cov(alpha T) <= exp(-alpha lambda_1 T) and
// flip(alpha T) >= 2 (1 - exp(-alpha lambda_1 T)) Var(f) with 1e-12 slack.
SharpnessReport sharpness_bounds(const SpectralProfile& profile,
                                 double horizon, double alpha);

}  // namespace specnoise
