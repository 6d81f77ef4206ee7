#include "specnoise/noise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "specnoise/errors.hpp"
#include "specnoise/util.hpp"

namespace specnoise {

namespace {

constexpr double kSharpnessSlack = 1e-12;

void require_alpha(double alpha) {
  if (!(alpha > 0.0))
    fail("NonpositiveAlpha", "alpha = " + std::to_string(alpha));
}

double curve_covariance(const SpectralProfile& p, double scaled_time) {
  double sum = 0.0;
  for (int i = 1; i < p.coefficients.size(); ++i)
    sum += std::exp(-scaled_time * p.eigenvalues(i)) *
           p.coefficients(i) * p.coefficients(i);
  return sum;
}

double curve_flip(const SpectralProfile& p, double scaled_time) {
  double sum = 0.0;
  for (int i = 1; i < p.coefficients.size(); ++i)
    sum += -std::expm1(-scaled_time * p.eigenvalues(i)) *
           p.coefficients(i) * p.coefficients(i);
  return 2.0 * sum;
}

}  // namespace

Observable Observable::from_values(Eigen::VectorXd v) {
  Observable f;
  f.boolean = (v.array() == 0.0 || v.array() == 1.0).all();
  f.values = std::move(v);
  return f;
}

Observable Observable::indicator(const std::vector<int>& subset, int n) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
  for (int i : subset) {
    if (i < 0 || i >= n)
      fail("InvalidParams", "indicator index out of range");
    v(i) = 1.0;
  }
  return from_values(std::move(v));
}

SpectralProfile fourier_profile(const SpectralDecomposition& dec,
                                const Observable& f) {
  const int n = dec.size();
  if (f.values.size() != n)
    fail("DimensionMismatch", "observable has wrong length");

  SpectralProfile p;
  p.coefficients =
      dec.eigenvectors.transpose() * (dec.pi.array() * f.values.array())
                                         .matrix();
  p.eigenvalues = dec.eigenvalues;
  p.bands = dec.bands;
  p.spectral_gap = dec.spectral_gap;
  p.boolean = f.boolean;
  p.mean = p.coefficients(0);

  Eigen::VectorXd squared = p.coefficients.array().square();
  p.second_moment = squared.sum();
  p.variance = p.second_moment - squared(0);
  for (const Band& band : p.bands)
    p.band_masses.push_back(
        squared.segment(band.begin, band.dim()).sum());
  if (p.second_moment > 0.0) {
    p.spectral_measure = squared / p.second_moment;
    p.mean_lambda = p.spectral_measure.dot(p.eigenvalues);
  } else {
    p.spectral_measure = Eigen::VectorXd::Zero(n);
    p.mean_lambda = std::numeric_limits<double>::quiet_NaN();
  }
  return p;
}

std::vector<std::pair<double, double>> covariance_curve(
    const SpectralProfile& profile, const std::vector<double>& alphas) {
  std::vector<std::pair<double, double>> curve;
  curve.reserve(alphas.size());
  for (double alpha : alphas) {
    require_alpha(alpha);
    curve.emplace_back(alpha,
                       curve_covariance(profile, alpha / profile.spectral_gap));
  }
  return curve;
}

std::vector<std::pair<double, double>> flip_curve(
    const SpectralProfile& profile, const std::vector<double>& alphas) {
  if (!profile.boolean)
    fail("NotBoolean", "flip probability needs a Boolean observable");
  std::vector<std::pair<double, double>> curve;
  curve.reserve(alphas.size());
  for (double alpha : alphas) {
    require_alpha(alpha);
    curve.emplace_back(alpha, curve_flip(profile,
                                         alpha / profile.spectral_gap));
  }
  return curve;
}

double stability_tail_mass(const SpectralProfile& profile, double k) {
  if (!(k >= 1.0)) fail("InvalidParams", "tail mass needs k >= 1");
  double edge = k * profile.spectral_gap;
  double sum = 0.0;
  for (int i = 1; i < profile.coefficients.size(); ++i)
    if (profile.eigenvalues(i) >= edge)
      sum += profile.coefficients(i) * profile.coefficients(i);
  return sum;
}

double sensitivity_band_mass(const SpectralProfile& profile, double k) {
  if (!(k >= 1.0)) fail("InvalidParams", "band mass needs k >= 1");
  double edge = k * profile.spectral_gap;
  double sum = 0.0;
  for (int i = 1; i < profile.coefficients.size(); ++i)
    if (profile.eigenvalues(i) < edge)
      sum += profile.coefficients(i) * profile.coefficients(i);
  return sum;
}

double sensitive_existence_gap(const SpectralDecomposition& dec) {
  const int n = dec.size();
  double return_prob = 0.0;
  for (int i = 0; i < n; ++i) {
    double amplitude =
        (dec.pi.array() * dec.eigenvectors.col(i).array()).square().sum();
    return_prob += std::exp(-dec.eigenvalues(i) * dec.relaxation_time) *
                   amplitude;
  }
  return return_prob - dec.pi.squaredNorm();
}

SubsetCovExpectation expected_random_subset_cov(
    const SpectralDecomposition& dec, int m) {
  const int n = dec.size();
  if (m <= 0 || m >= n)
    fail("BadSubsetSize", "m must satisfy 0 < m < " + std::to_string(n));
  SubsetCovExpectation result;
  result.uniform_pi =
      (dec.pi.array() - 1.0 / n).abs().maxCoeff() <= 1e-12;
  double nn = static_cast<double>(n);
  result.value = nn / (nn - 1.0) * (m * (nn - m) / (nn * nn)) *
                 sensitive_existence_gap(dec);
  return result;
}

Observable random_subset_indicator(const Chain& chain, int m,
                                   std::uint64_t seed) {
  const int n = chain.size();
  if (m <= 0 || m >= n)
    fail("BadSubsetSize", "m must satisfy 0 < m < " + std::to_string(n));
  std::vector<int> population(n);
  std::iota(population.begin(), population.end(), 0);
  std::vector<int> subset;
  subset.reserve(m);
  auto rng = rng_stream(seed);
  std::sample(population.begin(), population.end(),
              std::back_inserter(subset), m, rng);
  return Observable::indicator(subset, n);
}

SharpnessReport sharpness_bounds(const SpectralProfile& profile,
                                 double horizon, double alpha) {
  if (!(horizon > 0.0))
    fail("InvalidParams", "horizon must be positive");
  require_alpha(alpha);
  if (!profile.boolean)
    fail("NotBoolean", "sharpness bounds need a Boolean observable");

  SharpnessReport report;
  report.alpha = alpha;
  report.horizon = horizon;
  double t = alpha * horizon;
  double envelope = std::exp(-profile.spectral_gap * t);
  report.cov_upper = envelope;
  report.flip_lower = 2.0 * (1.0 - envelope) * profile.variance;
  report.cov_exact = curve_covariance(profile, t);
  report.flip_exact = curve_flip(profile, t);
  report.cov_ok = report.cov_exact <= report.cov_upper + kSharpnessSlack;
  report.flip_ok = report.flip_exact >= report.flip_lower - kSharpnessSlack;
  return report;
}

}  // namespace specnoise
