#include "specnoise/stability.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "specnoise/errors.hpp"
#include "specnoise/noise.hpp"
#include "specnoise/util.hpp"

namespace specnoise {

namespace {

constexpr double kNormalizationTol = 1e-9;
constexpr double kDelocalizationSlack = 1e-10;
constexpr double kBandLeakageTol = 1e-8;
constexpr double kRatePreserveTol = 1e-10;
constexpr double kPiPreserveTol = 1e-10;

Eigen::MatrixXd band_columns(const SpectralDecomposition& dec,
                             const std::vector<int>& indices) {
  Eigen::MatrixXd cols(dec.size(), indices.size());
  for (int j = 0; j < static_cast<int>(indices.size()); ++j)
    cols.col(j) = dec.eigenvectors.col(indices[j]);
  return cols;
}

double superlevel_probability(const Eigen::VectorXd& pi,
                              const Eigen::VectorXd& psi_sq, double eps) {
  double p = 0.0;
  for (int w = 0; w < pi.size(); ++w)
    if (psi_sq(w) >= eps) p += pi(w);
  return p;
}

void check_permutation(const std::vector<int>& perm, int n) {
  if (static_cast<int>(perm.size()) != n)
    fail("InvalidParams", "permutation has wrong length");
  std::vector<char> seen(n, 0);
  for (int v : perm) {
    if (v < 0 || v >= n || seen[v])
      fail("InvalidParams", "not a permutation of the state indices");
    seen[v] = 1;
  }
}

}  // namespace

std::string norm_mode_name(NormMode mode) {
  return mode == NormMode::pi_weighted ? "pi" : "counting";
}

NormMode norm_mode_from_name(const std::string& name) {
  if (name == "pi") return NormMode::pi_weighted;
  if (name == "counting") return NormMode::counting;
  fail("InvalidParams", "unknown norm mode: " + name);
}

ThresholdFunction make_threshold_function(const SpectralDecomposition& dec,
                                          double band_k,
                                          const Eigen::VectorXd& coefficients,
                                          double c) {
  std::vector<int> subspace = band_subspace(dec, band_k);
  if (coefficients.size() != static_cast<int>(subspace.size()))
    fail("DimensionMismatch",
         "expected " + std::to_string(subspace.size()) + " coefficients");
  double norm = coefficients.norm();
  if (norm == 0.0) fail("ZeroCoefficients", "coefficients vanish");

  ThresholdFunction tf;
  tf.band_k = band_k;
  tf.c = c;
  tf.subspace = subspace;
  tf.coefficients = coefficients / norm;
  // The basis is pi-orthonormal, so unit coefficients give <psi,psi>_pi = 1.
  tf.psi = band_columns(dec, subspace) * tf.coefficients;
  Eigen::VectorXd values(dec.size());
  for (int w = 0; w < dec.size(); ++w) values(w) = tf.psi(w) >= c ? 1.0 : 0.0;
  tf.indicator = Observable::from_values(std::move(values));
  return tf;
}

ThresholdSweepReport threshold_sweep(const SpectralDecomposition& dec,
                                     double band_k, double delta,
                                     double g_exponent,
                                     const std::vector<double>& alpha_grid) {
  if (!(delta > 0.0 && delta < 0.5))
    fail("InvalidParams", "delta must lie in (0, 1/2)");
  if (!(g_exponent > 0.0 && g_exponent < 0.5))
    fail("InvalidParams", "g exponent must lie in (0, 1/2)");
  if (alpha_grid.empty()) fail("InvalidParams", "alpha grid is empty");

  ThresholdSweepReport report;
  report.delta = delta;
  report.g_exponent = g_exponent;
  report.alpha_grid = alpha_grid;
  double alpha_min = *std::min_element(alpha_grid.begin(), alpha_grid.end());

  const Eigen::VectorXd psi = dec.eigenvectors.col(1);
  std::vector<double> thresholds(psi.data(), psi.data() + psi.size());
  std::sort(thresholds.begin(), thresholds.end());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                   thresholds.end());
  thresholds.push_back(thresholds.back() + 1.0);  // empty superlevel set

  double best_flip = 0.0;
  for (double c : thresholds) {
    ThresholdCandidate cand;
    cand.c = c;
    for (int w = 0; w < psi.size(); ++w)
      (psi(w) >= c ? cand.p_above : cand.p_below) += dec.pi(w);
    cand.admissible = cand.p_above > delta && cand.p_below > delta;
    for (double eps : alpha_grid) {
      double g = std::pow(eps, g_exponent);
      double mass = 0.0;
      for (int w = 0; w < psi.size(); ++w)
        if (std::abs(psi(w) - c) <= g) mass += dec.pi(w);
      cand.interval_stat = std::max(cand.interval_stat, mass);
    }
    Eigen::VectorXd values(psi.size());
    for (int w = 0; w < psi.size(); ++w)
      values(w) = psi(w) >= c ? 1.0 : 0.0;
    SpectralProfile profile =
        fourier_profile(dec, Observable::from_values(std::move(values)));
    cand.flip_at_alpha_min = flip_curve(profile, {alpha_min})[0].second;

    if (cand.admissible &&
        (report.best_index < 0 || cand.flip_at_alpha_min < best_flip)) {
      report.best_index = static_cast<int>(report.candidates.size());
      best_flip = cand.flip_at_alpha_min;
    }
    report.candidates.push_back(cand);
  }
  if (report.best_index < 0)
    fail("NoAdmissibleThreshold",
         "no threshold satisfies both mass conditions at delta = " +
             std::to_string(delta));

  Eigen::VectorXd e1 = Eigen::VectorXd::Zero(
      static_cast<int>(band_subspace(dec, band_k).size()));
  e1(0) = 1.0;
  report.best = make_threshold_function(
      dec, band_k, e1, report.candidates[report.best_index].c);
  return report;
}

namespace {

LocalizationReport localize(const Eigen::VectorXd& amplitude,
                            const Eigen::VectorXd& pi, NormMode mode,
                            const std::vector<double>& deltas) {
  LocalizationReport report;
  report.mode = mode;
  report.amplitude = amplitude;
  report.per_state_mass = mode == NormMode::pi_weighted
                              ? (pi.array() * amplitude.array()).matrix()
                              : amplitude;
  report.total_mass = report.per_state_mass.sum();

  const int n = static_cast<int>(pi.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return report.per_state_mass(a) > report.per_state_mass(b);
  });

  for (double delta : deltas) {
    if (!(delta > 0.0 && delta < 1.0))
      fail("InvalidParams", "delta must lie in (0, 1)");
    LocalizationEntry entry;
    entry.delta = delta;
    double target = (1.0 - delta) * report.total_mass;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      acc += report.per_state_mass(order[i]);
      entry.achieving_set.push_back(order[i]);
      if (acc >= target) break;
    }
    entry.min_l = static_cast<int>(entry.achieving_set.size());
    std::sort(entry.achieving_set.begin(), entry.achieving_set.end());
    report.entries.push_back(std::move(entry));
  }
  return report;
}

}  // namespace

LocalizationReport localization_report(const Eigen::VectorXd& psi,
                                       const Eigen::VectorXd& pi,
                                       NormMode mode,
                                       const std::vector<double>& deltas) {
  if (psi.size() != pi.size())
    fail("DimensionMismatch", "psi and pi lengths disagree");
  if (psi.isZero(0.0)) fail("ZeroVector", "psi vanishes identically");
  return localize(psi.array().square(), pi, mode, deltas);
}

LocalizationReport localization_report_band(const SpectralDecomposition& dec,
                                            int band_index, NormMode mode,
                                            const std::vector<double>& deltas) {
  return localize(band_amplitude(dec, band_index), dec.pi, mode, deltas);
}

Eigen::VectorXd band_amplitude(const SpectralDecomposition& dec,
                               int band_index) {
  if (band_index < 0 || band_index >= static_cast<int>(dec.bands.size()))
    fail("EmptyBand", "band index out of range");
  const Band& band = dec.bands[band_index];
  Eigen::VectorXd m = Eigen::VectorXd::Zero(dec.size());
  for (int i = band.begin; i < band.end; ++i)
    m += dec.eigenvectors.col(i).array().square().matrix();
  return m;
}

ConditionBProbe condition_b_probe(const SpectralDecomposition& dec,
                                  double band_k, double epsilon, int budget,
                                  std::uint64_t seed) {
  if (!(epsilon > 0.0)) fail("InvalidParams", "epsilon must be positive");
  if (budget < 1) fail("InvalidParams", "budget must be at least 1");

  std::vector<int> subspace = band_subspace(dec, band_k);
  Eigen::MatrixXd basis = band_columns(dec, subspace);
  const int d = static_cast<int>(subspace.size());

  ConditionBProbe probe;
  probe.band_k = band_k;
  probe.epsilon = epsilon;
  probe.dim = d;
  probe.best_probability = -1.0;

  auto consider = [&](const Eigen::VectorXd& coeffs) {
    Eigen::VectorXd unit = coeffs / coeffs.norm();
    Eigen::VectorXd psi = basis * unit;
    double p = superlevel_probability(dec.pi, psi.array().square(), epsilon);
    if (p > probe.best_probability) {
      probe.best_probability = p;
      probe.best_coefficients = unit;
      probe.best_psi = psi;
    }
  };

  if (d == 1) {
    probe.method = "exact";
    consider(Eigen::VectorXd::Ones(1));
    return probe;
  }
  if (d == 2) {
    // psi and -psi give the same probability, so [0, pi) covers everything.
    probe.method = "grid";
    for (int i = 0; i < budget; ++i) {
      double theta = M_PI * i / budget;
      Eigen::Vector2d a(std::cos(theta), std::sin(theta));
      consider(a);
    }
    return probe;
  }

  probe.method = "random_ascent";
  const Eigen::VectorXd steps =
      (Eigen::VectorXd(9) << -2.0, -1.0, -0.5, -0.25, 0.25, 0.5, 1.0, 2.0,
       4.0)
          .finished();
  for (int restart = 0; restart < budget; ++restart) {
    auto rng = rng_stream(seed, static_cast<std::uint64_t>(restart));
    std::normal_distribution<double> gauss;
    Eigen::VectorXd a(d);
    for (int i = 0; i < d; ++i) a(i) = gauss(rng);
    if (a.norm() == 0.0) a(0) = 1.0;
    a.normalize();
    consider(a);
    for (int pass = 0; pass < 2; ++pass) {
      for (int coord = 0; coord < d; ++coord) {
        Eigen::VectorXd local_best = probe.best_coefficients;
        for (int s = 0; s < steps.size(); ++s) {
          Eigen::VectorXd trial = local_best;
          trial(coord) += steps(s);
          if (trial.norm() > 0.0) consider(trial);
        }
      }
    }
  }
  return probe;
}

DelocalizationCheck delocalization_bound_check(
    const Eigen::VectorXd& pi, const Eigen::VectorXd& psi,
    const std::vector<int>& subset) {
  if (pi.size() != psi.size())
    fail("DimensionMismatch", "psi and pi lengths disagree");
  double norm_sq = (pi.array() * psi.array().square()).sum();
  double mean = (pi.array() * psi.array()).sum();
  if (std::abs(norm_sq - 1.0) > kNormalizationTol ||
      std::abs(mean) > kNormalizationTol)
    fail("BadNormalization",
         "psi must be pi-centered with unit pi-norm");

  double pa = 0.0, conditional = 0.0;
  std::vector<char> member(pi.size(), 0);
  for (int w : subset) {
    if (w < 0 || w >= pi.size())
      fail("InvalidParams", "subset index out of range");
    if (member[w]) fail("InvalidParams", "duplicate subset index");
    member[w] = 1;
    pa += pi(w);
    conditional += pi(w) * psi(w);
  }
  if (pa <= 0.0 || pa >= 1.0)
    fail("TrivialSet", "subset must be nonempty and proper");

  DelocalizationCheck check;
  check.conditional_mean = conditional / pa;
  check.lhs = check.conditional_mean * check.conditional_mean;
  check.rhs = (1.0 - pa) / (pa * pa);
  check.holds = check.lhs <= check.rhs + kDelocalizationSlack;
  return check;
}

AutomorphismCheck automorphism_invariance_check(
    const Chain& chain, const SpectralDecomposition& dec,
    const std::vector<int>& permutation) {
  const int n = chain.size();
  check_permutation(permutation, n);

  AutomorphismCheck check;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double a = chain.generator(i, j);
      double b = chain.generator(permutation[i], permutation[j]);
      double scale = std::max({std::abs(a), std::abs(b), 1.0});
      check.max_rate_violation =
          std::max(check.max_rate_violation, std::abs(a - b) / scale);
    }
  if (check.max_rate_violation > kRatePreserveTol)
    fail("NotAnAutomorphism",
         "permutation changes rates by relative " +
             std::to_string(check.max_rate_violation));

  for (int w = 0; w < n; ++w)
    check.max_pi_violation =
        std::max(check.max_pi_violation,
                 std::abs(chain.pi(permutation[w]) - chain.pi(w)));
  check.pi_preserved = check.max_pi_violation <= kPiPreserveTol;

  // Pull each eigenvector back through the permutation and measure its
  // pi-norm mass outside its own eigenvalue band.
  Eigen::MatrixXd permuted(n, n);
  for (int w = 0; w < n; ++w)
    permuted.row(w) = dec.eigenvectors.row(permutation[w]);
  Eigen::MatrixXd components =
      dec.eigenvectors.transpose() * dec.pi.asDiagonal() * permuted;
  for (int i = 0; i < n; ++i) {
    int own = dec.band_of(i);
    double outside = 0.0;
    for (int j = 0; j < n; ++j)
      if (dec.band_of(j) != own) outside += components(j, i) * components(j, i);
    check.max_band_leakage =
        std::max(check.max_band_leakage, std::sqrt(outside));
  }
  check.bands_invariant = check.max_band_leakage <= kBandLeakageTol;
  return check;
}

}  // namespace specnoise
