#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "specnoise/chain.hpp"
#include "specnoise/noise.hpp"
#include "specnoise/spectral.hpp"

namespace specnoise {

enum class NormMode { pi_weighted, counting };

std::string norm_mode_name(NormMode mode);
NormMode norm_mode_from_name(const std::string& name);

// Indicator of {psi >= c} where psi is a pi-normalized combination of the
// eigenvectors spanning [lambda_1, k lambda_1].
struct ThresholdFunction {
  double band_k = 0.0;
  double c = 0.0;
  std::vector<int> subspace;     // eigen indices used
  Eigen::VectorXd coefficients;  // unit vector over `subspace`
  Eigen::VectorXd psi;
  Observable indicator;
};

ThresholdFunction make_threshold_function(const SpectralDecomposition& dec,
                                          double band_k,
                                          const Eigen::VectorXd& coefficients,
                                          double c);

struct ThresholdCandidate {
  double c = 0.0;
  double p_above = 0.0;        // P(psi >= c)
  double p_below = 0.0;        // P(psi < c)
  double interval_stat = 0.0;  // sup over grid eps of P(|psi - c| <= eps^g)
  bool admissible = false;     // p_above > delta and p_below > delta
  double flip_at_alpha_min = 0.0;
};

struct ThresholdSweepReport {
  double delta = 0.0;
  double g_exponent = 0.0;
  std::vector<double> alpha_grid;
  std::vector<ThresholdCandidate> candidates;
  int best_index = -1;
  ThresholdFunction best;
};

// Sweeps every distinct threshold of psi_1, reports the admissibility
// conditions per candidate, and returns the admissible threshold whose flip
// probability at the smallest grid alpha is minimal.
ThresholdSweepReport threshold_sweep(const SpectralDecomposition& dec,
                                     double band_k, double delta,
                                     double g_exponent,
                                     const std::vector<double>& alpha_grid);

struct LocalizationEntry {
  double delta = 0.0;
  int min_l = 0;
  std::vector<int> achieving_set;
};

struct LocalizationReport {
  NormMode mode = NormMode::pi_weighted;
  Eigen::VectorXd amplitude;       // psi_w^2, or M_w for a band
  Eigen::VectorXd per_state_mass;  // amplitude, pi-weighted when requested
  double total_mass = 0.0;
  std::vector<LocalizationEntry> entries;
};

// Smallest state sets carrying a (1-delta) fraction of the mass of psi^2.
LocalizationReport localization_report(const Eigen::VectorXd& psi,
                                       const Eigen::VectorXd& pi,
                                       NormMode mode,
                                       const std::vector<double>& deltas);

// Same, for the basis-independent band amplitude M_w.
LocalizationReport localization_report_band(const SpectralDecomposition& dec,
                                            int band_index, NormMode mode,
                                            const std::vector<double>& deltas);

// M_w = sum over the band of psi_i(w)^2. Satisfies
// sum_w pi(w) M_w = dim(band); constant and equal to dim(band) on
// transitive chains.
Eigen::VectorXd band_amplitude(const SpectralDecomposition& dec,
                               int band_index);

struct ConditionBProbe {
  double band_k = 0.0;
  double epsilon = 0.0;
  int dim = 0;
  std::string method;  // "exact", "grid", or "random_ascent"
  double best_probability = 0.0;
  Eigen::VectorXd best_coefficients;
  Eigen::VectorXd best_psi;
};

// Lower-bounds sup over unit psi in the [lambda_1, k lambda_1] subspace of
// P_pi(psi^2 >= epsilon): exact for dim 1, an angle grid for dim 2, seeded
// random restarts with coordinate ascent for dim >= 3.
ConditionBProbe condition_b_probe(const SpectralDecomposition& dec,
                                  double band_k, double epsilon, int budget,
                                  std::uint64_t seed);

struct DelocalizationCheck {
  double conditional_mean = 0.0;  // E[psi | A]
  double lhs = 0.0;               // E[psi | A]^2
  double rhs = 0.0;               // pi(A^c) / pi(A)^2
  bool holds = false;
};

// For pi-normalized centered psi and nontrivial A:
// E[psi | A]^2 <= pi(A^c)/pi(A)^2 (1e-10 slack).
DelocalizationCheck delocalization_bound_check(const Eigen::VectorXd& pi,
                                               const Eigen::VectorXd& psi,
                                               const std::vector<int>& subset);

struct AutomorphismCheck {
  double max_rate_violation = 0.0;
  double max_pi_violation = 0.0;
  double max_band_leakage = 0.0;  // pi-norm of components outside own band
  bool pi_preserved = false;
  bool bands_invariant = false;
};

// Verifies that a generator-preserving permutation fixes pi and maps each
// eigenvector into its own eigenvalue band. Throws NotAnAutomorphism when
// the permutation does not preserve the generator.
AutomorphismCheck automorphism_invariance_check(
    const Chain& chain, const SpectralDecomposition& dec,
    const std::vector<int>& permutation);

}  // namespace specnoise
