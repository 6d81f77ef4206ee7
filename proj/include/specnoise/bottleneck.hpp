#pragma once

#include <optional>
#include <string>
#include <vector>

#include "specnoise/chain.hpp"
#include "specnoise/spectral.hpp"
#include "specnoise/util.hpp"

namespace specnoise {

enum class SearchMethod { enumeration, sweep, restricted };

std::string search_method_name(SearchMethod m);

struct CutReport {
  std::vector<int> subset;  // sorted state indices
  double pi_mass = 0.0;
  double boundary_flow = 0.0;  // sum_{i in A, j notin A} pi_i q_ij
  double phi = 0.0;
  bool exact_minimum = false;
  SearchMethod method = SearchMethod::enumeration;
  // Filled by the restricted search: the unrestricted optimum and the gap
  // between the restricted minimum and it.
  std::optional<double> phi_star;
  std::optional<double> gap_to_star;
};

// Phi(A) = boundary flow / pi(A) for a nonempty proper subset.
double phi(const Chain& chain, const std::vector<int>& subset);
CutReport cut_report(const Chain& chain, const std::vector<int>& subset);

// Exact minimizer of Phi over subsets with pi(A) <= 1/2 (slack 1e-12) by
// full enumeration; requires |S| <= cap. Ties break to the smallest phi,
// then fewest states, then lexicographically smallest index set. The
// parallel path and the serial reference produce bit-identical reports.
CutReport exact_bottleneck(const Chain& chain, int cap = 24,
                           RunMode mode = RunMode::parallel);
CutReport exact_bottleneck_serial(const Chain& chain, int cap = 24);

// Best prefix cut in the psi_1 order (both orientations), restricted to
// pi(A) <= 1/2. An upper bound for Phi*.
CutReport sweep_cut(const Chain& chain, const SpectralDecomposition& dec);

struct CheegerReport {
  double phi_star = 0.0;
  double lambda_1 = 0.0;
  bool lower_ok = false;  // phi_star^2 <= 2 lambda_1 (+1e-9)
  bool upper_ok = false;  // 2 lambda_1 <= 4 phi_star (+1e-9)
};

CheegerReport cheeger_check(const Chain& chain,
                            const SpectralDecomposition& dec);

struct SpectralIdentityReport {
  double phi_value = 0.0;
  double mean_lambda = 0.0;  // E_{1_A}[lambda], normalized over all i
  bool match = false;
};

// Phi(A) equals the spectral-measure mean of 1_A.
SpectralIdentityReport spectral_identity_check(
    const Chain& chain, const SpectralDecomposition& dec,
    const std::vector<int>& subset);

// Exact minimizer restricted to pi(A) in (1/4, 1/2]; reports the gap to the
// unrestricted Phi*. Equals Phi* on transitive chains.
CutReport nondegenerate_minimizer(const Chain& chain, int cap = 24,
                                  RunMode mode = RunMode::parallel);

struct FlipBoundRow {
  double alpha = 0.0;
  double flip = 0.0;
  double bound = 0.0;  // 2 alpha t_rel pi(A) Phi(A)
  bool holds = false;
};

// flip(alpha) <= 2 alpha t_rel pi(A) Phi(A) with 1e-12 slack, per alpha.
std::vector<FlipBoundRow> flip_bound_check(const Chain& chain,
                                           const SpectralDecomposition& dec,
                                           const std::vector<int>& subset,
                                           const std::vector<double>& alphas);

}  // namespace specnoise
