#include "specnoise/bottleneck.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "specnoise/errors.hpp"
#include "specnoise/noise.hpp"

namespace specnoise {

namespace {

constexpr double kHalfMassSlack = 1e-12;
constexpr double kQuarterMassSlack = 1e-12;
constexpr double kIdentityRelTol = 1e-9;
constexpr double kCheegerSlack = 1e-9;
constexpr double kFlipBoundSlack = 1e-12;

// Flow weights W[i][j] = pi_i q_ij with zero diagonal, plus row sums.
// phi() and the enumeration kernels must accumulate in exactly the same
// order (i ascending, j ascending) so that equal cuts produce bit-identical
// phi values; the tie-break contract depends on it.
struct FlowWeights {
  int n = 0;
  std::vector<double> w;        // row-major n*n
  std::vector<double> row_sum;  // sum_j W[i][j]

  explicit FlowWeights(const Chain& chain) : n(chain.size()) {
    w.assign(static_cast<std::size_t>(n) * n, 0.0);
    row_sum.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j)
        if (j != i) w[static_cast<std::size_t>(i) * n + j] =
            chain.pi(i) * chain.generator(i, j);
      double s = 0.0;
      for (int j = 0; j < n; ++j) s += w[static_cast<std::size_t>(i) * n + j];
      row_sum[i] = s;
    }
  }

  double flow_of_mask(std::uint64_t mask) const {
    double flow = 0.0;
    for (int i = 0; i < n; ++i) {
      if (!(mask >> i & 1)) continue;
      double inside = 0.0;
      const double* row = &w[static_cast<std::size_t>(i) * n];
      for (int j = 0; j < n; ++j)
        if (mask >> j & 1) inside += row[j];
      flow += row_sum[i] - inside;
    }
    return flow;
  }
};

double mass_of_mask(const Eigen::VectorXd& pi, std::uint64_t mask) {
  double mass = 0.0;
  for (int i = 0; i < pi.size(); ++i)
    if (mask >> i & 1) mass += pi(i);
  return mass;
}

struct BestCut {
  double phi = std::numeric_limits<double>::infinity();
  double flow = 0.0;
  double mass = 0.0;
  int popcount = 0;
  std::uint64_t mask = 0;
  bool found = false;
};

// Lexicographic order on the sorted index sets: the smaller set is the one
// containing the lowest index where they differ.
bool mask_lex_less(std::uint64_t a, std::uint64_t b) {
  std::uint64_t diff = a ^ b;
  return diff != 0 && (a & (diff & -diff)) != 0;
}

bool cut_less(const BestCut& a, const BestCut& b) {
  if (!b.found) return a.found;
  if (!a.found) return false;
  if (a.phi != b.phi) return a.phi < b.phi;
  if (a.popcount != b.popcount) return a.popcount < b.popcount;
  return mask_lex_less(a.mask, b.mask);
}

void offer(BestCut& best, double phi_value, double flow, double mass,
           std::uint64_t mask) {
  BestCut cand;
  cand.phi = phi_value;
  cand.flow = flow;
  cand.mass = mass;
  cand.popcount = __builtin_popcountll(mask);
  cand.mask = mask;
  cand.found = true;
  if (cut_less(cand, best)) best = cand;
}

std::vector<int> mask_to_subset(std::uint64_t mask, int n) {
  std::vector<int> subset;
  for (int i = 0; i < n; ++i)
    if (mask >> i & 1) subset.push_back(i);
  return subset;
}

CutReport report_from(const BestCut& best, int n, SearchMethod method,
                      bool exact) {
  CutReport report;
  report.subset = mask_to_subset(best.mask, n);
  report.pi_mass = best.mass;
  report.boundary_flow = best.flow;
  report.phi = best.phi;
  report.exact_minimum = exact;
  report.method = method;
  return report;
}

struct EnumerationResult {
  BestCut global;      // pi(A) <= 1/2
  BestCut restricted;  // pi(A) in (1/4, 1/2]
};

// Full scan over nonempty proper subsets. OpenMP splits the mask range;
// each thread keeps its own minimum under the total tie-break order, and
// the final reduction over thread results is order-independent because the
// per-mask arithmetic never depends on the partition.
EnumerationResult enumerate_cuts(const Chain& chain, int cap, RunMode mode) {
  const int n = chain.size();
  if (n > cap)
    fail("StateSpaceTooLarge",
         "enumeration over " + std::to_string(n) + " states exceeds cap " +
             std::to_string(cap));
  if (n < 2) fail("InvalidParams", "need at least 2 states");

  const FlowWeights weights(chain);
  const std::uint64_t limit = (1ull << n) - 1;  // masks 1 .. limit-1
  const int threads =
      mode == RunMode::parallel ? omp_get_max_threads() : 1;

  std::vector<EnumerationResult> partial(threads);
#pragma omp parallel num_threads(threads)
  {
    EnumerationResult local;
#pragma omp for schedule(static)
    for (std::int64_t signed_mask = 1;
         signed_mask < static_cast<std::int64_t>(limit); ++signed_mask) {
      const std::uint64_t mask = static_cast<std::uint64_t>(signed_mask);
      double mass = mass_of_mask(chain.pi, mask);
      if (mass > 0.5 + kHalfMassSlack) continue;
      double flow = weights.flow_of_mask(mask);
      double phi_value = flow / mass;
      offer(local.global, phi_value, flow, mass, mask);
      if (mass > 0.25 + kQuarterMassSlack)
        offer(local.restricted, phi_value, flow, mass, mask);
    }
    partial[omp_get_thread_num()] = local;
  }

  EnumerationResult result;
  for (const auto& p : partial) {
    if (cut_less(p.global, result.global)) result.global = p.global;
    if (cut_less(p.restricted, result.restricted))
      result.restricted = p.restricted;
  }
  return result;
}

}  // namespace

std::string search_method_name(SearchMethod m) {
  switch (m) {
    case SearchMethod::enumeration: return "enumeration";
    case SearchMethod::sweep: return "sweep";
    case SearchMethod::restricted: return "restricted";
  }
  fail("InvalidParams", "unknown search method");
}

double phi(const Chain& chain, const std::vector<int>& subset) {
  return cut_report(chain, subset).phi;
}

CutReport cut_report(const Chain& chain, const std::vector<int>& subset) {
  const int n = chain.size();
  if (n > 64) fail("StateSpaceTooLarge", "cut reports need |S| <= 64");
  std::uint64_t mask = 0;
  for (int i : subset) {
    if (i < 0 || i >= n) fail("InvalidParams", "subset index out of range");
    if (mask >> i & 1) fail("InvalidParams", "duplicate subset index");
    mask |= 1ull << i;
  }
  int pop = __builtin_popcountll(mask);
  if (pop == 0 || pop == n)
    fail("EmptyOrFullSet", "subset must be nonempty and proper");

  const FlowWeights weights(chain);
  CutReport report;
  report.subset = mask_to_subset(mask, n);
  report.pi_mass = mass_of_mask(chain.pi, mask);
  report.boundary_flow = weights.flow_of_mask(mask);
  report.phi = report.boundary_flow / report.pi_mass;
  report.method = SearchMethod::enumeration;
  report.exact_minimum = false;
  return report;
}

CutReport exact_bottleneck(const Chain& chain, int cap, RunMode mode) {
  EnumerationResult result = enumerate_cuts(chain, cap, mode);
  return report_from(result.global, chain.size(), SearchMethod::enumeration,
                     true);
}

// Reference implementation: same per-subset arithmetic via cut_report, a
// plain loop, and no shared state. Kept for testing the parallel kernel.
CutReport exact_bottleneck_serial(const Chain& chain, int cap) {
  const int n = chain.size();
  if (n > cap)
    fail("StateSpaceTooLarge",
         "enumeration over " + std::to_string(n) + " states exceeds cap " +
             std::to_string(cap));
  if (n < 2) fail("InvalidParams", "need at least 2 states");

  BestCut best;
  for (std::uint64_t mask = 1; mask < (1ull << n) - 1; ++mask) {
    CutReport r = cut_report(chain, mask_to_subset(mask, n));
    if (r.pi_mass > 0.5 + kHalfMassSlack) continue;
    offer(best, r.phi, r.boundary_flow, r.pi_mass, mask);
  }
  return report_from(best, n, SearchMethod::enumeration, true);
}

CutReport sweep_cut(const Chain& chain, const SpectralDecomposition& dec) {
  const int n = chain.size();
  if (n > 64) fail("StateSpaceTooLarge", "sweep cuts need |S| <= 64");
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return dec.eigenvectors(a, 1) < dec.eigenvectors(b, 1);
  });

  const FlowWeights weights(chain);
  BestCut best;
  auto scan = [&](bool reversed) {
    std::uint64_t mask = 0;
    for (int k = 0; k < n - 1; ++k) {
      mask |= 1ull << (reversed ? order[n - 1 - k] : order[k]);
      double mass = mass_of_mask(chain.pi, mask);
      if (mass > 0.5 + kHalfMassSlack) continue;
      double flow = weights.flow_of_mask(mask);
      offer(best, flow / mass, flow, mass, mask);
    }
  };
  scan(false);
  scan(true);
  if (!best.found)
    fail("NoSubsetInMassWindow", "no prefix cut has pi(A) <= 1/2");
  return report_from(best, n, SearchMethod::sweep, false);
}

CheegerReport cheeger_check(const Chain& chain,
                            const SpectralDecomposition& dec) {
  CheegerReport report;
  report.phi_star = exact_bottleneck(chain).phi;
  report.lambda_1 = dec.spectral_gap;
  report.lower_ok =
      report.phi_star * report.phi_star <= 2.0 * report.lambda_1 +
                                               kCheegerSlack;
  report.upper_ok = 2.0 * report.lambda_1 <= 4.0 * report.phi_star +
                                                 kCheegerSlack;
  return report;
}

SpectralIdentityReport spectral_identity_check(
    const Chain& chain, const SpectralDecomposition& dec,
    const std::vector<int>& subset) {
  SpectralIdentityReport report;
  report.phi_value = phi(chain, subset);
  SpectralProfile profile = fourier_profile(
      dec, Observable::indicator(subset, chain.size()));
  report.mean_lambda = profile.mean_lambda;
  report.match =
      std::abs(report.phi_value - report.mean_lambda) <=
      kIdentityRelTol * std::max(1.0, std::abs(report.phi_value));
  return report;
}

CutReport nondegenerate_minimizer(const Chain& chain, int cap, RunMode mode) {
  EnumerationResult result = enumerate_cuts(chain, cap, mode);
  if (!result.restricted.found)
    fail("NoSubsetInMassWindow", "no subset has pi(A) in (1/4, 1/2]");
  CutReport report = report_from(result.restricted, chain.size(),
                                 SearchMethod::restricted, true);
  report.phi_star = result.global.phi;
  report.gap_to_star = report.phi - result.global.phi;
  return report;
}

std::vector<FlipBoundRow> flip_bound_check(const Chain& chain,
                                           const SpectralDecomposition& dec,
                                           const std::vector<int>& subset,
                                           const std::vector<double>& alphas) {
  CutReport cut = cut_report(chain, subset);
  SpectralProfile profile = fourier_profile(
      dec, Observable::indicator(subset, chain.size()));
  auto flips = flip_curve(profile, alphas);

  std::vector<FlipBoundRow> rows;
  rows.reserve(alphas.size());
  for (const auto& [alpha, flip] : flips) {
    FlipBoundRow row;
    row.alpha = alpha;
    row.flip = flip;
    row.bound = 2.0 * alpha * dec.relaxation_time * cut.pi_mass * cut.phi;
    row.holds = row.flip <= row.bound + kFlipBoundSlack;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace specnoise
