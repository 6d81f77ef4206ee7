#include "specnoise/spectral.hpp"

#include <lapacke.h>

#include <cmath>
#include <sstream>

#include "specnoise/errors.hpp"

namespace specnoise {

namespace {

constexpr double kZeroEigenvalueTol = 1e-9;
constexpr double kBandRelTol = 1e-9;
constexpr double kSubspaceEdgeSlack = 1e-9;
constexpr double kKernelClampFloor = -1e-12;
constexpr double kCenteredTol = 1e-10;

void fix_column_signs(Eigen::MatrixXd& vectors) {
  for (int c = 0; c < vectors.cols(); ++c) {
    int lead = 0;
    double best = -1.0;
    for (int r = 0; r < vectors.rows(); ++r) {
      double mag = std::abs(vectors(r, c));
      if (mag > best) {
        best = mag;
        lead = r;
      }
    }
    if (vectors(lead, c) < 0.0) vectors.col(c) = -vectors.col(c);
  }
}

std::vector<Band> group_bands(const Eigen::VectorXd& values) {
  std::vector<Band> bands;
  const int n = static_cast<int>(values.size());
  int begin = 0;
  for (int i = 1; i <= n; ++i) {
    bool split = i == n || values(i) - values(i - 1) >
                               kBandRelTol * std::max(1.0, values(i));
    if (split) {
      Band band;
      band.begin = begin;
      band.end = i;
      band.value = values.segment(begin, i - begin).mean();
      bands.push_back(band);
      begin = i;
    }
  }
  return bands;
}

}  // namespace

int SpectralDecomposition::band_of(int eigen_index) const {
  for (int b = 0; b < static_cast<int>(bands.size()); ++b)
    if (eigen_index >= bands[b].begin && eigen_index < bands[b].end) return b;
  fail("InvalidParams",
       "eigen index out of range: " + std::to_string(eigen_index));
}

SpectralDecomposition decompose(const Chain& chain,
                                const DecomposeOptions& options) {
  const int n = chain.size();
  if (n < 2) fail("InvalidParams", "decompose needs at least 2 states");
  if (n > options.max_states)
    fail("CapExceeded", "chain has " + std::to_string(n) +
                            " states, cap is " +
                            std::to_string(options.max_states));

  ValidationReport report = validate(chain);
  if (!report.ok()) {
    std::ostringstream failed;
    for (const auto& c : report.checks)
      if (!c.pass) failed << c.name << " ";
    fail("ValidationFailed", "chain fails validation: " + failed.str());
  }

  // Symmetrize -Q with D^{1/2} (-Q) D^{-1/2}; reversibility makes this
  // symmetric up to roundoff, which the explicit averaging removes.
  Eigen::VectorXd sqrt_pi = chain.pi.cwiseSqrt();
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      m(i, j) = -chain.generator(i, j) * sqrt_pi(i) / sqrt_pi(j);
  m = ((m + m.transpose()) * 0.5).eval();

  SpectralDecomposition dec;
  dec.pi = chain.pi;
  dec.eigenvalues.resize(n);
  dec.eigenvectors = m;
  lapack_int info = LAPACKE_dsyevd(
      LAPACK_COL_MAJOR, 'V', 'L', n, dec.eigenvectors.data(), n,
      dec.eigenvalues.data());
  if (info != 0)
    fail("EigensolverFailure", "dsyevd failed with info " +
                                   std::to_string(info));

  for (int c = 0; c < n; ++c)
    dec.eigenvectors.col(c) = dec.eigenvectors.col(c).cwiseQuotient(sqrt_pi);
  fix_column_signs(dec.eigenvectors);

  double scale = std::max(1.0, std::abs(dec.eigenvalues(n - 1)));
  if (std::abs(dec.eigenvalues(0)) > kZeroEigenvalueTol * scale)
    fail("NumericalFailure",
         "smallest eigenvalue " + std::to_string(dec.eigenvalues(0)) +
             " is not numerically zero");

  dec.bands = group_bands(dec.eigenvalues);
  dec.spectral_gap = dec.eigenvalues(1);
  dec.relaxation_time = 1.0 / dec.spectral_gap;
  return dec;
}

double rayleigh_quotient(const Chain& chain, const Eigen::VectorXd& f) {
  const int n = chain.size();
  if (f.size() != n) fail("DimensionMismatch", "f has wrong length");
  double norm_sq = (chain.pi.array() * f.array().square()).sum();
  if (norm_sq == 0.0) fail("ZeroFunction", "f vanishes identically");
  double mean = (chain.pi.array() * f.array()).sum();
  if (std::abs(mean) > kCenteredTol * std::max(1.0, std::sqrt(norm_sq)))
    fail("NotCentered", "E_pi[f] = " + std::to_string(mean));
  double dirichlet = -(chain.pi.array() * f.array() *
                       (chain.generator * f).array())
                          .sum();
  return dirichlet / norm_sq;
}

Eigen::MatrixXd transition_kernel(const SpectralDecomposition& dec,
                                  double t) {
  if (t < 0.0) fail("NegativeTime", "t = " + std::to_string(t));
  const int n = dec.size();
  if (t == 0.0) return Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd decay = (-t * dec.eigenvalues.array()).exp();
  Eigen::MatrixXd kernel = dec.eigenvectors * decay.asDiagonal() *
                           dec.eigenvectors.transpose() *
                           dec.pi.asDiagonal();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (kernel(i, j) < 0.0 && kernel(i, j) >= kKernelClampFloor)
        kernel(i, j) = 0.0;
  return kernel;
}

std::vector<int> band_subspace(const SpectralDecomposition& dec, double k) {
  if (!(k >= 1.0)) fail("InvalidParams", "band_subspace needs k >= 1");
  std::vector<int> indices;
  double edge = k * dec.spectral_gap * (1.0 + kSubspaceEdgeSlack);
  for (int i = 1; i < dec.size() && dec.eigenvalues(i) <= edge; ++i)
    indices.push_back(i);
  if (indices.empty())
    fail("EmptySubspace", "no eigenvalues in [lambda_1, k lambda_1]");
  return indices;
}

}  // namespace specnoise
