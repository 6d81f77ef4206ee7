#pragma once

#include <Eigen/Dense>
#include <vector>

#include "specnoise/chain.hpp"

namespace specnoise {

// Contiguous run [begin, end) of eigenvalue indices treated as one
// degenerate eigenvalue.
struct Band {
  int begin = 0;
  int end = 0;
  double value = 0.0;  // mean of the members
  int dim() const { return end - begin; }
};

// Eigensystem of -Q in the pi-weighted inner product: eigenvalues ascending
// (0 = lambda_0 < lambda_1 <= ...), eigenvector columns pi-orthonormal with
// psi_0 the constant vector. Sign convention: the largest-magnitude entry of
// each column is positive (ties broken by lowest state index).
struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;
  Eigen::VectorXd pi;
  std::vector<Band> bands;
  double spectral_gap = 0.0;
  double relaxation_time = 0.0;

  int size() const { return static_cast<int>(eigenvalues.size()); }
  int band_of(int eigen_index) const;
};

struct DecomposeOptions {
  int max_states = 5000;
};

SpectralDecomposition decompose(const Chain& chain,
                                const DecomposeOptions& options = {});

// <f, -Q f>_pi / <f, f>_pi for pi-centered nonzero f; computed from the
// generator directly, not from the decomposition.
double rayleigh_quotient(const Chain& chain, const Eigen::VectorXd& f);

// H_t(v, w) = sum_i exp(-lambda_i t) psi_i(v) psi_i(w) pi(w). Entries in
// [-1e-12, 0) are clamped to zero; t = 0 returns the identity exactly.
Eigen::MatrixXd transition_kernel(const SpectralDecomposition& dec, double t);

// Indices i >= 1 with lambda_1 <= lambda_i <= k * lambda_1 (relative slack
// 1e-9 on the upper edge); nonempty for every k >= 1.
std::vector<int> band_subspace(const SpectralDecomposition& dec, double k);

}  // namespace specnoise
