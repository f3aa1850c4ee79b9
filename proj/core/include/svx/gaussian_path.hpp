#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

#include "svx/acf.hpp"
#include "svx/rng.hpp"

namespace svx {

/// Exact sampler for stationary Gaussian paths with a prescribed
/// autocovariance, by circulant embedding of the Toeplitz covariance
/// (Davies-Harte / Dietrich-Newsam). The covariance row of length n is
/// embedded in a circulant of power-of-two size M >= 2(n-1); eigenvalues are
/// obtained by FFT. Eigenvalues in [-1e-10 * lambda_max, 0) are clipped to
/// zero; anything more negative raises SpectralError.
///
/// Given (model, n, seed) the path is bit-identical across runs and thread
/// counts.
std::vector<double> simulate_path(const AcfModel& model, std::size_t n,
                                  std::uint64_t seed);

/// Draws `count` paths through a reusable plan; equivalent to calling
/// simulate_path with seeds derive_seed(seed, r) but amortizes the FFT setup.
class PathSampler {
 public:
  PathSampler(const AcfModel& model, std::size_t n);
  ~PathSampler();
  PathSampler(const PathSampler&) = delete;
  PathSampler& operator=(const PathSampler&) = delete;

  std::vector<double> sample(std::uint64_t seed) const;
  std::size_t size() const { return n_; }

 private:
  std::size_t n_;
  std::size_t m_;
  std::vector<double> sqrt_eigs_;
  void* plan_ = nullptr;  // fftw plan shared across sample() calls
};

/// Covariance matrix of (X_{i}, i in index_set), entries gamma_{|i_a - i_b|}.
/// Verifies positive semi-definiteness (eigenvalues >= -1e-10 * lambda_max)
/// and raises SpectralError otherwise.
Eigen::MatrixXd joint_cov_matrix(const AcfModel& model,
                                 const std::vector<long>& index_set);

/// Dense sampler for small joint Gaussian vectors (the slow-but-simple
/// counterpart of the circulant path sampler; also usable as an exactness
/// oracle for n <= a few hundred). Uses the Cholesky-like symmetric square
/// root from an eigendecomposition, so slightly negative roundoff modes are
/// tolerated.
class JointGaussianSampler {
 public:
  JointGaussianSampler(const AcfModel& model, std::vector<long> index_set);

  int dim() const { return static_cast<int>(root_.cols()); }
  void sample(Rng& rng, double* out) const;
  Eigen::VectorXd sample(Rng& rng) const;

 private:
  Eigen::MatrixXd root_;
};

}  // namespace svx
