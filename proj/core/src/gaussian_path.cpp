#include "svx/gaussian_path.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>

#include "svx/errors.hpp"

namespace svx {

namespace {

// FFTW plan creation/destruction is not thread safe; executions on distinct
// buffers are.
std::mutex& fftw_mutex() {
  static std::mutex mu;
  return mu;
}

std::size_t next_pow2(std::size_t v) {
  std::size_t m = 1;
  while (m < v) m <<= 1;
  return m;
}

}  // namespace

PathSampler::PathSampler(const AcfModel& model, std::size_t n) : n_(n) {
  if (n == 0) throw ConfigError("PathSampler: n must be positive");
  m_ = next_pow2(n > 1 ? 2 * (n - 1) : 2);
  if (m_ < 2) m_ = 2;

  // First row of the circulant embedding: gamma_0 .. gamma_{M/2}, mirrored.
  std::vector<double> row(m_);
  for (std::size_t j = 0; j <= m_ / 2; ++j) row[j] = model.at_or_zero(static_cast<long>(j));
  for (std::size_t j = m_ / 2 + 1; j < m_; ++j) row[j] = row[m_ - j];

  fftw_complex* in;
  fftw_complex* out;
  in = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * m_));
  out = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * m_));
  fftw_plan plan_row;
  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    plan_row = fftw_plan_dft_1d(static_cast<int>(m_), in, out, FFTW_FORWARD,
                                FFTW_ESTIMATE | FFTW_UNALIGNED);
  }
  for (std::size_t j = 0; j < m_; ++j) {
    in[j][0] = row[j];
    in[j][1] = 0.0;
  }
  fftw_execute_dft(plan_row, in, out);

  double lambda_max = 0.0;
  std::vector<double> eigs(m_);
  for (std::size_t k = 0; k < m_; ++k) {
    eigs[k] = out[k][0];
    if (eigs[k] > lambda_max) lambda_max = eigs[k];
  }
  // Plan the synthesis transform with the same (distinct) buffers so the
  // plan is out-of-place; a null/null plan would alias in and out and FFTW
  // would treat it as in-place, which breaks new-array execution on
  // separate buffers once the transform is large enough to be buffered.
  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    fftw_destroy_plan(plan_row);
    plan_ = fftw_plan_dft_1d(static_cast<int>(m_), in, out, FFTW_FORWARD,
                             FFTW_ESTIMATE | FFTW_UNALIGNED);
  }
  fftw_free(in);
  fftw_free(out);

  double tol = -1e-10 * lambda_max;
  sqrt_eigs_.resize(m_);
  for (std::size_t k = 0; k < m_; ++k) {
    if (eigs[k] < tol) {
      throw SpectralError(
          "circulant embedding of " + model.describe() +
              " has negative eigenvalue " + std::to_string(eigs[k]) +
              " at index " + std::to_string(k),
          eigs[k]);
    }
    sqrt_eigs_[k] = std::sqrt(std::max(eigs[k], 0.0));
  }
}

PathSampler::~PathSampler() {
  if (plan_ != nullptr) {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(plan_));
  }
}

std::vector<double> PathSampler::sample(std::uint64_t seed) const {
  Rng rng(seed);
  if (n_ == 1) return {rng.normal()};

  const std::size_t m = m_;
  const double inv_sqrt_m = 1.0 / std::sqrt(static_cast<double>(m));
  const double inv_sqrt_2 = 0.70710678118654752440;

  fftw_complex* freq = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * m));
  fftw_complex* time = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * m));

  freq[0][0] = sqrt_eigs_[0] * rng.normal();
  freq[0][1] = 0.0;
  for (std::size_t k = 1; k < m / 2; ++k) {
    double re = sqrt_eigs_[k] * inv_sqrt_2 * rng.normal();
    double im = sqrt_eigs_[k] * inv_sqrt_2 * rng.normal();
    freq[k][0] = re;
    freq[k][1] = im;
    freq[m - k][0] = re;
    freq[m - k][1] = -im;
  }
  freq[m / 2][0] = sqrt_eigs_[m / 2] * rng.normal();
  freq[m / 2][1] = 0.0;

  fftw_execute_dft(static_cast<fftw_plan>(plan_), freq, time);

  std::vector<double> path(n_);
  for (std::size_t j = 0; j < n_; ++j) path[j] = time[j][0] * inv_sqrt_m;

  fftw_free(freq);
  fftw_free(time);
  return path;
}

std::vector<double> simulate_path(const AcfModel& model, std::size_t n,
                                  std::uint64_t seed) {
  PathSampler sampler(model, n);
  return sampler.sample(seed);
}

Eigen::MatrixXd joint_cov_matrix(const AcfModel& model,
                                 const std::vector<long>& index_set) {
  const auto d = static_cast<Eigen::Index>(index_set.size());
  if (d == 0) throw ConfigError("joint_cov_matrix: empty index set");
  Eigen::MatrixXd cov(d, d);
  for (Eigen::Index a = 0; a < d; ++a)
    for (Eigen::Index b = 0; b < d; ++b)
      cov(a, b) = model.at_or_zero(index_set[a] - index_set[b]);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
  double lambda_min = es.eigenvalues().minCoeff();
  double lambda_max = es.eigenvalues().maxCoeff();
  if (lambda_min < -1e-10 * lambda_max) {
    throw SpectralError("joint covariance of " + model.describe() +
                            " is not positive semi-definite (eigenvalue " +
                            std::to_string(lambda_min) + ")",
                        lambda_min);
  }
  return cov;
}

JointGaussianSampler::JointGaussianSampler(const AcfModel& model,
                                           std::vector<long> index_set) {
  Eigen::MatrixXd cov = joint_cov_matrix(model, index_set);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
  Eigen::VectorXd clipped = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  root_ = es.eigenvectors() * clipped.asDiagonal() * es.eigenvectors().transpose();
}

void JointGaussianSampler::sample(Rng& rng, double* out) const {
  const int d = dim();
  Eigen::VectorXd w(d);
  for (int i = 0; i < d; ++i) w(i) = rng.normal();
  Eigen::Map<Eigen::VectorXd>(out, d) = root_ * w;
}

Eigen::VectorXd JointGaussianSampler::sample(Rng& rng) const {
  Eigen::VectorXd out(dim());
  sample(rng, out.data());
  return out;
}

}  // namespace svx
