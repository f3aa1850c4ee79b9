#include "svx/hermite.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>

#include "svx/errors.hpp"
#include "svx/gaussian_path.hpp"
#include "svx/quadrature.hpp"
#include "svx/stats.hpp"

namespace svx {

double hermite_poly(int q, double x) {
  if (q < 0) throw ConfigError("hermite_poly: degree >= 0 required");
  double prev = 1.0;  // H_0
  if (q == 0) return prev;
  double cur = x;  // H_1
  for (int d = 1; d < q; ++d) {
    double next = x * cur - static_cast<double>(d) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

int HermiteExpansion::rank(double rank_tol) const {
  double scale = std::sqrt(std::max(mean_square, 0.0));
  if (!(scale > 0.0)) return 0;
  double fact = 1.0;
  for (std::size_t q = 1; q < coeffs.size(); ++q) {
    fact *= static_cast<double>(q);
    if (std::fabs(coeffs[q]) / std::sqrt(fact) > rank_tol * scale)
      return static_cast<int>(q);
  }
  return 0;
}

HermiteExpansion hermite_coeffs_1d(const std::function<double(double)>& f,
                                   int q_max) {
  if (q_max < 0) throw ConfigError("hermite_coeffs_1d: q_max >= 0 required");
  const auto& rule = gauss_hermite(128);
  HermiteExpansion ex;
  ex.coeffs.assign(q_max + 1, 0.0);
  std::vector<double> h(q_max + 1);
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    double x = rule.nodes[i];
    double w = rule.weights[i];
    double fv = f(x);
    if (!std::isfinite(fv))
      throw NumericError("hermite_coeffs_1d: f not finite at quadrature node");
    h[0] = 1.0;
    if (q_max >= 1) h[1] = x;
    for (int q = 1; q < q_max; ++q)
      h[q + 1] = x * h[q] - static_cast<double>(q) * h[q - 1];
    for (int q = 0; q <= q_max; ++q) ex.coeffs[q] += w * fv * h[q];
    ex.mean_square += w * fv * fv;
  }
  if (!std::isfinite(ex.mean_square))
    throw NumericError("hermite_coeffs_1d: E[f^2] overflow");
  return ex;
}

namespace {

double survival_at(const TailModel& tail, double v) {
  if (v == -std::numeric_limits<double>::infinity()) return 1.0;
  if (v == std::numeric_limits<double>::infinity()) return 0.0;
  return tail.survival(v);
}

double interval_prob(const TailModel& tail, const Interval& iv, double sigma) {
  double lo = iv.lo == -std::numeric_limits<double>::infinity() ? iv.lo : iv.lo / sigma;
  double hi = iv.hi == std::numeric_limits<double>::infinity() ? iv.hi : iv.hi / sigma;
  return std::max(survival_at(tail, lo) - survival_at(tail, hi), 0.0);
}

// Hermite rank of g over N(0, Sigma) with Sigma = L L', by tensor
// Gauss-Hermite quadrature in the iid coordinates.
int joint_rank(const Eigen::MatrixXd& root,
               const std::function<double(const double*)>& g, int q_max,
               double rank_tol) {
  const int dim = static_cast<int>(root.rows());
  const int nodes = dim == 1 ? 128 : (dim == 2 ? 64 : 48);
  const auto& rule = gauss_hermite(nodes);

  // Hermite values per degree and node.
  std::vector<std::vector<double>> hv(q_max + 1, std::vector<double>(nodes));
  for (int i = 0; i < nodes; ++i) {
    double x = rule.nodes[i];
    hv[0][i] = 1.0;
    if (q_max >= 1) hv[1][i] = x;
    for (int q = 1; q < q_max; ++q)
      hv[q + 1][i] = x * hv[q][i] - static_cast<double>(q) * hv[q - 1][i];
  }

  // All multi-indices with 1 <= |q| <= q_max.
  struct MIdx {
    std::array<int, 3> q{0, 0, 0};
    int total = 0;
    double sqrt_fact = 1.0;
  };
  std::vector<MIdx> idxs;
  auto fact = [](int q) {
    double f = 1.0;
    for (int i = 2; i <= q; ++i) f *= i;
    return f;
  };
  std::array<int, 3> q{0, 0, 0};
  while (true) {
    int total = 0;
    for (int d = 0; d < dim; ++d) total += q[d];
    if (total >= 1 && total <= q_max) {
      MIdx mi;
      mi.q = q;
      mi.total = total;
      double f = 1.0;
      for (int d = 0; d < dim; ++d) f *= fact(q[d]);
      mi.sqrt_fact = std::sqrt(f);
      idxs.push_back(mi);
    }
    int d = 0;
    for (; d < dim; ++d) {
      if (q[d] < q_max) {
        ++q[d];
        break;
      }
      q[d] = 0;
    }
    if (d == dim) break;
  }

  std::vector<double> coeff(idxs.size(), 0.0);
  double mean_sq = 0.0;
  std::array<int, 3> node{0, 0, 0};
  Eigen::VectorXd w(dim), x(dim);
  while (true) {
    double weight = 1.0;
    for (int d = 0; d < dim; ++d) {
      weight *= rule.weights[node[d]];
      w[d] = rule.nodes[node[d]];
    }
    x.noalias() = root * w;
    double gv = g(x.data());
    if (!std::isfinite(gv))
      throw NumericError("rank_of_G: kernel not finite at quadrature node");
    mean_sq += weight * gv * gv;
    double wg = weight * gv;
    for (std::size_t m = 0; m < idxs.size(); ++m) {
      double prod = 1.0;
      for (int d = 0; d < dim; ++d) prod *= hv[idxs[m].q[d]][node[d]];
      coeff[m] += wg * prod;
    }
    int d = 0;
    for (; d < dim; ++d) {
      if (node[d] + 1 < nodes) {
        ++node[d];
        break;
      }
      node[d] = 0;
    }
    if (d == dim) break;
  }

  double scale = std::sqrt(std::max(mean_sq, 0.0));
  if (!(scale > 0.0)) return 0;
  int best = 0;
  for (std::size_t m = 0; m < idxs.size(); ++m) {
    if (std::fabs(coeff[m]) / idxs[m].sqrt_fact > rank_tol * scale) {
      if (best == 0 || idxs[m].total < best) best = idxs[m].total;
    }
  }
  return best;
}

Eigen::MatrixXd cov_root(const Eigen::MatrixXd& sigma) {
  Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  if (llt.info() == Eigen::Success) return llt.matrixL();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma);
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.asDiagonal();
}

}  // namespace

GRanks rank_of_G(const SvConfig& model, const ExtremeSet& set,
                 const std::vector<Interval>& b,
                 const std::vector<double>& y_grid, int q_max,
                 double rank_tol) {
  const int h = model.h;
  const int tgt = model.h_prime + 1;
  if (set.dim() != h) throw ConfigError("rank_of_G: set dimension, h mismatch");
  if (model.m < model.h) throw ConfigError("rank_of_G: m >= h required");
  if (b.size() != static_cast<std::size_t>(tgt))
    throw ConfigError("rank_of_G: target event needs h_prime+1 intervals");
  if (h + tgt > 3)
    throw ConfigError("rank_of_G: joint dimension above 3 unimplemented");
  if (y_grid.empty()) throw ConfigError("rank_of_G: empty y grid");

  std::vector<long> idx;
  for (int i = 0; i < h; ++i) idx.push_back(i);
  for (int i = 0; i < tgt; ++i) idx.push_back(model.m + i);
  Eigen::MatrixXd root = cov_root(joint_cov_matrix(model.acf, idx));

  const TailModel& tail = model.tail;
  const double alpha = tail.alpha();
  std::vector<double> sig(h);
  auto nu_part = [&](const double* x) {
    for (int i = 0; i < h; ++i) sig[i] = model.vol(x[i]);
    return nu_eval(set, alpha, sig);
  };

  GRanks out;
  out.tau_ab.rank = joint_rank(
      root,
      [&](const double* x) {
        double v = nu_part(x);
        for (int i = 0; i < tgt; ++i)
          v *= interval_prob(tail, b[i], model.vol(x[h + i]));
        return v;
      },
      q_max, rank_tol);
  out.tau_a.rank = joint_rank(
      root, [&](const double* x) { return nu_part(x); }, q_max, rank_tol);

  int best = 0;
  for (double y : y_grid) {
    int r = joint_rank(
        root,
        [&](const double* x) {
          double v = nu_part(x);
          for (int i = 0; i < tgt; ++i)
            v *= tail.cdf(y / model.vol(x[h + i]));
          return v;
        },
        q_max, rank_tol);
    if (r > 0 && (best == 0 || r < best)) best = r;
  }
  out.tau_star.rank = best;
  return out;
}

ArconesReport arcones_check(const std::function<double(double)>& f, int rank_q,
                            const AcfModel& acf,
                            const std::vector<std::size_t>& n_list,
                            std::size_t replicates, std::uint64_t seed) {
  if (rank_q < 1) throw ConfigError("arcones_check: rank >= 1 required");
  if (n_list.size() < 2) throw ConfigError("arcones_check: need at least 2 sizes");
  if (replicates < 8) throw ConfigError("arcones_check: need at least 8 replicates");

  ArconesReport rep;
  rep.n_list = n_list;

  auto ex = hermite_coeffs_1d(f, 2);
  rep.var_f = std::max(ex.mean_square - ex.coeffs[0] * ex.coeffs[0], 0.0);

  const bool lrd = acf.family() == AcfModel::Family::kFgn && acf.param() > 0.5;
  const double hurst = lrd ? acf.param() : 0.5;
  double lrd_slope = 2.0 * rank_q * (hurst - 1.0);
  rep.theory_slope = lrd ? std::max(lrd_slope, -1.0) : -1.0;

  std::vector<double> log_n, log_var, log_ratio;
  for (std::size_t ni = 0; ni < n_list.size(); ++ni) {
    std::size_t n = n_list[ni];
    PathSampler sampler(acf, n);
    std::vector<double> means(replicates);
    for (std::size_t r = 0; r < replicates; ++r) {
      auto path = sampler.sample(derive_seed(seed, ni * 100000 + r));
      double s = 0.0;
      for (double x : path) s += f(x);
      means[r] = s / static_cast<double>(n);
    }
    double v = variance(means);
    double nn = static_cast<double>(n);
    double rate = std::max(std::pow(nn, 2.0 * rank_q * (hurst - 1.0)), 1.0 / nn);
    rep.variance.push_back(v);
    rep.rate.push_back(rate);
    log_n.push_back(std::log(nn));
    log_var.push_back(std::log(std::max(v, 1e-300)));
    log_ratio.push_back(std::log(std::max(v / rate, 1e-300)));
    double c = v / (rate * std::max(rep.var_f, 1e-300));
    rep.c_fit = std::max(rep.c_fit, c);
  }
  rep.slope = regression_slope(log_n, log_var);
  rep.ratio_slope = regression_slope(log_n, log_ratio);
  rep.ratio_nonincreasing = rep.ratio_slope <= 0.15;
  return rep;
}

}  // namespace svx
