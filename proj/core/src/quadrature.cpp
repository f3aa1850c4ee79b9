#include "svx/quadrature.hpp"

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <map>
#include <mutex>

namespace svx {

namespace {

GaussHermiteRule build_gauss_hermite(int n) {
  // Jacobi matrix for the probabilists' Hermite recurrence
  // H_{q+1} = x H_q - q H_{q-1}: diagonal 0, off-diagonal sqrt(q).
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int q = 1; q < n; ++q) {
    double b = std::sqrt(static_cast<double>(q));
    jacobi(q, q - 1) = b;
    jacobi(q - 1, q) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
  GaussHermiteRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = es.eigenvalues()(i);
    double v = es.eigenvectors()(0, i);
    rule.weights[i] = v * v;
  }
  return rule;
}

}  // namespace

const GaussHermiteRule& gauss_hermite(int n) {
  static std::mutex mu;
  static std::map<int, GaussHermiteRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_gauss_hermite(n)).first;
  return it->second;
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol, int max_depth) {
  if (a == b) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      f, a, b, max_depth, rel_tol);
}

double integrate_upper(const std::function<double(double)>& f, double a,
                       double rel_tol) {
  auto g = [&](double u) {
    double one_minus = 1.0 - u;
    double t = a + u / one_minus;
    double jac = 1.0 / (one_minus * one_minus);
    return f(t) * jac;
  };
  return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      g, 0.0, 1.0, 15, rel_tol);
}

}  // namespace svx
