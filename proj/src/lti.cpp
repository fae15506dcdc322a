#include "bpsim/lti.hpp"

#include <cmath>
#include <stdexcept>

namespace bpsim {

TransferFunction::TransferFunction(Polynomial numerator, Polynomial denominator)
    : num(std::move(numerator)), den(std::move(denominator)) {
  if (den.is_zero()) throw std::invalid_argument("TransferFunction: zero denominator");
  if (num.degree() > den.degree())
    throw std::invalid_argument("TransferFunction: improper (deg num > deg den)");
}

std::complex<double> TransferFunction::eval(std::complex<double> s) const {
  return num.eval(s) / den.eval(s);
}

std::complex<double> StateSpaceModel::eval(std::complex<double> s) const {
  const int n = order();
  // Parlett-Reinsch balancing (radix-2 similarity scaling): companion forms
  // with wide coefficient ranges make the raw resolvent solve lose digits.
  Eigen::MatrixXd Ab = A;
  Eigen::VectorXd scale = Eigen::VectorXd::Ones(n);
  for (bool converged = false; !converged;) {
    converged = true;
    for (int i = 0; i < n; ++i) {
      double r = 0.0, col = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        r += std::abs(Ab(i, j));
        col += std::abs(Ab(j, i));
      }
      if (r == 0.0 || col == 0.0) continue;
      double f = 1.0;
      while (col < r / 2.0) {
        col *= 2.0;
        r /= 2.0;
        f *= 2.0;
      }
      while (col >= r * 2.0) {
        col /= 2.0;
        r *= 2.0;
        f /= 2.0;
      }
      if (f != 1.0) {
        converged = false;
        scale(i) *= f;
        Ab.row(i) /= f;
        Ab.col(i) *= f;
      }
    }
  }
  const Eigen::VectorXd bb = b.cwiseQuotient(scale);
  const Eigen::VectorXd cb = c.cwiseProduct(scale);
  Eigen::MatrixXcd m =
      s * Eigen::MatrixXcd::Identity(n, n) - Ab.cast<std::complex<double>>();
  Eigen::VectorXcd x = m.partialPivLu().solve(bb.cast<std::complex<double>>());
  return cb.cast<std::complex<double>>().dot(x) + d;
}

std::vector<double> default_spr_grid() {
  constexpr int kPoints = 400;
  std::vector<double> grid(kPoints);
  const double lo = std::log10(1e-3), hi = std::log10(1e4);
  for (int i = 0; i < kPoints; ++i)
    grid[static_cast<size_t>(i)] = std::pow(10.0, lo + (hi - lo) * i / (kPoints - 1));
  return grid;
}

SprResult spr_check(const TransferFunction& h, const std::vector<double>& freq_grid) {
  if (!is_hurwitz(h.den)) return {false, "unstable"};
  for (double w : freq_grid) {
    if (h.eval({0.0, w}).real() <= 0.0) return {false, "re_not_positive"};
  }
  return {true, ""};
}

StateSpaceModel tf_to_statespace(const TransferFunction& tf) {
  // Monic denominator, then split off the feedthrough: num = d*den + rem.
  const int n = tf.den.degree();
  if (n == 0) throw std::invalid_argument("tf_to_statespace: constant denominator");
  const double lead = tf.den.leading();

  std::vector<double> den(static_cast<size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) den[static_cast<size_t>(i)] = tf.den.coeff(i) / lead;

  double d = 0.0;
  std::vector<double> rem(static_cast<size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) rem[static_cast<size_t>(i)] = tf.num.coeff(i) / lead;
  if (tf.num.degree() == n) {
    d = tf.num.coeff(n) / lead / den[static_cast<size_t>(n)];  // den is monic, so just num_n/lead
    for (int i = 0; i < n; ++i) rem[static_cast<size_t>(i)] -= d * den[static_cast<size_t>(i)];
  }

  StateSpaceModel ss;
  ss.A = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) ss.A(i, i + 1) = 1.0;
  for (int j = 0; j < n; ++j) ss.A(n - 1, j) = -den[static_cast<size_t>(j)];
  ss.b = Eigen::VectorXd::Zero(n);
  ss.b(n - 1) = 1.0;
  ss.c = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i) ss.c(i) = rem[static_cast<size_t>(i)];
  ss.d = d;
  return ss;
}

}  // namespace bpsim
