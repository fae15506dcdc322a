#include "bpsim/polynomial.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bpsim {

Polynomial::Polynomial() : coeffs_{0.0} {}

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) coeffs_.push_back(0.0);
  normalize();
}

Polynomial::Polynomial(std::initializer_list<double> coeffs)
    : Polynomial(std::vector<double>(coeffs)) {}

Polynomial Polynomial::constant(double c) { return Polynomial{{c}}; }

Polynomial Polynomial::monomial(int degree, double c) {
  std::vector<double> v(static_cast<size_t>(degree) + 1, 0.0);
  v.back() = c;
  return Polynomial(std::move(v));
}

bool Polynomial::is_zero() const {
  return coeffs_.size() == 1 && coeffs_[0] == 0.0;
}

double Polynomial::coeff(int i) const {
  if (i < 0 || i >= static_cast<int>(coeffs_.size())) return 0.0;
  return coeffs_[static_cast<size_t>(i)];
}

void Polynomial::normalize() {
  double maxabs = 0.0;
  for (double c : coeffs_) maxabs = std::max(maxabs, std::abs(c));
  const double tol = 1e-12 * maxabs;
  while (coeffs_.size() > 1 && std::abs(coeffs_.back()) <= tol) {
    coeffs_.pop_back();
  }
}

double Polynomial::eval(double x) const {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

std::complex<double> Polynomial::eval(std::complex<double> s) const {
  std::complex<double> acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * s + *it;
  return acc;
}

Polynomial Polynomial::operator*(const Polynomial& rhs) const {
  if (is_zero() || rhs.is_zero()) return Polynomial();
  std::vector<double> out(coeffs_.size() + rhs.coeffs_.size() - 1, 0.0);
  for (size_t i = 0; i < coeffs_.size(); ++i)
    for (size_t j = 0; j < rhs.coeffs_.size(); ++j)
      out[i + j] += coeffs_[i] * rhs.coeffs_[j];
  return Polynomial(std::move(out));
}

Polynomial Polynomial::operator+(const Polynomial& rhs) const {
  std::vector<double> out(std::max(coeffs_.size(), rhs.coeffs_.size()), 0.0);
  for (size_t i = 0; i < out.size(); ++i) out[i] = coeff(static_cast<int>(i)) + rhs.coeff(static_cast<int>(i));
  return Polynomial(std::move(out));
}

Polynomial Polynomial::operator-(const Polynomial& rhs) const {
  return *this + rhs * -1.0;
}

Polynomial Polynomial::operator*(double s) const {
  std::vector<double> out = coeffs_;
  for (double& c : out) c *= s;
  return Polynomial(std::move(out));
}

std::vector<std::complex<double>> roots(const Polynomial& p) {
  const int n = p.degree();
  if (n < 1) throw std::invalid_argument("roots: degree must be >= 1");
  const double lead = p.leading();
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) companion(i, i + 1) = 1.0;
  for (int j = 0; j < n; ++j) companion(n - 1, j) = -p.coeff(j) / lead;
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, /*computeEigenvectors=*/false);
  std::vector<std::complex<double>> out(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<size_t>(i)] = solver.eigenvalues()(i);
  return out;
}

bool is_hurwitz(const Polynomial& p) {
  if (p.degree() < 1)
    throw std::invalid_argument("is_hurwitz: undefined for degree-0 polynomials");
  for (const auto& r : roots(p)) {
    if (r.real() >= 0.0) return false;
  }
  return true;
}

Polynomial closed_loop_char_poly(const Polynomial& a, const Polynomial& b,
                                 double k, const Polynomial& alpha,
                                 double omega) {
  const Polynomial resonator{omega * omega, 0.0, 1.0};
  const Polynomial p1{1.0, 1.0};
  return a * Polynomial::monomial(1) * resonator + (k * b) * alpha * p1 * p1 * p1;
}

}  // namespace bpsim
