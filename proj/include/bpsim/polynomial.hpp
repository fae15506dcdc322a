#ifndef BPSIM_POLYNOMIAL_HPP_
#define BPSIM_POLYNOMIAL_HPP_

#include <complex>
#include <vector>

namespace bpsim {

/// Real polynomial in the differentiation operator p, coefficients stored in
/// ascending degree: coeffs()[i] multiplies p^i. Trailing near-zero
/// coefficients (|c| < 1e-12 * max|c|) are trimmed on construction.
class Polynomial {
 public:
  Polynomial();  // the zero polynomial
  explicit Polynomial(std::vector<double> coeffs);
  Polynomial(std::initializer_list<double> coeffs);

  static Polynomial constant(double c);
  static Polynomial monomial(int degree, double c = 1.0);  // c * p^degree

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const;
  double leading() const { return coeffs_.back(); }

  const std::vector<double>& coeffs() const { return coeffs_; }
  // Coefficient of p^i; zero beyond the stored degree.
  double coeff(int i) const;

  double eval(double x) const;
  std::complex<double> eval(std::complex<double> s) const;

  Polynomial operator*(const Polynomial& rhs) const;
  Polynomial operator+(const Polynomial& rhs) const;
  Polynomial operator-(const Polynomial& rhs) const;
  Polynomial operator*(double s) const;

  bool operator==(const Polynomial& rhs) const { return coeffs_ == rhs.coeffs_; }

 private:
  void normalize();
  std::vector<double> coeffs_;
};

inline Polynomial operator*(double s, const Polynomial& p) { return p * s; }

// All roots, via eigenvalues of the companion matrix of the monic-normalized
// polynomial. Requires degree >= 1.
std::vector<std::complex<double>> roots(const Polynomial& p);

// True iff every root has strictly negative real part.
// Throws std::invalid_argument for constants (stability undefined).
bool is_hurwitz(const Polynomial& p);

// gamma(p) = a(p) * p * (p^2 + omega^2) + k * b(p) * alpha(p) * (p+1)^3,
// the design-validity characteristic polynomial. Caller gates on
// is_hurwitz(gamma).
Polynomial closed_loop_char_poly(const Polynomial& a, const Polynomial& b,
                                 double k, const Polynomial& alpha,
                                 double omega);

}  // namespace bpsim

#endif  // BPSIM_POLYNOMIAL_HPP_
