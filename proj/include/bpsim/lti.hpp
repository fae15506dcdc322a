#ifndef BPSIM_LTI_HPP_
#define BPSIM_LTI_HPP_

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "bpsim/polynomial.hpp"

namespace bpsim {

/// Proper rational transfer function num(p)/den(p).
struct TransferFunction {
  Polynomial num;
  Polynomial den;

  TransferFunction(Polynomial numerator, Polynomial denominator);

  int relative_degree() const { return den.degree() - num.degree(); }
  bool strictly_proper() const { return relative_degree() > 0; }
  std::complex<double> eval(std::complex<double> s) const;
};

/// x' = A x + b u, y = c'x + d u.
struct StateSpaceModel {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  Eigen::VectorXd c;
  double d = 0.0;

  int order() const { return static_cast<int>(A.rows()); }
  // c'(sI - A)^{-1} b + d, by complex linear solve (route independent of the
  // polynomial evaluation in TransferFunction::eval).
  std::complex<double> eval(std::complex<double> s) const;
};

struct SprResult {
  bool ok = false;
  std::string reason;  // "unstable" when the denominator is not Hurwitz
  explicit operator bool() const { return ok; }
};

// Default grid for spr_check: 400 log-spaced points in [1e-3, 1e4] rad/s.
std::vector<double> default_spr_grid();

// Sampling check of strict positive realness: den Hurwitz and
// Re[h(j*omega)] > 0 at every grid frequency. A necessary-condition check on
// the grid, not a proof.
SprResult spr_check(const TransferFunction& h, const std::vector<double>& freq_grid);

// Controllable-canonical (companion-form) realization. Throws on improper
// input. d != 0 iff biproper.
StateSpaceModel tf_to_statespace(const TransferFunction& tf);

}  // namespace bpsim

#endif  // BPSIM_LTI_HPP_
