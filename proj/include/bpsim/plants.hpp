#ifndef BPSIM_PLANTS_HPP_
#define BPSIM_PLANTS_HPP_

#include <utility>

#include "bpsim/lti.hpp"

namespace bpsim {

/// Ball-and-plate physical parameters. The built-in "lab" profile is the
/// desk-scale lab setup.
struct BallPlateParams {
  double m_b = 0.05;     // ball mass, kg
  double r_b = 0.0125;   // ball radius, m
  double I_b = 3.13e-5;  // ball inertia, kg m^2
  double g = 9.81;       // m/s^2
  double L = 0.11;       // plate side, m
  double d = 0.02;       // servo arm length, m
  double K_m = 0.25;     // servo gain
  double T_m = 0.018;    // servo time constant, s

  static BallPlateParams lab() { return {}; }

  void validate() const;  // throws on non-positive parameters
  // True when I_b exceeds the solid-sphere value (2/5) m_b r_b^2 by more
  // than 10%; warning-level only, the parameter table stays authoritative.
  bool inertia_suspicious() const;
  // Effective inertia denominator m_b + I_b / r_b^2.
  double inertia_denom() const { return m_b + I_b / (r_b * r_b); }
};

struct BallPlateState {
  double x_b = 0.0, y_b = 0.0;    // ball position, m
  double vx = 0.0, vy = 0.0;      // ball velocity, m/s
  double alpha = 0.0, beta = 0.0; // plate inclinations, rad
  double Qx = 0.0, Qy = 0.0;      // servo arm angles, rad

  bool on_plate(const BallPlateParams& p) const;
};

struct PlateRates {
  double alpha_dot = 0.0, beta_dot = 0.0;  // rad/s
};

// Plate inclination from servo arm angle: alpha = (d / L) * Q.
double servo_to_plate_angle(double Q, const BallPlateParams& p);

// Plate angular rates through the servo chain:
// alpha_dot = (d/L) * Qdot = (d/L) * (K_m u - Q) / T_m.
PlateRates plate_rates_from_servo(double Qx, double Qy, double ux, double uy,
                                  const BallPlateParams& p);

// Nonlinear Euler-Lagrange ball accelerations (ax, ay):
// ax = [m_b (x_b alpha_dot^2 + y_b alpha_dot beta_dot) - m_b g sin(alpha)]
//      / (m_b + I_b / r_b^2), and symmetrically for ay.
std::pair<double, double> nonlinear_accel(const BallPlateState& s,
                                          const PlateRates& rates,
                                          const BallPlateParams& p);

// Small-angle, slow-rate accelerations driven by servo angles:
// ax = (2 m_b g d / L) Qx / (m_b + I_b / r_b^2).
std::pair<double, double> linearized_accel(const BallPlateState& s,
                                           const BallPlateParams& p);

// Per-axis transfer function b(p)/a(p) with servo dynamics folded in:
// b(p) = 2 m_b g d r_b^2 K_m,  a(p) = L (m_b r_b^2 T_m p^3 + I_b p^2).
// Relative degree 3.
TransferFunction linearized_tf(const BallPlateParams& p);

// One RK4 step of the first-order servo link T_m Qdot = -Q + K_m u with u
// held constant. Returns the updated Q.
double servo_step(double Q, double u, double dt, const BallPlateParams& p);

}  // namespace bpsim

#endif  // BPSIM_PLANTS_HPP_
