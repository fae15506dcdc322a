#include "bpsim/plants.hpp"

#include <cmath>
#include <stdexcept>

namespace bpsim {

void BallPlateParams::validate() const {
  if (m_b <= 0 || r_b <= 0 || I_b <= 0 || g <= 0 || L <= 0 || d <= 0 ||
      K_m <= 0 || T_m <= 0)
    throw std::invalid_argument("BallPlateParams: all parameters must be positive");
}

bool BallPlateParams::inertia_suspicious() const {
  return I_b > 0.4 * m_b * r_b * r_b * 1.10;
}

bool BallPlateState::on_plate(const BallPlateParams& p) const {
  return std::abs(x_b) <= 0.5 * p.L && std::abs(y_b) <= 0.5 * p.L;
}

double servo_to_plate_angle(double Q, const BallPlateParams& p) {
  return (p.d / p.L) * Q;
}

PlateRates plate_rates_from_servo(double Qx, double Qy, double ux, double uy,
                                  const BallPlateParams& p) {
  const double scale = p.d / (p.L * p.T_m);
  return {scale * (p.K_m * ux - Qx), scale * (p.K_m * uy - Qy)};
}

std::pair<double, double> nonlinear_accel(const BallPlateState& s,
                                          const PlateRates& r,
                                          const BallPlateParams& p) {
  const double denom = p.inertia_denom();
  const double ax = (p.m_b * (s.x_b * r.alpha_dot * r.alpha_dot +
                              s.y_b * r.alpha_dot * r.beta_dot) -
                     p.m_b * p.g * std::sin(s.alpha)) /
                    denom;
  const double ay = (p.m_b * (s.y_b * r.beta_dot * r.beta_dot +
                              s.x_b * r.alpha_dot * r.beta_dot) -
                     p.m_b * p.g * std::sin(s.beta)) /
                    denom;
  return {ax, ay};
}

std::pair<double, double> linearized_accel(const BallPlateState& s,
                                           const BallPlateParams& p) {
  const double gain = 2.0 * p.m_b * p.g * p.d / (p.L * p.inertia_denom());
  return {gain * s.Qx, gain * s.Qy};
}

TransferFunction linearized_tf(const BallPlateParams& p) {
  const double b0 = 2.0 * p.m_b * p.g * p.d * p.r_b * p.r_b * p.K_m;
  const double a3 = p.L * p.m_b * p.r_b * p.r_b * p.T_m;
  const double a2 = p.L * p.I_b;
  return TransferFunction(Polynomial{b0}, Polynomial{0.0, 0.0, a2, a3});
}

double servo_step(double Q, double u, double dt, const BallPlateParams& p) {
  const auto f = [&](double q) { return (-q + p.K_m * u) / p.T_m; };
  const double k1 = f(Q);
  const double k2 = f(Q + 0.5 * dt * k1);
  const double k3 = f(Q + 0.5 * dt * k2);
  const double k4 = f(Q + dt * k3);
  return Q + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
}

}  // namespace bpsim
