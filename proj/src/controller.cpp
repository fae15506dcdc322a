#include "bpsim/controller.hpp"

#include <cmath>
#include <stdexcept>

namespace bpsim {
namespace {

// num = q * den + r with deg r < deg den.
std::pair<Polynomial, Polynomial> poly_divmod(const Polynomial& num,
                                              const Polynomial& den) {
  if (den.is_zero()) throw std::invalid_argument("poly_divmod: zero divisor");
  std::vector<double> rem(num.coeffs());
  const int dn = num.degree(), dd = den.degree();
  if (dn < dd) return {Polynomial(), num};
  std::vector<double> quot(static_cast<size_t>(dn - dd) + 1, 0.0);
  for (int i = dn; i >= dd; --i) {
    const double f = rem[static_cast<size_t>(i)] / den.leading();
    quot[static_cast<size_t>(i - dd)] = f;
    for (int j = 0; j <= dd; ++j)
      rem[static_cast<size_t>(i - dd + j)] -= f * den.coeff(j);
  }
  rem.resize(static_cast<size_t>(dd));
  if (rem.empty()) rem.push_back(0.0);
  return {Polynomial(std::move(quot)), Polynomial(std::move(rem))};
}

}  // namespace

void CompensatorConfig::validate() const {
  if (!(k > 0.0)) throw std::invalid_argument("controller: k must be positive");
  if (!(sigma > k)) throw std::invalid_argument("controller: sigma must exceed k");
  if (rho < 1) throw std::invalid_argument("controller: rho must be >= 1");
  if (static_cast<int>(observer_gains.size()) != rho - 1)
    throw std::invalid_argument("controller: need exactly rho-1 observer gains");
  if (alpha.degree() != rho - 1)
    throw std::invalid_argument("controller: alpha must have degree rho-1");
  if (rho >= 2 && !is_hurwitz(alpha))
    throw std::invalid_argument("controller: alpha must be Hurwitz");
  if (!(internal_model_freq > 0.0))
    throw std::invalid_argument("controller: internal model frequency must be positive");
  if (!(omega_min > 0.0) || !(omega_max > omega_min))
    throw std::invalid_argument("controller: need 0 < omega_min < omega_max");
}

ObserverMatrices build_observer_matrices(const CompensatorConfig& config) {
  const int n = config.rho - 1;
  if (n < 1)
    throw std::invalid_argument("build_observer_matrices: rho must be >= 2");
  ObserverMatrices m;
  m.Gamma = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) m.Gamma(i, i + 1) = 1.0;
  for (int j = 0; j < n; ++j)
    m.Gamma(n - 1, j) = -config.observer_gains[static_cast<size_t>(j)];
  m.d = Eigen::VectorXd::Zero(n);
  m.d(n - 1) = config.observer_gains[0];
  m.h = Eigen::VectorXd::Zero(n);
  m.h(0) = 1.0;

  if ((m.d + m.Gamma * m.h).norm() != 0.0)
    throw std::logic_error("build_observer_matrices: d = -Gamma h violated");

  // Characteristic polynomial of the companion form is
  // s^n + k_{rho-1} s^{n-1} + ... + k_1.
  std::vector<double> charpoly(config.observer_gains);
  charpoly.push_back(1.0);
  if (!is_hurwitz(Polynomial(std::move(charpoly))))
    throw std::invalid_argument("bad observer gains");
  return m;
}

InternalModelFilter build_internal_model_filter(const CompensatorConfig& config) {
  const double w = config.internal_model_freq;
  if (!(w > 0.0))
    throw std::invalid_argument("build_internal_model_filter: omega must be positive");

  const Polynomial p1{1.0, 1.0};
  const Polynomial resonator{w * w, 0.0, 1.0};

  InternalModelFilter f;
  f.omega = w;
  switch (config.filter_form) {
    case FilterForm::kIntegratorCube:
      f.num = config.alpha * p1 * p1 * p1;
      f.den = Polynomial::monomial(1) * resonator;
      break;
    case FilterForm::kResonatorSquare:
      f.num = config.alpha * p1 * p1;
      f.den = resonator;
      break;
    case FilterForm::kIntegratorSquare:
      f.num = config.alpha * p1 * p1;
      f.den = Polynomial::monomial(1) * resonator;
      break;
  }
  auto [quot, rem] = poly_divmod(f.num, f.den);
  f.proper = tf_to_statespace(TransferFunction(rem, f.den));
  f.quotient = quot.is_zero() ? std::vector<double>{} : quot.coeffs();
  return f;
}

Compensator::Compensator(CompensatorConfig config) : config_(std::move(config)) {
  config_.validate();
  if (config_.rho >= 2) observer_ = build_observer_matrices(config_);
  filter_ = build_internal_model_filter(config_);
  state_.assign(static_cast<size_t>(state_dim()), 0.0);

  // The quotient acts on d^j xi_1 / dt^j, which are exact only up to order
  // rho-1 (the observer chain plus its last dynamics row).
  if (static_cast<int>(filter_.quotient.size()) > config_.rho)
    throw std::logic_error("Compensator: filter quotient needs unavailable derivatives");
}

double Compensator::xi1(double y) const {
  return config_.rho >= 2 ? state_[0] : y;
}

std::vector<double> Compensator::xi1_derivatives(std::span<const double> state,
                                                 double y,
                                                 std::size_t count) const {
  std::vector<double> derivs(count, 0.0);
  if (count == 0) return derivs;
  const int n = observer_dim();
  derivs[0] = n >= 1 ? state[0] : y;
  double pw = 1.0;
  for (std::size_t j = 1; j < count; ++j) {
    pw *= config_.sigma;
    if (static_cast<int>(j) < n) {
      derivs[j] = pw * state[j];
    } else {
      // j == n: differentiate the last chain row once more.
      double acc = config_.observer_gains[0] * y;
      for (int i = 0; i < n; ++i)
        acc -= config_.observer_gains[static_cast<size_t>(i)] * state[static_cast<size_t>(i)];
      derivs[j] = pw * acc;
    }
  }
  return derivs;
}

void Compensator::derivatives(std::span<const double> state, double y,
                              std::span<double> dstate) const {
  const int n = observer_dim();
  const double s = config_.sigma;
  // xi' = sigma (Gamma xi + d y): a shift chain with a companion last row.
  for (int i = 0; i + 1 < n; ++i) dstate[static_cast<size_t>(i)] = s * state[static_cast<size_t>(i + 1)];
  if (n >= 1) {
    double acc = config_.observer_gains[0] * y;
    for (int i = 0; i < n; ++i)
      acc -= config_.observer_gains[static_cast<size_t>(i)] * state[static_cast<size_t>(i)];
    dstate[static_cast<size_t>(n - 1)] = s * acc;
  }
  // Filter: x' = A x + b xi_1.
  const double input = n >= 1 ? state[0] : y;
  const auto& ss = filter_.proper;
  for (int i = 0; i < ss.order(); ++i) {
    double acc = ss.b(i) * input;
    for (int j = 0; j < ss.order(); ++j) acc += ss.A(i, j) * state[static_cast<size_t>(n + j)];
    dstate[static_cast<size_t>(n + i)] = acc;
  }
}

double Compensator::output(std::span<const double> state, double y, double t) const {
  const int n = observer_dim();
  const auto& ss = filter_.proper;
  double filt = 0.0;
  for (int j = 0; j < ss.order(); ++j) filt += ss.c(j) * state[static_cast<size_t>(n + j)];
  const auto derivs = xi1_derivatives(state, y, filter_.quotient.size());
  for (std::size_t j = 0; j < filter_.quotient.size(); ++j)
    filt += filter_.quotient[j] * derivs[j];
  double u = -config_.k * filt;
  if (fade_len_ > 0.0 && t >= fade_t0_ && t < fade_t0_ + fade_len_) {
    const double lambda = (t - fade_t0_) / fade_len_;
    u = (1.0 - lambda) * fade_from_ + lambda * u;
  }
  return u;
}

double Compensator::retune_internal_model(double new_omega, double t,
                                          double u_now, double fade_duration) {
  clamped_last_retune_ = false;
  double applied = new_omega;
  if (applied < config_.omega_min) {
    applied = config_.omega_min;
    clamped_last_retune_ = true;
  } else if (applied > config_.omega_max) {
    applied = config_.omega_max;
    clamped_last_retune_ = true;
  }
  if (applied == filter_.omega) return applied;  // no-op switch, state untouched

  config_.internal_model_freq = applied;
  filter_ = build_internal_model_filter(config_);  // same state dimension
  fade_from_ = u_now;
  fade_t0_ = t;
  fade_len_ = fade_duration;
  return applied;
}

void Compensator::observer_step(double y, double dt) {
  const int n = observer_dim();
  if (n == 0) {
    clock_ += dt;
    return;
  }
  // RK4 on the xi block alone, y held constant over the step.
  std::vector<double> s0(state_.begin(), state_.begin() + n);
  auto f = [&](const std::vector<double>& s) {
    std::vector<double> ds(static_cast<size_t>(n));
    for (int i = 0; i + 1 < n; ++i) ds[static_cast<size_t>(i)] = config_.sigma * s[static_cast<size_t>(i + 1)];
    double acc = config_.observer_gains[0] * y;
    for (int i = 0; i < n; ++i) acc -= config_.observer_gains[static_cast<size_t>(i)] * s[static_cast<size_t>(i)];
    ds[static_cast<size_t>(n - 1)] = config_.sigma * acc;
    return ds;
  };
  auto axpy = [&](const std::vector<double>& s, const std::vector<double>& d, double c) {
    std::vector<double> out(s);
    for (int i = 0; i < n; ++i) out[static_cast<size_t>(i)] += c * d[static_cast<size_t>(i)];
    return out;
  };
  const auto k1 = f(s0);
  const auto k2 = f(axpy(s0, k1, 0.5 * dt));
  const auto k3 = f(axpy(s0, k2, 0.5 * dt));
  const auto k4 = f(axpy(s0, k3, dt));
  for (int i = 0; i < n; ++i)
    state_[static_cast<size_t>(i)] +=
        dt / 6.0 * (k1[static_cast<size_t>(i)] + 2 * k2[static_cast<size_t>(i)] +
                    2 * k3[static_cast<size_t>(i)] + k4[static_cast<size_t>(i)]);
}

double Compensator::control_output(double y, double dt) {
  const int n = observer_dim();
  const auto& ss = filter_.proper;
  const int m = ss.order();
  const double input = xi1(y);
  std::vector<double> x0(state_.begin() + n, state_.end());
  auto f = [&](const std::vector<double>& x) {
    std::vector<double> dx(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) {
      double acc = ss.b(i) * input;
      for (int j = 0; j < m; ++j) acc += ss.A(i, j) * x[static_cast<size_t>(j)];
      dx[static_cast<size_t>(i)] = acc;
    }
    return dx;
  };
  auto axpy = [&](const std::vector<double>& s, const std::vector<double>& d, double c) {
    std::vector<double> out(s);
    for (int i = 0; i < m; ++i) out[static_cast<size_t>(i)] += c * d[static_cast<size_t>(i)];
    return out;
  };
  const auto k1 = f(x0);
  const auto k2 = f(axpy(x0, k1, 0.5 * dt));
  const auto k3 = f(axpy(x0, k2, 0.5 * dt));
  const auto k4 = f(axpy(x0, k3, dt));
  for (int i = 0; i < m; ++i)
    state_[static_cast<size_t>(n + i)] +=
        dt / 6.0 * (k1[static_cast<size_t>(i)] + 2 * k2[static_cast<size_t>(i)] +
                    2 * k3[static_cast<size_t>(i)] + k4[static_cast<size_t>(i)]);
  clock_ += dt;
  return output(state_, y, clock_);
}

}  // namespace bpsim
