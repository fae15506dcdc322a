#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "bpsim/plants.hpp"
#include "bpsim/polynomial.hpp"

using namespace bpsim;

TEST_CASE("normalization trims trailing near-zero coefficients") {
  Polynomial p{1.0, 2.0, 0.0, 0.0};
  CHECK(p.degree() == 1);
  CHECK(p.leading() == 2.0);
  // Dust below 1e-12 * max|c| is trimmed too.
  Polynomial q{1.0, 1.0, 1e-15};
  CHECK(q.degree() == 1);
  // Zero polynomial stays representable.
  CHECK(Polynomial{}.is_zero());
  CHECK(Polynomial{0.0, 0.0}.is_zero());
}

TEST_CASE("poly_mul: (1+p)^2 = 1 + 2p + p^2") {
  const Polynomial r = Polynomial{1.0, 1.0} * Polynomial{1.0, 1.0};
  CHECK(r == Polynomial{1.0, 2.0, 1.0});
}

TEST_CASE("poly_mul: multiplying by p shifts coefficients") {
  const Polynomial q{3.0, -1.0, 2.0};
  const Polynomial r = Polynomial::monomial(1) * q;
  CHECK(r == Polynomial{0.0, 3.0, -1.0, 2.0});
}

TEST_CASE("poly_mul: (p^2+3p+1)(p+1)^2 matches hand expansion") {
  // (p^2+3p+1)(p^2+2p+1) = p^4 + 5p^3 + 8p^2 + 5p + 1.
  const Polynomial r =
      Polynomial{1.0, 3.0, 1.0} * Polynomial{1.0, 1.0} * Polynomial{1.0, 1.0};
  CHECK(r == Polynomial{1.0, 5.0, 8.0, 5.0, 1.0});
}

TEST_CASE("poly_mul is commutative and associative on random triples") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  std::uniform_int_distribution<int> deg(0, 4);
  for (int trial = 0; trial < 50; ++trial) {
    auto rand_poly = [&] {
      std::vector<double> c(static_cast<size_t>(deg(rng)) + 1);
      for (double& x : c) x = coef(rng);
      if (c.back() == 0.0) c.back() = 1.0;
      return Polynomial(c);
    };
    const Polynomial a = rand_poly(), b = rand_poly(), c = rand_poly();
    // Same coefficients up to summation rounding (accumulation order differs).
    auto check_close = [](const Polynomial& l, const Polynomial& r) {
      REQUIRE(l.degree() == r.degree());
      for (int i = 0; i <= l.degree(); ++i)
        CHECK(l.coeff(i) == doctest::Approx(r.coeff(i)).epsilon(1e-12));
    };
    check_close(a * b, b * a);
    check_close((a * b) * c, a * (b * c));
  }
}

TEST_CASE("is_hurwitz basic cases") {
  CHECK(is_hurwitz(Polynomial{1.0, 1.0}));  // p + 1
  // p^2 + omega^2: imaginary-axis roots are not strictly stable.
  const double w = 1.2;
  CHECK_FALSE(is_hurwitz(Polynomial{w * w, 0.0, 1.0}));
  CHECK(is_hurwitz(Polynomial{1.0, 3.0, 1.0}));  // roots -0.382, -2.618
  CHECK_THROWS_AS(is_hurwitz(Polynomial::constant(5.0)), std::invalid_argument);
}

TEST_CASE("roots of p^2+3p+1 match the quadratic formula") {
  auto rs = roots(Polynomial{1.0, 3.0, 1.0});
  REQUIRE(rs.size() == 2);
  double lo = std::min(rs[0].real(), rs[1].real());
  double hi = std::max(rs[0].real(), rs[1].real());
  CHECK(lo == doctest::Approx(-(3.0 + std::sqrt(5.0)) / 2.0).epsilon(1e-12));
  CHECK(hi == doctest::Approx(-(3.0 - std::sqrt(5.0)) / 2.0).epsilon(1e-12));
  CHECK(std::abs(rs[0].imag()) < 1e-12);
}

TEST_CASE("is_hurwitz agrees with the root oracle on 200 random polynomials") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> coef(-3.0, 3.0);
  std::uniform_int_distribution<int> deg(1, 6);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> c(static_cast<size_t>(deg(rng)) + 1);
    for (double& x : c) x = coef(rng);
    if (std::abs(c.back()) < 0.1) c.back() = 1.0;
    const Polynomial p(c);
    bool oracle = true;
    for (const auto& r : roots(p)) oracle = oracle && r.real() < 0.0;
    CHECK(is_hurwitz(p) == oracle);
  }
}

TEST_CASE("closed_loop_char_poly: integrator plant hand expansion") {
  // a = p, b = 1, alpha = 1, k = 1, omega = 1:
  // p^2(p^2+1) + (p+1)^3 = p^4 + p^3 + 4p^2 + 3p + 1.
  const Polynomial g = closed_loop_char_poly(
      Polynomial::monomial(1), Polynomial::constant(1.0), 1.0,
      Polynomial::constant(1.0), 1.0);
  CHECK(g == Polynomial{1.0, 3.0, 4.0, 1.0, 1.0});
}

TEST_CASE("closed_loop_char_poly: k = 0 leaves a(p) p (p^2+omega^2)") {
  const Polynomial a{2.0, 1.0};
  const double w = 3.0;
  const Polynomial g =
      closed_loop_char_poly(a, Polynomial::constant(1.0), 0.0,
                            Polynomial::constant(1.0), w);
  CHECK(g == a * Polynomial::monomial(1) * Polynomial{w * w, 0.0, 1.0});
}

TEST_CASE("closed_loop_char_poly: tuned ball-and-plate gamma is Hurwitz") {
  const TransferFunction tf = linearized_tf(BallPlateParams::lab());
  const Polynomial alpha{1.0, 3.0, 1.0};
  const Polynomial g = closed_loop_char_poly(tf.den, tf.num, 1.2, alpha, 1.2);
  CHECK(is_hurwitz(g));
}

TEST_CASE("deg(gamma) = max(deg a + 3, deg b + deg alpha + 3)") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> coef(0.5, 2.0);
  std::uniform_int_distribution<int> deg(0, 4);
  for (int trial = 0; trial < 40; ++trial) {
    auto rand_poly = [&](int d) {
      std::vector<double> c(static_cast<size_t>(d) + 1);
      for (double& x : c) x = coef(rng);
      return Polynomial(c);
    };
    const int da = deg(rng), db = deg(rng), dal = deg(rng);
    const Polynomial g = closed_loop_char_poly(rand_poly(da), rand_poly(db),
                                               1.0, rand_poly(dal), 2.0);
    CHECK(g.degree() == std::max(da + 3, db + dal + 3));
  }
}
