#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "bpsim/lti.hpp"
#include "bpsim/plants.hpp"

using namespace bpsim;

namespace {

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    g[static_cast<size_t>(i)] =
        std::pow(10.0, std::log10(lo) + (std::log10(hi) - std::log10(lo)) * i / (n - 1));
  return g;
}

}  // namespace

TEST_CASE("TransferFunction construction guards") {
  CHECK_THROWS_AS(TransferFunction(Polynomial{1.0, 1.0, 1.0}, Polynomial{1.0, 1.0}),
                  std::invalid_argument);  // improper
  CHECK_THROWS_AS(TransferFunction(Polynomial{1.0}, Polynomial{}),
                  std::invalid_argument);  // zero denominator
  const TransferFunction h(Polynomial{1.0}, Polynomial{0.0, 0.0, 1.0, 2.0});
  CHECK(h.relative_degree() == 3);
  CHECK(h.strictly_proper());
}

TEST_CASE("tf_to_statespace: 1/(p+1)") {
  const auto ss = tf_to_statespace(TransferFunction(Polynomial{1.0}, Polynomial{1.0, 1.0}));
  REQUIRE(ss.order() == 1);
  CHECK(ss.A(0, 0) == -1.0);
  CHECK(ss.b(0) == 1.0);
  CHECK(ss.c(0) == 1.0);
  CHECK(ss.d == 0.0);
}

TEST_CASE("tf_to_statespace: biproper (p+2)/(p+1) splits feedthrough") {
  const auto ss = tf_to_statespace(TransferFunction(Polynomial{2.0, 1.0}, Polynomial{1.0, 1.0}));
  CHECK(ss.d == 1.0);
  // Remainder is 1/(p+1).
  CHECK(ss.c(0) == doctest::Approx(1.0));
  CHECK(ss.A(0, 0) == -1.0);
}

TEST_CASE("tf_to_statespace: ball-and-plate realization matches tf response") {
  const TransferFunction tf = linearized_tf(BallPlateParams::lab());
  const auto ss = tf_to_statespace(tf);
  REQUIRE(ss.order() == 3);
  // Companion structure: superdiagonal ones.
  CHECK(ss.A(0, 1) == 1.0);
  CHECK(ss.A(1, 2) == 1.0);
  for (double w : log_grid(1e-2, 1e3, 20)) {
    const auto a = tf.eval({0.0, w});
    const auto b = ss.eval({0.0, w});
    CHECK(std::abs(a - b) / std::abs(a) < 1e-9);
  }
}

TEST_CASE("realization round-trip on random stable proper TFs up to degree 5") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> pole(0.1, 10.0);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  std::uniform_int_distribution<int> deg(1, 5);
  const auto grid = log_grid(1e-2, 1e3, 30);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = deg(rng);
    Polynomial den = Polynomial::constant(1.0);
    for (int i = 0; i < n; ++i) den = den * Polynomial{pole(rng), 1.0};
    // Zeros placed off the imaginary axis keep |tf(jw)| well away from
    // cancellation, so the relative comparison is meaningful.
    std::uniform_int_distribution<int> ndeg(0, n);
    Polynomial num = Polynomial::constant(coef(rng) + 3.0);
    const int m = ndeg(rng);
    for (int i = 0; i < m; ++i) num = num * Polynomial{pole(rng), 1.0};
    const TransferFunction tf{num, den};
    const auto ss = tf_to_statespace(tf);
    for (double w : grid) {
      const auto a = tf.eval({0.0, w});
      CHECK(std::abs(a - ss.eval({0.0, w})) / std::abs(a) < 1e-9);
    }
  }
}

TEST_CASE("spr_check: 1/(p+1) is SPR on the default grid") {
  const auto r = spr_check(TransferFunction(Polynomial{1.0}, Polynomial{1.0, 1.0}),
                           default_spr_grid());
  CHECK(static_cast<bool>(r));
}

TEST_CASE("spr_check: (1-p)/(p+1)^2 fails at high frequency") {
  // Re[h(j2)] = (1 - 2*4) / (1+4)^2 < 0.
  const auto r = spr_check(
      TransferFunction(Polynomial{1.0, -1.0}, Polynomial{1.0, 2.0, 1.0}),
      default_spr_grid());
  CHECK_FALSE(static_cast<bool>(r));
  CHECK(r.reason == "re_not_positive");
}

TEST_CASE("spr_check: unstable denominator reports \"unstable\"") {
  const auto r = spr_check(
      TransferFunction(Polynomial{-1.0, 1.0}, Polynomial{-2.0, 1.0}),
      default_spr_grid());
  CHECK_FALSE(static_cast<bool>(r));
  CHECK(r.reason == "unstable");
}

TEST_CASE("default_spr_grid spans [1e-3, 1e4] with 400 points") {
  const auto g = default_spr_grid();
  REQUIRE(g.size() == 400);
  CHECK(g.front() == doctest::Approx(1e-3));
  CHECK(g.back() == doctest::Approx(1e4));
  for (size_t i = 1; i < g.size(); ++i) CHECK(g[i] > g[i - 1]);
}
