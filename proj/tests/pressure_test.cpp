#include <cmath>
#include <random>

#include "doctest.h"
#include "mtf/pressure.hpp"
#include "oracles.hpp"

using namespace mtf;
using oracle::pi;

TEST_CASE("pressure: vanishes at zero depth") {
  CHECK(eval_pressure(1.0, 0.0) == 0.0);
  CHECK(eval_pressure_derivative(1.0, 0.0) == 0.0);
}

TEST_CASE("pressure: lowest band only below the first level") {
  CHECK(eval_pressure(2.0, 1.0) == doctest::Approx(2.0 / (3.0 * pi * pi)).epsilon(1e-15));
  CHECK(eval_pressure(2.0, 1.0) == doctest::Approx(0.0675475).epsilon(1e-6));
  for (double v : {0.01, 0.5, 1.3, 1.999}) {
    CHECK(eval_pressure(1.0, v) == doctest::Approx(v * std::sqrt(v) / (3.0 * pi * pi)).epsilon(1e-15));
  }
}

TEST_CASE("pressure: agrees with direct summation") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> lb(std::log(1e-3), std::log(1e2));
  std::uniform_real_distribution<double> lv(std::log(1e-4), std::log(1e4));
  for (int k = 0; k < 200; ++k) {
    const double b = std::exp(lb(rng)), v = std::exp(lv(rng));
    const double ref = oracle::pressure(b, v);
    CHECK(std::abs(eval_pressure(b, v) - ref) <= 1e-11 * ref);
    const double dref = oracle::pressure_derivative(b, v);
    CHECK(std::abs(eval_pressure_derivative(b, v) - dref) <= 1e-11 * dref);
  }
}

TEST_CASE("pressure: classical limit at b = 0.01") {
  const double target = 2.0 / (15.0 * pi * pi);
  CHECK(target == doctest::Approx(0.0135095).epsilon(1e-5));
  CHECK(std::abs(eval_pressure(0.01, 1.0) / target - 1.0) < 0.02);
  // The level sum is a trapezoid sum of the classical integral, so the error
  // runs as b^2 with a b^{5/2} endpoint term.
  const double extrapolated =
      oracle::richardson(oracle::pressure(0.04, 1.0), oracle::pressure(0.02, 1.0), oracle::pressure(0.01, 1.0), 2.0, 2.5);
  CHECK(std::abs(extrapolated / target - 1.0) < 1e-4);
  double prev = 1.0;
  for (double b : {0.08, 0.04, 0.02, 0.01, 0.005}) {
    const double err = std::abs(eval_pressure(b, 1.0) / target - 1.0);
    CHECK(err < prev);
    prev = err;
  }
}

TEST_CASE("pressure: log-slope of the classical error") {
  // Distance to 2 v^{5/2}/(15 pi^2) falls off like b^2.
  const double target = 2.0 / (15.0 * pi * pi);
  const double e1 = std::abs(eval_pressure(1e-2, 1.0) - target);
  const double e2 = std::abs(eval_pressure(1e-3, 1.0) - target);
  const double slope = std::log(e1 / e2) / std::log(10.0);
  CHECK(slope > 1.5);
  CHECK(slope < 2.5);
}

TEST_CASE("pressure: derivative examples") {
  CHECK(eval_pressure_derivative(1.0, 1.0) == doctest::Approx(1.0 / (2.0 * pi * pi)).epsilon(1e-15));
  CHECK(eval_pressure_derivative(1.0, 1.0) == doctest::Approx(0.0506606).epsilon(1e-6));
  // v = 3 is itself a kink for b = 0.5 (2jb = 3 at j = 3): the centred
  // difference picks up h^{1/2} from the opening level, so compare one-sided
  // there and centred at neighbouring points.
  const double b = 0.5, h = 1e-5;
  for (double v : {2.7, 2.95, 3.05, 3.3}) {
    const double fd = (eval_pressure(b, v + h) - eval_pressure(b, v - h)) / (2.0 * h);
    CHECK(std::abs(fd / eval_pressure_derivative(b, v) - 1.0) < 1e-6);
  }
  const double v = 3.0;
  const double back = (3.0 * eval_pressure(b, v) - 4.0 * eval_pressure(b, v - h) + eval_pressure(b, v - 2.0 * h)) / (2.0 * h);
  CHECK(std::abs(back / eval_pressure_derivative(b, v) - 1.0) < 1e-6);
  const double centred = (eval_pressure(b, v + h) - eval_pressure(b, v - h)) / (2.0 * h);
  const double opening = 2.0 * b / (3.0 * pi * pi) * std::pow(h, 1.5) / (2.0 * h);
  CHECK(std::abs(centred - opening - eval_pressure_derivative(b, v)) < 1e-6 * eval_pressure_derivative(b, v));
}

TEST_CASE("pressure: derivative is continuous and increasing across kinks") {
  const LandauPressure p(0.5);
  for (int j = 1; j <= 5; ++j) {
    const double kink = 2.0 * j * 0.5;
    const double below = p.density(kink * (1.0 - 1e-12)), above = p.density(kink * (1.0 + 1e-12));
    CHECK(above > below);
    CHECK(above - below < 1e-5);
  }
  double prev = 0.0;
  for (int k = 1; k <= 2000; ++k) {
    const double d = p.density(0.005 * k);
    CHECK(d > prev);
    prev = d;
  }
}

TEST_CASE("pressure: domain errors") {
  CHECK_THROWS_AS(eval_pressure(1.0, -1e-3), DomainError);
  CHECK_THROWS_AS(eval_pressure(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(eval_pressure(-1.0, 1.0), DomainError);
  CHECK_THROWS_AS(eval_pressure_derivative(1.0, -1.0), DomainError);
  CHECK_THROWS_AS(invert_derivative(1.0, -0.1), DomainError);
  CHECK_THROWS_AS(eval_tau(1.0, -0.1), DomainError);
  CHECK_THROWS_AS(eval_pressure(1.0, std::nan("")), DomainError);
}

TEST_CASE("pressure: inversion") {
  CHECK(invert_derivative(1.0, 0.0) == 0.0);
  CHECK(invert_derivative(1.0, 1.0 / (2.0 * pi * pi)) == doctest::Approx(1.0).epsilon(1e-12));
  const double v = invert_derivative(1.0, 0.3);
  CHECK(std::abs(eval_pressure_derivative(1.0, v) - 0.3) < 1e-10);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> lb(std::log(1e-3), std::log(1e2));
  std::uniform_real_distribution<double> lr(std::log(1e-8), std::log(1e6));
  for (int k = 0; k < 300; ++k) {
    const double b = std::exp(lb(rng)), rho = std::exp(lr(rng));
    const double vv = invert_derivative(b, rho);
    CHECK(std::abs(eval_pressure_derivative(b, vv) / rho - 1.0) <= 1e-10);
  }
}

TEST_CASE("pressure: inversion lands on kinks") {
  const double b = 0.7;
  for (int j = 1; j <= 4; ++j) {
    const double kink = 2.0 * j * b;
    const double rho = oracle::pressure_derivative(b, kink);
    CHECK(std::abs(invert_derivative(b, rho) - kink) < 1e-9 * kink);
  }
}

TEST_CASE("pressure: kinetic density") {
  CHECK(eval_tau(1.0, 0.0) == 0.0);
  const double single = 4.0 * std::pow(pi, 4) / 3.0 * std::pow(0.05, 3);
  CHECK(single == doctest::Approx(0.0162349).epsilon(1e-5));
  CHECK(eval_tau(1.0, 0.05) == doctest::Approx(single).epsilon(1e-10));
  // Single-band closed form up to the threshold b sqrt(2b) / (2 pi^2).
  const KineticDensity tau(3.0);
  CHECK(tau.single_band_threshold() == doctest::Approx(3.0 * std::sqrt(6.0) / (2.0 * pi * pi)));
  for (double f : {0.1, 0.5, 0.9, 1.0}) {
    const double rho = f * tau.single_band_threshold();
    CHECK(tau(rho) == doctest::Approx(4.0 * std::pow(pi, 4) / 3.0 * rho * rho * rho / 9.0).epsilon(1e-10));
  }
  // Fenchel-Young inequality and equality at v*(rho).
  CHECK(eval_tau(1.0, 0.05) + eval_pressure(1.0, 0.9) - 0.05 * 0.9 >= 0.0);
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    const double b = std::exp(std::log(1e-2) + u(rng) * std::log(1e4));
    const double rho = std::exp(std::log(1e-4) + u(rng) * std::log(1e6));
    const double vs = invert_derivative(b, rho);
    const double gap = eval_tau(b, rho) + eval_pressure(b, vs) - rho * vs;
    CHECK(std::abs(gap) <= 1e-10 * std::max(1.0, rho * vs));
    const double vo = vs * (0.5 + u(rng));
    CHECK(eval_tau(b, rho) + eval_pressure(b, vo) - rho * vo >= -1e-12 * rho * vs);
  }
}

TEST_CASE("pressure: tau is convex, nondecreasing, zero at zero") {
  const KineticDensity tau(0.3);
  double prev = 0.0;
  for (int k = 1; k < 400; ++k) {
    const double rho = 0.01 * k;
    const double t = tau(rho);
    CHECK(t >= prev);
    const double mid = tau(rho - 0.005);
    CHECK(mid <= 0.5 * (prev + t) + 1e-12);
    prev = t;
  }
}

TEST_CASE("pressure: exact truncation") {
  const LandauPressure p(0.25);
  for (double v : {0.1, 0.6, 3.3, 10.0, 40.0}) {
    const std::size_t occupied = p.occupied_levels(v);
    const double base = p.pressure_truncated(v, occupied);
    CHECK(p.pressure_truncated(v, occupied + 1) == base);
    CHECK(p.pressure_truncated(v, occupied + 1000) == base);
  }
}

TEST_CASE("pressure: Euler-Maclaurin tail matches direct summation") {
  const LandauPressure p(1e-3);
  for (double v : {0.6, 2.0, 17.0}) {
    REQUIRE(p.occupied_levels(v) > 256);
    CHECK(std::abs(p.pressure(v) / p.pressure_truncated(v, p.occupied_levels(v)) - 1.0) < 1e-12);
  }
}

TEST_CASE("pressure: convexity on a sampled grid") {
  for (double b : {0.05, 1.0, 20.0}) {
    const LandauPressure p(b);
    for (int i = 0; i < 40; ++i) {
      for (int j = i + 1; j < 40; ++j) {
        const double v1 = 0.37 * i, v2 = 0.37 * j;
        for (double t : {0.1, 0.5, 0.77}) {
          CHECK(p.pressure(t * v1 + (1 - t) * v2) <= t * p.pressure(v1) + (1 - t) * p.pressure(v2) + 1e-12);
        }
      }
    }
  }
}

TEST_CASE("pressure: Legendre duality roundtrip") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 30; ++k) {
    const double b = std::exp(std::log(1e-2) + u(rng) * std::log(1e4));
    const double v = std::exp(std::log(1e-2) + u(rng) * std::log(1e3));
    const double hi = 4.0 * oracle::pressure_derivative(b, v) + 1.0;
    const double sup = oracle::concave_max([&](double rho) { return rho * v - eval_tau(b, rho); }, 0.0, hi);
    CHECK(std::abs(sup - eval_pressure(b, v)) <= 1e-8 * eval_pressure(b, v));
  }
}

TEST_CASE("pressure: classical model") {
  const ClassicalPressure c;
  for (double v : {0.01, 1.0, 50.0}) {
    CHECK(c.pressure(v) == doctest::Approx(2.0 * std::pow(v, 2.5) / (15.0 * pi * pi)).epsilon(1e-14));
    CHECK(c.potential_for_density(c.density(v)) == doctest::Approx(v).epsilon(1e-12));
  }
}
