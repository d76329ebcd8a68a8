#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "oracles/oracles.hpp"
#include "tvps/controls.hpp"
#include "tvps/random.hpp"
#include "tvps/rates.hpp"

using tvps::ControlKind;
using tvps::ControlSpec;
using tvps::CumulativeRate;
using tvps::RateFunction;

namespace {

constexpr double kTol = 1e-9;

ControlSpec sr_spec(double s, double ca2, double cs2) {
  ControlSpec c;
  c.kind = ControlKind::SquareRoot;
  c.target_s = s;
  c.ca2 = ca2;
  c.cs2 = cs2;
  return c;
}

double lambda_primitive(double t) { return t + 20.0 * (1.0 - std::cos(0.01 * t)); }

}  // namespace

TEST_CASE("factories reject invalid rates") {
  CHECK_THROWS_AS(RateFunction::constant(0.0), std::invalid_argument);
  CHECK_THROWS_AS(RateFunction::sinusoidal(1.0, 1.0, 0.01), std::invalid_argument);
  CHECK_THROWS_AS(RateFunction::sinusoidal(1.0, -1.5, 0.01), std::invalid_argument);
  CHECK_THROWS_AS(RateFunction::sinusoidal(1.0, 0.2, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(CumulativeRate(RateFunction::constant(1.0), 0.0), std::invalid_argument);
}

TEST_CASE("bounds and period") {
  const auto lam = RateFunction::sinusoidal(1.0, 0.2, 0.01);
  CHECK(lam.lower_bound() == doctest::Approx(0.8));
  CHECK(lam.upper_bound() == doctest::Approx(1.2));
  CHECK(*lam.period() == doctest::Approx(200.0 * std::numbers::pi));
  CHECK_FALSE(RateFunction::constant(2.0).period().has_value());
  const auto mu = tvps::make_service_rate(sr_spec(0.1, 0.5, 0.5), lam);
  CHECK(mu.lower_bound() == doctest::Approx(tvps::mu_sr(0.8, sr_spec(0.1, 0.5, 0.5))));
  CHECK(mu.upper_bound() == doctest::Approx(tvps::mu_sr(1.2, sr_spec(0.1, 0.5, 0.5))));
  for (int i = 0; i < 1000; ++i) {
    const double v = mu(i * 0.7);
    REQUIRE(v >= mu.lower_bound() - 1e-12);
    REQUIRE(v <= mu.upper_bound() + 1e-12);
  }
}

TEST_CASE("integrate examples") {
  const CumulativeRate c(RateFunction::constant(2.0));
  CHECK(c.integrate(0.0, 3.0) == doctest::Approx(6.0).epsilon(1e-15));
  CHECK(c.inverse(6.0, 0.0) == doctest::Approx(3.0).epsilon(1e-15));

  const CumulativeRate s(RateFunction::sinusoidal(1.0, 0.2, 0.01));
  const double expected = 100.0 + 20.0 * (1.0 - std::cos(1.0));
  CHECK(std::abs(s.integrate(0.0, 100.0) - expected) < kTol);
  CHECK(std::abs(s.value(100.0) - 109.1939) < 1e-4);

  const CumulativeRate f(RateFunction::sinusoidal(1.0, 0.2, 0.1));
  const double period = 2.0 * std::numbers::pi / 0.1;
  CHECK(std::abs(f.integrate(3.0, 3.0 + period) - period) < kTol);
  CHECK(std::abs(f.integrate(3.0, 3.0 + period) - 62.8319) < 1e-4);
}

TEST_CASE("inverse examples") {
  const CumulativeRate s(RateFunction::sinusoidal(1.0, 0.2, 0.01));
  CHECK(std::abs(s.inverse(100.0 + 20.0 * (1.0 - std::cos(1.0)), 0.0) - 100.0) < 10 * kTol);
  CHECK(std::abs(s.inverse(109.1939, 0.0) - 100.0) < 1e-4);
  CHECK(s.inverse(0.0, 17.5) == 17.5);
  const CumulativeRate m(tvps::make_service_rate(sr_spec(0.1, 2.0, 2.0), RateFunction::sinusoidal(1, 0.2, 0.01)));
  CHECK(m.inverse(0.0, 3.25) == 3.25);
}

TEST_CASE("precondition errors") {
  const CumulativeRate s(RateFunction::sinusoidal(1.0, 0.2, 0.01));
  CHECK_THROWS_AS(s.integrate(5.0, 4.0), std::invalid_argument);
  CHECK_THROWS_AS(s.integrate(-1.0, 4.0), std::invalid_argument);
  CHECK_THROWS_AS(s.inverse(-1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(s.inverse(1.0, -1.0), std::invalid_argument);
  CHECK(s.integrate(4.0, 4.0) == 0.0);
}

TEST_CASE("closed form and quadrature agree") {
  // Sinusoid: library closed form against the analytic primitive and Simpson.
  const CumulativeRate s(RateFunction::sinusoidal(1.0, 0.2, 0.01));
  for (double t : {0.5, 37.0, 314.0, 1999.0, 19999.0}) {
    CHECK(std::abs(s.value(t) - lambda_primitive(t)) < kTol * std::max(1.0, t / 100));
  }
  CHECK(std::abs(s.integrate(10.0, 700.0) -
                 oracle::simpson([](double t) { return 1.0 + 0.2 * std::sin(0.01 * t); }, 10.0, 700.0)) < kTol);

  // Square-root control: grid plus quadrature against Simpson on the formula.
  for (double g : {0.001, 0.01, 0.1}) {
    const auto spec = sr_spec(0.1, 0.5, 0.5);
    const CumulativeRate m(tvps::make_service_rate(spec, RateFunction::sinusoidal(1.0, 0.2, g)));
    auto rate = [&](double t) { return tvps::mu_sr(1.0 + 0.2 * std::sin(g * t), spec); };
    for (auto [a, b] : {std::pair{0.0, 1.0}, {3.3, 900.0}, {1234.5, 1300.25}, {0.0, 19000.0}}) {
      const double ref = oracle::simpson(rate, a, b, 400000);
      CHECK(std::abs(m.integrate(a, b) - ref) < 1e-8 * std::max(1.0, ref));
    }
  }
}

TEST_CASE("difference matching integrates in closed form") {
  ControlSpec dm;
  dm.kind = ControlKind::DifferenceMatching;
  dm.target_s = 10.0;
  dm.ca2 = 2.0;
  dm.cs2 = 2.0;
  const CumulativeRate m(tvps::make_service_rate(dm, RateFunction::sinusoidal(1.0, 0.2, 0.001)));
  auto rate = [&](double t) { return tvps::mu_dm(1.0 + 0.2 * std::sin(0.001 * t), dm); };
  CHECK(std::abs(m.integrate(5.0, 15000.0) - oracle::simpson(rate, 5.0, 15000.0, 200000)) < 1e-8);
}

TEST_CASE("additivity, monotonicity and round trips") {
  const auto lam = RateFunction::sinusoidal(1.0, 0.2, 0.01);
  const CumulativeRate rates[] = {
      CumulativeRate(lam),
      CumulativeRate(tvps::make_service_rate(sr_spec(0.1, 0.5, 2.0), lam)),
      CumulativeRate(tvps::make_service_rate(sr_spec(10.0, 2.0, 2.0), RateFunction::sinusoidal(1.0, 0.2, 0.1))),
      CumulativeRate(RateFunction::constant(0.7)),
  };
  tvps::RandomStream rng(99, 0);
  for (const auto& c : rates) {
    for (int i = 0; i < 300; ++i) {
      const double a = 3000.0 * rng.uniform();
      const double b = a + 200.0 * rng.uniform();
      const double m = a + (b - a) * rng.uniform();
      const double whole = c.integrate(a, b);
      REQUIRE(std::abs(c.integrate(a, m) + c.integrate(m, b) - whole) < kTol * std::max(1.0, whole));
      REQUIRE(c.integrate(a, m) <= whole + kTol);
      REQUIRE(std::abs(c.inverse(whole, a) - b) < 10 * kTol * std::max(1.0, b / 100));
      REQUIRE(c.inverse(c.integrate(a, m), a) <= c.inverse(whole, a) + 10 * kTol);
    }
  }
}

TEST_CASE("inverse is the smallest time reaching the demand") {
  const CumulativeRate c(RateFunction::sinusoidal(1.0, 0.5, 0.3));
  for (double x : {1e-6, 0.01, 1.0, 7.5, 250.0}) {
    for (double origin : {0.0, 1.0, 33.3}) {
      const double y = c.inverse(x, origin);
      CHECK(y >= origin);
      CHECK(std::abs(c.integrate(origin, y) - x) < kTol * std::max(1.0, x));
    }
  }
}

TEST_CASE("cumulative value starts at zero and increases") {
  const CumulativeRate c(tvps::make_service_rate(sr_spec(0.1, 0.5, 0.5), RateFunction::sinusoidal(1, 0.2, 0.01)));
  CHECK(c.value(0.0) == 0.0);
  double prev = 0.0;
  for (int i = 1; i < 2000; ++i) {
    const double v = c.value(i * 0.37);
    REQUIRE(v > prev);
    prev = v;
  }
}
