#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "tvps/controls.hpp"
#include "tvps/random.hpp"

using namespace tvps;

namespace {

ControlSpec spec(ControlKind kind, double s, double ca2, double cs2, double beta = 1.0) {
  ControlSpec c;
  c.kind = kind;
  c.target_s = s;
  c.ca2 = ca2;
  c.cs2 = cs2;
  c.beta = beta;
  return c;
}

// SCVs of the five pairs: EXP 1, ER 0.5, LN 2.
const std::vector<std::pair<double, double>> kPairs = {{1, 1}, {0.5, 0.5}, {2, 2}, {0.5, 2}, {2, 0.5}};

}  // namespace

TEST_CASE("variability factor examples") {
  auto v = variability_factors(1, 1);
  CHECK(v.fcfs == 1.0);
  CHECK(v.ps == 1.0);
  v = variability_factors(0.5, 0.5);
  CHECK(v.fcfs == 0.5);
  CHECK(std::abs(v.ps - 0.6667) < 5e-5);
  v = variability_factors(0.5, 2);
  CHECK(v.fcfs == 1.25);
  CHECK(std::abs(v.ps - 0.8333) < 5e-5);
}

TEST_CASE("variability factors match the printed table") {
  // Printed rows; the last V_PS entry is truncated rather than rounded.
  struct Row {
    double ca2, cs2, fcfs, ps;
  };
  for (const Row& r : {Row{1, 1, 1, 1}, Row{0.5, 0.5, 0.5, 0.6667}, Row{2, 2, 2, 1.3333}, Row{0.5, 2, 1.25, 0.8333},
                       Row{2, 0.5, 1.25, 1.6666}}) {
    const auto v = variability_factors(r.ca2, r.cs2);
    CHECK(std::abs(v.fcfs - r.fcfs) <= 1e-4);
    CHECK(std::abs(v.ps - r.ps) <= 1e-4);
    CHECK(v.fcfs == spec(ControlKind::SquareRoot, 1, r.ca2, r.cs2).v_fcfs());
    CHECK(v.ps == spec(ControlKind::SquareRoot, 1, r.ca2, r.cs2).v_ps());
  }
}

TEST_CASE("square-root control examples") {
  CHECK(mu_sr(1.0, spec(ControlKind::SquareRoot, 0.1, 1, 1)) == doctest::Approx(11.0).epsilon(1e-14));
  // V_FCFS = 0.5 from ca2 = cs2 = 0.5.
  const double expected = (1.1 + std::sqrt(1.01)) / 0.2;
  CHECK(mu_sr(1.0, spec(ControlKind::SquareRoot, 0.1, 0.5, 0.5)) == doctest::Approx(expected).epsilon(1e-14));
  CHECK(std::abs(expected - 10.52494) < 1e-5);

  double prev = 0.0;
  for (double s : {1e-3, 5e-4, 1e-4, 1e-5, 1e-6}) {
    const double mu = mu_sr(1.0, spec(ControlKind::SquareRoot, s, 0.5, 0.5));
    CHECK(mu > prev);
    prev = mu;
  }
  CHECK(prev > 1e5);
}

TEST_CASE("difference-matching control examples") {
  CHECK(mu_dm(1.0, spec(ControlKind::DifferenceMatching, 10, 0.5, 0.5)) == doctest::Approx(1.0 + (2.0 / 3.0) / 10));
  CHECK(std::abs(mu_dm(1.0, spec(ControlKind::DifferenceMatching, 10, 0.5, 0.5)) - 1.06667) < 1e-5);
  CHECK(mu_dm(1.2, spec(ControlKind::DifferenceMatching, 0.1, 1, 1)) == doctest::Approx(11.2).epsilon(1e-15));
  for (auto [ca2, cs2] : kPairs) {
    const auto c = spec(ControlKind::DifferenceMatching, 0.1, ca2, cs2, 1.7);
    for (double lam : {0.8, 0.93, 1.0, 1.2}) {
      CHECK(mu_dm(lam, c) - c.beta * lam == doctest::Approx(c.beta * c.v_ps() / c.target_s).epsilon(1e-12));
    }
  }
}

TEST_CASE("fcfs predictor") {
  const auto c = spec(ControlKind::SquareRoot, 0.1, 0.5, 0.5);
  CHECK(std::abs(predict_response_fcfs(mu_sr(1.0, c), 1.0, c) - 0.1) < 1e-9);
  CHECK(predict_response_fcfs(10.0, 1e-12, c) == doctest::Approx(0.1).epsilon(1e-9));
  CHECK(predict_response_fcfs(2.0, 1.0, spec(ControlKind::SquareRoot, 1, 1, 1)) == doctest::Approx(1.0));
  CHECK_THROWS_AS(predict_response_fcfs(1.0, 1.0, c), UnstableError);
  CHECK_THROWS_AS(predict_response_fcfs(0.5, 1.0, c), UnstableError);
}

TEST_CASE("ps predictor") {
  const auto c = spec(ControlKind::DifferenceMatching, 10, 0.5, 0.5);
  CHECK(std::abs(predict_response_ps(mu_dm(1.0, c), 1.0, c) - 10.0) < 1e-9);
  CHECK(predict_response_ps(4.0, 1e-12, c) == doctest::Approx(0.25 * c.v_ps()).epsilon(1e-9));
  CHECK(predict_response_ps(2.0, 1.0, spec(ControlKind::DifferenceMatching, 1, 1, 1)) == doctest::Approx(1.0));
  CHECK_THROWS_AS(predict_response_ps(1.0, 1.0, c), UnstableError);
}

TEST_CASE("light-traffic constants") {
  auto lt = light_traffic_constants(spec(ControlKind::DifferenceMatching, 0.1, 0.5, 0.5));
  CHECK(lt.sr == doctest::Approx(10.0));
  CHECK(std::abs(lt.dm - 6.667) < 5e-4);
  lt = light_traffic_constants(spec(ControlKind::DifferenceMatching, 0.1, 2, 0.5));
  CHECK(lt.sr == doctest::Approx(10.0));
  CHECK(std::abs(lt.dm - 16.666) <= 1e-3);
  lt = light_traffic_constants(spec(ControlKind::DifferenceMatching, 0.1, 1, 1));
  CHECK(lt.sr == doctest::Approx(10.0));
  CHECK(lt.dm == doctest::Approx(10.0));
}

TEST_CASE("controls coincide for exponential pairs") {
  for (double s : {0.01, 0.1, 1.0, 10.0, 1000.0}) {
    const auto sr = spec(ControlKind::SquareRoot, s, 1, 1);
    const auto dm = spec(ControlKind::DifferenceMatching, s, 1, 1);
    for (int i = 0; i <= 1000; ++i) {
      const double lam = 0.8 + 0.4 * i / 1000.0;
      REQUIRE(std::abs(mu_sr(lam, sr) - mu_dm(lam, dm)) <= 1e-12 * std::max(1.0, mu_dm(lam, dm)));
    }
  }
}

TEST_CASE("controls converge as s grows and blow up as s shrinks") {
  for (auto [ca2, cs2] : kPairs) {
    double prev_gap = INFINITY;
    for (double s : {1e2, 1e3, 1e4}) {
      double gap = 0.0;
      for (int i = 0; i <= 200; ++i) {
        const double lam = 0.8 + 0.4 * i / 200.0;
        const double sr = mu_sr(lam, spec(ControlKind::SquareRoot, s, ca2, cs2));
        const double dm = mu_dm(lam, spec(ControlKind::DifferenceMatching, s, ca2, cs2));
        gap = std::max(gap, std::abs(sr - dm) / dm);
        CHECK(std::abs(sr - lam) / lam < 10.0 / s);
      }
      CHECK(gap <= prev_gap);
      prev_gap = gap;
    }
    CHECK(prev_gap <= 1e-3);
    CHECK(mu_sr(1.0, spec(ControlKind::SquareRoot, 1e-6, ca2, cs2)) > 1e5);
    CHECK(mu_dm(1.0, spec(ControlKind::DifferenceMatching, 1e-6, ca2, cs2)) > 1e5);
  }
}

TEST_CASE("both controls keep traffic intensity below one and hit the target") {
  RandomStream rng(3, 0);
  for (int i = 0; i < 2000; ++i) {
    const double ca2 = 0.05 + 5 * rng.uniform();
    const double cs2 = 0.05 + 5 * rng.uniform();
    const double s = std::pow(10.0, -3 + 6 * rng.uniform());
    const double beta = 0.1 + 3 * rng.uniform();
    const double lam = 0.01 + 3 * rng.uniform();
    const auto sr = spec(ControlKind::SquareRoot, s, ca2, cs2, beta);
    const auto dm = spec(ControlKind::DifferenceMatching, s, ca2, cs2, beta);
    REQUIRE(sr_discriminant(lam, sr) >= 0.0);
    const double m_sr = mu_sr(lam, sr);
    const double m_dm = mu_dm(lam, dm);
    REQUIRE(lam * beta / m_sr < 1.0);
    REQUIRE(lam * beta / m_dm < 1.0);
    REQUIRE(predict_response_fcfs(m_sr, lam, sr) == doctest::Approx(s).epsilon(1e-9));
    REQUIRE(predict_response_ps(m_dm, lam, dm) == doctest::Approx(s).epsilon(1e-9));
  }
}

TEST_CASE("square-root control is nondecreasing in the arrival rate") {
  for (auto [ca2, cs2] : kPairs) {
    for (double s : {0.1, 10.0}) {
      const auto c = spec(ControlKind::SquareRoot, s, ca2, cs2);
      double prev = 0.0;
      for (int i = 1; i <= 2000; ++i) {
        const double v = mu_sr(i * 1e-3, c);
        REQUIRE(v >= prev);
        prev = v;
      }
    }
  }
}

TEST_CASE("service rate functions") {
  const auto lam = RateFunction::sinusoidal(1.0, 0.2, 0.01);
  ControlSpec k = spec(ControlKind::Constant, 1, 1, 1);
  CHECK_THROWS_AS(make_service_rate(k, lam), std::invalid_argument);
  k.constant_rate = 2.5;
  const auto mu = make_service_rate(k, lam);
  CHECK(mu(123.0) == 2.5);
  CHECK_FALSE(mu.period().has_value());

  const auto dm = make_service_rate(spec(ControlKind::DifferenceMatching, 0.1, 0.5, 0.5), lam);
  for (double t : {0.0, 100.0, 555.5}) CHECK(dm(t) == doctest::Approx(lam(t) + 10.0 * 2.0 / 3.0));

  ControlSpec bad = spec(ControlKind::SquareRoot, -1, 1, 1);
  CHECK_THROWS_AS(make_service_rate(bad, lam), std::invalid_argument);
  bad = spec(ControlKind::DifferenceMatching, 1, 0, 1);
  CHECK_THROWS_AS(make_service_rate(bad, lam), std::invalid_argument);
}

TEST_CASE("control names and formatting") {
  CHECK(parse_control("SR") == ControlKind::SquareRoot);
  CHECK(parse_control("dm") == ControlKind::DifferenceMatching);
  CHECK(parse_control("const") == ControlKind::Constant);
  CHECK_THROWS_AS(parse_control("pid"), std::invalid_argument);
  CHECK(to_string(ControlKind::SquareRoot) == "sr");
  CHECK(format_significant(20.0 / 3.0, 4) == "6.667");
  CHECK(format_significant(10.0, 4) == "10");
  CHECK(format_significant(0.15, 4) == "0.15");
}
