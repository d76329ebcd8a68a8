#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles/oracles.hpp"
#include "tvps/random.hpp"

using tvps::RandomStream;

TEST_CASE("same seed material gives the same sequence") {
  RandomStream a(42, 7), b(42, 7);
  for (int i = 0; i < 1000; ++i) REQUIRE(a.next_u64() == b.next_u64());
}

TEST_CASE("replication index and names separate streams") {
  RandomStream a(42, 0), b(42, 1);
  CHECK(a.next_u64() != b.next_u64());
  const RandomStream root(42, 0);
  RandomStream x = root.split("arrivals"), y = root.split("sizes");
  CHECK(x.next_u64() != y.next_u64());
}

TEST_CASE("children do not depend on draws from the parent") {
  RandomStream parent(5, 3);
  RandomStream before = parent.split("probe");
  for (int i = 0; i < 100; ++i) parent.uniform();
  RandomStream after = parent.split("probe");
  for (int i = 0; i < 100; ++i) REQUIRE(before.uniform() == after.uniform());
}

TEST_CASE("uniform stays inside the open unit interval") {
  RandomStream r(1, 1);
  std::vector<double> u(100000);
  for (double& v : u) {
    v = r.uniform();
    REQUIRE(v > 0.0);
    REQUIRE(v < 1.0);
  }
  CHECK(oracle::ks_statistic(u, [](double x) { return x; }) < oracle::ks_critical_01(u.size()));
}

TEST_CASE("standard normal has mean 0 and variance 1") {
  RandomStream r(2, 0);
  std::vector<double> z(200000);
  for (double& v : z) v = r.standard_normal();
  const auto m = oracle::moments(z);
  CHECK(std::abs(m.mean) < 4.0 / std::sqrt(z.size()));
  CHECK(m.var == doctest::Approx(1.0).epsilon(0.02));
  CHECK(oracle::ks_statistic(z, oracle::normal_cdf) < oracle::ks_critical_01(z.size()));
}
