#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "support/stats.hpp"
#include "tcsim/rng.hpp"

using namespace tcsim;

TEST_CASE("identical keys reproduce identical draws; distinct keys differ") {
  Rng a(42, "lane", 7), b(42, "lane", 7);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());

  Rng c(42, "lane", 8), d(42, "other", 7), e(43, "lane", 7);
  Rng base(42, "lane", 7);
  // A few collisions among single draws would be astronomically unlikely.
  bool all_equal_c = true, all_equal_d = true, all_equal_e = true;
  for (int i = 0; i < 8; ++i) {
    const std::uint64_t x = base.next_u64();
    all_equal_c &= (c.next_u64() == x);
    all_equal_d &= (d.next_u64() == x);
    all_equal_e &= (e.next_u64() == x);
  }
  CHECK_FALSE(all_equal_c);
  CHECK_FALSE(all_equal_d);
  CHECK_FALSE(all_equal_e);
}

TEST_CASE("child keys: distinct parents give distinct families, same parent repeats") {
  const StreamKey a{9, "lane", 3};
  const StreamKey b{9, "lane", 4};   // same lane, different index
  const StreamKey c{9, "other", 3};  // different lane
  CHECK(a.child("node").root == StreamKey{9, "lane", 3}.child("node").root);
  CHECK(a.child("node").root != b.child("node").root);
  CHECK(a.child("node").root != c.child("node").root);
  CHECK(a.child("node").root != a.child("edge").root);
  CHECK(a.child("node").index == 0);
}

TEST_CASE("uniform, normal and exponential moments") {
  Rng rng(1, "moments", 0);
  const int n = 200000;
  std::vector<double> u(n), z(n), e(n);
  for (int i = 0; i < n; ++i) {
    u[i] = rng.uniform();
    z[i] = rng.normal();
    e[i] = rng.exponential();
  }
  const auto mu = teststat::moments(u);
  CHECK(std::fabs(mu.mean - 0.5) <= 3.0 * mu.se_mean);
  CHECK(std::fabs(mu.var - 1.0 / 12.0) <= 3.0 * mu.se_var);
  const auto mz = teststat::moments(z);
  CHECK(std::fabs(mz.mean) <= 3.0 * mz.se_mean);
  CHECK(std::fabs(mz.var - 1.0) <= 3.0 * mz.se_var);
  const auto me = teststat::moments(e);
  CHECK(std::fabs(me.mean - 1.0) <= 3.0 * me.se_mean);
  CHECK(std::fabs(me.var - 1.0) <= 3.0 * me.se_var);
}

TEST_CASE("poisson sampler: small and chunked-large means") {
  Rng rng(2, "poisson", 0);
  for (double mean : {0.5, 1.0, 7.0, 45.0, 120.0}) {
    const int n = 50000;
    std::vector<double> xs(n);
    for (int i = 0; i < n; ++i) xs[i] = static_cast<double>(rng.poisson(mean));
    const auto m = teststat::moments(xs);
    CHECK(std::fabs(m.mean - mean) <= 3.5 * m.se_mean);
    CHECK(std::fabs(m.var - mean) <= 3.5 * m.se_var);
  }
}

TEST_CASE("binomial sampler moments") {
  Rng rng(3, "binom", 0);
  const int n = 50000;
  std::vector<double> xs(n);
  for (int i = 0; i < n; ++i) xs[i] = static_cast<double>(rng.binomial(40, 0.3));
  const auto m = teststat::moments(xs);
  CHECK(std::fabs(m.mean - 12.0) <= 3.0 * m.se_mean);
  CHECK(std::fabs(m.var - 40 * 0.3 * 0.7) <= 3.0 * m.se_var);
}

TEST_CASE("streams with distinct lanes or indices are empirically uncorrelated") {
  const int n = 10000;
  std::vector<double> a(n), b(n), c(n);
  for (int i = 0; i < n; ++i) {
    a[i] = Rng(5, "laneA", static_cast<std::uint64_t>(i)).normal();
    b[i] = Rng(5, "laneB", static_cast<std::uint64_t>(i)).normal();
    c[i] = Rng(5, "laneA", static_cast<std::uint64_t>(i + n)).normal();
  }
  const double limit = 4.0 / std::sqrt(static_cast<double>(n));
  CHECK(std::fabs(teststat::correlation(a, b)) < limit);
  CHECK(std::fabs(teststat::correlation(a, c)) < limit);
}
