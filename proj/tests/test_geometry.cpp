#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "expfit/geometry.hpp"
#include "expfit/oracle.hpp"
#include "expfit/rng.hpp"

using namespace expfit;

namespace {
constexpr double kPi = 3.14159265358979323846;

SamplingSet equispaced(int count, double spacing) {
  std::vector<double> pts(count);
  for (int k = 0; k < count; ++k) pts[k] = k * spacing;
  return SamplingSet(pts);
}

SamplingSet random_set(Rng& rng, int count, double r) {
  std::vector<double> pts;
  while (true) {
    pts.clear();
    for (int k = 0; k < count; ++k) pts.push_back(rng.uniform(0.0, r));
    std::sort(pts.begin(), pts.end());
    bool distinct = true;
    for (int k = 1; k < count; ++k)
      if (pts[k] - pts[k - 1] < 1e-6) distinct = false;
    if (distinct) return SamplingSet(pts);
  }
}
}  // namespace

TEST_CASE("SamplingSet invariants") {
  CHECK_THROWS_AS(SamplingSet({}), std::invalid_argument);
  CHECK_THROWS_AS(SamplingSet({-1.0, 2.0}), std::invalid_argument);
  CHECK_THROWS_AS(SamplingSet({0.0, 0.0}), std::invalid_argument);
  const SamplingSet s({0.0, 0.5, 3.0});
  CHECK(s.r() == 3.0);
  CHECK(s.min_gap() == 0.5);
}

TEST_CASE("covering_number examples") {
  CHECK(covering_number(SamplingSet({5.0}), 0.1) == 1);
  CHECK(covering_number(SamplingSet({5.0}), 100.0) == 1);

  std::vector<double> grid;
  for (int k = 0; k <= 10; ++k) grid.push_back(k);
  CHECK(covering_number(SamplingSet(grid), 1.0) == 6);

  CHECK(covering_number(SamplingSet({0.0, 0.5, 3.0}), 1.0) == 2);
  CHECK_THROWS_AS(covering_number(SamplingSet({1.0}), 0.0), std::invalid_argument);
  // closed intervals pick up a point exactly at distance epsilon
  CHECK(covering_number(SamplingSet({0.0, 1.0}), 1.0) == 1);
}

TEST_CASE("covering_number agrees with the exhaustive oracle") {
  Rng rng(101);
  for (int trial = 0; trial < 60; ++trial) {
    const SamplingSet s = random_set(rng, 2 + static_cast<int>(rng.uniform(0, 9)), 10.0);
    const double eps = rng.uniform(0.05, 12.0);
    CHECK(covering_number(s, eps) == oracle::brute_covering(s, eps));
  }
}

TEST_CASE("covering_number is nonincreasing in epsilon; equals |S| strictly below min gap") {
  Rng rng(103);
  for (int trial = 0; trial < 30; ++trial) {
    const SamplingSet s = random_set(rng, 8, 20.0);
    long long prev = covering_number(s, 1e-9);
    for (double eps : {0.01, 0.1, 0.5, 1.0, 3.0, 10.0, 25.0}) {
      const long long c = covering_number(s, eps);
      CHECK(c <= prev);
      prev = c;
    }
    CHECK(covering_number(s, s.min_gap() * (1 - 1e-12)) == s.size());
  }
}

TEST_CASE("langer_bound") {
  CHECK(langer_bound(4, 0.1, 10.0) == 15);
  CHECK(langer_bound(4, 1.0, 60.0) == 34);
  CHECK(langer_bound(2, 0.0, 12345.0) == 3);
  // pi-cancellation snap: lambda * R = 16 pi exactly in exact arithmetic
  CHECK(langer_bound(1, 0.5, 32.0 * kPi) == 16);
  CHECK_THROWS_AS(langer_bound(0, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("metric_span: equispaced 7 points, N=2, lambda=0") {
  const SamplingSet s = equispaced(7, 1.0);
  const SpanReport rep = metric_span(s, 2, 0.0);
  CHECK(rep.M_bound == 3);
  CHECK(rep.omega == 4.0);  // (R/m) * (m + 1 - M) = 1 * 4
  CHECK(rep.argmax_epsilon == 1.0);
  CHECK(rep.covering_at_argmax == 7);
}

TEST_CASE("metric_span: too few points gives omega = 0") {
  const SamplingSet s = equispaced(3, 1.0);  // M(2, 0, R) = 3 >= |S|
  const SpanReport rep = metric_span(s, 2, 0.0);
  CHECK(rep.omega == 0.0);
  CHECK(rep.argmax_epsilon == 0.0);
}

TEST_CASE("metric_span: M + 1 points give omega = min gap") {
  Rng rng(107);
  for (int trial = 0; trial < 40; ++trial) {
    // N = 2, lambda = 0 -> M = 3; any 4-point set has omega = min gap.
    const SamplingSet s = random_set(rng, 4, 10.0);
    const SpanReport rep = metric_span(s, 2, 0.0);
    REQUIRE(rep.M_bound == 3);
    CHECK(rep.omega == s.min_gap());
  }
}

TEST_CASE("metric_span: equidistant closed form, exact") {
  // dyadic spacings keep the arithmetic exact
  for (double h : {0.25, 0.5, 1.0, 2.0}) {
    for (int m : {8, 12, 31}) {
      const SamplingSet s = equispaced(m + 1, h);
      for (int n_deg : {2, 3}) {
        for (double lambda : {0.0, 0.125}) {
          const long long m_bound = langer_bound(n_deg, lambda, s.r());
          if (m + 1 <= m_bound || m_bound == 0) continue;
          const SpanReport rep = metric_span(s, n_deg, lambda);
          CHECK(rep.omega == h * static_cast<double>(m + 1 - m_bound));
        }
      }
    }
  }
}

TEST_CASE("metric_span matches the brute-force oracle on random sets") {
  Rng rng(109);
  for (int trial = 0; trial < 25; ++trial) {
    const int count = 3 + static_cast<int>(rng.uniform(0, 10));
    const SamplingSet s = random_set(rng, count, 8.0);
    const int n_deg = 1 + static_cast<int>(rng.uniform(0, 3));
    const double lambda = rng.uniform(0.0, 2.0);
    const double ours = metric_span(s, n_deg, lambda).omega;
    const double brute = oracle::brute_span(s, n_deg, lambda, 20000);
    if (std::isinf(ours)) {
      CHECK(std::isinf(brute));
    } else {
      CHECK(ours == doctest::Approx(brute).epsilon(1e-9));
    }
  }
}

TEST_CASE("metric_span monotone under superset with the same R") {
  Rng rng(113);
  for (int trial = 0; trial < 25; ++trial) {
    SamplingSet small = random_set(rng, 6, 10.0);
    std::vector<double> pts = small.points();
    // keep R: insert interior points only
    for (int extra = 0; extra < 4; ++extra)
      pts.push_back(rng.uniform(pts.front(), pts.back() * 0.999));
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    const SamplingSet big(pts);
    REQUIRE(big.r() == small.r());
    CHECK(metric_span(big, 2, 0.5).omega >= metric_span(small, 2, 0.5).omega);
  }
}

TEST_CASE("extremal span among M+1 point sets with fixed R") {
  // omega <= R / M, equality only for the equidistant configuration
  Rng rng(127);
  const int n_deg = 2;
  const double lambda = 0.0;  // M = 3
  const double r = 9.0;
  const SamplingSet equi = equispaced(4, 3.0);
  CHECK(metric_span(equi, n_deg, lambda).omega == r / 3.0);
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<double> pts = {0.0, 3.0, 6.0, 9.0};
    const int k = 1 + static_cast<int>(rng.uniform(0, 2));
    pts[k] += rng.uniform(-1.0, 1.0);  // perturb an interior point
    std::sort(pts.begin(), pts.end());
    if (pts[1] - pts[0] < 1e-9 || pts[2] - pts[1] < 1e-9 || pts[3] - pts[2] < 1e-9)
      continue;
    const double omega = metric_span(SamplingSet(pts), n_deg, lambda).omega;
    CHECK(omega < r / 3.0 + 1e-15);
  }
}

TEST_CASE("metric_span: M == 0 is the unbounded-supremum case") {
  const SpanReport rep = metric_span(SamplingSet({0.0, 1.0}), 1, 0.0);
  CHECK(std::isinf(rep.omega));
}

TEST_CASE("central_density") {
  SUBCASE("pi-lattice tails approach 1/pi") {
    std::vector<double> pts;
    for (int n = 1; n <= 100; ++n) pts.push_back(kPi * n);
    const auto d = central_density(SamplingSet(pts), {100.0 * kPi});
    CHECK(d[0] == doctest::Approx(1.0 / kPi).epsilon(1e-12));

    std::vector<double> half;
    for (int n = 0; n <= 99; ++n) half.push_back((0.5 + n) * kPi);
    const auto d2 = central_density(SamplingSet(half), {100.0 * kPi});
    CHECK(d2[0] == doctest::Approx(1.0 / kPi).epsilon(0.01));
  }
  SUBCASE("singleton") {
    CHECK(central_density(SamplingSet({0.0}), {1.0})[0] == 1.0);
  }
  SUBCASE("grid validation") {
    CHECK_THROWS_AS(central_density(SamplingSet({0.0}), {}), std::invalid_argument);
    CHECK_THROWS_AS(central_density(SamplingSet({0.0}), {2.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(central_density(SamplingSet({0.0}), {0.0}), std::invalid_argument);
  }
}

TEST_CASE("sample_gap") {
  CHECK(sample_gap(2, 1.0, 6.0, 1.0) == doctest::Approx(3.0 / (4.0 * kPi)).epsilon(1e-15));
  CHECK(sample_gap(2, 2.0, 10.0, 1.0) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  // homogeneous in the frequency gap
  const double base = sample_gap(3, 0.7, 5.0, 1.0);
  for (double scale : {0.5, 1e-3, 1e-9})
    CHECK(sample_gap(3, 0.7, 5.0, scale) == doctest::Approx(base * scale).epsilon(1e-12));
  CHECK_THROWS_AS(sample_gap(2, 0.0, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("choose_s0 examples") {
  SUBCASE("single gap pi on (0, 1]") {
    const auto [s0, sep] = choose_s0({kPi}, 2.0, 1, 100000);
    CHECK(s0 == 1.0);
    CHECK(sep == doctest::Approx(kPi).epsilon(1e-12));
  }
  SUBCASE("single gap 2 pi on (0, 1] peaks at the middle") {
    const auto [s0, sep] = choose_s0({2.0 * kPi}, 2.0, 1, 100000);
    CHECK(s0 == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(sep == doctest::Approx(kPi).epsilon(1e-9));
  }
  SUBCASE("tiny window stays monotone") {
    const double q = 3.0, upper = 0.01;
    const auto [s0, sep] = choose_s0({q}, 2.0 * upper, 1, 50000);
    CHECK(s0 == doctest::Approx(upper).epsilon(1e-12));
    CHECK(sep == doctest::Approx(q * upper).epsilon(1e-9));
  }
  SUBCASE("validation") {
    CHECK_THROWS_AS(choose_s0({}, 1.0, 1, 100), std::invalid_argument);
    CHECK_THROWS_AS(choose_s0({-1.0}, 1.0, 1, 100), std::invalid_argument);
    CHECK_THROWS_AS(choose_s0({1.0}, 1.0, 1, 0), std::invalid_argument);
  }
}

TEST_CASE("choose_s0 achieves the theoretical separation floor") {
  Rng rng(131);
  for (int trial = 0; trial < 40; ++trial) {
    const int n_deg = 2 + static_cast<int>(rng.uniform(0, 4));
    const double lambda = rng.uniform(0.3, 2.0);
    const double r = rng.uniform(2.0, 40.0);
    // random feasible frequencies with a definite minimal gap
    std::vector<double> freqs;
    double gap = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n_deg; ++j) freqs.push_back(rng.uniform(-lambda, lambda));
    std::sort(freqs.begin(), freqs.end());
    bool ok = true;
    for (int j = 1; j < n_deg; ++j) {
      gap = std::min(gap, freqs[j] - freqs[j - 1]);
      if (freqs[j] - freqs[j - 1] < 1e-3) ok = false;
    }
    if (!ok) continue;
    std::vector<double> pair_gaps;
    for (int i = 0; i < n_deg; ++i)
      for (int j = i + 1; j < n_deg; ++j) pair_gaps.push_back(std::abs(freqs[i] - freqs[j]));

    const auto [s0, sep] = choose_s0(pair_gaps, r, n_deg, 10000);
    CHECK(s0 > 0.0);
    CHECK(s0 <= r / (2.0 * n_deg) + 1e-15);
    const double floor = separation_floor(n_deg, lambda, r, gap);
    CHECK(sep >= floor);
  }
}
