#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "expfit/bounds.hpp"
#include "expfit/errors.hpp"
#include "expfit/geometry.hpp"

using namespace expfit;

TEST_CASE("turan_nazarov_factor") {
  CHECK(turan_nazarov_factor(1, 123.0, 0.01) == 1.0);
  CHECK(turan_nazarov_factor(2, 60.0, 1.0) == doctest::Approx(18960.0).epsilon(1e-14));
  CHECK(turan_nazarov_factor(5, 1.0 / 316.0, 1.0) == 1.0);
  CHECK_THROWS_AS(turan_nazarov_factor(2, 1.0, 0.0), NoCertificateError);
}

TEST_CASE("recovery_bounds") {
  SUBCASE("zero noise gives zero bounds") {
    const auto b = recovery_bounds(2, 35, 60.0, 1.0, 0.5, 0.0, {1.0, 2.0});
    CHECK(b.amp_bound == 0.0);
    CHECK(b.freq_bounds == std::vector<double>{0.0, 0.0});
  }
  SUBCASE("formula cross-check via an independent log-space evaluation") {
    const int n_terms = 2, n = 35;
    const double r = 60.0, omega = 1.0, rho = 3.0 / (4.0 * 3.14159265358979323846);
    const double delta = 1e-8;
    const auto b = recovery_bounds(n_terms, n, r, omega, rho, delta, {1.0});
    const double log_expected = std::log(2.0) + 0.5 * std::log(2.0 * n) +
                                2.0 * n_terms * (std::log(632.0 * r) - std::log(rho * omega)) +
                                std::log(delta);
    CHECK(std::log(b.amp_bound) == doctest::Approx(log_expected).epsilon(1e-12));
    CHECK(b.freq_bounds[0] == b.amp_bound);
  }
  SUBCASE("linear in delta") {
    const auto b1 = recovery_bounds(2, 20, 10.0, 0.5, 0.1, 1e-8, {1.0});
    const auto b2 = recovery_bounds(2, 20, 10.0, 0.5, 0.1, 2e-8, {1.0});
    CHECK(b2.amp_bound == doctest::Approx(2.0 * b1.amp_bound).epsilon(1e-14));
  }
  SUBCASE("no certificate") {
    CHECK_THROWS_AS(recovery_bounds(2, 20, 10.0, 0.0, 0.1, 1e-8, {1.0}),
                    NoCertificateError);
    CHECK_THROWS_AS(recovery_bounds(2, 20, 10.0, 0.5, 0.0, 1e-8, {1.0}),
                    NoCertificateError);
  }
}

TEST_CASE("decoupled_bounds") {
  const std::vector<double> amps = {0.5, 2.0};
  SUBCASE("kappa = 1 reduces to the fitting shape without sqrt(2n)") {
    const auto dec = decoupled_bounds(2, 60.0, 1.0, 0.5, 1.0, 1e-8, amps);
    const auto fit = recovery_bounds(2, 35, 60.0, 1.0, 0.5, 1e-8, amps);
    CHECK(dec.amp_bound ==
          doctest::Approx(fit.amp_bound / std::sqrt(2.0 * 35.0)).epsilon(1e-12));
  }
  SUBCASE("bounds blow up as 1/kappa") {
    const auto big = decoupled_bounds(2, 60.0, 1.0, 0.5, 1e-6, 1e-8, amps);
    const auto one = decoupled_bounds(2, 60.0, 1.0, 0.5, 1.0, 1e-8, amps);
    CHECK(big.amp_bound == doctest::Approx(one.amp_bound * 1e6).epsilon(1e-12));
  }
  SUBCASE("zero noise") {
    const auto b = decoupled_bounds(2, 60.0, 1.0, 0.5, 0.3, 0.0, amps);
    CHECK(b.amp_bound == 0.0);
  }
  SUBCASE("freq bounds scale as 1/|a_j|") {
    const auto b = decoupled_bounds(2, 60.0, 1.0, 0.5, 0.3, 1e-8, amps);
    CHECK(b.freq_bounds[0] == doctest::Approx(b.amp_bound / 0.5));
    CHECK(b.freq_bounds[1] == doctest::Approx(b.amp_bound / 2.0));
  }
}

TEST_CASE("monotonicity of the report quantities") {
  const std::vector<double> amps = {1.0};
  const auto base = make_bound_report(2, 30, 20.0, 1.0, 0.1, 0.5, 25, 1.0, 1e-8, false, amps);
  SUBCASE("nonincreasing in omega") {
    const auto better = make_bound_report(2, 30, 20.0, 1.0, 0.1, 1.0, 25, 1.0, 1e-8, false, amps);
    CHECK(better.amp_bound <= base.amp_bound);
    CHECK(better.tn_factor <= base.tn_factor);
  }
  SUBCASE("nondecreasing in R") {
    const auto worse = make_bound_report(2, 30, 40.0, 1.0, 0.1, 0.5, 25, 1.0, 1e-8, false, amps);
    CHECK(worse.amp_bound >= base.amp_bound);
  }
  SUBCASE("nondecreasing in N") {
    const auto worse = make_bound_report(3, 30, 20.0, 1.0, 0.1, 0.5, 25, 1.0, 1e-8, false, amps);
    CHECK(worse.amp_bound >= base.amp_bound);
  }
  SUBCASE("nondecreasing in delta and 1/kappa") {
    const auto worse = make_bound_report(2, 30, 20.0, 1.0, 0.1, 0.5, 25, 0.5, 2e-8, true, amps);
    const auto dec = make_bound_report(2, 30, 20.0, 1.0, 0.1, 0.5, 25, 1.0, 1e-8, true, amps);
    CHECK(worse.amp_bound >= dec.amp_bound);
  }
  SUBCASE("no certificate marks everything infinite") {
    const auto rep = make_bound_report(2, 30, 20.0, 1.0, 0.1, 0.0, 25, 1.0, 1e-8, false, amps);
    CHECK(std::isinf(rep.tn_factor));
    CHECK(std::isinf(rep.amp_bound));
  }
}

TEST_CASE("doubling the equidistant sample count improves the span by about M/2") {
  // omega(m = M) = R/M; omega(m = 2M) = R(M+1)/(2M): ratio (M+1)/2
  for (int n_deg : {4, 5, 6}) {  // lambda = 0, so M = N^2 - 1 = 15, 24, 35
    const int m_bound = n_deg * n_deg - 1;
    const double r = 30.0;
    std::vector<double> coarse, fine;
    for (int k = 0; k <= m_bound; ++k) coarse.push_back(r * k / m_bound);
    for (int k = 0; k <= 2 * m_bound; ++k) fine.push_back(r * k / (2.0 * m_bound));
    const double w1 = metric_span(SamplingSet(coarse), n_deg, 0.0).omega;
    const double w2 = metric_span(SamplingSet(fine), n_deg, 0.0).omega;
    const double ratio = w2 / w1;
    CHECK(ratio >= m_bound / 4.0);
    CHECK(ratio <= m_bound);
  }
}
