#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <fstream>

#include "expfit/decouple.hpp"
#include "expfit/errors.hpp"
#include "expfit/experiments.hpp"
#include "expfit/rng.hpp"

using namespace expfit;

namespace {
constexpr double kPi = 3.14159265358979323846;
const double kSqrt2OverPi = std::sqrt(2.0 / kPi);

std::vector<SignalModel> builtins() {
  return {SignalModel::box(), SignalModel::delta_pair()};
}
}  // namespace

TEST_CASE("built-in transforms") {
  const SignalModel box = SignalModel::box();
  CHECK(std::abs(box.fourier(0.0) - Complex(kSqrt2OverPi, 0)) < 1e-15);
  CHECK(std::abs(box.fourier(2.0) - Complex(kSqrt2OverPi * std::sin(2.0) / 2.0, 0)) < 1e-15);
  // removable singularity is smooth
  CHECK(std::abs(box.fourier(1e-6) - box.fourier(0.0)) < 1e-12);

  const SignalModel dp = SignalModel::delta_pair();
  CHECK(std::abs(dp.fourier(kPi) - Complex(-kSqrt2OverPi, 0)) < 1e-14);
}

TEST_CASE("built-in zero sets") {
  const auto bz = SignalModel::box().zero_set(0.0, 10.0 * kPi, 1e-12);
  REQUIRE(bz.size() == 10);  // pi .. 10 pi, origin excluded
  for (int n = 1; n <= 10; ++n) CHECK(bz[n - 1] == doctest::Approx(n * kPi).epsilon(1e-15));
  for (double z : bz) CHECK(std::abs(SignalModel::box().fourier(z)) <= 1e-12);

  const auto dz = SignalModel::delta_pair().zero_set(0.0, 10.0 * kPi, 1e-12);
  REQUIRE(dz.size() == 10);  // (1/2 + n) pi, n = 0..9
  for (int n = 0; n < 10; ++n)
    CHECK(dz[n] == doctest::Approx((0.5 + n) * kPi).epsilon(1e-15));
}

TEST_CASE("numeric zero set of an analytic model") {
  const SignalModel cosine = SignalModel::analytic(
      "cosine", [](double s) { return Complex(std::cos(s), 0.0); });
  const auto zs = cosine.zero_set(0.0, 12.0, 1e-9);
  REQUIRE(zs.size() == 4);  // pi/2, 3pi/2, 5pi/2, 7pi/2 <= 12 < 9pi/2
  for (int n = 0; n < 4; ++n)
    CHECK(zs[n] == doctest::Approx((0.5 + n) * kPi).epsilon(1e-7));
}

TEST_CASE("tabulated model: interpolation and per-segment zeros") {
  std::vector<double> s;
  std::vector<Complex> v;
  for (int k = 0; k <= 4000; ++k) {
    const double x = 12.0 * k / 4000.0;
    s.push_back(x);
    v.emplace_back(std::cos(x), 0.0);
  }
  const SignalModel tab = SignalModel::tabulated("cos-table", s, v);
  CHECK(std::abs(tab.fourier(1.0) - Complex(std::cos(1.0), 0)) < 1e-5);
  CHECK_THROWS_AS(tab.fourier(13.0), std::invalid_argument);

  const auto zs = tab.zero_set(0.0, 12.0, 1e-4);
  REQUIRE(zs.size() == 4);
  for (int n = 0; n < 4; ++n)
    CHECK(zs[n] == doctest::Approx((0.5 + n) * kPi).epsilon(1e-4));
}

TEST_CASE("common_zero_set on the worked pair") {
  const auto models = builtins();
  SUBCASE("component 1 samples the cosine zeros") {
    const auto w1 = common_zero_set(models, 0, 10.0 * kPi, 1e-12);
    REQUIRE(w1.size() == 10);
    for (int n = 0; n < 10; ++n)
      CHECK(w1[n] == doctest::Approx((0.5 + n) * kPi).epsilon(1e-15));
  }
  SUBCASE("component 2 samples the sinc zeros") {
    const auto w2 = common_zero_set(models, 1, 10.0 * kPi, 1e-12);
    REQUIRE(w2.size() == 10);
    for (int n = 1; n <= 10; ++n)
      CHECK(w2[n - 1] == doctest::Approx(n * kPi).epsilon(1e-15));
  }
  SUBCASE("k = 2 disjoint zero sets: W is the other set minus own zeros") {
    // shifted cosine against cosine: zeros interleave, never coincide
    const SignalModel shifted = SignalModel::analytic(
        "shifted", [](double s) { return Complex(std::cos(s - 0.7), 0.0); });
    const std::vector<SignalModel> pair = {SignalModel::delta_pair(), shifted};
    const auto w1 = common_zero_set(pair, 0, 20.0, 1e-9);
    const auto other = shifted.zero_set(0.0, 20.0, 1e-9);
    CHECK(w1.size() == other.size());
  }
  SUBCASE("three generic signals: empty with a diagnostic") {
    const SignalModel third = SignalModel::analytic(
        "third", [](double s) { return Complex(std::cos(1.3 * s + 0.31), 0.0); });
    std::vector<SignalModel> three = builtins();
    three.push_back(third);
    std::string why;
    const auto w1 = common_zero_set(three, 0, 40.0, 1e-9, &why);
    CHECK(w1.empty());
    CHECK(!why.empty());
  }
  SUBCASE("k < 2 rejected") {
    const std::vector<SignalModel> one = {SignalModel::box()};
    CHECK_THROWS_AS(common_zero_set(one, 0, 10.0, 1e-9), std::invalid_argument);
  }
}

TEST_CASE("min_divisor") {
  std::vector<double> w2;
  for (int n = 1; n <= 12; ++n) w2.push_back(n * kPi);
  CHECK(min_divisor(SignalModel::delta_pair(), w2) ==
        doctest::Approx(kSqrt2OverPi).epsilon(1e-12));

  std::vector<double> w1;
  for (int n = 0; n <= 12; ++n) w1.push_back((0.5 + n) * kPi);
  CHECK(min_divisor(SignalModel::box(), w1) ==
        doctest::Approx(kSqrt2OverPi / (12.5 * kPi)).epsilon(1e-12));

  CHECK(min_divisor(SignalModel::box(), {0.3}) ==
        doctest::Approx(std::abs(SignalModel::box().fourier(0.3))).epsilon(1e-15));

  CHECK_THROWS_AS(min_divisor(SignalModel::box(), {kPi}), DivisionHazardError);
  CHECK_THROWS_AS(min_divisor(SignalModel::box(), {}), std::invalid_argument);
}

TEST_CASE("fourier_of_mixture") {
  SUBCASE("single unshifted component is the bare transform") {
    const ShiftMixture mix({MixtureComponent{SignalModel::box(), {0.0}, {Complex(1, 0)}}});
    for (double s : {0.0, 0.7, 3.2})
      CHECK(std::abs(fourier_of_mixture(mix, s) - SignalModel::box().fourier(s)) < 1e-15);
  }
  SUBCASE("vanishes where every transform vanishes") {
    // both components BOX: common zeros pi n kill everything
    const ShiftMixture mix({MixtureComponent{SignalModel::box(), {0.1}, {Complex(2, 1)}},
                            MixtureComponent{SignalModel::box(), {-0.2}, {Complex(0, 1)}}});
    for (int n = 1; n <= 5; ++n) CHECK(std::abs(fourier_of_mixture(mix, n * kPi)) < 1e-14);
  }
  SUBCASE("worked-example witness: decoupled values vanish at eta = 1") {
    const ShiftMixture witness = example3_mixture(1.0);
    const auto [s1, s2] = example3_sets(16);
    for (double s : s1) {
      const Complex c = fourier_of_mixture(witness, s) / SignalModel::box().fourier(s);
      CHECK(std::abs(c) < 1e-12);
    }
    for (double s : s2) {
      const Complex c = fourier_of_mixture(witness, s) / SignalModel::delta_pair().fourier(s);
      CHECK(std::abs(c) < 1e-12);
    }
  }
}

TEST_CASE("assemble_decoupled") {
  const auto models = builtins();
  SUBCASE("decoupling identity: rhs equals the component's exponential polynomial") {
    Rng rng(61);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<MixtureComponent> comps;
      for (int j = 0; j < 2; ++j) {
        std::vector<double> shifts;
        std::vector<Complex> amps;
        for (int q = 0; q < 2; ++q) {
          shifts.push_back(rng.uniform(-0.3, 0.3));
          amps.push_back(std::polar(rng.uniform(0.5, 2.0), rng.uniform(0.0, 6.28)));
        }
        comps.push_back(MixtureComponent{models[j], shifts, amps});
      }
      const ShiftMixture mix(comps);
      for (int j = 0; j < 2; ++j) {
        const auto w = common_zero_set(models, j, 12.0 * kPi, 1e-12);
        std::vector<Complex> meas(w.size());
        for (std::size_t l = 0; l < w.size(); ++l)
          meas[l] = fourier_of_mixture(mix, w[l]);
        const DecoupledSystem sys = assemble_decoupled(meas, models[j], w, j);
        // H_j(s) = sum_q a_q e^{-2 pi i x_q s}
        for (std::size_t l = 0; l < w.size(); ++l) {
          Complex h(0, 0);
          for (int q = 0; q < 2; ++q)
            h += mix.components[j].amplitudes[q] *
                 std::polar(1.0, -kTwoPi * mix.components[j].shifts[q] * w[l]);
          CHECK(std::abs(sys.rhs[l] - h) <= 1e-10 * std::max(1.0, std::abs(h)));
        }
      }
    }
  }
  SUBCASE("kappa recorded") {
    std::vector<double> w2 = {kPi, 2 * kPi};
    const std::vector<Complex> meas = {Complex(1, 0), Complex(1, 0)};
    const DecoupledSystem sys = assemble_decoupled(meas, models[1], w2, 1);
    CHECK(sys.kappa == doctest::Approx(kSqrt2OverPi).epsilon(1e-12));
  }
  SUBCASE("zero samples give zero rhs") {
    std::vector<double> w2 = {kPi, 2 * kPi};
    const std::vector<Complex> meas = {Complex(0, 0), Complex(0, 0)};
    const DecoupledSystem sys = assemble_decoupled(meas, models[1], w2, 1);
    CHECK(sys.rhs == std::vector<Complex>{Complex(0, 0), Complex(0, 0)});
  }
  SUBCASE("division hazard") {
    const std::vector<Complex> meas = {Complex(1, 0)};
    CHECK_THROWS_AS(assemble_decoupled(meas, models[0], {kPi}, 0), DivisionHazardError);
  }
}

TEST_CASE("reconstruct") {
  SUBCASE("round-trip on a certified random mixture") {
    Rng rng(67);
    const auto models = builtins();
    std::vector<MixtureComponent> comps;
    for (int j = 0; j < 2; ++j) {
      // eta = 2 pi max|x| <= ~0.63 < 1 keeps the density criterion satisfied
      const double x1 = rng.uniform(-0.1, -0.02), x2 = rng.uniform(0.02, 0.1);
      comps.push_back(MixtureComponent{
          models[j],
          {x1, x2},
          {std::polar(rng.uniform(0.5, 2.0), rng.uniform(0.0, 6.28)),
           std::polar(rng.uniform(0.5, 2.0), rng.uniform(0.0, 6.28))}});
    }
    const ShiftMixture truth(comps);

    std::vector<ComponentInput> inputs;
    for (int j = 0; j < 2; ++j) {
      const auto w = common_zero_set(models, j, 46.0 * kPi, 1e-12);
      ComponentInput in{models[j]};
      in.sample_points = w;
      in.measured.resize(w.size());
      for (std::size_t l = 0; l < w.size(); ++l)
        in.measured[l] = fourier_of_mixture(truth, w[l]);
      in.noise_bound = 0.0;
      in.num_shifts = 2;
      in.eta = truth.eta(j);
      in.sigma = truth.sigma(j);
      in.init_shifts = truth.components[j].shifts;
      inputs.push_back(std::move(in));
    }
    ReconstructOptions opt;
    opt.starts = 0;
    opt.seed = 17;
    const Reconstruction rec = reconstruct(inputs, opt);
    for (int j = 0; j < 2; ++j) {
      REQUIRE(rec.components[j].certified);
      for (int q = 0; q < 2; ++q) {
        CHECK(std::abs(rec.components[j].shifts[q] -
                       truth.components[j].shifts[q]) < 1e-8);
        CHECK(std::abs(rec.components[j].amplitudes[q] -
                       truth.components[j].amplitudes[q]) < 1e-8);
      }
      CHECK(rec.components[j].bound.amp_bound == 0.0);  // zero noise
    }
  }

  SUBCASE("noisy recovery stays inside the closed-form bounds") {
    Rng rng(71);
    const auto models = builtins();
    const double delta = 1e-8;
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<MixtureComponent> comps;
      for (int j = 0; j < 2; ++j) {
        const double x1 = rng.uniform(-0.1, -0.02), x2 = rng.uniform(0.02, 0.1);
        comps.push_back(MixtureComponent{
            models[j],
            {x1, x2},
            {std::polar(rng.uniform(0.5, 2.0), rng.uniform(0.0, 6.28)),
             std::polar(rng.uniform(0.5, 2.0), rng.uniform(0.0, 6.28))}});
      }
      const ShiftMixture truth(comps);
      std::vector<ComponentInput> inputs;
      for (int j = 0; j < 2; ++j) {
        const auto w = common_zero_set(models, j, 46.0 * kPi, 1e-12);
        ComponentInput in{models[j]};
        in.sample_points = w;
        std::vector<Complex> meas(w.size());
        for (std::size_t l = 0; l < w.size(); ++l)
          meas[l] = fourier_of_mixture(truth, w[l]);
        in.measured = add_noise(meas, delta, rng.next_u64());
        in.noise_bound = delta;
        in.num_shifts = 2;
        in.eta = truth.eta(j);
        in.sigma = truth.sigma(j);
        in.init_shifts = truth.components[j].shifts;
        inputs.push_back(std::move(in));
      }
      ReconstructOptions opt;
      opt.starts = 0;
      opt.seed = rng.next_u64();
      const Reconstruction rec = reconstruct(inputs, opt);
      for (int j = 0; j < 2; ++j) {
        if (!rec.components[j].certified) continue;
        // match recovered to truth, then compare against the a-priori bounds
        for (int q = 0; q < 2; ++q) {
          double best_shift = 1e300, best_amp = 1e300;
          for (int p = 0; p < 2; ++p) {
            const double se =
                std::abs(rec.components[j].shifts[p] - truth.components[j].shifts[q]);
            if (se < best_shift) {
              best_shift = se;
              best_amp = std::abs(rec.components[j].amplitudes[p] -
                                  truth.components[j].amplitudes[q]);
            }
          }
          CHECK(best_amp <= rec.components[j].bound.amp_bound);
          CHECK(best_shift <= rec.components[j].bound.amp_bound /
                                  std::abs(truth.components[j].amplitudes[q]));
        }
      }
    }
  }

  SUBCASE("degenerate witness is flagged, not fatal") {
    const ShiftMixture witness = example3_mixture(1.0);
    const auto [s1, s2] = example3_sets(20);
    std::vector<ComponentInput> inputs;
    const std::vector<const std::vector<double>*> sets = {&s1, &s2};
    for (int j = 0; j < 2; ++j) {
      ComponentInput in{witness.components[j].signal};
      in.sample_points = *sets[j];
      in.measured.resize(in.sample_points.size());
      for (std::size_t l = 0; l < in.sample_points.size(); ++l)
        in.measured[l] = fourier_of_mixture(witness, in.sample_points[l]);
      in.num_shifts = 2;
      in.eta = 1.0;
      in.sigma = witness.sigma(j);
      in.init_shifts = witness.components[j].shifts;
      inputs.push_back(std::move(in));
    }
    ReconstructOptions opt;
    opt.starts = 0;
    opt.seed = 3;
    const Reconstruction rec = reconstruct(inputs, opt);
    CHECK(!rec.components[0].certified);
    CHECK(!rec.components[1].certified);
    CHECK(std::isinf(rec.components[0].bound.amp_bound));
  }

  SUBCASE("single signal, single shift: plain exponential fitting") {
    const SignalModel box = SignalModel::box();
    const ShiftMixture truth({MixtureComponent{box, {0.05}, {Complex(1.5, -0.5)}}});
    ComponentInput in{box};
    for (int l = 1; l <= 12; ++l) {
      const double s = 0.4 * l;
      in.sample_points.push_back(s);
      in.measured.push_back(fourier_of_mixture(truth, s));
    }
    in.num_shifts = 1;
    in.eta = truth.eta(0);
    in.init_shifts = {{0.05}};
    ReconstructOptions opt;
    opt.starts = 0;
    opt.seed = 5;
    const Reconstruction rec = reconstruct({in}, opt);
    CHECK(std::abs(rec.components[0].shifts[0] - 0.05) < 1e-10);
    CHECK(std::abs(rec.components[0].amplitudes[0] - Complex(1.5, -0.5)) < 1e-9);
  }

  SUBCASE("empty sampling set") {
    ComponentInput in{SignalModel::box()};
    in.num_shifts = 1;
    ReconstructOptions opt;
    opt.starts = 1;
    CHECK_THROWS_AS(reconstruct({in}, opt), UnsamplableComponentError);
  }
}

TEST_CASE("mixture file parsing") {
  const std::string text = R"(# demo mixture
signal BOX
shifts -0.0795774715459477 0.0795774715459477
amplitudes -0.5 0 -0.5 0

signal DELTAPAIR
shifts -0.0795774715459477 0.0795774715459477
amplitudes 0 -0.5 0 0.5
)";
  const ShiftMixture mix = parse_mixture(text);
  REQUIRE(mix.num_components() == 2);
  CHECK(mix.components[0].signal.name() == "BOX");
  CHECK(mix.components[1].amplitudes[1] == Complex(0.0, 0.5));
  CHECK(mix.eta(0) == doctest::Approx(0.5).epsilon(1e-10));

  CHECK_THROWS_AS(parse_mixture("shifts 1 2\n"), ConfigError);
  CHECK_THROWS_AS(parse_mixture("signal BOX\nshifts 1\namplitudes 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_mixture("signal NOPE\n"), ConfigError);
  CHECK_THROWS_AS(parse_mixture("signal BOX\nshifts x\namplitudes 1 0\n"), ConfigError);
}

TEST_CASE("tabulated mixture component from file") {
  const std::string dir = "/tmp/expfit_test_tab";
  [[maybe_unused]] const int rc = std::system(("mkdir -p " + dir).c_str());
  {
    std::ofstream ft(dir + "/cos_table.csv");
    ft << "# s, re, im\n";
    for (int k = 0; k <= 20000; ++k) {
      const double s = 40.0 * k / 20000.0;
      ft << s << "," << std::cos(s) << ",0\n";
    }
  }
  const std::string text =
      "signal TABULATED cos_table.csv\nshifts 0.01\namplitudes 1 0\n";
  const ShiftMixture mix = parse_mixture(text, dir);
  CHECK(mix.components[0].signal.fourier(1.0).real() ==
        doctest::Approx(std::cos(1.0)).epsilon(1e-5));
}
