// Compares the OpenMP kernels against their serial references: metric span
// scans, s0 grid search, dense suprema (oracle vs parallel evaluation), and
// multi-start fitting at 1 vs K threads. Results must agree exactly; only the
// wall time differs.

#include <chrono>
#include <cstdio>
#include <vector>

#include "expfit/experiments.hpp"
#include "expfit/geometry.hpp"
#include "expfit/lsqfit.hpp"
#include "expfit/oracle.hpp"
#include "expfit/parallel.hpp"
#include "expfit/rng.hpp"

using namespace expfit;

namespace {

template <typename F>
double time_ms(F&& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

void report(const char* name, double serial_ms, double parallel_ms, bool equal) {
  std::printf("%-28s serial %9.2f ms   parallel %9.2f ms   speedup %5.2fx   %s\n",
              name, serial_ms, parallel_ms,
              parallel_ms > 0 ? serial_ms / parallel_ms : 0.0,
              equal ? "results equal" : "RESULTS DIFFER");
}

}  // namespace

int main() {
  const int threads = par::threads();
  std::printf("expfit benchmark, %d worker threads\n\n", threads);

  {
    Rng rng(7);
    std::vector<double> pts;
    double x = 0.0;
    for (int i = 0; i < 900; ++i) {
      x += rng.uniform(0.01, 1.0);
      pts.push_back(x);
    }
    const SamplingSet set(pts);
    SpanReport serial, parallel;
    const double t_serial = time_ms([&] {
      par::set_threads(1);
      serial = metric_span(set, 4, 1.0);
    });
    const double t_par = time_ms([&] {
      par::set_threads(0);
      parallel = metric_span(set, 4, 1.0);
    });
    report("metric_span (900 pts)", t_serial, t_par,
           serial.omega == parallel.omega &&
               serial.argmax_epsilon == parallel.argmax_epsilon);
  }

  {
    std::vector<double> gaps = {0.13, 0.71, 1.93, 2.42, 0.05, 3.3};
    std::pair<double, double> serial, parallel;
    const double t_serial = time_ms([&] {
      par::set_threads(1);
      serial = choose_s0(gaps, 40.0, 3, 4000000);
    });
    const double t_par = time_ms([&] {
      par::set_threads(0);
      parallel = choose_s0(gaps, 40.0, 3, 4000000);
    });
    report("choose_s0 (4e6 grid)", t_serial, t_par, serial == parallel);
  }

  {
    const ExpPoly h = random_truth(11, 3, 2.0, 0.1);
    double serial = 0.0, parallel = 0.0;
    const long long grid = oracle::dense_sup_grid(h, 50.0);
    const double t_serial = time_ms([&] { serial = oracle::dense_sup(h, 50.0, grid); });
    // The parallel counterpart: chunked max over the same grid.
    const double t_par = time_ms([&] {
      const int chunks = 256;
      std::vector<double> part(chunks, 0.0);
      par::set_threads(0);
      par::parallel_for(chunks, [&](std::size_t c) {
        const long long lo = grid * static_cast<long long>(c) / chunks;
        const long long hi = grid * static_cast<long long>(c + 1) / chunks;
        double m = 0.0;
        for (long long t = lo; t <= hi; ++t) {
          const double s = 50.0 * static_cast<double>(t) / static_cast<double>(grid);
          m = std::max(m, std::abs(h(s)));
        }
        part[c] = m;
      });
      double m = 0.0;
      for (double v : part) m = std::max(m, v);
      parallel = m;
    });
    report("dense sup (oracle vs omp)", t_serial, t_par, serial == parallel);
  }

  {
    const ExpPoly truth = random_truth(23, 3, 1.0, 0.1);
    std::vector<double> pts(101);
    for (int k = 0; k <= 100; ++k) pts[k] = 0.6 * k;
    const NoisySamples samples(pts, add_noise(sample(truth, pts), 1e-8, 99), 1e-8);
    const FitConstraints cons(1.0, 0.05);
    FitResult serial{ExpPoly({1.0}, {0.0}), 0, false, 0, {}};
    FitResult parallel = serial;
    const double t_serial = time_ms([&] {
      par::set_threads(1);
      serial = fit_least_squares(samples, 3, cons, std::nullopt, 48, 5);
    });
    const double t_par = time_ms([&] {
      par::set_threads(0);
      parallel = fit_least_squares(samples, 3, cons, std::nullopt, 48, 5);
    });
    report("fit, 48 starts", t_serial, t_par,
           serial.objective == parallel.objective &&
               serial.poly.frequencies() == parallel.poly.frequencies());
  }

  par::set_threads(0);
  return 0;
}
