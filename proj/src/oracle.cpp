#include "expfit/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace expfit::oracle {

namespace {

/// Gaussian elimination with partial pivoting on a small complex system;
/// deliberately not Eigen so the oracle path shares nothing with prony/lsqfit.
std::vector<Complex> solve_dense(std::vector<std::vector<Complex>> a,
                                 std::vector<Complex> b) {
  const int n = static_cast<int>(b.size());
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    if (std::abs(a[piv][col]) == 0.0)
      throw std::invalid_argument("oracle::solve_dense: singular system");
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (int r = col + 1; r < n; ++r) {
      const Complex f = a[r][col] / a[col][col];
      for (int c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<Complex> x(n);
  for (int r = n - 1; r >= 0; --r) {
    Complex acc = b[r];
    for (int c = r + 1; c < n; ++c) acc -= a[r][c] * x[c];
    x[r] = acc / a[r][r];
  }
  return x;
}

}  // namespace

long long brute_covering(const SamplingSet& s, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("brute_covering: epsilon must be > 0");
  const std::vector<double>& p = s.points();
  const int n = s.size();

  // Candidate interval starts: every point and every point shifted left by
  // epsilon (an optimal cover can always be normalized to these anchors).
  std::vector<double> starts;
  starts.reserve(2 * n);
  for (double x : p) {
    starts.push_back(x);
    starts.push_back(x - epsilon);
  }
  std::sort(starts.begin(), starts.end());

  std::vector<long long> memo(n + 1, -1);
  memo[n] = 0;
  // f(i) = minimal intervals covering p[i..]; evaluated right to left.
  for (int i = n - 1; i >= 0; --i) {
    long long best = std::numeric_limits<long long>::max();
    for (double x : starts) {
      if (x > p[i] || x + epsilon < p[i]) continue;  // must cover p[i]
      int next = i;
      while (next < n && p[next] <= x + epsilon) ++next;
      if (memo[next] >= 0 && memo[next] + 1 < best) best = memo[next] + 1;
    }
    memo[i] = best;
  }
  return memo[0];
}

double brute_span(const SamplingSet& s, int n_deg, double lambda, int grid) {
  if (grid < 1) throw std::invalid_argument("brute_span: grid must be >= 1");
  const long long m = langer_bound(n_deg, lambda, s.r());
  if (m == 0) return std::numeric_limits<double>::infinity();
  const std::vector<double>& p = s.points();

  std::vector<double> eps_values;
  const double r = s.r() > 0.0 ? s.r() : 1.0;
  for (int t = 1; t <= grid; ++t)
    eps_values.push_back(r * static_cast<double>(t) / grid);
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j)
      eps_values.push_back((p[j] - p[i]) * (1.0 - 1e-12));

  double best = 0.0;
  for (double eps : eps_values) {
    if (!(eps > 0.0)) continue;
    const double v = eps * static_cast<double>(brute_covering(s, eps) - m);
    best = std::max(best, v);
  }
  return best;
}

FitResult grid_fit(const NoisySamples& samples, int n_terms,
                   const FitConstraints& cons, int grid) {
  if (n_terms < 1 || n_terms > 2)
    throw std::invalid_argument("grid_fit: only N <= 2 is supported");
  if (grid < 2) throw std::invalid_argument("grid_fit: grid must be >= 2");
  const int n = samples.size();
  const std::vector<double>& pts = samples.points;
  const std::vector<Complex>& h = samples.values;

  double h_norm2 = 0.0;
  for (const Complex& v : h) h_norm2 += std::norm(v);

  // Column table over the frequency grid and its inner products with h.
  const int g = grid;
  std::vector<double> freq(g + 1);
  for (int t = 0; t <= g; ++t)
    freq[t] = -cons.lambda + 2.0 * cons.lambda * static_cast<double>(t) / g;
  std::vector<std::vector<Complex>> col(g + 1, std::vector<Complex>(n));
  std::vector<Complex> eh(g + 1);
  for (int t = 0; t <= g; ++t) {
    Complex acc(0.0, 0.0);
    for (int k = 0; k < n; ++k) {
      col[t][k] = std::polar(1.0, freq[t] * pts[k]);
      acc += std::conj(col[t][k]) * h[k];
    }
    eh[t] = acc;
  }

  double best_obj = std::numeric_limits<double>::infinity();
  std::vector<double> best_freq;
  std::vector<Complex> best_amp;
  long long cells = 0;

  if (n_terms == 1) {
    for (int t = 0; t <= g; ++t) {
      ++cells;
      const Complex a = eh[t] / static_cast<double>(n);
      double obj = 0.0;
      for (int k = 0; k < n; ++k) obj += std::norm(a * col[t][k] - h[k]);
      if (obj < best_obj) {
        best_obj = obj;
        best_freq = {freq[t]};
        best_amp = {a};
      }
    }
  } else {
    // Gram cross terms depend only on the grid offset.
    std::vector<Complex> cross(g + 1);
    for (int d = 0; d <= g; ++d) {
      Complex acc(0.0, 0.0);
      const double df = 2.0 * cons.lambda * static_cast<double>(d) / g;
      for (int k = 0; k < n; ++k) acc += std::polar(1.0, df * pts[k]);
      cross[d] = acc;
    }
    for (int t1 = 0; t1 <= g; ++t1) {
      for (int t2 = t1 + 1; t2 <= g; ++t2) {
        if (freq[t2] - freq[t1] < cons.delta - 1e-15) continue;
        ++cells;
        const Complex g12 = cross[t2 - t1];  // <e1, e2>
        const double det = static_cast<double>(n) * n - std::norm(g12);
        if (det < 1e-12 * n * n) continue;  // aliased pair
        const Complex b1 = eh[t1], b2 = eh[t2];
        const Complex a1 = (static_cast<double>(n) * b1 - g12 * b2) / det;
        const Complex a2 = (static_cast<double>(n) * b2 - std::conj(g12) * b1) / det;
        const double obj =
            h_norm2 - (std::conj(a1) * b1 + std::conj(a2) * b2).real();
        if (obj < best_obj) {
          best_obj = obj;
          best_freq = {freq[t1], freq[t2]};
          best_amp = {a1, a2};
        }
      }
    }
  }

  if (best_freq.empty())
    throw std::invalid_argument("grid_fit: no feasible grid cell");
  for (Complex& a : best_amp)
    if (a == Complex(0.0, 0.0)) a = Complex(std::numeric_limits<double>::min(), 0.0);
  FitResult res{ExpPoly(std::move(best_amp), std::move(best_freq)),
                std::max(best_obj, 0.0), true, static_cast<int>(cells), {}};
  return res;
}

double dense_sup(const ExpPoly& h, double r, long long grid) {
  if (!(r >= 0.0)) throw std::invalid_argument("dense_sup: R must be >= 0");
  if (grid < 2) throw std::invalid_argument("dense_sup: grid must be >= 2");
  const auto& amps = h.amplitudes();
  const auto& freqs = h.frequencies();
  double sup = 0.0;
  for (long long t = 0; t <= grid; ++t) {
    const double s = r * static_cast<double>(t) / static_cast<double>(grid);
    Complex acc(0.0, 0.0);
    for (std::size_t j = 0; j < amps.size(); ++j)
      acc += amps[j] * std::polar(1.0, freqs[j] * s);
    sup = std::max(sup, std::abs(acc));
  }
  return sup;
}

double dense_sup_diff(const ExpPoly& a, const ExpPoly& b, double r, long long grid) {
  if (!(r >= 0.0)) throw std::invalid_argument("dense_sup_diff: R must be >= 0");
  if (grid < 2) throw std::invalid_argument("dense_sup_diff: grid must be >= 2");
  double sup = 0.0;
  for (long long t = 0; t <= grid; ++t) {
    const double s = r * static_cast<double>(t) / static_cast<double>(grid);
    Complex acc(0.0, 0.0);
    for (std::size_t j = 0; j < a.amplitudes().size(); ++j)
      acc += a.amplitudes()[j] * std::polar(1.0, a.frequencies()[j] * s);
    for (std::size_t j = 0; j < b.amplitudes().size(); ++j)
      acc -= b.amplitudes()[j] * std::polar(1.0, b.frequencies()[j] * s);
    sup = std::max(sup, std::abs(acc));
  }
  return sup;
}

long long dense_sup_grid(const ExpPoly& h, double r) {
  const double cycles = std::ceil(h.max_frequency() * r / 3.14159265358979323846);
  return 100000LL * static_cast<long long>(std::max(1.0, cycles));
}

std::vector<Complex> solve_amplitudes_direct(const std::vector<Complex>& nodes,
                                             const std::vector<Complex>& moments) {
  const int n = static_cast<int>(nodes.size());
  if (n < 1 || static_cast<int>(moments.size()) < n)
    throw std::invalid_argument("solve_amplitudes_direct: need >= N moments");
  std::vector<std::vector<Complex>> vand(n, std::vector<Complex>(n));
  for (int j = 0; j < n; ++j) {
    Complex p(1.0, 0.0);
    for (int k = 0; k < n; ++k) {
      vand[k][j] = p;
      p *= nodes[j];
    }
  }
  return solve_dense(std::move(vand), {moments.begin(), moments.begin() + n});
}

}  // namespace expfit::oracle
