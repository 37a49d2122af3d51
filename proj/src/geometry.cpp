#include "expfit/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "expfit/parallel.hpp"

namespace expfit {

namespace {

constexpr double kPi = 3.14159265358979323846;

/// Greedy sweep. With `half_open` the intervals are [p, p + eps), which gives
/// the left-limit lim_{e -> eps-} of the closed-interval count. Coverage is
/// decided on point differences, never on anchor + eps: when eps is itself a
/// pairwise difference the generating pair compares bit-identically, so the
/// left-limit is exact (anchor + eps can round past the point).
long long greedy_cover(const std::vector<double>& pts, double eps, bool half_open) {
  long long count = 0;
  std::size_t i = 0;
  const std::size_t n = pts.size();
  while (i < n) {
    ++count;
    const double anchor = pts[i];
    ++i;
    if (half_open) {
      while (i < n && pts[i] - anchor < eps) ++i;
    } else {
      while (i < n && pts[i] - anchor <= eps) ++i;
    }
  }
  return count;
}

}  // namespace

SamplingSet::SamplingSet(std::vector<double> points) : points_(std::move(points)) {
  if (points_.empty()) throw std::invalid_argument("SamplingSet: empty");
  if (!(points_.front() >= 0.0))
    throw std::invalid_argument("SamplingSet: points must be nonnegative");
  for (std::size_t k = 1; k < points_.size(); ++k)
    if (!(points_[k] > points_[k - 1]))
      throw std::invalid_argument("SamplingSet: points must be strictly increasing");
  if (!std::isfinite(points_.back()))
    throw std::invalid_argument("SamplingSet: non-finite point");
}

double SamplingSet::min_gap() const {
  if (points_.size() < 2) return std::numeric_limits<double>::infinity();
  double g = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < points_.size(); ++k)
    g = std::min(g, points_[k] - points_[k - 1]);
  return g;
}

long long covering_number(const SamplingSet& s, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("covering_number: epsilon must be > 0");
  return greedy_cover(s.points(), epsilon, /*half_open=*/false);
}

long long langer_bound(int n_deg, double lambda, double r) {
  if (n_deg < 1) throw std::invalid_argument("langer_bound: N must be >= 1");
  if (!(lambda >= 0.0) || !(r >= 0.0))
    throw std::invalid_argument("langer_bound: lambda and R must be >= 0");
  double t = lambda * r / kPi;
  // Snap values that are integers up to pi-cancellation rounding, so that
  // e.g. lambda*R == 16*pi yields floor(16) and not floor(16 - 1ulp).
  const double nearest = std::round(t);
  if (std::abs(t - nearest) <= 1e-9 * std::max(1.0, std::abs(t))) t = nearest;
  return static_cast<long long>(n_deg) * n_deg - 1 + static_cast<long long>(std::floor(t));
}

SpanReport metric_span(const SamplingSet& s, int n_deg, double lambda) {
  SpanReport rep;
  rep.M_bound = langer_bound(n_deg, lambda, s.r());
  const std::vector<double>& pts = s.points();
  const long long n = s.size();

  if (rep.M_bound == 0) {
    // M(eps, S) >= 1 for every eps, so eps * (M(eps,S) - 0) is unbounded.
    rep.omega = std::numeric_limits<double>::infinity();
    rep.argmax_epsilon = std::numeric_limits<double>::infinity();
    rep.covering_at_argmax = 1;
    return rep;
  }
  if (n <= rep.M_bound) return rep;  // M(eps, S) <= |S| <= M for all eps

  // Candidate breakpoints: the distinct positive pairwise differences.
  std::vector<double> diffs;
  diffs.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (long long i = 0; i < n; ++i)
    for (long long j = i + 1; j < n; ++j) diffs.push_back(pts[j] - pts[i]);
  std::sort(diffs.begin(), diffs.end());
  diffs.erase(std::unique(diffs.begin(), diffs.end()), diffs.end());

  std::vector<long long> counts(diffs.size());
  par::parallel_for(diffs.size(), [&](std::size_t k) {
    counts[k] = greedy_cover(pts, diffs[k], /*half_open=*/true);
  });

  double best = 0.0;
  for (std::size_t k = 0; k < diffs.size(); ++k) {
    const double value = diffs[k] * static_cast<double>(counts[k] - rep.M_bound);
    if (value > best) {
      best = value;
      rep.argmax_epsilon = diffs[k];
      rep.covering_at_argmax = counts[k];
    }
  }
  rep.omega = best;
  return rep;
}

std::vector<double> central_density(const SamplingSet& s, const std::vector<double>& r_grid) {
  if (r_grid.empty()) throw std::invalid_argument("central_density: empty grid");
  for (std::size_t k = 0; k < r_grid.size(); ++k) {
    if (!(r_grid[k] > 0.0)) throw std::invalid_argument("central_density: grid must be positive");
    if (k > 0 && !(r_grid[k] > r_grid[k - 1]))
      throw std::invalid_argument("central_density: grid must be ascending");
  }
  const std::vector<double>& pts = s.points();
  std::vector<double> out(r_grid.size());
  for (std::size_t k = 0; k < r_grid.size(); ++k) {
    const auto it = std::upper_bound(pts.begin(), pts.end(), r_grid[k]);
    out[k] = static_cast<double>(it - pts.begin()) / r_grid[k];
  }
  return out;
}

double sample_gap(int n_deg, double lambda, double r, double delta_freq) {
  if (n_deg < 1 || !(lambda > 0.0) || !(r > 0.0) || !(delta_freq > 0.0))
    throw std::invalid_argument("sample_gap: all arguments must be positive");
  const double nd = static_cast<double>(n_deg);
  if (lambda * r <= kPi * nd) return 3.0 * r * delta_freq / (2.0 * kPi * nd * nd * (nd + 1.0));
  return 2.0 * delta_freq / (lambda * nd * (nd + 1.0));
}

double separation_floor(int n_deg, double lambda, double r, double delta_freq) {
  if (n_deg < 1 || !(lambda > 0.0) || !(r > 0.0) || !(delta_freq > 0.0))
    throw std::invalid_argument("separation_floor: all arguments must be positive");
  const double nd = static_cast<double>(n_deg);
  if (lambda * r <= kPi * nd) return r * delta_freq / (2.0 * nd * nd * (nd + 1.0));
  return 2.0 * kPi * delta_freq / (3.0 * lambda * nd * (nd + 1.0));
}

std::pair<double, double> choose_s0(const std::vector<double>& pair_gaps, double r,
                                    int n_deg, long long grid_size) {
  if (pair_gaps.empty()) throw std::invalid_argument("choose_s0: empty gap list");
  if (!(r > 0.0) || n_deg < 1) throw std::invalid_argument("choose_s0: need R > 0, N >= 1");
  if (grid_size < 1) throw std::invalid_argument("choose_s0: grid_size must be >= 1");
  for (double g : pair_gaps)
    if (!(g > 0.0)) throw std::invalid_argument("choose_s0: gaps must be positive");

  const double upper = r / (2.0 * n_deg);
  const double two_pi = 2.0 * kPi;

  std::vector<double> sep(static_cast<std::size_t>(grid_size));
  par::parallel_for(sep.size(), [&](std::size_t idx) {
    const double s0 = upper * (static_cast<double>(idx + 1) / static_cast<double>(grid_size));
    double worst = std::numeric_limits<double>::infinity();
    for (double g : pair_gaps) {
      const double angle = g * s0;
      const double dist = std::abs(angle - two_pi * std::round(angle / two_pi));
      worst = std::min(worst, dist);
    }
    sep[idx] = worst;
  });

  std::size_t best = 0;
  for (std::size_t idx = 1; idx < sep.size(); ++idx)
    if (sep[idx] > sep[best]) best = idx;
  const double s0 = upper * (static_cast<double>(best + 1) / static_cast<double>(grid_size));
  return {s0, sep[best]};
}

}  // namespace expfit
