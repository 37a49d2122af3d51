#pragma once

#include <utility>
#include <vector>

namespace expfit {

/// A finite sampling set: strictly increasing nonnegative points. The ambient
/// interval is always I = [0, R] with R the largest point, so spans computed
/// here match the [0, R]-normalized theory; translate before constructing if
/// the data lives elsewhere.
class SamplingSet {
 public:
  explicit SamplingSet(std::vector<double> points);

  const std::vector<double>& points() const { return points_; }
  int size() const { return static_cast<int>(points_.size()); }
  double r() const { return points_.back(); }   // R(S)
  double min_gap() const;                       // min neighbor distance; +inf for |S| = 1

 private:
  std::vector<double> points_;
};

/// Result of a metric-span computation.
///
/// omega = max(0, sup_{eps>0} eps * (M(eps, S) - M)) where M(eps, S) is the
/// eps-covering number and M = langer_bound(N, lambda, R). When omega > 0,
/// argmax_epsilon is the breakpoint whose left-limit realizes the supremum
/// and covering_at_argmax the covering count just below it, so
/// omega == argmax_epsilon * (covering_at_argmax - M_bound). When omega == 0
/// both report fields are 0. omega == +inf signals the degenerate M == 0 case
/// (N = 1 with lambda * R < pi), where the supremum is unbounded.
struct SpanReport {
  double omega = 0.0;
  long long M_bound = 0;
  double argmax_epsilon = 0.0;
  long long covering_at_argmax = 0;
};

/// Minimal number of closed length-epsilon intervals covering S, by the
/// greedy left-to-right sweep (optimal in one dimension).
long long covering_number(const SamplingSet& s, double epsilon);

/// Zero-counting bound M(N, lambda, R) = N^2 - 1 + floor(lambda * R / pi) for
/// exponential polynomials of degree N with frequencies bounded by lambda.
long long langer_bound(int n_deg, double lambda, double r);

/// The (N, lambda)-metric span of S. Exact: the covering count is a
/// nonincreasing step function of epsilon whose breakpoints lie among the
/// pairwise point differences, so the supremum is realized as a left-limit at
/// one of finitely many candidates (covering intervals treated as half-open
/// when evaluating at a breakpoint).
SpanReport metric_span(const SamplingSet& s, int n_deg, double lambda);

/// Finite-prefix density profile |S ∩ [0, R]| / R for each R in r_grid
/// (positive ascending). The limsup density is the profile's tail behavior;
/// limit-taking is left to the caller.
std::vector<double> central_density(const SamplingSet& s, const std::vector<double>& r_grid);

/// Guaranteed node separation rho on the unit circle after the s0 rescaling:
/// 3*R*delta_freq / (2*pi*N^2*(N+1)) when lambda*R <= pi*N, else
/// 2*delta_freq / (lambda*N*(N+1)).
double sample_gap(int n_deg, double lambda, double r, double delta_freq);

/// Angular separation floor h_bar guaranteed to be attainable when choosing
/// s0: R*delta / (2*N^2*(N+1)) when lambda*R <= pi*N, else
/// 2*pi*delta / (3*lambda*N*(N+1)).
double separation_floor(int n_deg, double lambda, double r, double delta_freq);

/// Grid search for s0 in (0, R/(2N)] maximizing the minimal distance of the
/// angles gap*s0 from integer multiples of 2*pi, over all pairwise frequency
/// gaps. Returns (s0, achieved separation). Ties resolve to the smallest
/// candidate so results are reproducible.
std::pair<double, double> choose_s0(const std::vector<double>& pair_gaps, double r,
                                    int n_deg, long long grid_size);

}  // namespace expfit
