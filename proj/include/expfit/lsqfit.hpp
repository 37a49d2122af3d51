#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "expfit/exppoly.hpp"

namespace expfit {

/// Solver knobs. Defaults follow the library-wide convention: convergence at
/// projected-gradient norm < grad_tol_scale * (1 + objective), at most
/// max_iterations descent steps per start.
///
/// obj_tol additionally stops a start once an accepted step improves the
/// objective by less than obj_tol * (1 + objective). Zero (the default)
/// disables it and the iteration runs to the gradient criterion; the
/// experiment harness sets it to sqrt(machine eps) to match the termination
/// behavior of the generic SQP solvers used for the reference figures.
struct FitOptions {
  double grad_tol_scale = 1e-12;
  int max_iterations = 500;
  double svd_truncation = 1e-12;  // relative singular-value cutoff in the inner solve
  double obj_tol = 0.0;
};

struct FitResult {
  ExpPoly poly;                     // fitted polynomial, frequencies ascending
  double objective = 0.0;           // sum_k |poly(s_k) - h_k|^2
  bool converged = false;
  int starts_used = 0;
  std::vector<double> per_start_objectives;  // post-descent objective of each start
};

/// Quadratic deviation sum_k |poly(s_k) - h_k|^2 of a polynomial from the
/// samples.
double residual(const ExpPoly& poly, const NoisySamples& samples);

/// Amplitudes minimizing the residual for fixed frequencies: the linear
/// least-squares solution against the n x N matrix [e^{i phi_j s_k}]. Throws
/// RankDeficientError when the matrix rank is below N (frequencies aliased on
/// the point set).
std::vector<Complex> varpro_amplitudes(const std::vector<double>& frequencies,
                                       const NoisySamples& samples);

/// The reduced (amplitude-eliminated) objective and its exact frequency
/// gradient at a given frequency vector.
double varpro_objective(const std::vector<double>& frequencies,
                        const NoisySamples& samples);
std::vector<double> varpro_gradient(const std::vector<double>& frequencies,
                                    const NoisySamples& samples);

/// Constrained least-squares fit of an N-term exponential polynomial:
/// amplitudes are eliminated exactly (variable projection) and the frequency
/// vector descends by a projected Levenberg-Marquardt iteration, with the
/// feasible set {|phi_j| <= lambda, min gap >= delta} enforced by clipping
/// and symmetric pair spreading. Runs `starts` seeded random feasible starts
/// plus `init` when given, and returns the best local minimum (ties resolve
/// to the lowest start index, so parallel and serial runs agree exactly).
///
/// Global optimality is not certified: the stability theory applies to the
/// true least-squares minimizer, so experiment harnesses that need the
/// correct basin should pass an init near the truth.
FitResult fit_least_squares(const NoisySamples& samples, int n_terms,
                            const FitConstraints& constraints,
                            const std::optional<std::vector<double>>& init,
                            int starts, std::uint64_t seed,
                            const FitOptions& options = {});

/// Per-index amplitude/frequency errors after the optimal matching
/// permutation (minimal worst-case frequency error, ties by amplitude error).
/// Order follows the truth's indices.
std::pair<std::vector<double>, std::vector<double>> fit_error_vs_truth(
    const FitResult& result, const ExpPoly& truth);

/// Feasibility projection used by the solver, exposed for tests: clip to
/// [-lambda, lambda], sort, spread gap-violating pairs symmetrically until
/// feasible. Idempotent on feasible inputs.
std::vector<double> project_feasible(std::vector<double> freqs,
                                     const FitConstraints& constraints);

}  // namespace expfit
