#pragma once

#include "expfit/exppoly.hpp"
#include "expfit/geometry.hpp"
#include "expfit/lsqfit.hpp"
#include "expfit/prony.hpp"

// Independent brute-force references used by the test and benchmark targets
// only. These deliberately do not call the implementations they validate:
// covering is a memoized exhaustive search instead of the greedy sweep, the
// fit is a full frequency-grid scan with its own tiny least-squares solve,
// and suprema come from dense evaluation. Cost is unbounded by design; keep
// instances small.

namespace expfit::oracle {

/// Minimal cover by exhaustive search over interval placements anchored at
/// each point and at each point minus epsilon.
long long brute_covering(const SamplingSet& s, double epsilon);

/// Dense epsilon scan over (0, R] with `grid` samples plus the left-limits of
/// every pairwise difference.
double brute_span(const SamplingSet& s, int n_deg, double lambda, int grid);

/// Exhaustive frequency-grid fit for N <= 2 with exact amplitude elimination;
/// global within grid resolution.
FitResult grid_fit(const NoisySamples& samples, int n_terms,
                   const FitConstraints& constraints, int grid);

/// sup over [0, R] of |H| on a dense grid. A grid of at least
/// 1e5 * ceil(lambda * R / pi) points resolves every oscillation.
double dense_sup(const ExpPoly& h, double r, long long grid);

/// sup over [0, R] of |A - B| on a dense grid (the two polynomials may share
/// frequencies, so the difference need not be a constructible ExpPoly).
double dense_sup_diff(const ExpPoly& a, const ExpPoly& b, double r, long long grid);

/// The grid size dense_sup needs for the given polynomial on [0, R].
long long dense_sup_grid(const ExpPoly& h, double r);

/// Direct 2Nx2N linear solve for tiny Prony systems with known nodes
/// (amplitude recovery cross-check).
std::vector<Complex> solve_amplitudes_direct(const std::vector<Complex>& nodes,
                                             const std::vector<Complex>& moments);

}  // namespace expfit::oracle
