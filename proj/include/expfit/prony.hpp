#pragma once

#include <complex>
#include <vector>

#include "expfit/exppoly.hpp"

namespace expfit {

/// Node/amplitude configuration of a Prony system: pairwise-distinct complex
/// nodes x_j with nonzero amplitudes a_j. In the imaginary-exponent pipeline
/// the nodes are e^{i phi_j s0} and lie on the unit circle.
struct PronyInstance {
  std::vector<Complex> nodes;
  std::vector<Complex> amplitudes;

  PronyInstance(std::vector<Complex> nodes_, std::vector<Complex> amplitudes_);
  int degree() const { return static_cast<int>(nodes.size()); }
  double min_node_distance() const;  // Lambda = min_{i<j} |x_i - x_j|
};

/// The first 2N moments m_k = sum_j a_j x_j^k, k = 0 .. 2N-1.
struct MomentVector {
  std::vector<Complex> moments;

  explicit MomentVector(std::vector<Complex> moments_);
  int degree() const { return static_cast<int>(moments.size()) / 2; }
};

MomentVector prony_map(const PronyInstance& inst);

struct PronyInversion {
  PronyInstance instance;
  double hankel_condition = 0.0;
  /// Set when some recovered |a_j| < 1e-12 * max|m_k|: the moment data is
  /// consistent with a lower-degree system.
  bool rank_deficiency_warning = false;
};

/// Classical Prony recovery: solve the N x N Hankel system for the Prony
/// polynomial, take companion-matrix eigenvalues as nodes, then fit
/// amplitudes by Vandermonde least squares over all 2N moments. Throws
/// DegenerateSystemError when the Hankel condition number exceeds 1e12
/// (colliding nodes).
PronyInversion prony_invert(const MomentVector& m);
PronyInstance prony_inverse(const MomentVector& m);

/// Unit-circle perturbation constant C = 2 * (2 / Lambda)^(2N). For N = 1 the
/// vacuous minimum is taken as Lambda = 2 (the circle diameter), keeping the
/// single-node bound finite. Nodes must lie on the unit circle within
/// `unit_tol` and be mutually separated.
double perturbation_constant(const std::vector<Complex>& nodes, double unit_tol = 1e-12);

struct SolutionMatch {
  std::vector<int> permutation;  // cand index assigned to each ref index
  double max_node_err = 0.0;
  double max_amp_err = 0.0;
};

/// Optimal assignment of candidate nodes to reference nodes: minimizes the
/// maximal node error, breaking ties by amplitude error (reconstruction is
/// unique only up to an index transposition, so errors must be measured after
/// matching).
SolutionMatch match_solutions(const PronyInstance& ref, const PronyInstance& cand);

}  // namespace expfit
