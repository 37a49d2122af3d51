#include "expfit/prony.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "expfit/errors.hpp"

namespace expfit {

namespace {
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
}  // namespace

PronyInstance::PronyInstance(std::vector<Complex> nodes_, std::vector<Complex> amplitudes_)
    : nodes(std::move(nodes_)), amplitudes(std::move(amplitudes_)) {
  if (nodes.size() != amplitudes.size())
    throw std::invalid_argument("PronyInstance: node/amplitude length mismatch");
  if (nodes.empty()) throw std::invalid_argument("PronyInstance: empty");
  for (const Complex& a : amplitudes)
    if (a == Complex(0.0, 0.0))
      throw std::invalid_argument("PronyInstance: zero amplitude");
  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (std::size_t j = i + 1; j < nodes.size(); ++j)
      if (nodes[i] == nodes[j])
        throw std::invalid_argument("PronyInstance: coincident nodes");
}

double PronyInstance::min_node_distance() const {
  if (nodes.size() < 2) return std::numeric_limits<double>::infinity();
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (std::size_t j = i + 1; j < nodes.size(); ++j)
      d = std::min(d, std::abs(nodes[i] - nodes[j]));
  return d;
}

MomentVector::MomentVector(std::vector<Complex> moments_) : moments(std::move(moments_)) {
  if (moments.empty() || moments.size() % 2 != 0)
    throw std::invalid_argument("MomentVector: length must be even and positive");
}

MomentVector prony_map(const PronyInstance& inst) {
  const int n = inst.degree();
  std::vector<Complex> m(2 * static_cast<std::size_t>(n), Complex(0.0, 0.0));
  std::vector<Complex> powers(inst.amplitudes);  // a_j * x_j^k, starting at k = 0
  for (int k = 0; k < 2 * n; ++k) {
    Complex acc(0.0, 0.0);
    for (int j = 0; j < n; ++j) acc += powers[j];
    m[k] = acc;
    for (int j = 0; j < n; ++j) powers[j] *= inst.nodes[j];
  }
  return MomentVector(std::move(m));
}

PronyInversion prony_invert(const MomentVector& mv) {
  const int n = mv.degree();
  const std::vector<Complex>& m = mv.moments;
  double max_abs_m = 0.0;
  for (const Complex& x : m) max_abs_m = std::max(max_abs_m, std::abs(x));

  CVec nodes(n);
  double cond = 1.0;
  if (n == 1) {
    if (m[0] == Complex(0.0, 0.0))
      throw DegenerateSystemError("prony_invert: zero moment m0 with N = 1");
    nodes(0) = m[1] / m[0];
  } else {
    CMat hankel(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) hankel(i, j) = m[i + j];
    CVec rhs(n);
    for (int i = 0; i < n; ++i) rhs(i) = -m[n + i];

    Eigen::JacobiSVD<CMat> svd(hankel, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double smin = svd.singularValues()(n - 1);
    const double smax = svd.singularValues()(0);
    cond = (smin > 0.0) ? smax / smin : std::numeric_limits<double>::infinity();
    if (!(cond <= 1e12))
      throw DegenerateSystemError(
          "prony_invert: Hankel system is numerically singular (condition " +
          std::to_string(cond) + "); nodes collide or degree is overstated");
    const CVec coeff = svd.solve(rhs);  // x^n + c_{n-1} x^{n-1} + ... + c_0

    CMat companion = CMat::Zero(n, n);
    for (int i = 1; i < n; ++i) companion(i, i - 1) = Complex(1.0, 0.0);
    for (int i = 0; i < n; ++i) companion(i, n - 1) = -coeff(i);
    Eigen::ComplexEigenSolver<CMat> eig(companion);
    if (eig.info() != Eigen::Success)
      throw DegenerateSystemError("prony_invert: eigen solver failed");
    nodes = eig.eigenvalues();
  }

  // Amplitudes from the full 2N x N Vandermonde least squares.
  CMat vand(2 * n, n);
  for (int j = 0; j < n; ++j) {
    Complex p(1.0, 0.0);
    for (int k = 0; k < 2 * n; ++k) {
      vand(k, j) = p;
      p *= nodes(j);
    }
  }
  CVec rhs_full(2 * n);
  for (int k = 0; k < 2 * n; ++k) rhs_full(k) = m[k];
  const CVec amps = vand.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(rhs_full);

  bool warn = false;
  std::vector<Complex> node_list(n), amp_list(n);
  for (int j = 0; j < n; ++j) {
    node_list[j] = nodes(j);
    amp_list[j] = amps(j);
    if (std::abs(amps(j)) < 1e-12 * max_abs_m) warn = true;
    if (amp_list[j] == Complex(0.0, 0.0))
      throw DegenerateSystemError("prony_invert: exactly-zero recovered amplitude");
  }
  return PronyInversion{PronyInstance(std::move(node_list), std::move(amp_list)), cond, warn};
}

PronyInstance prony_inverse(const MomentVector& m) { return prony_invert(m).instance; }

double perturbation_constant(const std::vector<Complex>& nodes, double unit_tol) {
  if (nodes.empty()) throw std::invalid_argument("perturbation_constant: empty node list");
  for (const Complex& x : nodes)
    if (std::abs(std::abs(x) - 1.0) > unit_tol)
      throw std::invalid_argument("perturbation_constant: node off the unit circle");
  const int n = static_cast<int>(nodes.size());
  double lam = 2.0;  // N = 1: vacuous minimum, take the circle diameter
  if (n >= 2) {
    lam = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) lam = std::min(lam, std::abs(nodes[i] - nodes[j]));
    if (lam < 1e-14)
      throw std::invalid_argument("perturbation_constant: coincident nodes");
  }
  return 2.0 * std::pow(2.0 / lam, 2.0 * n);
}

SolutionMatch match_solutions(const PronyInstance& ref, const PronyInstance& cand) {
  const int n = ref.degree();
  if (cand.degree() != n)
    throw std::invalid_argument("match_solutions: degree mismatch");
  if (n > 10)
    throw std::invalid_argument("match_solutions: exhaustive matching limited to N <= 10");

  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  SolutionMatch best;
  best.max_node_err = std::numeric_limits<double>::infinity();
  best.max_amp_err = std::numeric_limits<double>::infinity();
  do {
    double node_err = 0.0, amp_err = 0.0;
    for (int j = 0; j < n; ++j) {
      node_err = std::max(node_err, std::abs(ref.nodes[j] - cand.nodes[perm[j]]));
      amp_err = std::max(amp_err, std::abs(ref.amplitudes[j] - cand.amplitudes[perm[j]]));
    }
    if (node_err < best.max_node_err ||
        (node_err == best.max_node_err && amp_err < best.max_amp_err)) {
      best.max_node_err = node_err;
      best.max_amp_err = amp_err;
      best.permutation = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace expfit
