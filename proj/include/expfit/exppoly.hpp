#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace expfit {

using Complex = std::complex<double>;

/// Exponential polynomial with purely imaginary exponents,
///   H(s) = sum_j a_j * exp(i * phi_j * s),
/// with complex amplitudes a_j and real frequencies phi_j (radians per unit
/// of s). Construction enforces: equal list lengths, N >= 1, nonzero
/// amplitudes, and pairwise-distinct frequencies (min gap below
/// 1e-12 * max(1, max|phi|) is rejected; near-collisions make amplitude
/// recovery meaningless).
class ExpPoly {
 public:
  ExpPoly(std::vector<Complex> amplitudes, std::vector<double> frequencies);

  int degree() const { return static_cast<int>(frequencies_.size()); }
  const std::vector<Complex>& amplitudes() const { return amplitudes_; }
  const std::vector<double>& frequencies() const { return frequencies_; }
  double max_frequency() const;   // max |phi_j|
  double min_gap() const;         // min_{i<j} |phi_i - phi_j|; +inf for N = 1

  Complex operator()(double s) const;

 private:
  std::vector<Complex> amplitudes_;
  std::vector<double> frequencies_;
};

/// A-priori frequency constraints for fitting: |phi_j| <= lambda and
/// min pairwise gap >= delta. A configuration of N frequencies is feasible
/// iff delta * (N - 1) <= 2 * lambda.
struct FitConstraints {
  double lambda;  // max absolute frequency, >= 0
  double delta;   // min pairwise gap, > 0

  FitConstraints(double lambda_, double delta_);
  bool feasible_for(int n_freq) const;
};

/// Noisy samples h_k of some exponential polynomial on a strictly increasing
/// point set, with |h_k - H(s_k)| <= noise_bound.
struct NoisySamples {
  std::vector<double> points;
  std::vector<Complex> values;
  double noise_bound = 0.0;

  NoisySamples(std::vector<double> points_, std::vector<Complex> values_,
               double noise_bound_);
  int size() const { return static_cast<int>(points.size()); }
};

Complex evaluate(const ExpPoly& poly, double s);

std::vector<Complex> sample(const ExpPoly& poly, const std::vector<double>& points);

/// Adds independent noise, uniform on the closed complex disc of radius
/// `delta`, to each value. Deterministic for a fixed seed.
std::vector<Complex> add_noise(const std::vector<Complex>& values, double delta,
                               std::uint64_t seed);

/// Flat serialization as re(a_1),im(a_1),phi_1,... with frequencies
/// ascending; used by the CLI config format and CSV output.
std::string serialize_exppoly(const ExpPoly& poly);
ExpPoly parse_exppoly(const std::vector<double>& flat_records);

}  // namespace expfit
