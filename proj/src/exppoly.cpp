#include "expfit/exppoly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "expfit/csv.hpp"
#include "expfit/rng.hpp"

namespace expfit {

ExpPoly::ExpPoly(std::vector<Complex> amplitudes, std::vector<double> frequencies)
    : amplitudes_(std::move(amplitudes)), frequencies_(std::move(frequencies)) {
  if (amplitudes_.size() != frequencies_.size())
    throw std::invalid_argument("ExpPoly: amplitude/frequency length mismatch");
  if (amplitudes_.empty()) throw std::invalid_argument("ExpPoly: degree must be >= 1");
  for (const Complex& a : amplitudes_) {
    if (a == Complex(0.0, 0.0))
      throw std::invalid_argument("ExpPoly: zero amplitude (reduce the degree instead)");
  }
  for (double f : frequencies_) {
    if (!std::isfinite(f)) throw std::invalid_argument("ExpPoly: non-finite frequency");
  }
  const double tol = 1e-12 * std::max(1.0, max_frequency());
  if (min_gap() < tol)
    throw std::invalid_argument("ExpPoly: colliding frequencies (gap below tolerance)");
}

double ExpPoly::max_frequency() const {
  double m = 0.0;
  for (double f : frequencies_) m = std::max(m, std::abs(f));
  return m;
}

double ExpPoly::min_gap() const {
  if (frequencies_.size() < 2) return std::numeric_limits<double>::infinity();
  double g = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < frequencies_.size(); ++i)
    for (std::size_t j = i + 1; j < frequencies_.size(); ++j)
      g = std::min(g, std::abs(frequencies_[i] - frequencies_[j]));
  return g;
}

Complex ExpPoly::operator()(double s) const {
  Complex acc(0.0, 0.0);
  for (std::size_t j = 0; j < amplitudes_.size(); ++j)
    acc += amplitudes_[j] * std::polar(1.0, frequencies_[j] * s);
  return acc;
}

FitConstraints::FitConstraints(double lambda_, double delta_)
    : lambda(lambda_), delta(delta_) {
  if (!(lambda >= 0.0)) throw std::invalid_argument("FitConstraints: lambda must be >= 0");
  if (!(delta > 0.0)) throw std::invalid_argument("FitConstraints: delta must be > 0");
}

bool FitConstraints::feasible_for(int n_freq) const {
  if (n_freq <= 1) return true;
  return delta * (n_freq - 1) <= 2.0 * lambda;
}

NoisySamples::NoisySamples(std::vector<double> points_, std::vector<Complex> values_,
                           double noise_bound_)
    : points(std::move(points_)), values(std::move(values_)), noise_bound(noise_bound_) {
  if (points.size() != values.size())
    throw std::invalid_argument("NoisySamples: point/value length mismatch");
  if (points.empty()) throw std::invalid_argument("NoisySamples: empty");
  if (!(noise_bound >= 0.0))
    throw std::invalid_argument("NoisySamples: noise bound must be >= 0");
  for (std::size_t k = 1; k < points.size(); ++k)
    if (!(points[k] > points[k - 1]))
      throw std::invalid_argument("NoisySamples: points must be strictly increasing");
}

Complex evaluate(const ExpPoly& poly, double s) { return poly(s); }

std::vector<Complex> sample(const ExpPoly& poly, const std::vector<double>& points) {
  if (points.empty()) throw std::invalid_argument("sample: empty point set");
  std::vector<Complex> out(points.size());
  for (std::size_t k = 0; k < points.size(); ++k) out[k] = poly(points[k]);
  return out;
}

std::vector<Complex> add_noise(const std::vector<Complex>& values, double delta,
                               std::uint64_t seed) {
  if (!(delta >= 0.0)) throw std::invalid_argument("add_noise: delta must be >= 0");
  std::vector<Complex> out(values);
  if (delta == 0.0) return out;
  Rng rng(seed);
  for (Complex& v : out) v += rng.uniform_disc(delta);
  return out;
}

std::string serialize_exppoly(const ExpPoly& poly) {
  std::vector<std::size_t> order(poly.degree());
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return poly.frequencies()[i] < poly.frequencies()[j];
  });
  std::string out;
  for (std::size_t idx = 0; idx < order.size(); ++idx) {
    const std::size_t j = order[idx];
    if (idx) out += ",";
    out += format_double(poly.amplitudes()[j].real());
    out += ",";
    out += format_double(poly.amplitudes()[j].imag());
    out += ",";
    out += format_double(poly.frequencies()[j]);
  }
  return out;
}

ExpPoly parse_exppoly(const std::vector<double>& flat) {
  if (flat.empty() || flat.size() % 3 != 0)
    throw std::invalid_argument("parse_exppoly: expected re,im,phi triples");
  std::vector<Complex> amps;
  std::vector<double> freqs;
  for (std::size_t i = 0; i < flat.size(); i += 3) {
    amps.emplace_back(flat[i], flat[i + 1]);
    freqs.push_back(flat[i + 2]);
  }
  return ExpPoly(std::move(amps), std::move(freqs));
}

}  // namespace expfit
