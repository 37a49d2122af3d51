#include "expfit/bounds.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "expfit/errors.hpp"
#include "expfit/geometry.hpp"

namespace expfit {

double turan_nazarov_factor(int n_eff, double r, double omega) {
  if (n_eff < 1) throw std::invalid_argument("turan_nazarov_factor: N must be >= 1");
  if (!(r >= 0.0)) throw std::invalid_argument("turan_nazarov_factor: R must be >= 0");
  if (!(omega > 0.0))
    throw NoCertificateError("turan_nazarov_factor: omega <= 0, no uniqueness certificate");
  return std::pow(316.0 * r / omega, n_eff - 1);
}

double amplification_factor(int n_terms, double r, double omega, double rho) {
  if (n_terms < 1) throw std::invalid_argument("amplification_factor: N must be >= 1");
  if (!(omega > 0.0) || !(rho > 0.0))
    throw NoCertificateError("amplification_factor: omega and rho must be positive");
  return std::pow(632.0 * r / (rho * omega), 2 * n_terms);
}

namespace {

RecoveryBounds scale_bounds(double prefactor, double amplification, double delta,
                            const std::vector<double>& amplitude_moduli) {
  RecoveryBounds b;
  b.amp_bound = prefactor * amplification * delta;
  b.freq_bounds.reserve(amplitude_moduli.size());
  for (double a : amplitude_moduli) {
    if (!(a > 0.0))
      throw std::invalid_argument("bounds: amplitude moduli must be positive");
    b.freq_bounds.push_back(b.amp_bound / a);
  }
  return b;
}

}  // namespace

RecoveryBounds recovery_bounds(int n_terms, int n_samples, double r, double omega,
                               double rho, double delta,
                               const std::vector<double>& amplitude_moduli) {
  if (n_samples < 1) throw std::invalid_argument("recovery_bounds: n must be >= 1");
  if (!(delta >= 0.0)) throw std::invalid_argument("recovery_bounds: delta must be >= 0");
  const double ampl = amplification_factor(n_terms, r, omega, rho);
  return scale_bounds(2.0 * std::sqrt(2.0 * n_samples), ampl, delta, amplitude_moduli);
}

RecoveryBounds decoupled_bounds(int q_shifts, double r, double omega, double rho,
                                double kappa, double delta,
                                const std::vector<double>& amplitude_moduli) {
  if (!(kappa > 0.0)) throw std::invalid_argument("decoupled_bounds: kappa must be > 0");
  if (!(delta >= 0.0)) throw std::invalid_argument("decoupled_bounds: delta must be >= 0");
  const double ampl = amplification_factor(q_shifts, r, omega, rho);
  return scale_bounds(2.0 / kappa, ampl, delta, amplitude_moduli);
}

BoundReport make_bound_report(int n_terms, int n_samples, double r, double lambda,
                              double delta_freq, double omega, long long m_bound,
                              double kappa, double noise, bool decoupled,
                              const std::vector<double>& amplitude_moduli) {
  BoundReport rep;
  rep.omega = omega;
  rep.M_bound = m_bound;
  rep.kappa = kappa;
  rep.rho = sample_gap(n_terms, lambda, r, delta_freq);
  rep.h_bar = separation_floor(n_terms, lambda, r, delta_freq);
  if (omega > 0.0) {
    rep.tn_factor = std::pow(316.0 * r / omega, 2 * n_terms - 1);
    rep.amplification = amplification_factor(n_terms, r, omega, rep.rho);
    const RecoveryBounds fit =
        recovery_bounds(n_terms, n_samples, r, omega, rep.rho, noise, amplitude_moduli);
    const RecoveryBounds dec =
        decoupled_bounds(n_terms, r, omega, rep.rho, kappa, noise, amplitude_moduli);
    if (decoupled) {
      rep.amp_bound = dec.amp_bound;
      rep.freq_bounds = dec.freq_bounds;
      rep.amp_bound_alt = fit.amp_bound / kappa;
    } else {
      rep.amp_bound = fit.amp_bound;
      rep.freq_bounds = fit.freq_bounds;
      rep.amp_bound_alt = dec.amp_bound;
    }
  } else {
    // No certificate: nothing is bounded, not even at zero noise.
    const double inf = std::numeric_limits<double>::infinity();
    rep.tn_factor = inf;
    rep.amplification = inf;
    rep.amp_bound = inf;
    rep.amp_bound_alt = inf;
    rep.freq_bounds.assign(amplitude_moduli.size(), inf);
  }
  return rep;
}

}  // namespace expfit
