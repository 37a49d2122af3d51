#pragma once

#include <vector>

namespace expfit {

/// All a-priori stability quantities for one recovery problem, evaluated with
/// the literal theory constants (316 and 632; no sharpening).
///
/// Two amplitude-bound prefactors exist in the theory: the pure-fitting form
/// 2*sqrt(2n) and the decoupled form 2/kappa. The applicable one is stored in
/// amp_bound and the other in amp_bound_alt so both can be compared.
struct BoundReport {
  double omega = 0.0;          // metric span of the sampling set
  long long M_bound = 0;       // Langer zero count M(N_eff, lambda, R)
  double rho = 0.0;            // unit-circle node-separation floor
  double h_bar = 0.0;          // angular separation floor for s0 selection
  double kappa = 1.0;          // minimal divisor (1 for pure exponential fitting)
  double tn_factor = 0.0;      // (316 R / omega)^(N_eff - 1)
  double amplification = 0.0;  // (632 R / (rho * omega))^(2N)
  double amp_bound = 0.0;      // amplitude error bound at the given noise level
  double amp_bound_alt = 0.0;  // the other prefactor convention
  std::vector<double> freq_bounds;  // amp_bound / |a_j| per amplitude
};

/// (316 R / omega)^(n_eff - 1). Throws NoCertificateError when omega <= 0.
double turan_nazarov_factor(int n_eff, double r, double omega);

/// (632 R / (rho * omega))^(2 n_terms).
double amplification_factor(int n_terms, double r, double omega, double rho);

struct RecoveryBounds {
  double amp_bound = 0.0;
  std::vector<double> freq_bounds;
};

/// Pure exponential fitting: amp_bound = 2*sqrt(2n) * (632R/(rho*omega))^{2N} * delta,
/// freq_bounds_j = amp_bound / |a_j|. Throws NoCertificateError when omega or
/// rho is not positive.
RecoveryBounds recovery_bounds(int n_terms, int n_samples, double r, double omega,
                               double rho, double delta,
                               const std::vector<double>& amplitude_moduli);

/// Decoupled component: amp_bound = (2/kappa) * (632R/(rho*omega))^{2q} * delta.
/// The 1/kappa is the noise amplification of dividing by F(f_j) on the
/// sampling set.
RecoveryBounds decoupled_bounds(int q_shifts, double r, double omega, double rho,
                                double kappa, double delta,
                                const std::vector<double>& amplitude_moduli);

/// Assembles a full report for a fitting problem. Set kappa = 1 and
/// decoupled = false for plain exponential fitting; decoupled = true selects
/// the 2/kappa prefactor as the primary amp_bound.
BoundReport make_bound_report(int n_terms, int n_samples, double r, double lambda,
                              double delta_freq, double omega, long long m_bound,
                              double kappa, double noise, bool decoupled,
                              const std::vector<double>& amplitude_moduli);

}  // namespace expfit
