#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "expfit/bounds.hpp"
#include "expfit/exppoly.hpp"
#include "expfit/geometry.hpp"
#include "expfit/lsqfit.hpp"

namespace expfit {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// A known base signal, represented by its Fourier transform and the zero set
/// of that transform. Built-ins carry exact arithmetic-progression zero sets;
/// TABULATED signals interpolate a sampled transform linearly and locate
/// zeros per segment; generic analytic signals fall back to grid bracketing
/// with local refinement.
class SignalModel {
 public:
  /// Characteristic function of [-1, 1]: F(s) = sqrt(2/pi) * sin(s)/s,
  /// zeros {pi*n, n != 0}.
  static SignalModel box();

  /// delta(x-1) + delta(x+1): F(s) = sqrt(2/pi) * cos(s),
  /// zeros {(1/2 + n) * pi}.
  static SignalModel delta_pair();

  /// Sampled transform (strictly increasing s, matching values), linear
  /// interpolation between rows.
  static SignalModel tabulated(std::string name, std::vector<double> s,
                               std::vector<Complex> values);

  /// Arbitrary transform with numeric zero finding.
  static SignalModel analytic(std::string name, std::function<Complex(double)> fourier);

  const std::string& name() const { return name_; }
  Complex fourier(double s) const;

  /// Sorted zeros of the transform in [lo, hi]. Analytic progressions are
  /// enumerated exactly; numeric zeros satisfy |F| <= tol and are found by
  /// bracketing local minima of |F|.
  std::vector<double> zero_set(double lo, double hi, double tol) const;

  /// Distance from s to the nearest zero (exact for progression zero sets;
  /// +inf when the model has no zero near the probe window).
  double nearest_zero_distance(double s, double tol) const;

  bool has_progression_zeros() const { return progression_.has_value(); }

 private:
  struct Progression {
    double offset;
    double step;
    bool exclude_origin;  // the progression point at 0 is not a zero (BOX)
  };

  SignalModel() = default;

  std::string name_;
  std::function<Complex(double)> fourier_;
  std::optional<Progression> progression_;
  std::vector<double> table_s_;       // tabulated models only
  std::vector<Complex> table_v_;
};

struct MixtureComponent {
  SignalModel signal;
  std::vector<double> shifts;       // pairwise distinct
  std::vector<Complex> amplitudes;  // same length as shifts
};

/// The signal F(x) = sum_j sum_q a_jq * f_j(x - x_jq).
struct ShiftMixture {
  std::vector<MixtureComponent> components;

  explicit ShiftMixture(std::vector<MixtureComponent> components_);
  int num_components() const { return static_cast<int>(components.size()); }

  /// Maximal frequency of component j's decoupled system: max beta*|x_jq|.
  double eta(int j, double beta = kTwoPi) const;
  /// Minimal frequency gap: min beta*|x_jq - x_jp|; +inf for a single shift.
  double sigma(int j, double beta = kTwoPi) const;
};

/// Fourier transform of the mixture:
///   F(F)(s) = sum_j sum_q a_jq e^{-i beta s x_jq} F(f_j)(s).
/// beta is the shift-factor angular constant (2*pi matches the decoupled
/// system convention used throughout; the frequency/shift map is always
/// phi = -beta * x).
Complex fourier_of_mixture(const ShiftMixture& mix, double s, double beta = kTwoPi);

/// Candidate sampling set W_j for component j on [0, r]: points lying on the
/// zero sets of every other transform (within an internal matching tolerance
/// of 1e-9 * r) where |F(f_j)| > tol. Empty results are valid — with three or
/// more generic signals the intersection is generically empty — and the
/// reason is written to *diagnostic when given.
std::vector<double> common_zero_set(const std::vector<SignalModel>& models, int j,
                                    double r, double tol,
                                    std::string* diagnostic = nullptr);

/// Minimal divisor kappa_j = min over S of |F(f_j)|. Throws
/// DivisionHazardError below 1e-14 (S intersects the zero set of f_j).
double min_divisor(const SignalModel& model, const std::vector<double>& points);

/// One decoupled subproblem: the right-hand sides c_jl = F(F)(s_jl)/F(f_j)(s_jl)
/// form noisy samples of the exponential polynomial
/// H_j(s) = sum_q a_jq e^{i phi_q s} with phi_q = -beta * x_jq. Sampling noise
/// is amplified by 1/kappa.
struct DecoupledSystem {
  int component = 0;
  std::vector<double> sample_points;
  std::vector<Complex> rhs;
  double kappa = 0.0;
  double beta = kTwoPi;  // frequency map: phi = -beta * x
};

DecoupledSystem assemble_decoupled(const std::vector<Complex>& mixture_samples,
                                   const SignalModel& model_j,
                                   const std::vector<double>& sample_points,
                                   int component = 0, double tol = 1e-12,
                                   double beta = kTwoPi);

struct ComponentInput {
  explicit ComponentInput(SignalModel signal_) : signal(std::move(signal_)) {}

  SignalModel signal;
  std::vector<double> sample_points;   // S_j, nonnegative ascending
  std::vector<Complex> measured;       // samples of F(F) on S_j
  double noise_bound = 0.0;            // delta_j
  int num_shifts = 1;                  // q_j
  double eta = 0.0;                    // a-priori bound max beta*|x_jq|
  double sigma = 0.0;                  // a-priori gap bound; ignored when q_j = 1
  std::optional<std::vector<double>> init_shifts;
};

struct ReconstructOptions {
  double beta = kTwoPi;
  double divisor_tol = 1e-12;
  int starts = 20;
  std::uint64_t seed = 0;
  FitOptions fit;
};

struct ComponentReconstruction {
  DecoupledSystem system;
  SpanReport span;                  // omega_{2q_j, eta_j}(S_j)
  bool certified = false;           // span.omega > 0
  FitResult fit;
  std::vector<double> shifts;       // recovered, ascending
  std::vector<Complex> amplitudes;  // aligned with shifts
  BoundReport bound;                // computed with recovered amplitude moduli
};

struct Reconstruction {
  ShiftMixture mixture;  // recovered parameters, original signal models
  std::vector<ComponentReconstruction> components;
};

/// Full pipeline: for each component independently, divide out the known
/// transform, certify the sampling geometry, fit the decoupled exponential
/// polynomial under (eta, sigma) constraints with effective noise
/// delta_j / kappa_j, and map frequencies back to shifts. A zero metric span
/// flags the component as uncertified but reconstruction is still attempted.
/// Throws UnsamplableComponentError if some S_j is empty.
Reconstruction reconstruct(const std::vector<ComponentInput>& components,
                           const ReconstructOptions& options);

/// Mixture description parser (CLI `decouple` input). Line format:
///   signal BOX | DELTAPAIR | TABULATED <file>
///   shifts x1 x2 ...
///   amplitudes re1 im1 re2 im2 ...
/// '#' starts a comment. TABULATED files hold s,re,im rows.
ShiftMixture parse_mixture(const std::string& text, const std::string& base_dir = "");

}  // namespace expfit
