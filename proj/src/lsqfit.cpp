#include "expfit/lsqfit.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "expfit/errors.hpp"
#include "expfit/parallel.hpp"
#include "expfit/rng.hpp"

namespace expfit {

namespace {

using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

CMat design_matrix(const std::vector<double>& freqs, const std::vector<double>& pts) {
  CMat e(pts.size(), freqs.size());
  for (std::size_t k = 0; k < pts.size(); ++k)
    for (std::size_t j = 0; j < freqs.size(); ++j)
      e(k, j) = std::polar(1.0, freqs[j] * pts[k]);
  return e;
}

struct Reduced {
  double objective = 0.0;
  CVec amplitudes;
  CVec res;     // E a - h
  CMat basis;   // thin U of E: orthonormal basis of the amplitude space
};

/// VarPro inner solve with singular-value truncation; never throws, so the
/// descent can pass through nearly-aliased frequency vectors.
Reduced reduced_objective(const CMat& e, const CVec& h, double truncation) {
  Eigen::JacobiSVD<CMat> svd(e, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double cutoff = truncation * (sv.size() > 0 ? sv(0) : 0.0);
  CVec ut_h = svd.matrixU().adjoint() * h;
  CVec z = CVec::Zero(e.cols());
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff && sv(i) > 0.0) z(i) = ut_h(i) / sv(i);
  Reduced r;
  r.amplitudes = svd.matrixV() * z;
  r.res = e * r.amplitudes - h;
  r.objective = r.res.squaredNorm();
  r.basis = svd.matrixU();
  return r;
}

/// Gradient of the reduced objective in the frequencies. The amplitude
/// dependence drops out because E^H res = 0 at the inner optimum.
RVec reduced_gradient(const std::vector<double>& freqs, const std::vector<double>& pts,
                      const Reduced& red) {
  const std::size_t n = pts.size(), m = freqs.size();
  RVec g = RVec::Zero(m);
  for (std::size_t j = 0; j < m; ++j) {
    Complex acc(0.0, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      const Complex dcol = Complex(0.0, pts[k]) * std::polar(1.0, freqs[j] * pts[k]);
      acc += std::conj(red.res(k)) * red.amplitudes(j) * dcol;
    }
    g(j) = 2.0 * acc.real();
  }
  return g;
}

struct StartOutcome {
  std::vector<double> freqs;
  Reduced red;
  bool converged = false;
};

StartOutcome descend(std::vector<double> freqs, const NoisySamples& samples,
                     const FitConstraints& cons, const FitOptions& opt) {
  const std::vector<double>& pts = samples.points;
  CVec h(pts.size());
  for (std::size_t k = 0; k < pts.size(); ++k) h(k) = samples.values[k];

  freqs = project_feasible(std::move(freqs), cons);
  Reduced red = reduced_objective(design_matrix(freqs, pts), h, opt.svd_truncation);
  const int m = static_cast<int>(freqs.size());

  double mu = 1e-4;
  bool converged = false;
  for (int iter = 0; iter < opt.max_iterations; ++iter) {
    const RVec g = reduced_gradient(freqs, pts, red);

    // Projected-gradient convergence test (handles active box/gap constraints).
    std::vector<double> probe(freqs);
    for (int j = 0; j < m; ++j) probe[j] -= g(j);
    probe = project_feasible(std::move(probe), cons);
    double pg = 0.0;
    for (int j = 0; j < m; ++j) pg = std::max(pg, std::abs(probe[j] - freqs[j]));
    if (pg < opt.grad_tol_scale * (1.0 + red.objective)) {
      converged = true;
      break;
    }

    // Gauss-Newton model with the Kaufman variable-projection Jacobian:
    // J(k,j) = i s_k a_j e^{i phi_j s_k}, projected onto the orthogonal
    // complement of col(E) (the amplitude re-optimization absorbs the
    // in-space part; without the projection the model overestimates
    // curvature and the iteration creeps).
    CMat jac(pts.size(), m);
    for (std::size_t k = 0; k < pts.size(); ++k)
      for (int j = 0; j < m; ++j)
        jac(k, j) = Complex(0.0, pts[k]) * red.amplitudes(j) *
                    std::polar(1.0, freqs[j] * pts[k]);
    jac -= red.basis * (red.basis.adjoint() * jac);
    const RMat b = 2.0 * (jac.adjoint() * jac).real();
    RVec damp(m);
    for (int j = 0; j < m; ++j) damp(j) = std::max(b(j, j), 1e-30);

    bool accepted = false;
    for (int attempt = 0; attempt < 60; ++attempt) {
      RMat lhs = b;
      for (int j = 0; j < m; ++j) lhs(j, j) += mu * damp(j);
      const RVec step = lhs.ldlt().solve(-g);
      std::vector<double> trial(freqs);
      for (int j = 0; j < m; ++j) trial[j] += step(j);
      trial = project_feasible(std::move(trial), cons);
      Reduced cand = reduced_objective(design_matrix(trial, pts), h, opt.svd_truncation);
      if (cand.objective < red.objective) {
        const double gain = red.objective - cand.objective;
        freqs = std::move(trial);
        red = std::move(cand);
        mu = std::max(mu * 0.25, 1e-14);
        accepted = true;
        if (opt.obj_tol > 0.0 && gain < opt.obj_tol * (1.0 + red.objective))
          converged = true;
        break;
      }
      mu *= 4.0;
      if (mu > 1e16) break;
    }
    if (converged) break;
    if (!accepted) {
      // No decrease in any damped direction: a constrained stationary point.
      converged = pg < std::sqrt(opt.grad_tol_scale) * (1.0 + red.objective);
      break;
    }
  }
  return {std::move(freqs), std::move(red), converged};
}

std::vector<double> random_feasible(Rng& rng, int m, const FitConstraints& cons) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<double> f(m);
    for (int j = 0; j < m; ++j) f[j] = rng.uniform(-cons.lambda, cons.lambda);
    std::sort(f.begin(), f.end());
    bool ok = true;
    for (int j = 1; j < m; ++j)
      if (f[j] - f[j - 1] < cons.delta) ok = false;
    if (ok) return f;
  }
  std::vector<double> f(m);
  for (int j = 0; j < m; ++j) f[j] = rng.uniform(-cons.lambda, cons.lambda);
  return project_feasible(std::move(f), cons);
}

}  // namespace

double residual(const ExpPoly& poly, const NoisySamples& samples) {
  double acc = 0.0;
  for (int k = 0; k < samples.size(); ++k)
    acc += std::norm(poly(samples.points[k]) - samples.values[k]);
  return acc;
}

std::vector<Complex> varpro_amplitudes(const std::vector<double>& frequencies,
                                       const NoisySamples& samples) {
  const int m = static_cast<int>(frequencies.size());
  if (m == 0) throw std::invalid_argument("varpro_amplitudes: no frequencies");
  if (samples.size() < m)
    throw std::invalid_argument("varpro_amplitudes: need at least N sample points");
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      if (frequencies[i] == frequencies[j])
        throw std::invalid_argument("varpro_amplitudes: duplicate frequencies");

  const CMat e = design_matrix(frequencies, samples.points);
  CVec h(samples.size());
  for (int k = 0; k < samples.size(); ++k) h(k) = samples.values[k];

  Eigen::JacobiSVD<CMat> svd(e, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (sv(0) <= 0.0 || sv(m - 1) < 1e-10 * sv(0))
    throw RankDeficientError(
        "varpro_amplitudes: design matrix is rank deficient (frequencies aliased "
        "on the sampling set)");
  const CVec a = svd.solve(h);
  return {a.data(), a.data() + m};
}

double varpro_objective(const std::vector<double>& frequencies,
                        const NoisySamples& samples) {
  CVec h(samples.size());
  for (int k = 0; k < samples.size(); ++k) h(k) = samples.values[k];
  return reduced_objective(design_matrix(frequencies, samples.points), h, 1e-12)
      .objective;
}

std::vector<double> varpro_gradient(const std::vector<double>& frequencies,
                                    const NoisySamples& samples) {
  CVec h(samples.size());
  for (int k = 0; k < samples.size(); ++k) h(k) = samples.values[k];
  const Reduced red =
      reduced_objective(design_matrix(frequencies, samples.points), h, 1e-12);
  const RVec g = reduced_gradient(frequencies, samples.points, red);
  return {g.data(), g.data() + g.size()};
}

std::vector<double> project_feasible(std::vector<double> freqs,
                                     const FitConstraints& cons) {
  const int m = static_cast<int>(freqs.size());
  auto clip = [&] {
    for (double& f : freqs) f = std::clamp(f, -cons.lambda, cons.lambda);
  };
  clip();
  std::sort(freqs.begin(), freqs.end());
  if (m <= 1) return freqs;

  for (int pass = 0; pass < 200; ++pass) {
    bool violated = false;
    for (int j = 1; j < m; ++j) {
      if (freqs[j] - freqs[j - 1] < cons.delta) {
        const double mid = 0.5 * (freqs[j] + freqs[j - 1]);
        freqs[j - 1] = mid - 0.5 * cons.delta;
        freqs[j] = mid + 0.5 * cons.delta;
        violated = true;
      }
    }
    if (!violated) return freqs;
    clip();
  }
  // Slow contraction case: place the tightest feasible chain around the
  // clipped mean. Requires delta * (m - 1) <= 2 * lambda.
  const double width = cons.delta * (m - 1);
  double mean = std::accumulate(freqs.begin(), freqs.end(), 0.0) / m;
  mean = std::clamp(mean, -cons.lambda + 0.5 * width, cons.lambda - 0.5 * width);
  for (int j = 0; j < m; ++j) freqs[j] = mean - 0.5 * width + j * cons.delta;
  return freqs;
}

FitResult fit_least_squares(const NoisySamples& samples, int n_terms,
                            const FitConstraints& constraints,
                            const std::optional<std::vector<double>>& init,
                            int starts, std::uint64_t seed, const FitOptions& options) {
  if (n_terms < 1) throw std::invalid_argument("fit_least_squares: N must be >= 1");
  if (!constraints.feasible_for(n_terms))
    throw std::invalid_argument(
        "fit_least_squares: infeasible constraints (delta * (N-1) > 2 * lambda)");
  if (constraints.delta < 1e-12 * std::max(1.0, constraints.lambda))
    throw std::invalid_argument("fit_least_squares: delta below representable separation");
  if (samples.size() < 2 * n_terms)
    throw std::invalid_argument("fit_least_squares: need n >= 2N samples");
  if (init && static_cast<int>(init->size()) != n_terms)
    throw std::invalid_argument("fit_least_squares: init size mismatch");
  if (starts < 0) throw std::invalid_argument("fit_least_squares: starts must be >= 0");
  if (!init && starts == 0)
    throw std::invalid_argument("fit_least_squares: no init and no starts");

  const int total = (init ? 1 : 0) + starts;
  std::vector<StartOutcome> outcomes(total);
  par::parallel_for(static_cast<std::size_t>(total), [&](std::size_t idx) {
    std::vector<double> f0;
    if (init && idx == 0) {
      f0 = *init;
    } else {
      const std::uint64_t start_id = idx - (init ? 1 : 0);
      Rng rng(derive_seed(seed, 0x5354u, start_id));
      f0 = random_feasible(rng, n_terms, constraints);
    }
    outcomes[idx] = descend(std::move(f0), samples, constraints, options);
  });

  int best = 0;
  for (int i = 1; i < total; ++i)
    if (outcomes[i].red.objective < outcomes[best].red.objective) best = i;
  StartOutcome& win = outcomes[best];

  // Emit frequencies ascending with their amplitudes.
  std::vector<int> order(n_terms);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return win.freqs[a] < win.freqs[b]; });
  std::vector<double> freqs(n_terms);
  std::vector<Complex> amps(n_terms);
  bool clamped_zero = false;
  for (int j = 0; j < n_terms; ++j) {
    freqs[j] = win.freqs[order[j]];
    amps[j] = win.red.amplitudes(order[j]);
    if (amps[j] == Complex(0.0, 0.0)) {
      // Exactly-zero data yields exactly-zero amplitudes; keep the result
      // representable and flag it instead of failing.
      amps[j] = Complex(std::numeric_limits<double>::min(), 0.0);
      clamped_zero = true;
    }
  }

  FitResult result{ExpPoly(std::move(amps), std::move(freqs)), win.red.objective,
                   win.converged && !clamped_zero, total, {}};
  result.per_start_objectives.reserve(total);
  for (const StartOutcome& o : outcomes)
    result.per_start_objectives.push_back(o.red.objective);
  return result;
}

std::pair<std::vector<double>, std::vector<double>> fit_error_vs_truth(
    const FitResult& result, const ExpPoly& truth) {
  const int m = truth.degree();
  if (result.poly.degree() != m)
    throw std::invalid_argument("fit_error_vs_truth: degree mismatch");
  if (m > 10) throw std::invalid_argument("fit_error_vs_truth: N <= 10 only");

  std::vector<int> perm(m), best_perm;
  std::iota(perm.begin(), perm.end(), 0);
  double best_freq = std::numeric_limits<double>::infinity();
  double best_amp = std::numeric_limits<double>::infinity();
  do {
    double fe = 0.0, ae = 0.0;
    for (int j = 0; j < m; ++j) {
      fe = std::max(fe, std::abs(truth.frequencies()[j] - result.poly.frequencies()[perm[j]]));
      ae = std::max(ae, std::abs(truth.amplitudes()[j] - result.poly.amplitudes()[perm[j]]));
    }
    if (fe < best_freq || (fe == best_freq && ae < best_amp)) {
      best_freq = fe;
      best_amp = ae;
      best_perm = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  std::vector<double> amp_errors(m), freq_errors(m);
  for (int j = 0; j < m; ++j) {
    amp_errors[j] = std::abs(truth.amplitudes()[j] - result.poly.amplitudes()[best_perm[j]]);
    freq_errors[j] = std::abs(truth.frequencies()[j] - result.poly.frequencies()[best_perm[j]]);
  }
  return {std::move(amp_errors), std::move(freq_errors)};
}

}  // namespace expfit
