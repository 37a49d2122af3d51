#include "expfit/decouple.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "expfit/errors.hpp"
#include "expfit/rng.hpp"

namespace expfit {

namespace {

constexpr double kSqrt2OverPi = 0.79788456080286535588;  // sqrt(2/pi)

double parse_num(const std::string& tok) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("mixture: not a number: '" + tok + "'");
  }
}

double sinc(double s) {
  if (std::abs(s) < 1e-4) {
    const double s2 = s * s;
    return 1.0 - s2 / 6.0 + s2 * s2 / 120.0;
  }
  return std::sin(s) / s;
}

}  // namespace

SignalModel SignalModel::box() {
  SignalModel m;
  m.name_ = "BOX";
  m.fourier_ = [](double s) { return Complex(kSqrt2OverPi * sinc(s), 0.0); };
  m.progression_ = Progression{0.0, 3.14159265358979323846, /*exclude_origin=*/true};
  return m;
}

SignalModel SignalModel::delta_pair() {
  SignalModel m;
  m.name_ = "DELTAPAIR";
  m.fourier_ = [](double s) { return Complex(kSqrt2OverPi * std::cos(s), 0.0); };
  m.progression_ =
      Progression{0.5 * 3.14159265358979323846, 3.14159265358979323846, false};
  return m;
}

SignalModel SignalModel::tabulated(std::string name, std::vector<double> s,
                                   std::vector<Complex> values) {
  if (s.size() != values.size() || s.size() < 2)
    throw std::invalid_argument("SignalModel::tabulated: need >= 2 matching rows");
  for (std::size_t k = 1; k < s.size(); ++k)
    if (!(s[k] > s[k - 1]))
      throw std::invalid_argument("SignalModel::tabulated: s must be strictly increasing");
  SignalModel m;
  m.name_ = std::move(name);
  m.table_s_ = std::move(s);
  m.table_v_ = std::move(values);
  return m;
}

SignalModel SignalModel::analytic(std::string name, std::function<Complex(double)> fourier) {
  if (!fourier) throw std::invalid_argument("SignalModel::analytic: null transform");
  SignalModel m;
  m.name_ = std::move(name);
  m.fourier_ = std::move(fourier);
  return m;
}

Complex SignalModel::fourier(double s) const {
  if (fourier_) return fourier_(s);
  // Tabulated: linear interpolation, constant extension is not allowed.
  if (s < table_s_.front() || s > table_s_.back())
    throw std::invalid_argument("SignalModel '" + name_ + "': " + std::to_string(s) +
                                " outside the tabulated range");
  const auto it = std::upper_bound(table_s_.begin(), table_s_.end(), s);
  if (it == table_s_.begin()) return table_v_.front();
  const std::size_t hi = static_cast<std::size_t>(it - table_s_.begin());
  if (hi == table_s_.size()) return table_v_.back();
  const double t = (s - table_s_[hi - 1]) / (table_s_[hi] - table_s_[hi - 1]);
  return table_v_[hi - 1] + t * (table_v_[hi] - table_v_[hi - 1]);
}

std::vector<double> SignalModel::zero_set(double lo, double hi, double tol) const {
  if (!(hi >= lo)) throw std::invalid_argument("zero_set: empty interval");
  if (!(tol > 0.0)) throw std::invalid_argument("zero_set: tol must be > 0");
  std::vector<double> zeros;

  if (progression_) {
    const double step = progression_->step;
    const double off = progression_->offset;
    long long k = static_cast<long long>(std::ceil((lo - off) / step - 1e-12));
    for (; off + static_cast<double>(k) * step <= hi + 1e-12 * std::max(1.0, std::abs(hi)); ++k) {
      const double z = off + static_cast<double>(k) * step;
      if (z < lo) continue;
      if (progression_->exclude_origin && std::abs(z) < 0.5 * step) continue;
      zeros.push_back(z);
    }
    return zeros;
  }

  if (!table_s_.empty()) {
    // Per segment, |A + t(B - A)| is minimized at one point; accept if <= tol.
    const double span_lo = std::max(lo, table_s_.front());
    const double span_hi = std::min(hi, table_s_.back());
    for (std::size_t i = 0; i + 1 < table_s_.size(); ++i) {
      if (table_s_[i + 1] < span_lo || table_s_[i] > span_hi) continue;
      const Complex a = table_v_[i];
      const Complex d = table_v_[i + 1] - a;
      double t = 0.0;
      const double dd = std::norm(d);
      if (dd > 0.0) t = std::clamp(-(std::conj(d) * a).real() / dd, 0.0, 1.0);
      const double z = table_s_[i] + t * (table_s_[i + 1] - table_s_[i]);
      if (z < span_lo || z > span_hi) continue;
      if (std::abs(a + t * d) <= tol) {
        // zeros closer than a segment are unresolvable at this tabulation
        if (zeros.empty() || z - zeros.back() > table_s_[i + 1] - table_s_[i])
          zeros.push_back(z);
      }
    }
    return zeros;
  }

  // Generic analytic transform: bracket local minima of |F| on a grid, then
  // shrink by golden-section. Grid pitch follows the zero tolerance but is
  // floored to keep scans bounded.
  const double pitch = std::max(tol * 10.0, (hi - lo) / 262144.0);
  const long long cells = std::max<long long>(2, static_cast<long long>((hi - lo) / pitch));
  auto mag = [&](double s) { return std::abs(fourier_(s)); };
  double prev2 = mag(lo), prev1 = mag(lo + (hi - lo) / cells);
  for (long long i = 2; i <= cells; ++i) {
    const double s = lo + (hi - lo) * static_cast<double>(i) / cells;
    const double cur = mag(s);
    if (prev1 <= prev2 && prev1 <= cur) {
      double a = lo + (hi - lo) * static_cast<double>(i - 2) / cells;
      double b = s;
      for (int it = 0; it < 200 && (b - a) > tol * 1e-3; ++it) {
        const double m1 = a + 0.381966011250105 * (b - a);
        const double m2 = b - 0.381966011250105 * (b - a);
        if (mag(m1) < mag(m2)) b = m2; else a = m1;
      }
      const double z = 0.5 * (a + b);
      if (mag(z) <= tol && (zeros.empty() || z - zeros.back() > pitch))
        zeros.push_back(z);
    }
    prev2 = prev1;
    prev1 = cur;
  }
  return zeros;
}

double SignalModel::nearest_zero_distance(double s, double tol) const {
  if (progression_) {
    const double step = progression_->step;
    const double off = progression_->offset;
    double best = std::numeric_limits<double>::infinity();
    const double k0 = std::round((s - off) / step);
    for (double k : {k0 - 1.0, k0, k0 + 1.0}) {
      const double z = off + k * step;
      if (progression_->exclude_origin && std::abs(z) < 0.5 * step) continue;
      best = std::min(best, std::abs(s - z));
    }
    return best;
  }
  const double window = std::max(1.0, std::abs(s) * 1e-3);
  const auto zs = zero_set(s - window, s + window, tol);
  double best = std::numeric_limits<double>::infinity();
  for (double z : zs) best = std::min(best, std::abs(s - z));
  return best;
}

ShiftMixture::ShiftMixture(std::vector<MixtureComponent> components_)
    : components(std::move(components_)) {
  if (components.empty()) throw std::invalid_argument("ShiftMixture: no components");
  for (const MixtureComponent& c : components) {
    if (c.shifts.empty()) throw std::invalid_argument("ShiftMixture: component without shifts");
    if (c.shifts.size() != c.amplitudes.size())
      throw std::invalid_argument("ShiftMixture: shift/amplitude length mismatch");
    for (std::size_t i = 0; i < c.shifts.size(); ++i)
      for (std::size_t j = i + 1; j < c.shifts.size(); ++j)
        if (c.shifts[i] == c.shifts[j])
          throw std::invalid_argument("ShiftMixture: coincident shifts within a component");
  }
}

double ShiftMixture::eta(int j, double beta) const {
  double m = 0.0;
  for (double x : components.at(j).shifts) m = std::max(m, beta * std::abs(x));
  return m;
}

double ShiftMixture::sigma(int j, double beta) const {
  const auto& xs = components.at(j).shifts;
  if (xs.size() < 2) return std::numeric_limits<double>::infinity();
  double g = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t k = i + 1; k < xs.size(); ++k)
      g = std::min(g, beta * std::abs(xs[i] - xs[k]));
  return g;
}

Complex fourier_of_mixture(const ShiftMixture& mix, double s, double beta) {
  Complex acc(0.0, 0.0);
  for (const MixtureComponent& c : mix.components) {
    const Complex fj = c.signal.fourier(s);
    Complex inner(0.0, 0.0);
    for (std::size_t q = 0; q < c.shifts.size(); ++q)
      inner += c.amplitudes[q] * std::polar(1.0, -beta * s * c.shifts[q]);
    acc += inner * fj;
  }
  return acc;
}

std::vector<double> common_zero_set(const std::vector<SignalModel>& models, int j,
                                    double r, double tol, std::string* diagnostic) {
  const int k = static_cast<int>(models.size());
  if (k < 2) throw std::invalid_argument("common_zero_set: need k >= 2 models");
  if (j < 0 || j >= k) throw std::invalid_argument("common_zero_set: bad component index");
  if (!(r > 0.0) || !(tol > 0.0))
    throw std::invalid_argument("common_zero_set: need r > 0 and tol > 0");

  const double tol_match = 1e-9 * r;  // two zeros coincide only if this close
  int base = (j == 0) ? 1 : 0;
  std::vector<double> candidates = models[base].zero_set(0.0, r, tol);

  std::vector<double> result;
  for (double z : candidates) {
    bool on_all = true;
    for (int l = 0; l < k && on_all; ++l) {
      if (l == j || l == base) continue;
      if (models[l].nearest_zero_distance(z, tol) > tol_match) on_all = false;
    }
    if (!on_all) continue;
    if (std::abs(models[j].fourier(z)) <= tol) continue;  // z also kills f_j
    result.push_back(z);
  }
  if (result.empty() && diagnostic) {
    *diagnostic = "W_" + std::to_string(j + 1) + " is empty on [0, " +
                  std::to_string(r) + "]: the other transforms share no zero where " +
                  models[j].name() + " survives";
  }
  return result;
}

double min_divisor(const SignalModel& model, const std::vector<double>& points) {
  if (points.empty()) throw std::invalid_argument("min_divisor: empty point set");
  double m = std::numeric_limits<double>::infinity();
  for (double s : points) m = std::min(m, std::abs(model.fourier(s)));
  if (m < 1e-14)
    throw DivisionHazardError("min_divisor: |F(" + model.name() +
                              ")| vanishes on the sampling set");
  return m;
}

DecoupledSystem assemble_decoupled(const std::vector<Complex>& mixture_samples,
                                   const SignalModel& model_j,
                                   const std::vector<double>& sample_points,
                                   int component, double tol, double beta) {
  if (mixture_samples.size() != sample_points.size())
    throw std::invalid_argument("assemble_decoupled: sample/point length mismatch");
  DecoupledSystem sys;
  sys.component = component;
  sys.sample_points = sample_points;
  sys.beta = beta;
  sys.kappa = min_divisor(model_j, sample_points);
  if (sys.kappa <= tol)
    throw DivisionHazardError("assemble_decoupled: minimal divisor " +
                              std::to_string(sys.kappa) + " at or below tol");
  sys.rhs.resize(mixture_samples.size());
  for (std::size_t l = 0; l < mixture_samples.size(); ++l)
    sys.rhs[l] = mixture_samples[l] / model_j.fourier(sample_points[l]);
  return sys;
}

Reconstruction reconstruct(const std::vector<ComponentInput>& components,
                           const ReconstructOptions& options) {
  if (components.empty()) throw std::invalid_argument("reconstruct: no components");

  std::vector<ComponentReconstruction> recs;
  std::vector<MixtureComponent> recovered;
  for (std::size_t j = 0; j < components.size(); ++j) {
    const ComponentInput& in = components[j];
    if (in.sample_points.empty())
      throw UnsamplableComponentError("reconstruct: empty sampling set for component " +
                                      std::to_string(j + 1) + " (" + in.signal.name() + ")");
    if (in.num_shifts < 1)
      throw std::invalid_argument("reconstruct: num_shifts must be >= 1");
    if (!(in.eta >= 0.0) || !(in.noise_bound >= 0.0))
      throw std::invalid_argument("reconstruct: eta and noise_bound must be >= 0");

    DecoupledSystem system =
        assemble_decoupled(in.measured, in.signal, in.sample_points,
                           static_cast<int>(j), options.divisor_tol, options.beta);

    const SamplingSet set(in.sample_points);
    const SpanReport span = metric_span(set, 2 * in.num_shifts, in.eta);
    const bool certified = span.omega > 0.0;

    // sigma is meaningless for a single shift; any positive value keeps the
    // constraint machinery happy without constraining anything.
    const double sigma = (in.num_shifts == 1 && !(in.sigma > 0.0))
                             ? std::max(in.eta, 1.0)
                             : in.sigma;
    const FitConstraints cons(in.eta, sigma);

    std::optional<std::vector<double>> init;
    if (in.init_shifts) {
      if (static_cast<int>(in.init_shifts->size()) != in.num_shifts)
        throw std::invalid_argument("reconstruct: init_shifts size mismatch");
      std::vector<double> f(in.num_shifts);
      for (int q = 0; q < in.num_shifts; ++q) f[q] = -options.beta * (*in.init_shifts)[q];
      std::sort(f.begin(), f.end());
      init = std::move(f);
    }

    const NoisySamples noisy(in.sample_points, system.rhs,
                             in.noise_bound / system.kappa);
    FitResult fit = fit_least_squares(noisy, in.num_shifts, cons, init, options.starts,
                                      derive_seed(options.seed, 0xDECu, j), options.fit);

    std::vector<double> shifts(in.num_shifts);
    std::vector<Complex> amplitudes(in.num_shifts);
    for (int q = 0; q < in.num_shifts; ++q) {
      shifts[q] = -fit.poly.frequencies()[q] / options.beta;
      amplitudes[q] = fit.poly.amplitudes()[q];
    }
    // frequencies were ascending; shifts = -phi/beta come out descending
    std::reverse(shifts.begin(), shifts.end());
    std::reverse(amplitudes.begin(), amplitudes.end());

    std::vector<double> moduli(in.num_shifts);
    for (int q = 0; q < in.num_shifts; ++q)
      moduli[q] = std::max(std::abs(amplitudes[q]), std::numeric_limits<double>::min());
    BoundReport bound =
        make_bound_report(in.num_shifts, set.size(), set.r(), in.eta, sigma, span.omega,
                          span.M_bound, system.kappa, in.noise_bound,
                          /*decoupled=*/true, moduli);

    recovered.push_back(MixtureComponent{in.signal, shifts, amplitudes});
    recs.push_back(ComponentReconstruction{std::move(system), span, certified,
                                           std::move(fit), std::move(shifts),
                                           std::move(amplitudes), std::move(bound)});
  }
  return Reconstruction{ShiftMixture(std::move(recovered)), std::move(recs)};
}

namespace {

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> toks;
  std::stringstream ss(line);
  std::string t;
  while (ss >> t) toks.push_back(t);
  return toks;
}

SignalModel load_tabulated(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open tabulated transform file: " + path);
  std::vector<double> s;
  std::vector<Complex> v;
  std::string line;
  while (std::getline(in, line)) {
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    for (char& ch : line)
      if (ch == ',') ch = ' ';
    const auto toks = tokenize(line);
    if (toks.empty()) continue;
    if (toks.size() != 3)
      throw ConfigError("tabulated transform row must be s,re,im: " + line);
    s.push_back(parse_num(toks[0]));
    v.emplace_back(parse_num(toks[1]), parse_num(toks[2]));
  }
  return SignalModel::tabulated(path, std::move(s), std::move(v));
}

}  // namespace

ShiftMixture parse_mixture(const std::string& text, const std::string& base_dir) {
  std::vector<MixtureComponent> comps;
  std::optional<SignalModel> signal;
  std::vector<double> shifts;
  std::vector<Complex> amps;

  auto flush = [&] {
    if (!signal) return;
    if (shifts.empty()) throw ConfigError("mixture component without shifts");
    if (amps.size() != shifts.size())
      throw ConfigError("mixture component amplitude/shift count mismatch");
    comps.push_back(MixtureComponent{*signal, shifts, amps});
    signal.reset();
    shifts.clear();
    amps.clear();
  };

  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const auto toks = tokenize(line);
    if (toks.empty()) continue;
    if (toks[0] == "signal") {
      flush();
      if (toks.size() < 2) throw ConfigError("mixture: 'signal' needs a name");
      if (toks[1] == "BOX") {
        signal = SignalModel::box();
      } else if (toks[1] == "DELTAPAIR") {
        signal = SignalModel::delta_pair();
      } else if (toks[1] == "TABULATED") {
        if (toks.size() < 3) throw ConfigError("mixture: TABULATED needs a file path");
        const std::string path =
            (!base_dir.empty() && toks[2].front() != '/') ? base_dir + "/" + toks[2] : toks[2];
        signal = load_tabulated(path);
      } else {
        throw ConfigError("mixture: unknown signal '" + toks[1] + "'");
      }
    } else if (toks[0] == "shifts") {
      if (!signal) throw ConfigError("mixture: 'shifts' before 'signal'");
      for (std::size_t i = 1; i < toks.size(); ++i) shifts.push_back(parse_num(toks[i]));
    } else if (toks[0] == "amplitudes") {
      if (!signal) throw ConfigError("mixture: 'amplitudes' before 'signal'");
      if ((toks.size() - 1) % 2 != 0)
        throw ConfigError("mixture: amplitudes must be re/im pairs");
      for (std::size_t i = 1; i < toks.size(); i += 2)
        amps.emplace_back(parse_num(toks[i]), parse_num(toks[i + 1]));
    } else {
      throw ConfigError("mixture: unknown directive '" + toks[0] + "'");
    }
  }
  flush();
  return ShiftMixture(std::move(comps));
}

}  // namespace expfit
