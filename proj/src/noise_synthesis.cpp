#include "adelim/noise_synthesis.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include "adelim/analytic_forms.hpp"
#include "adelim/parallel.hpp"
#include "adelim/rng.hpp"

namespace adelim {

namespace {

using Complex = std::complex<double>;

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::size_t kDirectModeLimit = 20000;

struct ModeGrid {
  std::int64_t count = 0;
  double spacing = 0.0;
  double first = 0.0;  // lowest midpoint frequency
};

ModeGrid make_grid(double omega_cap, double d_omega) {
  if (!(omega_cap > 0.0))
    throw ConfigurationError("mode grid: omega_cap must be positive");
  if (!(d_omega > 0.0) || !(d_omega <= omega_cap / 10.0))
    throw ConfigurationError("mode grid: requires 0 < d_omega <= omega_cap / 10");
  ModeGrid grid;
  grid.count = static_cast<std::int64_t>(std::ceil(2.0 * omega_cap / d_omega));
  if (grid.count > 20'000'000)
    throw ConfigurationError("mode grid: more than 2e7 modes requested");
  grid.spacing = 2.0 * omega_cap / static_cast<double>(grid.count);
  grid.first = -omega_cap + 0.5 * grid.spacing;
  return grid;
}

Complex draw_amplitude(std::uint64_t traj_seed, std::int64_t k, double sigma) {
  SplitMix64 rng(SplitMix64::derive(traj_seed, static_cast<std::uint64_t>(k)));
  const auto [g1, g2] = rng.normal_pair();
  return {sigma * g1, sigma * g2};
}

bool uniform_grid(const std::vector<double>& t, double& step) {
  if (t.size() < 2) {
    step = 0.0;
    return true;
  }
  step = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    if (std::abs(t[i + 1] - t[i] - step) > 1.0e-9 * std::max(step, 1.0)) return false;
  }
  return true;
}

std::mutex fftw_plan_mutex;

void fft_inplace(std::vector<Complex>& data, int sign) {
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex);
    plan = fftw_plan_dft_1d(static_cast<int>(data.size()),
                            reinterpret_cast<fftw_complex*>(data.data()),
                            reinterpret_cast<fftw_complex*>(data.data()), sign, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex);
    fftw_destroy_plan(plan);
  }
}

// exp(-i k^2 theta / 2) with the phase reduced in extended precision; k^2 is
// exact in the 64-bit long double mantissa up to the mode-count guard, so the
// product is the only rounding step that matters.
Complex chirp_phase(std::int64_t k, double theta_half, int sign) {
  const long double phase = std::fmod(static_cast<long double>(k) * static_cast<long double>(k) *
                                           static_cast<long double>(theta_half),
                                       static_cast<long double>(kTwoPi));
  const auto p = static_cast<double>(phase);
  return {std::cos(p), sign * std::sin(p)};
}

// S_n = sum_k c_k exp(-i k n theta) for n in [0, n_out) via Bluestein's
// identity kn = (k^2 + n^2 - (n - k)^2) / 2 and one circular convolution.
std::vector<Complex> chirp_z(const std::vector<Complex>& coeffs, double theta,
                             std::size_t n_out) {
  const std::size_t k_in = coeffs.size();
  std::size_t m = 1;
  while (m < n_out + k_in - 1) m *= 2;

  const double theta_half = 0.5 * theta;
  std::vector<Complex> u(m, Complex(0.0, 0.0));
  std::vector<Complex> v(m, Complex(0.0, 0.0));
  for (std::size_t k = 0; k < k_in; ++k)
    u[k] = coeffs[k] * chirp_phase(static_cast<std::int64_t>(k), theta_half, -1);
  for (std::size_t n = 0; n < n_out; ++n)
    v[n] = chirp_phase(static_cast<std::int64_t>(n), theta_half, +1);
  for (std::size_t k = 1; k < k_in; ++k)
    v[m - k] = chirp_phase(static_cast<std::int64_t>(k), theta_half, +1);

  fft_inplace(u, FFTW_FORWARD);
  fft_inplace(v, FFTW_FORWARD);
  for (std::size_t i = 0; i < m; ++i) u[i] *= v[i];
  fft_inplace(u, FFTW_BACKWARD);

  std::vector<Complex> out(n_out);
  const double scale = 1.0 / static_cast<double>(m);
  for (std::size_t n = 0; n < n_out; ++n)
    out[n] = scale * u[n] * chirp_phase(static_cast<std::int64_t>(n), theta_half, -1);
  return out;
}

}  // namespace

BathModes synthesize_modes(double omega_cap, double d_omega, double n_th, std::uint64_t seed,
                           double omega_c) {
  if (!(n_th >= 0.0)) throw ConfigurationError("synthesize_modes: n_th must be nonnegative");
  const ModeGrid grid = make_grid(omega_cap, d_omega);

  BathModes modes;
  modes.omega_c = omega_c;
  modes.omega_cap = omega_cap;
  modes.d_omega = grid.spacing;
  modes.n_th = n_th;
  modes.seed = seed;
  modes.frequencies.resize(grid.count);
  modes.amplitudes.assign(grid.count, Complex(0.0, 0.0));
  for (std::int64_t k = 0; k < grid.count; ++k)
    modes.frequencies[k] = grid.first + grid.spacing * static_cast<double>(k);

  if (n_th > 0.0) {
    const double sigma = std::sqrt(0.5 * n_th / grid.spacing);
    for (std::int64_t k = 0; k < grid.count; ++k)
      modes.amplitudes[k] = draw_amplitude(seed, k, sigma);
  }
  return modes;
}

NoiseSeries render_noise(const BathModes& modes, const std::vector<double>& t_grid) {
  if (t_grid.empty()) throw ConfigurationError("render_noise: empty time grid");
  for (std::size_t i = 0; i + 1 < t_grid.size(); ++i) {
    if (!(t_grid[i] < t_grid[i + 1]))
      throw ConfigurationError("render_noise: time grid must be strictly increasing");
  }

  const std::size_t n_modes = modes.amplitudes.size();
  const std::size_t n_times = t_grid.size();
  const double pref = modes.d_omega / std::sqrt(kTwoPi);

  NoiseSeries series;
  series.t = t_grid;
  series.samples.assign(n_times, Complex(0.0, 0.0));
  series.omega_cap = modes.omega_cap;
  series.d_omega = modes.d_omega;
  series.seed = modes.seed;

  double step = 0.0;
  const bool uniform = uniform_grid(t_grid, step);

  if (n_modes > kDirectModeLimit && uniform && n_times >= 2) {
    // a(t_n) = pref e^{i (omega_c - omega_0) t_n} sum_k [beta_k e^{-i k d t_0}] e^{-i k n d h}
    const double d = modes.d_omega;
    const double t0 = t_grid.front();
    std::vector<Complex> coeffs(n_modes);
    for (std::size_t k = 0; k < n_modes; ++k) {
      const long double ph = std::fmod(static_cast<long double>(k) * static_cast<long double>(d) *
                                            static_cast<long double>(t0),
                                        static_cast<long double>(kTwoPi));
      const auto p = static_cast<double>(ph);
      coeffs[k] = modes.amplitudes[k] * Complex(std::cos(p), -std::sin(p));
    }
    const std::vector<Complex> s = chirp_z(coeffs, d * step, n_times);
    const double carrier = modes.omega_c - modes.frequencies.front();
    for (std::size_t n = 0; n < n_times; ++n)
      series.samples[n] = pref * std::polar(1.0, carrier * t_grid[n]) * s[n];
    return series;
  }

  for (std::size_t n = 0; n < n_times; ++n) {
    Complex acc(0.0, 0.0);
    for (std::size_t k = 0; k < n_modes; ++k)
      acc += modes.amplitudes[k] * std::polar(1.0, (modes.omega_c - modes.frequencies[k]) * t_grid[n]);
    series.samples[n] = pref * acc;
  }
  return series;
}

FilteredSeries filter_exponential(const NoiseSeries& noise, double warmup_span, double kappa) {
  if (!(kappa > 0.0)) throw ConfigurationError("filter_exponential: kappa must be positive");
  if (!(warmup_span >= 20.0 / kappa))
    throw ConfigurationError("filter_exponential: warm-up span must be >= 20 / kappa");
  double step = 0.0;
  if (noise.t.size() < 2 || !uniform_grid(noise.t, step))
    throw ConfigurationError("filter_exponential: requires a uniform time grid");
  if (!(step <= 0.2 / kappa))
    throw ConfigurationError("filter_exponential: step must satisfy h <= 0.1 * (2 / kappa)");

  const auto n_drop = static_cast<std::size_t>(std::ceil(warmup_span / step));
  if (noise.t.size() <= n_drop)
    throw ConfigurationError("filter_exponential: series shorter than the warm-up span");

  const double decay = std::exp(-0.5 * kappa * step);
  const double gain = (2.0 / std::sqrt(kappa)) * (1.0 - decay);

  FilteredSeries out;
  out.warmup_dropped = n_drop;
  out.t.reserve(noise.t.size() - n_drop);
  out.values.reserve(noise.t.size() - n_drop);

  Complex acc(0.0, 0.0);
  for (std::size_t n = 0; n < noise.t.size(); ++n) {
    if (n > 0) acc = decay * acc + gain * 0.5 * (noise.samples[n - 1] + noise.samples[n]);
    if (n >= n_drop) {
      out.t.push_back(noise.t[n]);
      out.values.push_back(acc);
    }
  }
  return out;
}

CorrelationSeries mc_correlation(const McCorrelationParams& params) {
  if (params.n_traj < 1) throw ConfigurationError("mc_correlation: n_traj must be >= 1");
  if (!(params.n_th >= 0.0)) throw ConfigurationError("mc_correlation: n_th must be nonnegative");
  if (params.lags.empty()) throw ConfigurationError("mc_correlation: empty lag list");
  for (double lag : params.lags) {
    if (!(lag >= 0.0)) throw ConfigurationError("mc_correlation: lags must be nonnegative");
  }
  const ModeGrid grid = make_grid(params.omega_cap, params.d_omega);

  std::vector<double> lags = params.lags;
  std::sort(lags.begin(), lags.end());
  lags.erase(std::unique(lags.begin(), lags.end()), lags.end());
  const std::size_t n_lags = lags.size();
  const auto n_modes = static_cast<std::size_t>(grid.count);
  const auto n_traj = static_cast<std::size_t>(params.n_traj);

  CorrelationSeries series;
  series.method = "cutoff-mc";
  series.lags = lags;
  series.values.assign(n_lags, Complex(0.0, 0.0));
  series.std_errors.assign(n_lags, 0.0);
  if (params.n_traj < 100)
    series.warning = "fewer than 100 trajectories; standard errors are unreliable";

  if (params.n_th == 0.0) return series;  // vacuum: every estimate is exactly zero

  // Closed-form one-pole response per mode, sampled at t = 0 and t = lag:
  // a(t) = sum_k beta_k W_k e^{i phi_k t}, W_k = pref sqrt(kappa) / (kappa/2 + i phi_k).
  if (grid.count * static_cast<std::int64_t>(n_lags + 1) > 100'000'000)
    throw ConfigurationError("mc_correlation: mode count x lag count too large");
  const double pref = grid.spacing / std::sqrt(kTwoPi);
  std::vector<Complex> response(n_modes * (n_lags + 1));
  for (std::size_t k = 0; k < n_modes; ++k) {
    const double phi = params.omega_c - (grid.first + grid.spacing * static_cast<double>(k));
    const Complex w = pref / Complex(0.5, phi);
    Complex* row = &response[k * (n_lags + 1)];
    row[0] = w;
    for (std::size_t j = 0; j < n_lags; ++j) row[j + 1] = w * std::polar(1.0, phi * lags[j]);
  }

  const double sigma = std::sqrt(0.5 * params.n_th / grid.spacing);
  std::vector<Complex> products(n_traj * n_lags);
  parallel_for(params.n_traj, params.threads, [&](std::int64_t i) {
    const std::uint64_t traj_seed = SplitMix64::derive(params.seed, static_cast<std::uint64_t>(i));
    std::vector<Complex> acc(n_lags + 1, Complex(0.0, 0.0));
    for (std::size_t k = 0; k < n_modes; ++k) {
      const Complex beta = draw_amplitude(traj_seed, static_cast<std::int64_t>(k), sigma);
      const Complex* row = &response[k * (n_lags + 1)];
      for (std::size_t j = 0; j <= n_lags; ++j) acc[j] += beta * row[j];
    }
    const Complex a0_conj = std::conj(acc[0]);
    for (std::size_t j = 0; j < n_lags; ++j) products[i * n_lags + j] = a0_conj * acc[j + 1];
  });

  // Reduction in trajectory order: estimates are independent of thread count.
  for (std::size_t j = 0; j < n_lags; ++j) {
    Complex sum(0.0, 0.0);
    for (std::size_t i = 0; i < n_traj; ++i) sum += products[i * n_lags + j];
    const Complex mean = sum / static_cast<double>(n_traj);
    double var_re = 0.0;
    double var_im = 0.0;
    for (std::size_t i = 0; i < n_traj; ++i) {
      const Complex d = products[i * n_lags + j] - mean;
      var_re += d.real() * d.real();
      var_im += d.imag() * d.imag();
    }
    series.values[j] = mean;
    if (n_traj > 1) {
      const double denom = static_cast<double>(n_traj) * static_cast<double>(n_traj - 1);
      series.std_errors[j] = std::sqrt((var_re + var_im) / denom);
    }
  }
  return series;
}

double TestFunction::value(double t) const {
  switch (kind) {
    case Kind::constant:
      return scale;
    case Kind::gaussian: {
      const double z = (t - center) / width;
      return scale * std::exp(-0.5 * z * z);
    }
    case Kind::exponential:
      return scale * std::exp(rate * t);
  }
  throw ConfigurationError("TestFunction: unknown kind");
}

double TestFunction::derivative(double t) const {
  switch (kind) {
    case Kind::constant:
      return 0.0;
    case Kind::gaussian:
      return -(t - center) / (width * width) * value(t);
    case Kind::exponential:
      return rate * value(t);
  }
  throw ConfigurationError("TestFunction: unknown kind");
}

TestFunction TestFunction::constant(double c) {
  TestFunction g;
  g.kind = Kind::constant;
  g.scale = c;
  return g;
}

TestFunction TestFunction::gaussian(double width, double center, double scale) {
  if (!(width > 0.0)) throw ConfigurationError("TestFunction::gaussian: width must be positive");
  TestFunction g;
  g.kind = Kind::gaussian;
  g.width = width;
  g.center = center;
  g.scale = scale;
  return g;
}

TestFunction TestFunction::exponential(double rate, double scale) {
  TestFunction g;
  g.kind = Kind::exponential;
  g.rate = rate;
  g.scale = scale;
  return g;
}

ExpansionCheck convolution_expansion_check(const TestFunction& g, int order, double t_eval,
                                           double kappa, const QuadratureConfig& cfg) {
  if (!(kappa > 0.0))
    throw ConfigurationError("convolution_expansion_check: kappa must be positive");
  if (!std::isfinite(t_eval))
    throw ConfigurationError("convolution_expansion_check: t_eval must be finite");
  const std::vector<double> coeffs = delta_expansion_coefficients(order, kappa);

  double net_decay = 0.5 * kappa;
  if (g.kind == TestFunction::Kind::exponential) {
    net_decay = 0.5 * kappa + g.rate;
    if (!(net_decay > 0.05 * kappa)) {
      throw ConfigurationError(
          "convolution_expansion_check: exponential rate too negative for a convergent response "
          "integral (requires rate > -0.45 kappa)");
    }
  }

  // One-sided response integral over the past, truncated where the kernel
  // (and, for gaussians, the test function) is negligible.
  double upper = 40.0 / net_decay;
  std::vector<double> pts{0.0};
  if (g.kind == TestFunction::Kind::gaussian) {
    const double peak = t_eval - g.center;
    upper = std::max(upper, peak + 10.0 * g.width);
    for (double r : {-8.0, -4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0, 8.0}) {
      const double u = peak + r * g.width;
      if (u > 0.0 && u < upper) pts.push_back(u);
    }
  }
  for (double u = 1.0 / kappa; u < upper; u *= 4.0) pts.push_back(u);
  pts.push_back(upper);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  const auto res = integrate_adaptive(
      [&](double u) {
        return Complex(std::exp(-0.5 * kappa * u) * g.value(t_eval - u), 0.0);
      },
      pts, cfg);

  ExpansionCheck check;
  check.kappa = kappa;
  check.order = order;
  check.t_eval = t_eval;
  check.convolution = res.value.real();
  // Boundary deltas carry half weight against the one-sided integral.
  check.approximant = 0.5 * coeffs[0] * g.value(t_eval);
  if (order >= 2) check.approximant -= 0.5 * coeffs[1] * g.derivative(t_eval);
  check.residual = std::abs(check.convolution - check.approximant);
  return check;
}

}  // namespace adelim
