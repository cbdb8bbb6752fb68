#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "adelim/correlation_series.hpp"
#include "adelim/errors.hpp"
#include "adelim/quadrature.hpp"

namespace adelim {

// Classical analog of the band-limited thermal bath. Normally ordered
// correlators of a thermal state are classically representable, so complex
// Gaussian mode amplitudes reproduce <a^dag a>-type averages. Commutators are
// NOT representable by these samples and are computed only by closed form or
// quadrature (analytic_forms / quadrature modules).
//
// The continuous decomposition carries an overall minus sign on the mode sum;
// it cancels in every second moment, so the synthesizer omits it.

/// Discretized bath: midpoint frequency grid on [-omega_cap, omega_cap] and
/// one circularly symmetric complex Gaussian amplitude per mode with
/// <|beta_k|^2> = n_th / d_omega. n_th = 0 forces all amplitudes to exactly
/// zero. Amplitudes are drawn from per-mode streams derived from the master
/// seed, so a fixed seed gives bit-identical modes on any worker count.
struct BathModes {
  double omega_c = 0.0;
  double omega_cap = 0.0;
  double d_omega = 0.0;  ///< actual spacing 2 omega_cap / mode_count
  double n_th = 0.0;
  std::uint64_t seed = 0;
  std::vector<double> frequencies;
  std::vector<std::complex<double>> amplitudes;
};

/// Mode count is ceil(2 omega_cap / d_omega); the requested spacing is an
/// upper bound and the actual spacing 2 omega_cap / count covers the band
/// exactly. Requires 0 < d_omega <= omega_cap / 10.
BathModes synthesize_modes(double omega_cap, double d_omega, double n_th, std::uint64_t seed,
                           double omega_c = 0.0);

/// Band-limited input noise samples in the rotating frame.
struct NoiseSeries {
  std::vector<double> t;
  std::vector<std::complex<double>> samples;
  double omega_cap = 0.0;
  double d_omega = 0.0;
  std::uint64_t seed = 0;
};

/// Renders a_in(t) = (d_omega / sqrt(2 pi)) sum_k exp(i (omega_c - omega_k) t) beta_k.
/// Direct summation for <= 2e4 modes or nonuniform grids; uniform grids with
/// more modes go through a Bluestein chirp-z transform. The two paths agree
/// within 1e-10.
NoiseSeries render_noise(const BathModes& modes, const std::vector<double>& t_grid);

/// One-pole cavity response samples with the warm-up span removed.
struct FilteredSeries {
  std::vector<double> t;
  std::vector<std::complex<double>> values;
  std::size_t warmup_dropped = 0;
};

/// Discrete one-pole filter a(t) = sqrt(kappa) Int_{-inf}^{t} e^{-kappa (t-s)/2} a_in(s) ds
/// with trapezoidal input weighting. Requires a uniform grid with step
/// h <= 0.2 / kappa and a warm-up span >= 20 / kappa, which is discarded so
/// the missing t < 0 history cannot be seen in the output. DC gain is
/// 2 / sqrt(kappa).
FilteredSeries filter_exponential(const NoiseSeries& noise, double warmup_span = 20.0,
                                  double kappa = 1.0);

struct McCorrelationParams {
  double omega_cap = 0.0;
  double d_omega = 0.0;
  double n_th = 0.0;
  std::int64_t n_traj = 0;
  std::vector<double> lags;
  std::uint64_t seed = 0;
  double omega_c = 0.0;
  int threads = 1;
};

/// Monte Carlo estimate of the cutoff correlation <a^dag(t) a(t + lag)> over
/// independent bath realizations. The one-pole response of each mode is
/// applied in closed form, so the only errors are the frequency
/// discretization and the ensemble statistics. Trajectory i draws its modes
/// from stream derive(seed, i); partial results are reduced in trajectory
/// order, so estimates are bit-identical for any thread count. Fewer than
/// 100 trajectories attaches a statistics warning to the result.
CorrelationSeries mc_correlation(const McCorrelationParams& params);

/// Named smooth test functions with analytic values and first derivatives.
struct TestFunction {
  enum class Kind { constant, gaussian, exponential };
  Kind kind = Kind::constant;
  double scale = 1.0;   ///< c for constant, peak value otherwise
  double width = 1.0;   ///< gaussian width T
  double center = 0.0;  ///< gaussian center
  double rate = 0.0;    ///< exponential: g(t) = scale * exp(rate * t)

  double value(double t) const;
  double derivative(double t) const;

  static TestFunction constant(double c);
  static TestFunction gaussian(double width, double center = 0.0, double scale = 1.0);
  static TestFunction exponential(double rate, double scale = 1.0);
};

/// Residual of the delta-function expansion against the one-sided response
/// integral C(t) = Int_{-inf}^{t} e^{-kappa (t - t')/2} g(t') dt'. Boundary
/// distributions at t' = t carry half weight, so the order-k approximant is
///   sum_{m=1..k} (1/2) c_m (-1)^(m-1) g^(m-1)(t),  c_m = delta-expansion coefficients.
/// For order 1 the residual scales as kappa^-2 for slow g.
struct ExpansionCheck {
  double kappa = 1.0;
  int order = 1;
  double t_eval = 0.0;
  double convolution = 0.0;  ///< quadrature value of C(t_eval)
  double approximant = 0.0;
  double residual = 0.0;
};

ExpansionCheck convolution_expansion_check(const TestFunction& g, int order, double t_eval,
                                           double kappa = 1.0, const QuadratureConfig& cfg = {});

}  // namespace adelim
