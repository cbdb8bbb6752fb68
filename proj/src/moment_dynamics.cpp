#include "adelim/moment_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

namespace adelim {

namespace {

using Complex = std::complex<double>;

void require_hurwitz(const SystemParams& p) {
  if (!(p.gamma > 0.0 || p.g_coupling > 0.0)) {
    throw NoSteadyStateError(
        "moment_dynamics: gamma = g = 0 leaves mode b undamped (drift matrix not Hurwitz)");
  }
}

// Eigenvalues of a complex 2x2 via the quadratic formula.
std::pair<Complex, Complex> eigenvalues2(const Eigen::Matrix2cd& m) {
  const Complex tr = m(0, 0) + m(1, 1);
  const Complex det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  const Complex disc = std::sqrt(tr * tr - 4.0 * det);
  return {0.5 * (tr + disc), 0.5 * (tr - disc)};
}

double spectral_radius(const Eigen::Matrix2cd& m) {
  const auto [l1, l2] = eigenvalues2(m);
  return std::max(std::abs(l1), std::abs(l2));
}

// Smallest eigenvalue of a Hermitian 2x2.
double min_eigenvalue_hermitian(const Eigen::Matrix2cd& n) {
  const double a = n(0, 0).real();
  const double d = n(1, 1).real();
  const double off = std::abs(n(0, 1));
  return 0.5 * (a + d - std::hypot(a - d, 2.0 * off));
}

void hermitize(Eigen::Matrix2cd& n) { n = 0.5 * (n + n.adjoint()).eval(); }

// Clamps negative eigenvalues within `tol` of zero back onto the PSD cone.
void project_psd(Eigen::Matrix2cd& n, double tol, const char* where) {
  const double lo = min_eigenvalue_hermitian(n);
  if (lo >= 0.0) return;
  if (lo < -tol) {
    throw NoSteadyStateError(std::string(where) +
                             ": second-moment matrix lost positive semidefiniteness");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(n);
  Eigen::Vector2d vals = es.eigenvalues().cwiseMax(0.0);
  n = es.eigenvectors() * vals.asDiagonal() * es.eigenvectors().adjoint();
}

struct MomentDeriv {
  Eigen::Matrix2cd m;
  Eigen::Matrix2cd m_dag;
  Eigen::Matrix2cd d;

  Eigen::Vector2cd mean(const Eigen::Vector2cd& v) const { return m * v; }
  Eigen::Matrix2cd second(const Eigen::Matrix2cd& n) const { return m_dag * n + n * m + d; }
};

void rk4_step(const MomentDeriv& deriv, double h, Eigen::Vector2cd& mean, Eigen::Matrix2cd& n) {
  const Eigen::Vector2cd k1m = deriv.mean(mean);
  const Eigen::Matrix2cd k1n = deriv.second(n);
  const Eigen::Vector2cd k2m = deriv.mean(mean + 0.5 * h * k1m);
  const Eigen::Matrix2cd k2n = deriv.second(n + 0.5 * h * k1n);
  const Eigen::Vector2cd k3m = deriv.mean(mean + 0.5 * h * k2m);
  const Eigen::Matrix2cd k3n = deriv.second(n + 0.5 * h * k2n);
  const Eigen::Vector2cd k4m = deriv.mean(mean + h * k3m);
  const Eigen::Matrix2cd k4n = deriv.second(n + h * k3n);
  mean += h / 6.0 * (k1m + 2.0 * k2m + 2.0 * k3m + k4m);
  n += h / 6.0 * (k1n + 2.0 * k2n + 2.0 * k3n + k4n);
}

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) continue;
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  const double den = n * sxx - sx * sx;
  return (n * sxy - sx * sy) / den;
}

}  // namespace

Eigen::Matrix2cd drift_matrix(const SystemParams& p) {
  p.validate();
  const Complex i_unit(0.0, 1.0);
  Eigen::Matrix2cd m;
  m << Complex(-0.5 * p.kappa, 0.0), -i_unit * p.g_coupling,
      -i_unit * p.g_coupling, Complex(-0.5 * p.gamma, 0.0);
  return m;
}

Eigen::Matrix2cd diffusion_matrix(const SystemParams& p) {
  p.validate();
  Eigen::Matrix2cd d = Eigen::Matrix2cd::Zero();
  d(0, 0) = p.kappa * p.n_th_a;
  d(1, 1) = p.gamma * p.n_th_b;
  return d;
}

MomentState steady_state(const SystemParams& p) {
  p.validate();
  require_hurwitz(p);
  const Eigen::Matrix2cd m = drift_matrix(p);
  const Eigen::Matrix2cd m_dag = m.adjoint();
  const Eigen::Matrix2cd m_t = m.transpose();
  const Eigen::Matrix2cd d = diffusion_matrix(p);

  // Vectorized Lyapunov equation (I (x) M^dag + M^T (x) I) vec(N) = -vec(D),
  // column-major vec.
  Eigen::Matrix4cd a = Eigen::Matrix4cd::Zero();
  a.block<2, 2>(0, 0) = m_dag + m_t(0, 0) * Eigen::Matrix2cd::Identity();
  a.block<2, 2>(0, 2) = m_t(0, 1) * Eigen::Matrix2cd::Identity();
  a.block<2, 2>(2, 0) = m_t(1, 0) * Eigen::Matrix2cd::Identity();
  a.block<2, 2>(2, 2) = m_dag + m_t(1, 1) * Eigen::Matrix2cd::Identity();

  Eigen::Vector4cd rhs;
  rhs << -d(0, 0), -d(1, 0), -d(0, 1), -d(1, 1);

  const Eigen::Vector4cd sol = a.partialPivLu().solve(rhs);
  MomentState state;
  state.second << sol(0), sol(2), sol(1), sol(3);
  hermitize(state.second);
  project_psd(state.second, 1.0e-12 * (1.0 + state.second.norm()), "steady_state");
  return state;
}

std::vector<MomentState> evolve(const SystemParams& p, const MomentState& initial,
                                const std::vector<double>& t_grid) {
  p.validate();
  if (t_grid.empty() || t_grid.front() != 0.0)
    throw PreconditionError("evolve: t_grid must start at 0");
  for (std::size_t i = 0; i + 1 < t_grid.size(); ++i) {
    if (!(t_grid[i] < t_grid[i + 1]))
      throw PreconditionError("evolve: t_grid must be strictly increasing");
  }

  const MomentDeriv deriv{drift_matrix(p), drift_matrix(p).adjoint(), diffusion_matrix(p)};
  const double h_max = 0.01 / std::max(spectral_radius(deriv.m), 1.0e-12);

  std::vector<MomentState> out;
  out.reserve(t_grid.size());
  MomentState state = initial;
  hermitize(state.second);
  out.push_back(state);

  for (std::size_t i = 0; i + 1 < t_grid.size(); ++i) {
    const double span = t_grid[i + 1] - t_grid[i];
    const auto n_steps = static_cast<std::int64_t>(std::ceil(span / h_max));
    const double h = span / static_cast<double>(n_steps);

    Eigen::Vector2cd mean_c = state.mean;
    Eigen::Matrix2cd n_c = state.second;
    for (std::int64_t s = 0; s < n_steps; ++s) rk4_step(deriv, h, mean_c, n_c);

    Eigen::Vector2cd mean_f = state.mean;
    Eigen::Matrix2cd n_f = state.second;
    for (std::int64_t s = 0; s < 2 * n_steps; ++s) rk4_step(deriv, 0.5 * h, mean_f, n_f);

    // Richardson: RK4 halving reduces the error ~16x, so the difference over
    // 15 estimates the fine-step error.
    const double err = ((mean_c - mean_f).norm() + (n_c - n_f).norm()) / 15.0;
    const double scale = 1.0 + mean_f.norm() + n_f.norm();
    if (err > 1.0e-8 * scale) {
      throw IntegrationError("evolve: step-size tolerance check failed at t = " +
                                 std::to_string(t_grid[i]),
                             t_grid[i], state);
    }

    state.mean = mean_f;
    state.second = n_f;
    hermitize(state.second);
    const double tol = 1.0e-12 * (1.0 + state.second.norm());
    if (min_eigenvalue_hermitian(state.second) < -tol) {
      throw IntegrationError("evolve: second moments lost positive semidefiniteness at t = " +
                                 std::to_string(t_grid[i + 1]),
                             t_grid[i], out.back());
    }
    project_psd(state.second, tol, "evolve");
    out.push_back(state);
  }
  return out;
}

CorrelationSeries regression_correlation(const SystemParams& p, Mode mode,
                                         std::vector<double> lags) {
  for (double lag : lags) {
    if (!(lag >= 0.0)) throw PreconditionError("regression_correlation: lags must be nonnegative");
  }
  std::sort(lags.begin(), lags.end());
  lags.erase(std::unique(lags.begin(), lags.end()), lags.end());
  if (lags.empty()) throw PreconditionError("regression_correlation: empty lag list");

  const MomentState ss = steady_state(p);
  const Eigen::Matrix2cd m = drift_matrix(p);
  const int idx = static_cast<int>(mode);
  Eigen::Vector2cd c = ss.second.row(idx).transpose();

  const double h_max = 0.005 / std::max(spectral_radius(m), 1.0e-12);

  CorrelationSeries series;
  series.method = "regression";
  series.lags = lags;
  series.values.reserve(lags.size());

  double tau = 0.0;
  for (double lag : lags) {
    const double span = lag - tau;
    if (span > 0.0) {
      const auto n_steps = static_cast<std::int64_t>(std::ceil(span / h_max));
      const double h = span / static_cast<double>(n_steps);
      for (std::int64_t s = 0; s < n_steps; ++s) {
        const Eigen::Vector2cd k1 = m * c;
        const Eigen::Vector2cd k2 = m * (c + 0.5 * h * k1);
        const Eigen::Vector2cd k3 = m * (c + 0.5 * h * k2);
        const Eigen::Vector2cd k4 = m * (c + h * k3);
        c += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      }
      tau = lag;
    }
    series.values.push_back(c(idx));
  }
  return series;
}

ComparisonReport compare_eliminated(const SystemParams& base, std::vector<double> g_sweep) {
  base.validate();
  if (g_sweep.empty()) throw PreconditionError("compare_eliminated: empty coupling sweep");
  for (double g : g_sweep) {
    if (!(g >= 0.0)) throw PreconditionError("compare_eliminated: couplings must be nonnegative");
  }
  std::sort(g_sweep.begin(), g_sweep.end());
  g_sweep.erase(std::unique(g_sweep.begin(), g_sweep.end()), g_sweep.end());

  ComparisonReport report;
  report.g_sweep = g_sweep;
  for (double g : g_sweep) {
    SystemParams p = base;
    p.g_coupling = g;
    const double full = steady_state(p).second(1, 1).real();
    // Eliminated model with the cavity input pushed into b's diffusion:
    // occupation (gamma n_b + 4 g^2 n_a) / (gamma + 4 g^2).
    const double rate = eliminated_rate(g, base.gamma);
    double elim;
    if (rate > 0.0) {
      elim = (base.gamma * base.n_th_b + 4.0 * g * g * base.n_th_a) / rate;
    } else {
      throw NoSteadyStateError("compare_eliminated: gamma = g = 0 has no steady state");
    }
    const double rel = elim != 0.0 ? std::abs(full - elim) / elim : std::abs(full - elim);
    report.full_occupation.push_back(full);
    report.eliminated_occupation.push_back(elim);
    report.relative_error.push_back(rel);
  }
  report.fitted_exponent = fit_loglog_slope(report.g_sweep, report.relative_error);
  return report;
}

}  // namespace adelim
