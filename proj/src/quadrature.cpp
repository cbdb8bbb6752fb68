#include "adelim/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "adelim/analytic_forms.hpp"

namespace adelim {

namespace {
constexpr double kPi = std::numbers::pi;

double lorentzian(double u) { return 1.0 / (u * u + 0.25); }
}  // namespace

std::vector<double> lorentzian_breakpoints(double lo, double hi, double peak, double dt) {
  std::vector<double> pts{lo, hi};
  if (peak > lo && peak < hi) pts.push_back(peak);
  const double span = hi - lo;
  for (double r = 0.25; r < span; r *= 2.0) {
    if (peak - r > lo && peak - r < hi) pts.push_back(peak - r);
    if (peak + r > lo && peak + r < hi) pts.push_back(peak + r);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  if (dt != 0.0) {
    // Cap panel width so the 15-point rule sees at most 1/8 of an
    // oscillation period of exp(i omega dt).
    const double cap = kPi / (4.0 * std::abs(dt));
    if (span / cap > 5.0e7) {
      throw ConfigurationError(
          "lorentzian_breakpoints: oscillation-capped panel count exceeds 5e7; "
          "reduce the bandwidth or the lag");
    }
    std::vector<double> refined;
    refined.reserve(pts.size() + static_cast<std::size_t>(span / cap) + 2);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      refined.push_back(pts[i]);
      const double gap = pts[i + 1] - pts[i];
      if (gap > cap) {
        const auto n = static_cast<std::int64_t>(std::ceil(gap / cap));
        for (std::int64_t j = 1; j < n; ++j)
          refined.push_back(pts[i] + gap * static_cast<double>(j) / static_cast<double>(n));
      }
    }
    refined.push_back(pts.back());
    return refined;
  }
  return pts;
}

double integrate_lorentzian(double omega_c, double omega_cap, const QuadratureConfig& cfg) {
  if (!(omega_cap > 0.0))
    throw std::domain_error("integrate_lorentzian: omega_cap must be positive");
  const auto pts = lorentzian_breakpoints(-omega_cap, omega_cap, omega_c, 0.0);
  const auto res = integrate_adaptive(
      [omega_c](double omega) {
        return std::complex<double>(lorentzian(omega - omega_c) / (2.0 * kPi), 0.0);
      },
      pts, cfg);
  return res.value.real();
}

std::complex<double> integrate_f(double dt, double omega_c, double omega_cap,
                                 const QuadratureConfig& cfg) {
  if (!(omega_cap > 0.0)) throw std::domain_error("integrate_f: omega_cap must be positive");
  const auto pts = lorentzian_breakpoints(-omega_cap, omega_cap, omega_c, dt);
  const auto res = integrate_adaptive(
      [omega_c, dt](double omega) {
        const double u = omega - omega_c;
        return std::polar(lorentzian(u), u * dt);
      },
      pts, cfg);
  return res.value;
}

ResidueReport residue_check(double omega_c, double omega_cap, const std::vector<double>& lags,
                            const QuadratureConfig& cfg) {
  const CutoffSpec spec = CutoffSpec::make(omega_c, omega_cap);
  if (!spec.residue_bound_valid) {
    throw PreconditionError(
        "residue_check: pole-enclosure condition omega_cap^2 > omega_c^2 + 1/4 violated");
  }
  if (!spec.d_bound_valid) {
    throw PreconditionError(
        "residue_check: arc-bound condition omega_cap^2 - 2 omega_c omega_cap - omega_c^2 - 1/4 > 0 "
        "violated");
  }

  ResidueReport report;
  report.omega_c = omega_c;
  report.omega_cap = omega_cap;
  report.lags = lags;
  report.arc_bound = s_bound(omega_c, omega_cap);
  report.all_pass = true;
  for (double lag : lags) {
    const std::complex<double> fq = integrate_f(lag, omega_c, omega_cap, cfg);
    const double lead = f_leading(lag);
    const double dev = std::abs(fq - lead);
    const double slack = 1.0e3 * cfg.rel_tol * std::abs(fq);
    report.slack = std::max(report.slack, slack);
    const bool ok = dev <= report.arc_bound + slack;
    report.f_quadrature.push_back(fq);
    report.f_leading_term.push_back(lead);
    report.deviations.push_back(dev);
    report.pass.push_back(ok);
    report.all_pass = report.all_pass && ok;
  }
  return report;
}

}  // namespace adelim
