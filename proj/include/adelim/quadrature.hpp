#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <queue>
#include <vector>

#include "adelim/errors.hpp"

namespace adelim {

struct QuadratureConfig {
  double rel_tol = 1.0e-10;
  double abs_tol = 1.0e-12;
  int max_subdivisions = 10000;

  void validate() const {
    if (!(rel_tol > 0.0)) throw PreconditionError("QuadratureConfig: rel_tol > 0 violated");
    if (!(abs_tol > 0.0)) throw PreconditionError("QuadratureConfig: abs_tol > 0 violated");
    if (max_subdivisions < 1)
      throw PreconditionError("QuadratureConfig: max_subdivisions >= 1 violated");
  }
};

struct QuadratureResult {
  std::complex<double> value{0.0, 0.0};
  double error_bound = 0.0;
  std::int64_t evaluations = 0;
  int subdivisions = 0;
};

namespace detail {

// 7-point Gauss / 15-point Kronrod pair.
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.99145537112081263920685469752632852, 0.94910791234275852452618968404785126,
    0.86486442335976907278971278864092620, 0.74153118559939443986386477328078841,
    0.58608723546769113029414483825872960, 0.40584515137739716690660641207696146,
    0.20778495500789846760068940377324491, 0.0};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.02293532201052922496373200805896959, 0.06309209262997855329070066318920429,
    0.10479001032225018383987632254151801, 0.14065325971552591874518959051023792,
    0.16900472663926790282658342659855028, 0.19035057806478540991325640242101368,
    0.20443294007529889241416199923464908, 0.20948214108472782801299917489171426};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.12948496616886969327061143267908202, 0.27970539148927666790146777142377958,
    0.38183005050511894495036977548897513, 0.41795918367346938775510204081632653};

template <class F>
inline void gk15(F&& f, double a, double b, std::complex<double>& value, double& error) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const std::complex<double> fc = f(center);
  std::complex<double> kronrod = kKronrodWeights[7] * fc;
  std::complex<double> gauss = kGaussWeights[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    const std::complex<double> sum = f(center - dx) + f(center + dx);
    kronrod += kKronrodWeights[j] * sum;
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * sum;
  }
  value = half * kronrod;
  error = std::abs(half * (kronrod - gauss));
}

struct Panel {
  double error;
  double a;
  double b;
  std::complex<double> value;
  bool operator<(const Panel& other) const { return error < other.error; }
};

// Compensated accumulator for long panel lists.
struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

}  // namespace detail

/// Globally adaptive Gauss-Kronrod integration over the panels defined by
/// `breakpoints` (sorted, at least two entries). Panels whose error estimate
/// is already at the floating-point noise floor are accumulated immediately
/// and never revisited, so seeding millions of oscillation-capped panels
/// stays memory-bounded; only genuinely refinable panels enter the heap.
template <class F>
QuadratureResult integrate_adaptive(F&& f, const std::vector<double>& breakpoints,
                                    const QuadratureConfig& cfg = {}) {
  cfg.validate();
  if (breakpoints.size() < 2)
    throw PreconditionError("integrate_adaptive: need at least two breakpoints");

  constexpr double kEps = std::numeric_limits<double>::epsilon();
  const double total_len = breakpoints.back() - breakpoints.front();
  if (!(total_len > 0.0))
    throw PreconditionError("integrate_adaptive: breakpoints must span a positive range");

  detail::KahanSum done_re, done_im, done_err;
  std::priority_queue<detail::Panel> heap;
  std::complex<double> heap_value{0.0, 0.0};
  double heap_error = 0.0;
  std::int64_t evals = 0;

  auto eval_panel = [&](double a, double b) {
    detail::Panel p;
    p.a = a;
    p.b = b;
    detail::gk15(f, a, b, p.value, p.error);
    evals += 15;
    return p;
  };

  // A panel at the round-off floor cannot be improved by splitting.
  auto at_noise_floor = [&](const detail::Panel& p) {
    return p.error <= 50.0 * kEps * std::abs(p.value) + 1.0e-3 * cfg.abs_tol * (p.b - p.a) / total_len;
  };

  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (!(breakpoints[i] < breakpoints[i + 1]))
      throw PreconditionError("integrate_adaptive: breakpoints must be strictly increasing");
    detail::Panel p = eval_panel(breakpoints[i], breakpoints[i + 1]);
    if (at_noise_floor(p)) {
      done_re.add(p.value.real());
      done_im.add(p.value.imag());
      done_err.add(p.error);
    } else {
      heap_value += p.value;
      heap_error += p.error;
      heap.push(p);
    }
  }

  int splits = 0;
  while (true) {
    const std::complex<double> estimate =
        std::complex<double>(done_re.sum, done_im.sum) + heap_value;
    const double total_err = done_err.sum + heap_error;
    const double tol = std::max(cfg.abs_tol, cfg.rel_tol * std::abs(estimate));
    if (total_err <= tol) {
      return {estimate, total_err, evals, splits};
    }
    if (heap.empty() || splits >= cfg.max_subdivisions) {
      throw ConvergenceError("integrate_adaptive: subdivision budget exhausted", estimate,
                             total_err);
    }
    detail::Panel worst = heap.top();
    heap.pop();
    heap_value -= worst.value;
    heap_error -= worst.error;
    const double mid = 0.5 * (worst.a + worst.b);
    for (const auto& child : {eval_panel(worst.a, mid), eval_panel(mid, worst.b)}) {
      if (at_noise_floor(child) ||
          child.error <= 0.25 * tol * (child.b - child.a) / total_len) {
        done_re.add(child.value.real());
        done_im.add(child.value.imag());
        done_err.add(child.error);
      } else {
        heap_value += child.value;
        heap_error += child.error;
        heap.push(child);
      }
    }
    ++splits;
  }
}

/// Panel seeds for integrands with a Lorentzian peak of half-width 1/2 at
/// `peak`: geometric refinement toward the peak plus, for oscillatory
/// integrands (dt != 0), a uniform cap of pi / (4 |dt|) on panel width.
std::vector<double> lorentzian_breakpoints(double lo, double hi, double peak, double dt);

/// Bandwidth-restricted Lorentzian commutator integral
///   (1 / 2 pi) Int_{-x}^{x} domega / ((omega - omega_c)^2 + 1/4),
/// evaluated by adaptive quadrature; agrees with commutator_cutoff within
/// 10 * max(rel_tol, abs_tol).
double integrate_lorentzian(double omega_c, double omega_cap, const QuadratureConfig& cfg = {});

/// Cutoff correlation kernel
///   f(dt) = Int_{-x}^{x} domega exp(i (omega - omega_c) dt) / ((omega - omega_c)^2 + 1/4).
std::complex<double> integrate_f(double dt, double omega_c, double omega_cap,
                                 const QuadratureConfig& cfg = {});

/// Per-lag comparison of the quadrature value of f against its leading
/// exponential term, with the residue-theorem arc bound as the pass criterion.
struct ResidueReport {
  double omega_c = 0.0;
  double omega_cap = 0.0;
  std::vector<double> lags;
  std::vector<std::complex<double>> f_quadrature;
  std::vector<double> f_leading_term;
  std::vector<double> deviations;
  double arc_bound = 0.0;  ///< s_bound(omega_c, omega_cap)
  double slack = 0.0;      ///< quadrature slack added to the bound
  std::vector<bool> pass;
  bool all_pass = false;
};

/// Verifies |integrate_f(lag) - f_leading(lag)| <= s_bound + slack for every
/// lag. Requires omega_cap^2 > omega_c^2 + 1/4 (pole inside the contour) and
/// a positive arc-bound denominator; throws PreconditionError naming the
/// violated inequality otherwise.
ResidueReport residue_check(double omega_c, double omega_cap, const std::vector<double>& lags,
                            const QuadratureConfig& cfg = {});

}  // namespace adelim
