#include "adelim/analytic_forms.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace adelim {

namespace {
constexpr double kPi = std::numbers::pi;
}

void SystemParams::validate() const {
  if (!(kappa > 0.0)) throw PreconditionError("SystemParams: kappa > 0 violated");
  if (!(omega_c > 0.0)) throw PreconditionError("SystemParams: omega_c > 0 violated");
  if (!(gamma >= 0.0)) throw PreconditionError("SystemParams: gamma >= 0 violated");
  if (!(g_coupling >= 0.0)) throw PreconditionError("SystemParams: g_coupling >= 0 violated");
  if (!(n_th_a >= 0.0)) throw PreconditionError("SystemParams: n_th_a >= 0 violated");
  if (!(n_th_b >= 0.0)) throw PreconditionError("SystemParams: n_th_b >= 0 violated");
}

CutoffSpec CutoffSpec::make(double omega_c, double omega_cap) {
  if (!(omega_cap > 0.0)) throw PreconditionError("CutoffSpec: omega_cap > 0 violated");
  CutoffSpec spec;
  spec.omega_cap = omega_cap;
  spec.residue_bound_valid = omega_cap * omega_cap > omega_c * omega_c + 0.25;
  spec.d_bound_valid =
      4.0 * omega_cap * omega_cap - 8.0 * omega_c * omega_cap - 4.0 * omega_c * omega_c - 1.0 > 0.0;
  return spec;
}

double commutator_cutoff(double omega_c, double omega_cap) {
  if (!(omega_cap >= 0.0))
    throw std::domain_error("commutator_cutoff: omega_cap must be nonnegative");
  if (!(omega_c >= 0.0))
    throw std::domain_error("commutator_cutoff: omega_c must be nonnegative");
  const double lo = 2.0 * (omega_cap - omega_c);
  const double hi = 2.0 * (omega_cap + omega_c);
  // Near the limit both arctangents sit next to pi/2; the complementary form
  // computes the deviation from 1 directly.
  if (lo > 1.0 && hi > 1.0) {
    return 1.0 - (std::atan(1.0 / lo) + std::atan(1.0 / hi)) / kPi;
  }
  return (std::atan(lo) + std::atan(hi)) / kPi;
}

double correlation_exact(double n_th, double dt) {
  if (!(n_th >= 0.0)) throw std::domain_error("correlation_exact: n_th must be nonnegative");
  return n_th * std::exp(-0.5 * std::abs(dt));
}

double f_leading(double dt, double kappa) {
  if (!(kappa > 0.0)) throw std::domain_error("f_leading: kappa must be positive");
  return 2.0 * kPi / kappa * std::exp(-0.5 * kappa * std::abs(dt));
}

double s_bound(double omega_c, double omega_cap) {
  const double den =
      omega_cap * omega_cap - 2.0 * omega_c * omega_cap - omega_c * omega_c - 0.25;
  if (!(den > 0.0)) {
    throw BoundInvalidError(
        "s_bound: requires Omega^2 - 2 omega_c Omega - omega_c^2 - 1/4 > 0 "
        "(omega_cap = " + std::to_string(omega_cap) + ", omega_c = " + std::to_string(omega_c) + ")");
  }
  return kPi * omega_cap / den;
}

double d_bound(double omega_c, double omega_cap) {
  const double den = 4.0 * omega_cap * omega_cap - 8.0 * omega_c * omega_cap -
                     4.0 * omega_c * omega_c - 1.0;
  if (!(den > 0.0)) {
    throw BoundInvalidError(
        "d_bound: requires 4x^2 - 8wx - 4w^2 - 1 > 0 "
        "(omega_cap = " + std::to_string(omega_cap) + ", omega_c = " + std::to_string(omega_c) + ")");
  }
  return 2.0 * omega_cap / den;
}

double adiabatic_delta_coefficient(double n_th, double kappa) {
  if (!(n_th >= 0.0))
    throw std::domain_error("adiabatic_delta_coefficient: n_th must be nonnegative");
  if (!(kappa > 0.0))
    throw std::domain_error("adiabatic_delta_coefficient: kappa must be positive");
  return 4.0 * n_th / kappa;
}

std::vector<double> delta_expansion_coefficients(int order, double kappa) {
  if (!(kappa > 0.0))
    throw std::domain_error("delta_expansion_coefficients: kappa must be positive");
  if (order < 1 || order > 2) {
    throw UnsupportedOrderError(
        "delta_expansion_coefficients: supported orders are 1 and 2, got " +
        std::to_string(order));
  }
  std::vector<double> coeffs{4.0 / kappa};
  if (order == 2) coeffs.push_back(8.0 / (kappa * kappa));
  return coeffs;
}

double eliminated_rate(double g_coupling, double gamma) {
  if (!(g_coupling >= 0.0)) throw std::domain_error("eliminated_rate: g must be nonnegative");
  if (!(gamma >= 0.0)) throw std::domain_error("eliminated_rate: gamma must be nonnegative");
  return gamma + 4.0 * g_coupling * g_coupling;
}

double eliminated_occupation_ss(double g_coupling, double gamma, double n_th_b) {
  const double rate = eliminated_rate(g_coupling, gamma);
  if (!(rate > 0.0))
    throw NoSteadyStateError("eliminated_occupation_ss: gamma = g = 0 has no steady state");
  if (!(n_th_b >= 0.0))
    throw std::domain_error("eliminated_occupation_ss: n_th_b must be nonnegative");
  return gamma * n_th_b / rate;
}

double full_occupation_ss(double g_coupling, double gamma, double n_th_b) {
  if (!(g_coupling >= 0.0)) throw std::domain_error("full_occupation_ss: g must be nonnegative");
  if (!(gamma >= 0.0)) throw std::domain_error("full_occupation_ss: gamma must be nonnegative");
  if (!(n_th_b >= 0.0)) throw std::domain_error("full_occupation_ss: n_th_b must be nonnegative");
  if (gamma == 0.0 && g_coupling == 0.0)
    throw NoSteadyStateError("full_occupation_ss: gamma = g = 0 has no steady state");
  const double g2 = 4.0 * g_coupling * g_coupling;
  return n_th_b * gamma * (1.0 + gamma + g2) / ((1.0 + gamma) * (gamma + g2));
}

}  // namespace adelim
