#pragma once

#include <vector>

#include "adelim/errors.hpp"

namespace adelim {

/// Rates and occupations of the coupled cavity/partner system. All rates and
/// frequencies are expressed in units of the cavity damping rate kappa;
/// kappa itself is fixed to 1 by convention and retained only so results can
/// be rescaled to physical units.
struct SystemParams {
  double omega_c = 1.0e3;    ///< cavity resonance, omega_c / kappa
  double kappa = 1.0;        ///< reference damping rate
  double gamma = 1.0e-3;     ///< partner-mode damping, gamma / kappa
  double g_coupling = 0.1;   ///< interaction strength, G / kappa
  double n_th_a = 0.0;       ///< cavity-bath mean occupation
  double n_th_b = 0.0;       ///< partner-bath mean occupation

  /// Throws PreconditionError when an invariant is violated.
  void validate() const;
};

/// Noise bandwidth Omega (units of kappa) together with the validity of the
/// residue-based bounds at that bandwidth. The flags are recomputed from
/// (omega_c, omega_cap) on construction, never stored independently.
struct CutoffSpec {
  double omega_cap = 0.0;
  bool residue_bound_valid = false;  ///< Omega^2 > omega_c^2 + kappa^2/4
  bool d_bound_valid = false;        ///< 4x^2 - 8wx - 4w^2 - 1 > 0

  static CutoffSpec make(double omega_c, double omega_cap);
};

/// Equal-time commutator [a, a^dag] of the filtered cavity mode when the bath
/// integration range is restricted to (-Omega, Omega):
///   (1/pi) [ arctan(2 (Omega - omega_c)) + arctan(2 (Omega + omega_c)) ].
/// Evaluated through the complementary identity arctan(y) = pi/2 - arctan(1/y)
/// when both arguments exceed 1, which preserves precision near the
/// Omega -> infinity limit. Value lies in [0, 1).
double commutator_cutoff(double omega_c, double omega_cap);

/// Stationary cavity correlation <a^dag(t) a(t')> for the full white-noise
/// bath: n_th * exp(-|dt| / 2), dt in units of 1/kappa.
double correlation_exact(double n_th, double dt);

/// Leading (Omega -> infinity) term of the cutoff kernel f(t - t'):
/// (2 pi / kappa) exp(-kappa |dt| / 2).
double f_leading(double dt, double kappa = 1.0);

/// Upper bound on the arc contribution |S| to f(t - t'):
///   pi x / (x^2 - 2 w x - w^2 - 1/4),  w = omega_c, x = omega_cap.
/// Throws BoundInvalidError when the denominator is not positive.
double s_bound(double omega_c, double omega_cap);

/// Upper bound on the modulus of the correlation difference D between the
/// cutoff and infinite-bandwidth kernels (per unit n_th * kappa):
///   2x / (4x^2 - 8wx - 4w^2 - 1).
/// Throws BoundInvalidError when the denominator is not positive.
double d_bound(double omega_c, double omega_cap);

/// Weight of delta(t - t') in the adiabatically eliminated correlation
/// function: 4 n_th / kappa.
double adiabatic_delta_coefficient(double n_th, double kappa = 1.0);

/// Coefficients of the delta-function expansion of exp(-kappa |t - t'| / 2):
/// order 1 -> {4/kappa}, order 2 -> {4/kappa, 8/kappa^2}. Orders above 2 are
/// not supported and throw UnsupportedOrderError.
std::vector<double> delta_expansion_coefficients(int order, double kappa = 1.0);

/// Total damping rate gamma + 4 g^2 of the partner mode after the cavity is
/// eliminated (units of kappa).
double eliminated_rate(double g_coupling, double gamma);

/// Steady occupation gamma * n_th_b / eliminated_rate of the reduced
/// single-mode model. Throws NoSteadyStateError when both rates vanish.
double eliminated_occupation_ss(double g_coupling, double gamma, double n_th_b);

/// Exact steady occupation <b^dag b> of the full two-mode system with vacuum
/// cavity input:
///   n_th_b * gamma (1 + gamma + 4 g^2) / [ (1 + gamma)(gamma + 4 g^2) ].
/// Agrees with the numerical Lyapunov solve of the moment-dynamics module.
/// Throws NoSteadyStateError when both rates vanish.
double full_occupation_ss(double g_coupling, double gamma, double n_th_b);

}  // namespace adelim
