#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

#include "adelim/analytic_forms.hpp"
#include "adelim/correlation_series.hpp"
#include "adelim/errors.hpp"

namespace adelim {

/// First moments <a>, <b> and normally ordered second moments
/// N(i, j) = <v_i^dag v_j> for v = (a, b). N is Hermitian positive
/// semidefinite with real nonnegative diagonal.
struct MomentState {
  Eigen::Vector2cd mean = Eigen::Vector2cd::Zero();
  Eigen::Matrix2cd second = Eigen::Matrix2cd::Zero();
};

enum class Mode : int { cavity = 0, partner = 1 };

/// Fixed-step integration failed its Richardson tolerance check; carries the
/// last state that passed.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double last_good_time, MomentState last_good_state)
      : std::runtime_error(what),
        last_good_time_(last_good_time),
        last_good_state_(std::move(last_good_state)) {}

  double last_good_time() const noexcept { return last_good_time_; }
  const MomentState& last_good_state() const noexcept { return last_good_state_; }

 private:
  double last_good_time_;
  MomentState last_good_state_;
};

/// Drift matrix of d<v>/dt = M <v>:
///   M = [[-kappa/2, -iG], [-iG, -gamma/2]].
/// Symmetric, eigenvalues with nonpositive real parts.
Eigen::Matrix2cd drift_matrix(const SystemParams& p);

/// Input-noise diffusion matrix diag(kappa n_th_a, gamma n_th_b) entering
/// dN/dt = M^dag N + N M + D.
Eigen::Matrix2cd diffusion_matrix(const SystemParams& p);

/// Stationary moments: zero means and the Hermitian PSD solution of
/// M^dag N + N M + D = 0. Requires M Hurwitz (gamma > 0, or gamma = 0 with
/// G > 0); throws NoSteadyStateError otherwise.
MomentState steady_state(const SystemParams& p);

/// Integrates the moment equations from `initial` over the strictly
/// increasing grid `t_grid` (starting at 0) with classic fixed-step RK4,
/// step <= 0.01 / spectral_radius(M), and a Richardson step-halving check.
std::vector<MomentState> evolve(const SystemParams& p, const MomentState& initial,
                                const std::vector<double>& t_grid);

/// Quantum-regression two-time correlation <v_mode^dag(t) v_mode(t + tau)>
/// in the steady state: the correlation vector obeys dc/dtau = M c with
/// c(0) equal to the mode row of the steady-state N. Lags must be
/// nonnegative; the returned grid is sorted and deduplicated.
CorrelationSeries regression_correlation(const SystemParams& p, Mode mode,
                                         std::vector<double> lags);

/// Full-vs-eliminated steady occupation of mode b over a coupling sweep.
struct ComparisonReport {
  std::vector<double> g_sweep;                 ///< strictly increasing
  std::vector<double> full_occupation;         ///< Lyapunov-solver values
  std::vector<double> eliminated_occupation;   ///< gamma n_b / (gamma + 4 g^2)
  std::vector<double> relative_error;          ///< |full - elim| / elim
  double fitted_exponent = 0.0;                ///< log-log slope of error vs g
};

/// Sweeps g_coupling over `g_sweep` (sorted and deduplicated internally),
/// comparing the numerical Lyapunov steady state against the eliminated
/// single-mode model. The fitted exponent is the least-squares slope of
/// log(error) vs log(g) over the positive-error points.
ComparisonReport compare_eliminated(const SystemParams& base, std::vector<double> g_sweep);

}  // namespace adelim
