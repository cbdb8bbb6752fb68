#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "adelim/analytic_forms.hpp"
#include "adelim/quadrature.hpp"

using namespace adelim;

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

TEST_CASE("integrate_adaptive on elementary integrals") {
  const auto res = integrate_adaptive(
      [](double x) { return std::complex<double>(std::exp(-x * x), 0.0); },
      {-8.0, 0.0, 8.0});
  CHECK(res.value.real() == doctest::Approx(std::sqrt(kPi)).epsilon(1e-12));
  CHECK(std::abs(res.value.imag()) < 1e-14);

  const auto osc = integrate_adaptive(
      [](double x) { return std::polar(1.0, 10.0 * x); }, {0.0, 1.0, 2.0, kPi});
  // int_0^pi e^{i 10 x} dx = (e^{i 10 pi} - 1) / (10 i) = 0
  CHECK(std::abs(osc.value) < 1e-10);
}

TEST_CASE("integrate_adaptive convergence error carries the running estimate") {
  QuadratureConfig cfg;
  cfg.max_subdivisions = 2;
  cfg.rel_tol = 1.0e-14;
  cfg.abs_tol = 1.0e-16;
  try {
    integrate_adaptive(
        [](double x) { return std::complex<double>(1.0 / (std::abs(x) + 1.0e-8), 0.0); },
        {-1.0, 1.0}, cfg);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.error_bound() > 0.0);
    CHECK(std::abs(e.estimate()) > 0.0);
  }
}

TEST_CASE("integrate_lorentzian agrees with the closed form") {
  const QuadratureConfig cfg;
  CHECK(integrate_lorentzian(1.0e3, 1.0e3, cfg) ==
        doctest::Approx(0.49992042253011192).epsilon(1e-10));
  CHECK(integrate_lorentzian(1.0e3, 2.0e3, cfg) ==
        doctest::Approx(0.99978779342296494).epsilon(1e-10));
  CHECK(integrate_lorentzian(0.0, 1.0, cfg) ==
        doctest::Approx(2.0 / kPi * std::atan(2.0)).epsilon(1e-12));
  CHECK_THROWS_AS(integrate_lorentzian(1.0, 0.0, cfg), std::domain_error);
}

TEST_CASE("integrate_lorentzian matches commutator_cutoff on a parameter grid") {
  const QuadratureConfig cfg;
  const double tol = 10.0 * std::max(cfg.rel_tol, cfg.abs_tol);
  for (double w : {0.0, 0.5, 10.0, 250.0, 1.0e3}) {
    for (double x : {1.0e-2, 1.0, 40.0, 1.0e3, 1.0e4}) {
      CAPTURE(w);
      CAPTURE(x);
      CHECK(std::abs(integrate_lorentzian(w, x, cfg) - commutator_cutoff(w, x)) <= tol);
    }
  }
}

TEST_CASE("integrate_f reduces to the commutator integral at zero lag") {
  const QuadratureConfig cfg;
  for (double w : {0.0, 1.0e3}) {
    for (double x : {5.0e2, 1.0e4}) {
      const std::complex<double> f0 = integrate_f(0.0, w, x, cfg);
      CHECK(std::abs(f0.imag()) < 1e-12);
      CHECK(f0.real() ==
            doctest::Approx(kTwoPi * commutator_cutoff(w, x)).epsilon(1e-9));
    }
  }
}

TEST_CASE("integrate_f is Hermitian in the lag and peaks at zero lag") {
  const QuadratureConfig cfg;
  std::mt19937 gen(11);
  std::uniform_real_distribution<double> lag_dist(0.0, 6.0);
  const double w = 50.0;
  const double x = 2.0e3;
  const double f0 = integrate_f(0.0, w, x, cfg).real();
  for (int trial = 0; trial < 8; ++trial) {
    const double dt = lag_dist(gen);
    const std::complex<double> plus = integrate_f(dt, w, x, cfg);
    const std::complex<double> minus = integrate_f(-dt, w, x, cfg);
    CAPTURE(dt);
    CHECK(std::abs(plus - std::conj(minus)) < 1e-9);
    CHECK(std::abs(plus) <= f0 + 1e-9);
  }
}

TEST_CASE("integrate_f imaginary part vanishes for a symmetric band") {
  const QuadratureConfig cfg;
  for (double dt : {0.3, 1.0, 4.0}) {
    CHECK(std::abs(integrate_f(dt, 0.0, 100.0, cfg).imag()) < 1e-11);
  }
}

TEST_CASE("integrate_f approaches the leading exponential within the arc bound") {
  const QuadratureConfig cfg;
  const double w = 1.0e3;
  const double x = 1.0e5;
  const std::complex<double> f1 = integrate_f(1.0, w, x, cfg);
  CHECK(std::abs(f1 - kTwoPi * std::exp(-0.5)) <= s_bound(w, x));
}

TEST_CASE("cutoff correlation stays within the arc bound of the exact one") {
  // (n/2pi) |f(lag) - f_leading(lag)| <= (n/2pi) s_bound for every lag.
  const QuadratureConfig cfg;
  const double w = 1.0e3;
  const double x = 1.0e4;
  const double n_th = 2.0;
  const double budget = n_th / kTwoPi * s_bound(w, x);
  for (double lag : {0.0, 0.5, 1.0, 2.0, 5.0}) {
    const std::complex<double> cut = n_th / kTwoPi * integrate_f(lag, w, x, cfg);
    const double exact = correlation_exact(n_th, lag);
    CAPTURE(lag);
    CHECK(std::abs(cut - exact) <= budget * (1.0 + 1e-6));
  }
}

TEST_CASE("residue_check passes on its validity domain") {
  const QuadratureConfig cfg;
  const ResidueReport rep = residue_check(1.0e3, 1.0e4, {0.0, 1.0, 2.0, 5.0}, cfg);
  CHECK(rep.all_pass);
  CHECK(rep.lags.size() == 4);
  for (std::size_t i = 0; i < rep.lags.size(); ++i) {
    CAPTURE(rep.lags[i]);
    CHECK(rep.pass[i]);
    CHECK(rep.deviations[i] <= rep.arc_bound + rep.slack);
    CHECK(rep.f_leading_term[i] == doctest::Approx(f_leading(rep.lags[i])).epsilon(1e-15));
  }
}

TEST_CASE("residue_check deviations shrink as the band widens") {
  const QuadratureConfig cfg;
  const std::vector<double> lags{0.0, 1.0};
  const ResidueReport narrow = residue_check(100.0, 1.0e3, lags, cfg);
  const ResidueReport wide = residue_check(100.0, 1.0e4, lags, cfg);
  for (std::size_t i = 0; i < lags.size(); ++i) {
    CHECK(wide.deviations[i] < narrow.deviations[i]);
  }
}

TEST_CASE("residue_check names the violated inequality") {
  CHECK_THROWS_WITH_AS(residue_check(1.0e3, 1.0e3, {0.0}),
                       doctest::Contains("omega_cap^2 > omega_c^2 + 1/4"), PreconditionError);
  CHECK_THROWS_WITH_AS(residue_check(1.0e3, 2.0e3, {0.0}),
                       doctest::Contains("omega_cap^2 - 2 omega_c omega_cap"), PreconditionError);
}

TEST_CASE("QuadratureConfig validation") {
  QuadratureConfig cfg;
  cfg.rel_tol = 0.0;
  CHECK_THROWS_AS(cfg.validate(), PreconditionError);
  cfg = QuadratureConfig{};
  cfg.max_subdivisions = 0;
  CHECK_THROWS_AS(cfg.validate(), PreconditionError);
}
