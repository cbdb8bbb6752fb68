#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "adelim/analytic_forms.hpp"

using namespace adelim;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("commutator_cutoff matches high-precision reference values") {
  // References evaluated with 30-digit arithmetic from the arctan form.
  CHECK(commutator_cutoff(1.0e3, 1.0e3) == doctest::Approx(0.49992042253011192).epsilon(1e-14));
  CHECK(commutator_cutoff(1.0e3, 2.0e3) == doctest::Approx(0.99978779342296494).epsilon(1e-14));
  CHECK(commutator_cutoff(1.0e3, 1.5e3) == doctest::Approx(0.99961802824353151).epsilon(1e-14));
}

TEST_CASE("commutator_cutoff limits") {
  CHECK(commutator_cutoff(1.0e3, 0.0) == 0.0);
  // Approaches 1 far beyond the resonance.
  CHECK(1.0 - commutator_cutoff(1.0e3, 1.0e9) < 1.0e-6);
  CHECK(commutator_cutoff(1.0e3, 1.0e9) < 1.0);
  CHECK(1.0 - commutator_cutoff(5.0, 1.0e7) < 1.0e-6);
}

TEST_CASE("commutator_cutoff rejects negative arguments") {
  CHECK_THROWS_AS(commutator_cutoff(1.0e3, -1.0), std::domain_error);
  CHECK_THROWS_AS(commutator_cutoff(-1.0, 1.0), std::domain_error);
}

TEST_CASE("commutator_cutoff is monotone in bandwidth and bounded in [0, 1)") {
  std::mt19937 gen(42);
  std::uniform_real_distribution<double> w_dist(0.0, 1.0e3);
  std::exponential_distribution<double> x_dist(1.0e-2);
  for (int trial = 0; trial < 200; ++trial) {
    const double w = w_dist(gen);
    double x0 = x_dist(gen);
    double x1 = x0 + x_dist(gen);
    const double c0 = commutator_cutoff(w, x0);
    const double c1 = commutator_cutoff(w, x1);
    CAPTURE(w);
    CAPTURE(x0);
    CAPTURE(x1);
    CHECK(c0 >= 0.0);
    CHECK(c1 < 1.0);
    CHECK(c0 <= c1 + 1.0e-15);
  }
}

TEST_CASE("commutator_cutoff at zero resonance reduces to (2/pi) arctan(2x)") {
  for (double x : {0.1, 0.5, 1.0, 3.0, 1.0e2, 1.0e5}) {
    const double expected =
        2.0 * x > 1.0 ? 1.0 - 2.0 / kPi * std::atan(0.5 / x) : 2.0 / kPi * std::atan(2.0 * x);
    CHECK(commutator_cutoff(0.0, x) == doctest::Approx(expected).epsilon(1e-15));
  }
}

TEST_CASE("correlation_exact values and symmetry") {
  CHECK(correlation_exact(5.0, 0.0) == 5.0);
  CHECK(correlation_exact(0.0, 17.3) == 0.0);
  CHECK(correlation_exact(2.0, 2.0) == doctest::Approx(2.0 * std::exp(-1.0)).epsilon(1e-15));
  std::mt19937 gen(7);
  std::uniform_real_distribution<double> dt_dist(0.0, 20.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double dt = dt_dist(gen);
    CHECK(correlation_exact(1.5, dt) == correlation_exact(1.5, -dt));
    CHECK(correlation_exact(1.5, dt + 0.5) < correlation_exact(1.5, dt));
  }
}

TEST_CASE("f_leading") {
  CHECK(f_leading(0.0) == doctest::Approx(2.0 * kPi).epsilon(1e-15));
  CHECK(f_leading(2.0) == doctest::Approx(2.0 * kPi * std::exp(-1.0)).epsilon(1e-15));
  CHECK(f_leading(0.0, 2.0) == doctest::Approx(kPi).epsilon(1e-15));
  CHECK(f_leading(-3.0) == f_leading(3.0));
}

TEST_CASE("s_bound reference value and validity domain") {
  CHECK(s_bound(1.0e3, 4.0e3) == doctest::Approx(0.0017951958661654485).epsilon(1e-14));
  CHECK(s_bound(1.0e3, 1.0e9) < 1.0e-8);
  CHECK_THROWS_AS(s_bound(1.0e3, 1.0e3), BoundInvalidError);
}

TEST_CASE("d_bound reference value and validity domain") {
  CHECK(d_bound(1.0e3, 4.0e3) == doctest::Approx(2.8571429591836771e-4).epsilon(1e-14));
  CHECK(d_bound(1.0e3, 1.0e7) < 1.0e-6);
  // 4 * 4e6 - 8 * 2e6 - 4e6 - 1 < 0 at x = 2e3
  CHECK_THROWS_AS(d_bound(1.0e3, 2.0e3), BoundInvalidError);
}

TEST_CASE("s_bound and d_bound decrease toward zero on their validity domain") {
  const double w = 1.0e3;
  double prev_s = s_bound(w, 3.0e3);
  double prev_d = d_bound(w, 3.0e3);
  for (double x = 4.0e3; x < 1.0e8; x *= 1.7) {
    const double s = s_bound(w, x);
    const double d = d_bound(w, x);
    CHECK(s < prev_s);
    CHECK(d < prev_d);
    // Same arc estimate in two normalizations.
    CHECK(d == doctest::Approx(s / (2.0 * kPi)).epsilon(1e-14));
    prev_s = s;
    prev_d = d;
  }
  CHECK(prev_s < 1.0e-4);
}

TEST_CASE("delta expansion coefficients") {
  CHECK(delta_expansion_coefficients(1) == std::vector<double>{4.0});
  CHECK(delta_expansion_coefficients(2) == std::vector<double>{4.0, 8.0});
  CHECK(delta_expansion_coefficients(1, 2.0) == std::vector<double>{2.0});
  CHECK_THROWS_AS(delta_expansion_coefficients(0), UnsupportedOrderError);
  CHECK_THROWS_AS(delta_expansion_coefficients(3), UnsupportedOrderError);
}

TEST_CASE("adiabatic delta coefficient") {
  CHECK(adiabatic_delta_coefficient(0.0) == 0.0);
  CHECK(adiabatic_delta_coefficient(1.0) == 4.0);
  CHECK(adiabatic_delta_coefficient(1.0, 2.0) == 2.0);
  for (double n : {0.25, 1.0, 3.5}) {
    CHECK(adiabatic_delta_coefficient(n) ==
          doctest::Approx(n * delta_expansion_coefficients(1)[0]).epsilon(1e-15));
  }
}

TEST_CASE("eliminated_rate") {
  CHECK(eliminated_rate(0.0, 0.7) == 0.7);
  CHECK(eliminated_rate(0.1, 1.0e-3) == doctest::Approx(0.041).epsilon(1e-15));
  CHECK(eliminated_rate(0.05, 0.0) == doctest::Approx(0.01).epsilon(1e-15));
  std::mt19937 gen(3);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double gc = dist(gen);
    const double gam = dist(gen);
    CHECK(eliminated_rate(gc, gam) >= gam);
    if (gc > 0.0) CHECK(eliminated_rate(gc, gam) > gam);
  }
}

TEST_CASE("full_occupation_ss closed form") {
  CHECK(full_occupation_ss(0.0, 0.5, 2.0) == doctest::Approx(2.0).epsilon(1e-15));
  // Ratio against the eliminated occupation is 1 + 4 g^2 / (1 + gamma).
  for (double gc : {0.01, 0.05, 0.1, 0.3}) {
    for (double gam : {1.0e-4, 1.0e-3, 0.1}) {
      const double full = full_occupation_ss(gc, gam, 1.0);
      const double elim = eliminated_occupation_ss(gc, gam, 1.0);
      CHECK(full / elim ==
            doctest::Approx(1.0 + 4.0 * gc * gc / (1.0 + gam)).epsilon(1e-13));
    }
  }
  const double rel = full_occupation_ss(0.1, 1.0e-3, 1.0) / eliminated_occupation_ss(0.1, 1.0e-3, 1.0) - 1.0;
  CHECK(rel == doctest::Approx(4.0e-2).epsilon(2e-2));
  CHECK_THROWS_AS(full_occupation_ss(0.0, 0.0, 1.0), NoSteadyStateError);
  CHECK_THROWS_AS(eliminated_occupation_ss(0.0, 0.0, 1.0), NoSteadyStateError);
}

TEST_CASE("CutoffSpec validity flags") {
  const CutoffSpec tight = CutoffSpec::make(1.0e3, 1.0e3);
  CHECK_FALSE(tight.residue_bound_valid);
  CHECK_FALSE(tight.d_bound_valid);
  const CutoffSpec mid = CutoffSpec::make(1.0e3, 2.0e3);
  CHECK(mid.residue_bound_valid);
  CHECK_FALSE(mid.d_bound_valid);
  const CutoffSpec wide = CutoffSpec::make(1.0e3, 4.0e3);
  CHECK(wide.residue_bound_valid);
  CHECK(wide.d_bound_valid);
  CHECK_THROWS_AS(CutoffSpec::make(1.0e3, 0.0), PreconditionError);
}

TEST_CASE("SystemParams validation") {
  SystemParams p;
  CHECK_NOTHROW(p.validate());
  p.gamma = -1.0;
  CHECK_THROWS_AS(p.validate(), PreconditionError);
}
