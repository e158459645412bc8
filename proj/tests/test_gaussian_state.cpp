#include <cmath>
#include <complex>
#include <random>

#include "doctest.h"

#include "qbm/dynamics.hpp"
#include "qbm/gaussian_state.hpp"
#include "test_support.hpp"

using namespace qbm;

TEST_CASE("validate: purity boundary and violations") {
  const GaussianCVector ground{0.25, 0.0, 0.25, 0.0, 0.0, 0.0};
  auto report = validate(ground);
  CHECK(report.valid);
  CHECK(report.pure);

  const GaussianCVector sub{0.25, 0.0, 0.125, 0.0, 0.0, 0.0};
  report = validate(sub);
  CHECK_FALSE(report.valid);

  const GaussianCVector mixed{2.58125, -0.0725, 0.5090625, 0.0, 0.0, 0.0};
  report = validate(mixed);
  CHECK(report.valid);
  CHECK_FALSE(report.pure);

  CHECK_FALSE(validate({-1.0, 0.0, 0.25, 0.0, 0.0, 0.0}).valid);
  CHECK_FALSE(validate({0.25, 0.0, 0.25, 0.0, 0.0, 0.5}).valid);
  CHECK_FALSE(validate({std::nan(""), 0.0, 0.25, 0.0, 0.0, 0.0}).valid);
}

TEST_CASE("nbar: pure, thermal, and the reference steady state") {
  CHECK(nbar({0.25, 0.0, 0.25, 0.0, 0.0, 0.0}) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(nbar(thermal_state(2.0)) == doctest::Approx(2.0).epsilon(1e-14));

  ModelCoefficients coeffs;
  coeffs.gamma = 1.0;
  coeffs.d_pp = 2.0;
  coeffs.d_px = 0.2;
  coeffs.d_xx = 0.145;
  CHECK(std::abs(nbar(steady_state(coeffs)) - 1.7914654835934143) < 1e-9);

  CHECK_THROWS_AS((void)nbar({0.25, 0.0, 0.125, 0.0, 0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("spectrum: geometric form and unit trace") {
  const auto pure = spectrum({0.25, 0.0, 0.25, 0.0, 0.0, 0.0}, 5);
  CHECK(pure[0] == doctest::Approx(1.0).epsilon(1e-14));
  for (std::size_t n = 1; n < pure.size(); ++n) CHECK(std::abs(pure[n]) < 1e-13);

  const auto th = spectrum(thermal_state(2.0), 6);
  for (std::size_t n = 0; n < th.size(); ++n) {
    CHECK(th[n] == doctest::Approx((1.0 / 3.0) * std::pow(2.0 / 3.0, n)).epsilon(1e-13));
  }
  CHECK(spectrum(thermal_state(10.0), 0)[0] == doctest::Approx(1.0 / 11.0).epsilon(1e-13));

  // Unit trace via the analytic geometric tail.
  std::mt19937 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto c = testsupport::random_valid_state(rng);
    const int n_max = 40;
    const auto lam = spectrum(c, n_max);
    double total = 0.0;
    for (double l : lam) total += l;
    const double s = std::sqrt(purity_invariant(c));
    const double ratio = (2.0 * s - 1.0) / (2.0 * s + 1.0);
    total += lam[n_max] * ratio / (1.0 - ratio);
    CHECK(std::abs(total - 1.0) < 1e-10);
  }
}

TEST_CASE("position kernel: closed forms and round trip") {
  const auto ground = to_position_kernel({0.25, 0.0, 0.25, 0.0, 0.0, 0.0});
  CHECK(ground.A == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(ground.C == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(ground.B == 0.0);
  CHECK(ground.D == 0.0);
  CHECK(ground.E == 0.0);

  const double n = 2.0;
  const auto th = to_position_kernel(thermal_state(n));
  CHECK(th.A == doctest::Approx((2.0 * n + 1.0) / 4.0).epsilon(1e-14));
  CHECK(th.C == doctest::Approx(1.0 / (4.0 * (2.0 * n + 1.0))).epsilon(1e-14));

  std::mt19937 rng(17);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto c = testsupport::random_valid_state(rng);
    const auto k = to_position_kernel(c);
    // sqrt(A/C) = 2 nbar + 1
    CHECK(k.A / k.C ==
          doctest::Approx(std::pow(2.0 * nbar(c) + 1.0, 2)).epsilon(1e-11));
    double residual = 1.0;
    const auto back = from_position_kernel(k, &residual);
    CHECK(std::abs(residual) < 1e-12);
    CHECK(back.c1 == doctest::Approx(c.c1).epsilon(1e-12));
    CHECK(back.c2 == doctest::Approx(c.c2).epsilon(1e-12));
    CHECK(back.c3 == doctest::Approx(c.c3).epsilon(1e-12));
    CHECK(back.c4 == doctest::Approx(c.c4).epsilon(1e-12));
    CHECK(back.c5 == doctest::Approx(c.c5).epsilon(1e-12));
  }

  CHECK_THROWS_AS((void)to_position_kernel({-0.1, 0.0, 0.25, 0.0, 0.0, 0.0}),
                  std::invalid_argument);
}

TEST_CASE("coherent state construction") {
  const auto vac = coherent_state({0.0, 0.0});
  CHECK(vac.c1 == 0.25);
  CHECK(vac.c3 == 0.25);
  CHECK(vac.c4 == 0.0);
  CHECK(vac.c5 == 0.0);

  const auto a = coherent_state({2.0, 2.0});
  CHECK(a.c4 == doctest::Approx(-2.0 * std::sqrt(2.0)).epsilon(1e-15));
  CHECK(a.c5 == doctest::Approx(-2.0 * std::sqrt(2.0)).epsilon(1e-15));

  std::mt19937 rng(23);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto c = coherent_state({u(rng), u(rng)});
    const auto report = validate(c);
    CHECK(report.valid);
    CHECK(std::abs(purity_invariant(c) - 0.25) < 1e-14);
    CHECK(nbar(c) == 0.0);
  }
}

TEST_CASE("thermal state construction") {
  const auto vac = thermal_state(0.0);
  CHECK(vac.c1 == 0.25);
  CHECK(vac.c3 == 0.25);
  const auto t2 = thermal_state(2.0);
  CHECK(t2.c1 == doctest::Approx(1.25).epsilon(1e-15));
  CHECK(t2.c3 == doctest::Approx(1.25).epsilon(1e-15));
  CHECK_THROWS_AS((void)thermal_state(-0.5), std::invalid_argument);
}

TEST_CASE("dsts parameters reproduce the occupancy and match the chi expansion") {
  std::mt19937 rng(29);
  for (int trial = 0; trial < 50; ++trial) {
    const auto c = testsupport::random_valid_state(rng);
    const auto p = dsts_params(c);
    CHECK(p.nbar == doctest::Approx(nbar(c)).epsilon(1e-14));
    CHECK(p.squeezing == std::complex<double>{(-c.c1 + c.c3) / 2.0, c.c2 / 2.0});
    CHECK(p.displacement.real() == doctest::Approx(-c.c4 / std::sqrt(2.0)).epsilon(1e-15));
  }
}

TEST_CASE("nbar is invariant under the oscillator-width rescaling") {
  std::mt19937 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const auto c = testsupport::random_valid_state(rng);
    const auto dimful = to_dimensionful(c, 3.2, 0.7);
    CHECK(std::abs(nbar(dimful) - nbar(c)) < 1e-14);
    const auto back = to_dimensionless(dimful, 3.2, 0.7);
    CHECK(back.c1 == doctest::Approx(c.c1).epsilon(1e-14));
    CHECK(back.c5 == doctest::Approx(c.c5).epsilon(1e-14));
  }
}
