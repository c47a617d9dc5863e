#include "fracrenew/ctrw.hpp"

#include <cmath>
#include <vector>

#include "doctest.h"
#include "fracrenew/stats.hpp"
#include "oracle_ml.hpp"

using namespace fracrenew;

namespace {
// lattice brute force: p(0, 1) = sum_k e^-1/k! [k even] C(k, k/2)/2^k
double lattice_value_at_origin(double t, int k_cap) {
  double acc = 0.0;
  for (int k = 0; k <= k_cap; k += 2) {
    const double w = std::exp(std::lgamma(k + 1.0) - 2.0 * std::lgamma(k / 2 + 1.0) -
                              k * std::log(2.0));
    acc += std::exp(k * std::log(t) - t - std::lgamma(k + 1.0)) * w;
  }
  return acc;
}
}  // namespace

TEST_CASE("jump model factories validate") {
  CHECK_THROWS_AS(ctrw::gaussian_jump(0.0), DomainError);
  CHECK_THROWS_AS(ctrw::tabulated_jump(0.0, -0.1, {1.0, 1.0}, true),
                  DomainError);
  // density must integrate to 1 within 1e-8
  CHECK_THROWS_AS(ctrw::tabulated_jump(-1.0, 1.0, {0.5, 0.7, 0.5}, true),
                  DomainError);
  std::vector<double> tri = {0.0, 0.5, 1.0, 0.5, 0.0};
  CHECK_NOTHROW(ctrw::tabulated_jump(-1.0, 0.5, tri, true));
}

TEST_CASE("jump_convolution_power: examples") {
  const auto atom = ctrw::jump_convolution_power(ctrw::two_point_jump(), 0);
  CHECK(atom.kind == ctrw::JumpPower::Kind::atom);
  CHECK(atom.lattice_mass(0) == 1.0);
  CHECK(atom.lattice_mass(1) == 0.0);

  const auto two = ctrw::jump_convolution_power(ctrw::two_point_jump(), 2);
  CHECK(two.lattice_mass(-2) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(two.lattice_mass(0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(two.lattice_mass(2) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(two.lattice_mass(1) == 0.0);

  const auto g3 = ctrw::jump_convolution_power(ctrw::gaussian_jump(1.0), 3);
  CHECK(g3.density_at(0.0) ==
        doctest::Approx(1.0 / std::sqrt(6.0 * M_PI)).epsilon(1e-13));

  // tabulated self-convolution keeps mass and spreads support
  std::vector<double> tri = {0.0, 0.5, 1.0, 0.5, 0.0};
  const auto jm = ctrw::tabulated_jump(-1.0, 0.5, tri, true);
  const auto p2 = ctrw::jump_convolution_power(jm, 2);
  double mass = 0.0;
  for (double v : p2.values) mass += v * p2.dx;
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(p2.x0 == doctest::Approx(-2.0));

  // support growth past the configured bound
  const std::size_t big = 700000;
  std::vector<double> wide(big);
  const double dx = 2.0 / (big - 1);
  double m = 0.0;
  for (std::size_t i = 0; i + 1 < big; ++i) m += dx;  // flat density on [0,2]
  for (auto& v : wide) v = 1.0 / m;
  const auto wj = ctrw::tabulated_jump(0.0, dx, wide, false);
  CHECK_THROWS_AS(ctrw::jump_convolution_power(wj, 2), GridOverflow);
}

TEST_CASE("sojourn_series: atom at t=0 and k=0 consistency") {
  const auto wait = renewal::mittag_leffler(0.5, 1.0);
  const auto soj0 = ctrw::sojourn_series(wait, ctrw::two_point_jump(), 0.0,
                                         {-8.0, 1.0, 17}, 10);
  CHECK(soj0.atom_at_origin == 1.0);
  for (double v : soj0.density) CHECK(v == 0.0);

  const auto soj = ctrw::sojourn_series(wait, ctrw::two_point_jump(), 1.0,
                                        {-16.0, 1.0, 33}, 30);
  CHECK(std::fabs(soj.atom_at_origin - renewal::survival(wait, 1.0)) < 1e-10);
}

TEST_CASE("sojourn_series: lattice value, mass conservation, symmetry") {
  const auto wait = renewal::exponential(1.0);
  const auto soj = ctrw::sojourn_series(wait, ctrw::two_point_jump(), 1.0,
                                        {-40.0, 1.0, 81}, 40);
  CHECK(soj.atom_at_origin + soj.density[40] ==
        doctest::Approx(0.46575960759364044).epsilon(1e-9));
  CHECK(soj.atom_at_origin + soj.density[40] ==
        doctest::Approx(lattice_value_at_origin(1.0, 40)).epsilon(1e-12));

  const double total = soj.atom_at_origin + soj.grid_mass();
  CHECK(total > 1.0 - soj.truncation_bound - 1e-6);
  CHECK(total <= 1.0 + 1e-12);
  for (int i = 0; i <= 40; ++i) {
    CHECK(soj.density[40 - i] == doctest::Approx(soj.density[40 + i]).epsilon(1e-12));
  }

  // gaussian jumps: continuous density, same invariants
  const auto gsoj = ctrw::sojourn_series(renewal::mittag_leffler(0.5, 1.0),
                                         ctrw::gaussian_jump(1.0), 1.0,
                                         {-12.0, 0.05, 481}, 40);
  const double gtotal = gsoj.atom_at_origin + gsoj.grid_mass();
  CHECK(gtotal > 1.0 - gsoj.truncation_bound - 1e-3);
  CHECK(gtotal <= 1.0 + 1e-3);
}

TEST_CASE("sojourn_series: serial and openmp agree bitwise") {
  const auto wait = renewal::mittag_leffler(0.6, 1.0);
  const auto a = ctrw::sojourn_series(wait, ctrw::gaussian_jump(1.0), 1.0,
                                      {-10.0, 0.1, 201}, 30, mc::Exec::serial);
  const auto b = ctrw::sojourn_series(wait, ctrw::gaussian_jump(1.0), 1.0,
                                      {-10.0, 0.1, 201}, 30, mc::Exec::openmp);
  CHECK(a.density == b.density);
}

TEST_CASE("simulate_ctrw: examples") {
  const auto wait = renewal::exponential(1.0);
  // horizon so small that no event fires
  const auto still = ctrw::simulate_ctrw(wait, ctrw::gaussian_jump(1.0),
                                         1e-9, {41, 0});
  CHECK(still.position_at(1e-9) == 0.0);

  // two-point jumps: parity of position equals parity of event count
  const auto traj = ctrw::simulate_ctrw(wait, ctrw::two_point_jump(), 50.0,
                                        {41, 1});
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const long pos = std::lround(traj.positions[k]);
    CHECK(((pos % 2 + 2) % 2) == static_cast<long>((k + 1) % 2 == 0 ? 0 : 1));
  }
}

TEST_CASE("simulate_ctrw_positions: compound Poisson variance at t=1") {
  const std::size_t n = 20000;
  const auto pos = ctrw::simulate_ctrw_positions(
      renewal::exponential(1.0), ctrw::gaussian_jump(1.0), 1.0, n, {43, 0});
  const double var = stats::variance(pos);
  // Var x(1) = 1; spread of the variance estimator via 4th moment = 6
  const double se = std::sqrt((6.0 - 1.0) / n);
  CHECK(std::fabs(var - 1.0) < 4.0 * se);

  const auto a = ctrw::simulate_ctrw_positions(
      renewal::exponential(1.0), ctrw::two_point_jump(), 1.0, 2000, {43, 1},
      mc::Exec::serial);
  const auto b = ctrw::simulate_ctrw_positions(
      renewal::exponential(1.0), ctrw::two_point_jump(), 1.0, 2000, {43, 1},
      mc::Exec::openmp);
  CHECK(a == b);
}

TEST_CASE("char_function: examples") {
  const auto wait = renewal::exponential(1.0);
  for (const auto& jump :
       {ctrw::gaussian_jump(1.0), ctrw::two_point_jump()}) {
    CHECK(ctrw::char_function(wait, jump, 0.0, 2.0).real() ==
          doctest::Approx(1.0).epsilon(1e-10));
  }
  // compound Poisson closed form e^{-t(1-w(kappa))} at w = cos(pi) = -1
  CHECK(ctrw::char_function(wait, ctrw::two_point_jump(), M_PI, 1.0).real() ==
        doctest::Approx(std::exp(-2.0)).epsilon(1e-10));
  // ML beta=0.5 Gaussian kappa=1: brute-force partial sum with oracle weights
  const auto mlw = renewal::mittag_leffler(0.5, 1.0);
  double brute = 0.0;
  for (int k = 0; k <= 60; ++k) {
    brute += oracle::ml_pmf_mp(0.5, 1.0, k) * std::exp(-0.5 * k);
  }
  CHECK(ctrw::char_function(mlw, ctrw::gaussian_jump(1.0), 1.0, 1.0).real() ==
        doctest::Approx(brute).epsilon(1e-9));
}

TEST_CASE("char-function consistency: Fourier quadrature of the density") {
  const auto wait = renewal::mittag_leffler(0.5, 1.0);
  const auto jump = ctrw::gaussian_jump(1.0);
  const auto soj =
      ctrw::sojourn_series(wait, jump, 1.0, {-16.0, 0.02, 1601}, 60);
  for (double kappa : {0.5, 1.0, 2.0}) {
    double re = soj.atom_at_origin;  // atom contributes e^{i kappa 0} = 1
    for (std::size_t i = 0; i < soj.density.size(); ++i) {
      const double x = soj.x0 + i * soj.dx;
      re += soj.density[i] * std::cos(kappa * x) * soj.dx;
    }
    const double expect = ctrw::char_function(wait, jump, kappa, 1.0).real();
    CHECK(std::fabs(re - expect) < 1e-3);
  }
}

TEST_CASE("montroll_weiss_check: examples") {
  CHECK(ctrw::montroll_weiss_check(renewal::exponential(1.0),
                                   ctrw::gaussian_jump(1.0), 0.0, 1.0) < 1e-6);
  CHECK(ctrw::montroll_weiss_check(renewal::exponential(1.0),
                                   ctrw::gaussian_jump(1.0), 1.0, 1.0) < 1e-5);
  CHECK(ctrw::montroll_weiss_check(renewal::mittag_leffler(0.5, 1.0),
                                   ctrw::two_point_jump(), 1.0, 1.0) < 1e-4);
}

TEST_CASE("kolmogorov_feller_residual: value and central-difference order") {
  const auto wait = renewal::exponential(1.0);
  const ctrw::GridSpec lattice{-32.0, 1.0, 65};
  const double fine = ctrw::kolmogorov_feller_residual(
      wait, ctrw::two_point_jump(), lattice, 0.5, 2.0, 1e-3, 40);
  CHECK(fine < 1e-4);
  const double coarse = ctrw::kolmogorov_feller_residual(
      wait, ctrw::two_point_jump(), lattice, 0.5, 2.0, 1e-2, 40);
  const double ratio = coarse / fine;
  CHECK(ratio > 60.0);
  CHECK(ratio < 140.0);

  CHECK_THROWS_AS(
      ctrw::kolmogorov_feller_residual(renewal::exponential(2.0),
                                       ctrw::two_point_jump(), lattice, 0.5,
                                       2.0, 1e-3),
      DomainError);
}

TEST_CASE("fractional_master_residual: beta=1 degeneracy and beta=0.5 value") {
  const ctrw::GridSpec lattice{-32.0, 1.0, 65};
  // beta=1 through the L1 path lands within 10x of the KF residual
  const double kf = ctrw::kolmogorov_feller_residual(
      renewal::exponential(1.0), ctrw::two_point_jump(), lattice, 0.5, 2.0,
      1e-3, 40);
  const auto b1 = ctrw::fractional_master_residual(
      renewal::mittag_leffler(1.0, 1.0), ctrw::two_point_jump(), lattice, 2.0,
      1e-3, 0.5, 40);
  CHECK(b1.max_residual < 10.0 * std::max(kf, 1e-6));
  CHECK(b1.expected_order == doctest::Approx(1.0));

  const auto b05 = ctrw::fractional_master_residual(
      renewal::mittag_leffler(0.5, 1.0), ctrw::two_point_jump(), lattice, 2.0,
      1e-3, 0.5, 40);
  CHECK(b05.max_residual < 5e-3);
  CHECK(b05.expected_order == doctest::Approx(1.5));

  CHECK_THROWS_AS(
      ctrw::fractional_master_residual(renewal::mittag_leffler(0.5, 2.0),
                                       ctrw::two_point_jump(), lattice, 2.0,
                                       1e-3, 0.5),
      DomainError);
}

TEST_CASE("fractional_master_residual: order under dt halving is 2^(2-beta)") {
  const ctrw::GridSpec lattice{-24.0, 1.0, 49};
  const auto coarse = ctrw::fractional_master_residual(
      renewal::mittag_leffler(0.5, 1.0), ctrw::two_point_jump(), lattice, 2.0,
      4e-3, 0.5, 40);
  const auto fine = ctrw::fractional_master_residual(
      renewal::mittag_leffler(0.5, 1.0), ctrw::two_point_jump(), lattice, 2.0,
      2e-3, 0.5, 40);
  const double ratio = coarse.max_residual / fine.max_residual;
  CHECK(ratio > std::pow(2.0, 1.5) * 0.8);
  CHECK(ratio < std::pow(2.0, 1.5) * 1.2);
}

TEST_CASE("series solution matches Monte Carlo walkers (moderate n)") {
  const std::size_t n = 20000;
  const auto wait = renewal::mittag_leffler(0.5, 1.0);
  const auto jump = ctrw::gaussian_jump(1.0);
  auto pos = ctrw::simulate_ctrw_positions(wait, jump, 1.0, n, {47, 0});
  std::sort(pos.begin(), pos.end());
  const ctrw::SojournCdf cdf(wait, jump, 1.0, 60);
  const double d =
      stats::cdf_sup_distance(pos, [&](double x) { return cdf(x); });
  CHECK(d < 0.02);
  // one-shot convenience wrapper agrees with the functor
  CHECK(ctrw::sojourn_series_cdf(wait, jump, 1.0, 0.7, 60) ==
        doctest::Approx(cdf(0.7)).epsilon(1e-15));
}
