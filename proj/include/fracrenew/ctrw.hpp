#pragma once

#include <complex>
#include <variant>
#include <vector>

#include "fracrenew/montecarlo.hpp"
#include "fracrenew/renewal.hpp"

namespace fracrenew::ctrw {

// Jump-width laws; all construction goes through the factories below.
struct GaussianJump {
  double sigma;
};
struct TwoPointJump {};  // +1 / -1 with probability 1/2 each
struct TabulatedJump {
  double x0;
  double dx;
  std::vector<double> density;
  bool symmetric;
  std::vector<double> cdf;  // trapezoid cumulative, for sampling
};
using JumpModel = std::variant<GaussianJump, TwoPointJump, TabulatedJump>;

JumpModel gaussian_jump(double sigma);
JumpModel two_point_jump();
// density on x0 + i*dx must integrate to 1 within 1e-8 (trapezoid)
JumpModel tabulated_jump(double x0, double dx, std::vector<double> density,
                         bool symmetric);

// Uniform output grid x_i = x0 + i*dx, i = 0..n-1.
struct GridSpec {
  double x0;
  double dx;
  int n;
};

// k-fold self-convolution of the jump density.
struct JumpPower {
  enum class Kind { atom, gaussian, lattice, grid };
  Kind kind = Kind::atom;
  int k = 0;
  double variance = 0.0;             // gaussian: k sigma^2
  std::vector<double> lattice;       // two-point: mass at site -k + 2j
  double x0 = 0.0, dx = 1.0;         // tabulated support
  std::vector<double> values;        // tabulated density

  double density_at(double x) const;   // gaussian / grid kinds
  double lattice_mass(int site) const; // lattice kind
};

inline constexpr std::size_t kMaxGridSupport = 1u << 20;
JumpPower jump_convolution_power(const JumpModel& jump, int k);

// Walker position density at time t: point mass at the origin of weight
// P(N(t)=0) plus the continuous (or lattice) part on the grid. For TwoPoint
// jumps the grid must be the unit integer lattice and `density` holds point
// masses (dx = 1).
struct SojournDensity {
  double t = 0.0;
  double atom_at_origin = 0.0;
  double x0 = 0.0;
  double dx = 1.0;
  std::vector<double> density;
  int k_max_used = 0;
  double truncation_bound = 0.0;

  double grid_mass() const;  // sum density * dx
};

SojournDensity sojourn_series(const renewal::WaitingTimeModel& wait,
                              const JumpModel& jump, double t,
                              const GridSpec& grid, int k_max,
                              mc::Exec exec = mc::Exec::openmp);

// CDF of the series solution (atom included); closed per-term forms for
// Gaussian and TwoPoint, cumulative grid sums for Tabulated. The functor
// form precomputes the counting weights and per-k jump data once, so bulk
// evaluation (KS sweeps) stays cheap.
class SojournCdf {
 public:
  SojournCdf(const renewal::WaitingTimeModel& wait, const JumpModel& jump,
             double t, int k_max);
  double operator()(double x) const;

 private:
  JumpModel jump_;
  renewal::CountingPmf pmf_;
  std::vector<std::vector<double>> lattice_rows_;  // two-point laws
  std::vector<JumpPower> powers_;                  // tabulated laws
};

double sojourn_series_cdf(const renewal::WaitingTimeModel& wait,
                          const JumpModel& jump, double t, double x,
                          int k_max);

struct CtrwTrajectory {
  double horizon = 0.0;
  std::vector<double> times;      // event epochs
  std::vector<double> positions;  // post-jump positions; x(0) = 0
  std::uint64_t seed_state = 0;

  double position_at(double t) const;
};

CtrwTrajectory simulate_ctrw(const renewal::WaitingTimeModel& wait,
                             const JumpModel& jump, double horizon,
                             mc::SeedStream seed);

// Ensemble of walker positions at time t; walker i draws waits from stream
// seed+2i and jumps from a disjoint offset stream. Bit-identical across
// worker counts.
std::vector<double> simulate_ctrw_positions(
    const renewal::WaitingTimeModel& wait, const JumpModel& jump, double t,
    std::size_t n_walkers, mc::SeedStream seed, mc::Exec exec = mc::Exec::openmp);

// Characteristic function sum_k P(N(t)=k) w_hat(kappa)^k (tail below 1e-12 by
// adaptive k truncation); real-valued for symmetric jumps.
std::complex<double> char_function(const renewal::WaitingTimeModel& wait,
                                   const JumpModel& jump, double kappa,
                                   double t);

// Fourier transform of the jump density at kappa.
std::complex<double> jump_char(const JumpModel& jump, double kappa);

// |L{char_function}(s) - Psi~(s) / (1 - phi~(s) w_hat(kappa))|
double montroll_weiss_check(const renewal::WaitingTimeModel& wait,
                            const JumpModel& jump, double kappa, double s);

// Max-norm residual of d/dt p = -p + w*p on the continuous part over the
// interior grid and t in [t_lo, t_hi] stepped by dt (central differences).
// Requires a unit-rate exponential waiting law.
// Residual checks run single-threaded by default for reproducibility of
// reported figures; the openmp path is bit-identical and opt-in.
double kolmogorov_feller_residual(const renewal::WaitingTimeModel& wait,
                                  const JumpModel& jump, const GridSpec& grid,
                                  double t_lo, double t_hi, double dt,
                                  int k_max = 40,
                                  mc::Exec exec = mc::Exec::serial);

struct FracResidualReport {
  double max_residual = 0.0;
  double expected_order = 0.0;  // L1 scheme: 2 - beta
};

// Same residual for the fractional master equation using the Caputo L1
// derivative in t over the full history 0..t_max, reported on the window
// t >= window_start. Requires a unit-scale Mittag-Leffler waiting law.
FracResidualReport fractional_master_residual(
    const renewal::WaitingTimeModel& wait, const JumpModel& jump,
    const GridSpec& grid, double t_max, double dt, double window_start,
    int k_max = 40, mc::Exec exec = mc::Exec::serial);

}  // namespace fracrenew::ctrw
