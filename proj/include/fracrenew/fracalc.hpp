#pragma once

#include <vector>

#include "fracrenew/mlnum.hpp"

namespace fracrenew::fracalc {

// Samples f(j h), j = 0..M on a uniform grid starting at 0.
struct UniformGridSeries {
  UniformGridSeries(double step, std::vector<double> values);
  double step;
  std::vector<double> values;
};

// Caputo derivative of order beta on the grid.
// beta < 1: L1 scheme on the regularized form, weights
//   b_m = (m+1)^(1-beta) - m^(1-beta), accuracy O(h^(2-beta)) for smooth f;
//   entry 0 is set to 0 (the scheme is defined for j >= 1).
// beta = 1: central differences at interior nodes, one-sided at the ends.
UniformGridSeries caputo_l1(const UniformGridSeries& series, ml::Order order);

// Tabulates the Mittag-Leffler survival Psi(t) = E_beta(-t^beta) on [0, T]
// with step h, applies caputo_l1, and returns max_j |D Psi + Psi| over the
// window t_j in [window_start, T]. The window excludes the first nodes, where
// the t^(beta-1) derivative singularity degrades the L1 scheme.
double relaxation_residual(ml::Order order, double h, double T,
                           double window_start = 0.1);

// Checks the Laplace rule for the Caputo derivative on the relaxation
// solution: s^beta Psi~(s) - s^(beta-1) = -Psi~(s), with Psi~ obtained by
// numerical quadrature of e^(-st) Psi(t). Returns the absolute residual.
double caputo_laplace_check(ml::Order order, double s);

}  // namespace fracrenew::fracalc
