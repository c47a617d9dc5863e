#pragma once

#include <variant>
#include <vector>

#include "fracrenew/errors.hpp"
#include "fracrenew/mlnum.hpp"

namespace fracrenew::renewal {

// Waiting-time laws. MittagLeffler{1, 1/lambda} reproduces Exponential{lambda}
// (the beta = 1 branch delegates to the exponential closed forms).
struct Exponential {
  double rate;  // lambda > 0
};
struct MittagLeffler {
  ml::Order order;
  double time_scale;  // tau > 0; survival E_beta(-(t/tau)^beta)
};
struct ParetoTail {
  double index;  // beta in (0, 1)
  double scale;  // c > 0; Lomax survival (1 + t/c)^(-beta)
};
using WaitingTimeModel = std::variant<Exponential, MittagLeffler, ParetoTail>;

WaitingTimeModel exponential(double rate);
WaitingTimeModel mittag_leffler(double beta, double time_scale);
WaitingTimeModel pareto_tail(double index, double scale);

// Counting-number distribution at a fixed time, truncated at k_max with the
// unaccounted mass reported, never silently renormalized.
struct CountingPmf {
  double t = 0.0;
  std::vector<double> probs;  // p_0 .. p_K
  double tail_bound = 0.0;

  double sum() const;
};

// Tabulated function on a strictly increasing grid.
struct GridFn {
  GridFn(std::vector<double> grid, std::vector<double> values);
  std::vector<double> grid;
  std::vector<double> values;

  // uniform spacing accessor; throws GridMismatch when the grid is not uniform
  double uniform_step() const;
  double interpolate(double t) const;
};

double survival(const WaitingTimeModel& model, double t);
double wait_pdf(const WaitingTimeModel& model, double t);
CountingPmf counting_pmf(const WaitingTimeModel& model, double t, int k_max);
double erlang_pdf(const WaitingTimeModel& model, int k, double t);
double erlang_cdf(const WaitingTimeModel& model, int k, double t);

// Laplace (causal) convolution of two tabulated functions on a common uniform
// grid starting at 0. Endpoint cells use a local power-law product rule so
// integrable t^(beta-1)-type singularities at 0 do not cost an order.
GridFn convolve_grid(const GridFn& f, const GridFn& g);

// Closed-form Laplace transform of the waiting density, real s > 0.
double wait_laplace(const WaitingTimeModel& model, double s);

}  // namespace fracrenew::renewal
