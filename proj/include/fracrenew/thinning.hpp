#pragma once

#include <functional>
#include <span>
#include <vector>

#include "fracrenew/mlnum.hpp"
#include "fracrenew/montecarlo.hpp"
#include "fracrenew/renewal.hpp"

namespace fracrenew::thinning {

// Deletion/rescale schedule: level i thins with keep-probability
// eps_i = a_const * delta_i^beta and rescales time by delta_i.
struct ThinningSchedule {
  ThinningSchedule(ml::Order beta, double a_const,
                   std::vector<double> levels);
  static ThinningSchedule decades(ml::Order beta, double a_const, int n_levels);

  ml::Order beta;
  double a_const;
  std::vector<double> levels;  // decreasing deltas

  double epsilon(std::size_t i) const;
};

// Waiting density seen through its Laplace transform on the real axis,
// with the power-tail descriptor 1 - phi~(s) ~ a_const s^beta for s -> 0.
struct LaplaceDensity {
  std::function<double(double)> transform;
  double tail_beta = 1.0;
  double a_const = 1.0;
};

LaplaceDensity exponential_density(double rate);
LaplaceDensity lomax_density(double index_beta, double scale_c);
LaplaceDensity mittag_leffler_density(ml::Order order);

// Transform of the thinned-and-rescaled waiting density:
//   q phi~(r s) / (1 - (1-q) phi~(r s))
double thin_rescale_transform(const LaplaceDensity& phi, double q, double r,
                              double s);

// Limiting transform 1 / (1 + s^beta).
double ml_limit_transform(ml::Order order, double s);

// Bernoulli(q) keep-decision per event, retained epochs and horizon scaled
// by r; deterministic per seed.
mc::RenewalPath thin_rescale_path(const mc::RenewalPath& path, double q,
                                  double r, mc::SeedStream seed);

struct TailConditionReport {
  double a_estimate = 0.0;
  double max_rel_deviation = 0.0;  // of the ratio over the last decade
  bool passed = false;
  std::vector<double> s_grid;
  std::vector<double> ratio;  // (1 - phi~(s)) / s^beta
};

// Fits (1 - phi~(s)) / s^beta on a decreasing grid s -> 0; passes when the
// ratio is stable within 5% over the last decade. Throws FitUnstable on
// non-finite ratios.
TailConditionReport check_tail_condition(const LaplaceDensity& phi,
                                         std::span<const double> s_grid);

// Monte Carlo verification harness for the thinning limit: per level, thin
// long base paths, pool n_gaps rescaled gaps (in path order) and measure the
// KS distance of their empirical law to the unit Mittag-Leffler CDF.
struct CascadeLevel {
  double delta = 0.0;
  double eps = 0.0;
  double ks_to_ml = 0.0;
  std::size_t n_gaps = 0;
};

std::vector<CascadeLevel> thin_cascade_ks(
    const renewal::WaitingTimeModel& base, const ThinningSchedule& schedule,
    std::size_t n_gaps, mc::SeedStream seed, mc::Exec exec = mc::Exec::openmp);

}  // namespace fracrenew::thinning
