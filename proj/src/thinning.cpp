#include "fracrenew/thinning.hpp"

#include <algorithm>
#include <cmath>

#include "fracrenew/stats.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fracrenew::thinning {

ThinningSchedule::ThinningSchedule(ml::Order beta_, double a_const_,
                                   std::vector<double> levels_)
    : beta(beta_), a_const(a_const_), levels(std::move(levels_)) {
  if (!(a_const > 0.0)) throw DomainError("ThinningSchedule: a_const > 0");
  if (levels.empty()) throw DomainError("ThinningSchedule: empty schedule");
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (!(levels[i] > 0.0)) throw DomainError("ThinningSchedule: delta > 0");
    if (i > 0 && !(levels[i] < levels[i - 1])) {
      throw DomainError("ThinningSchedule: levels must decrease");
    }
    const double eps = epsilon(i);
    if (!(eps > 0.0 && eps < 1.0)) {
      throw DomainError("ThinningSchedule: eps = a delta^beta must be in (0,1)");
    }
  }
}

ThinningSchedule ThinningSchedule::decades(ml::Order beta, double a_const,
                                           int n_levels) {
  if (n_levels < 1) throw DomainError("ThinningSchedule: n_levels >= 1");
  std::vector<double> lv(n_levels);
  for (int i = 0; i < n_levels; ++i) lv[i] = std::pow(10.0, -(i + 1));
  return ThinningSchedule(beta, a_const, std::move(lv));
}

double ThinningSchedule::epsilon(std::size_t i) const {
  return a_const * std::pow(levels.at(i), beta.beta());
}

namespace {

void validate_density(const LaplaceDensity& d) {
  // normalization: phi~(0+) = 1, probed where the tail term is below 5e-7
  const double s_probe = std::min(
      1e-8, std::pow(5e-7 / d.a_const, 1.0 / d.tail_beta));
  if (std::fabs(d.transform(s_probe) - 1.0) > 1e-6) {
    throw DomainError("LaplaceDensity: transform does not normalize to 1");
  }
}

}  // namespace

LaplaceDensity exponential_density(double rate) {
  const auto model = renewal::exponential(rate);
  LaplaceDensity d{
      [model](double s) { return renewal::wait_laplace(model, s); }, 1.0,
      1.0 / rate};
  validate_density(d);
  return d;
}

LaplaceDensity lomax_density(double index_beta, double scale_c) {
  const auto model = renewal::pareto_tail(index_beta, scale_c);
  // 1 - phi~(s) ~ c^beta Gamma(1-beta) s^beta for s -> 0
  LaplaceDensity d{
      [model](double s) { return renewal::wait_laplace(model, s); },
      index_beta, std::pow(scale_c, index_beta) * std::tgamma(1.0 - index_beta)};
  validate_density(d);
  return d;
}

LaplaceDensity mittag_leffler_density(ml::Order order) {
  const double beta = order.beta();
  LaplaceDensity d{
      [beta](double s) { return 1.0 / (1.0 + std::pow(s, beta)); }, beta, 1.0};
  validate_density(d);
  return d;
}

double thin_rescale_transform(const LaplaceDensity& phi, double q, double r,
                              double s) {
  if (!(q > 0.0 && q <= 1.0)) throw DomainError("thin: q must be in (0, 1]");
  if (!(r > 0.0)) throw DomainError("thin: r must be > 0");
  if (!(s > 0.0)) throw DomainError("thin: s must be > 0");
  const double ph = phi.transform(r * s);
  return q * ph / (1.0 - (1.0 - q) * ph);
}

double ml_limit_transform(ml::Order order, double s) {
  if (!(s > 0.0)) throw DomainError("ml_limit_transform: s must be > 0");
  return 1.0 / (1.0 + std::pow(s, order.beta()));
}

mc::RenewalPath thin_rescale_path(const mc::RenewalPath& path, double q,
                                  double r, mc::SeedStream seed) {
  if (!(q > 0.0 && q <= 1.0)) throw DomainError("thin: q must be in (0, 1]");
  if (!(r > 0.0)) throw DomainError("thin: r must be > 0");
  mc::RenewalPath out;
  out.horizon = path.horizon * r;
  out.seed_state = seed.state();
  mc::SplitMix64 gen = seed.engine();
  out.events.reserve(static_cast<std::size_t>(path.events.size() * q) + 8);
  for (double t : path.events) {
    if (gen.next_unit() < q) out.events.push_back(t * r);
  }
  return out;
}

TailConditionReport check_tail_condition(const LaplaceDensity& phi,
                                         std::span<const double> s_grid) {
  if (s_grid.size() < 2) throw DomainError("check_tail_condition: short grid");
  TailConditionReport rep;
  rep.s_grid.assign(s_grid.begin(), s_grid.end());
  rep.ratio.resize(s_grid.size());
  for (std::size_t i = 0; i < s_grid.size(); ++i) {
    const double s = s_grid[i];
    if (!(s > 0.0) || (i > 0 && !(s < s_grid[i - 1]))) {
      throw DomainError("check_tail_condition: grid must decrease to 0");
    }
    const double num = 1.0 - phi.transform(s);
    rep.ratio[i] = num / std::pow(s, phi.tail_beta);
    if (!std::isfinite(rep.ratio[i])) {
      throw FitUnstable("check_tail_condition: non-finite ratio");
    }
  }
  const double s_min = s_grid.back();
  rep.a_estimate = rep.ratio.back();
  double dev = 0.0;
  for (std::size_t i = 0; i < s_grid.size(); ++i) {
    if (s_grid[i] <= 10.0 * s_min) {
      dev = std::max(dev,
                     std::fabs(rep.ratio[i] - rep.a_estimate) /
                         std::fabs(rep.a_estimate));
    }
  }
  rep.max_rel_deviation = dev;
  rep.passed = dev <= 0.05;
  return rep;
}

std::vector<CascadeLevel> thin_cascade_ks(
    const renewal::WaitingTimeModel& base, const ThinningSchedule& schedule,
    std::size_t n_gaps, mc::SeedStream seed, mc::Exec exec) {
  if (n_gaps < 10) throw DomainError("thin_cascade_ks: n_gaps too small");
  const ml::Order beta = schedule.beta;
  const auto ml_cdf = [beta](double t) {
    if (t <= 0.0) return 0.0;
    return 1.0 - ml::ml_eval(beta, -std::pow(t, beta.beta())).value;
  };

  constexpr std::size_t kPaths = 64;
  std::vector<CascadeLevel> out;
  for (std::size_t lvl = 0; lvl < schedule.levels.size(); ++lvl) {
    const double delta = schedule.levels[lvl];
    const double eps = schedule.epsilon(lvl);
    const double need =
        (static_cast<double>(n_gaps) + 6.0 * std::sqrt(double(n_gaps)) + 16.0) /
        eps;
    const std::size_t ev_per_path =
        static_cast<std::size_t>(need / kPaths) + 1;

    std::vector<std::vector<double>> gaps(kPaths);
    const std::uint64_t block = (lvl + 1) * UINT64_C(0x100000000);
#ifdef _OPENMP
    const bool par = exec == mc::Exec::openmp;
#pragma omp parallel for schedule(static) if (par)
#endif
    for (std::int64_t p = 0; p < static_cast<std::int64_t>(kPaths); ++p) {
      const auto path = mc::simulate_renewal_events(
          base, ev_per_path, seed.shifted(block + p));
      const auto thinned = thin_rescale_path(
          path, eps, delta, seed.shifted(block + kPaths + p));
      auto& g = gaps[p];
      double prev = 0.0;
      g.reserve(thinned.events.size());
      for (double t : thinned.events) {
        g.push_back(t - prev);
        prev = t;
      }
    }

    std::vector<double> pooled;
    pooled.reserve(n_gaps);
    for (const auto& g : gaps) {
      for (double v : g) {
        if (pooled.size() == n_gaps) break;
        pooled.push_back(v);
      }
    }
    std::sort(pooled.begin(), pooled.end());
    const double ks = stats::ks_statistic_sorted(pooled, ml_cdf, exec);
    out.push_back({delta, eps, ks, pooled.size()});
  }
  return out;
}

}  // namespace fracrenew::thinning
