#include "fracrenew/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fracrenew::mc {

namespace {

// Solve E_beta(-(t/tau)^beta) = u for t. The survival function is strictly
// decreasing from 1 to 0, so a doubling bracket always exists; bisection
// narrows it, then Newton (derivative -phi) polishes to 1e-10 relative.
double invert_ml_survival(const renewal::MittagLeffler& m, double u) {
  const double tau = m.time_scale;
  const auto surv = [&](double t) { return renewal::survival({m}, t); };

  double lo = 0.0;
  double hi = tau;
  while (surv(hi) > u) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e15 * tau) {
      throw RootFindFailure("sample_waiting_time: bracket expansion exceeded");
    }
  }

  for (int i = 0; i < 60 && (hi - lo) > 1e-6 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (surv(mid) > u ? lo : hi) = mid;
  }

  double t = 0.5 * (lo + hi);
  for (int i = 0; i < 30; ++i) {
    const double f = surv(t) - u;
    if (f == 0.0) return t;
    (f > 0.0 ? lo : hi) = t;  // survival decreasing: f > 0 puts the root above
    const double df = -renewal::wait_pdf({m}, t);
    double next = df != 0.0 ? t - f / df : 0.5 * (lo + hi);
    const bool newton_ok = next > lo && next < hi;
    if (!newton_ok) next = 0.5 * (lo + hi);
    if ((newton_ok && std::fabs(next - t) <= 1e-12 * next) ||
        (hi - lo) <= 1e-12 * hi) {
      return next;
    }
    t = next;
  }
  return t;
}

struct PathCursor {
  SplitMix64 gen;
  double clock = 0.0;
  const renewal::WaitingTimeModel& model;

  double advance() {
    clock += sample_waiting_time(model, gen.next_unit());
    return clock;
  }
};

template <typename Fn>
void for_each_index(std::size_t n, Exec exec, const Fn& fn) {
#ifdef _OPENMP
  if (exec == Exec::openmp) {
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
      fn(static_cast<std::size_t>(i));
    }
    return;
  }
#else
  (void)exec;
#endif
  for (std::size_t i = 0; i < n; ++i) fn(i);
}

}  // namespace

double sample_waiting_time(const renewal::WaitingTimeModel& model, double u) {
  if (!(u > 0.0 && u < 1.0)) {
    throw DomainError("sample_waiting_time: u must lie in (0, 1)");
  }
  return std::visit(
      [u](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, renewal::Exponential>) {
          return -std::log(u) / m.rate;
        } else if constexpr (std::is_same_v<T, renewal::MittagLeffler>) {
          if (m.order.beta() == 1.0) return -m.time_scale * std::log(u);
          return invert_ml_survival(m, u);
        } else {
          return m.scale * (std::pow(u, -1.0 / m.index) - 1.0);
        }
      },
      model);
}

double sample_waiting_time_kozubowski(ml::Order order, double u1, double u2) {
  if (!(u1 > 0.0 && u1 < 1.0 && u2 > 0.0 && u2 < 1.0)) {
    throw DomainError("sample_waiting_time_kozubowski: u1, u2 in (0, 1)");
  }
  const double beta = order.beta();
  if (beta == 1.0) return -std::log(u1);
  const double bp = beta * std::numbers::pi;
  const double mix =
      std::sin(bp) / std::tan(bp * u2) - std::cos(bp);
  return -std::log(u1) * std::pow(mix, 1.0 / beta);
}

RenewalPath simulate_renewal(const renewal::WaitingTimeModel& model,
                             double horizon, SeedStream seed) {
  if (!(horizon > 0.0)) throw DomainError("simulate_renewal: horizon > 0");
  RenewalPath path;
  path.horizon = horizon;
  path.seed_state = seed.state();
  PathCursor cur{seed.engine(), 0.0, model};
  for (;;) {
    const double t = cur.advance();
    if (t > horizon) break;  // first exceeding event is discarded
    path.events.push_back(t);
  }
  return path;
}

RenewalPath simulate_renewal_events(const renewal::WaitingTimeModel& model,
                                    std::size_t n_events, SeedStream seed) {
  if (n_events == 0) throw DomainError("simulate_renewal_events: n_events > 0");
  RenewalPath path;
  path.seed_state = seed.state();
  path.events.reserve(n_events);
  PathCursor cur{seed.engine(), 0.0, model};
  for (std::size_t k = 0; k < n_events; ++k) {
    path.events.push_back(cur.advance());
  }
  path.horizon = path.events.back();
  return path;
}

int counting_function(const RenewalPath& path, double t) {
  if (!(t >= 0.0) || t > path.horizon) {
    throw DomainError("counting_function: t outside [0, horizon]");
  }
  const auto it =
      std::upper_bound(path.events.begin(), path.events.end(), t);
  return static_cast<int>(it - path.events.begin());
}

renewal::CountingPmf empirical_counting_pmf(
    const renewal::WaitingTimeModel& model, double t, std::size_t n_paths,
    SeedStream seed, Exec exec) {
  if (n_paths == 0) throw DomainError("empirical_counting_pmf: n_paths >= 1");
  if (!(t >= 0.0)) throw DomainError("empirical_counting_pmf: t >= 0");

  std::vector<int> counts(n_paths, 0);
  for_each_index(n_paths, exec, [&](std::size_t i) {
    // count events up to t without materializing the path
    SplitMix64 gen = seed.shifted(i).engine();
    int n = 0;
    double clock = 0.0;
    for (;;) {
      clock += sample_waiting_time(model, gen.next_unit());
      if (clock > t) break;
      ++n;
    }
    counts[i] = n;
  });

  const int k_top = *std::max_element(counts.begin(), counts.end());
  std::vector<std::int64_t> hist(static_cast<std::size_t>(k_top) + 1, 0);
  for (int c : counts) ++hist[static_cast<std::size_t>(c)];

  renewal::CountingPmf pmf;
  pmf.t = t;
  pmf.tail_bound = 0.0;
  pmf.probs.resize(hist.size());
  for (std::size_t k = 0; k < hist.size(); ++k) {
    pmf.probs[k] = static_cast<double>(hist[k]) / static_cast<double>(n_paths);
  }
  return pmf;
}

std::vector<double> sample_waiting_times(const renewal::WaitingTimeModel& model,
                                         std::size_t n, SeedStream seed,
                                         Exec exec) {
  std::vector<double> out(n);
  for_each_index(n, exec, [&](std::size_t i) {
    SplitMix64 gen = seed.shifted(i).engine();
    out[i] = sample_waiting_time(model, gen.next_unit());
  });
  return out;
}

}  // namespace fracrenew::mc
