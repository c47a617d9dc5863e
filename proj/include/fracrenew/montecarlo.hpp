#pragma once

#include <cstdint>
#include <vector>

#include "fracrenew/renewal.hpp"
#include "fracrenew/rng.hpp"

namespace fracrenew::mc {

// One sampled realization: event epochs 0 < t_1 < t_2 < ... <= horizon.
// `seed_state` is the engine state that generated it, so the path is
// reproducible from (model, horizon, seed_state).
struct RenewalPath {
  double horizon = 0.0;
  std::vector<double> events;
  std::uint64_t seed_state = 0;
};

// Inverse-CDF draw from a single uniform u in (0, 1): solves Psi(t) = u.
// Exponential and Lomax invert in closed form; the Mittag-Leffler law is
// inverted by bisection-then-Newton on the survival function.
// Decreasing in u. Throws RootFindFailure if the bracket expansion exceeds
// 1e15 * time_scale.
double sample_waiting_time(const renewal::WaitingTimeModel& model, double u);

// Transformation-based (Kozubowski) unit-scale Mittag-Leffler variate from two
// independent uniforms; test-suite cross-check for the inversion sampler.
double sample_waiting_time_kozubowski(ml::Order order, double u1, double u2);

RenewalPath simulate_renewal(const renewal::WaitingTimeModel& model,
                             double horizon, SeedStream seed);

// Path with exactly n_events renewals; horizon is set to the last epoch.
// Used by the thinning cascade, where heavy tails make a time horizon awkward.
RenewalPath simulate_renewal_events(const renewal::WaitingTimeModel& model,
                                    std::size_t n_events, SeedStream seed);

// N(t) = max{k : t_k <= t}; throws DomainError for t outside [0, horizon].
int counting_function(const RenewalPath& path, double t);

// Histogram of N(t) over n_paths independent paths (path i uses stream
// seed.at(seed.stream_index + i)); probs sum to 1, tail_bound = 0.
// openmp and serial produce bit-identical results.
renewal::CountingPmf empirical_counting_pmf(
    const renewal::WaitingTimeModel& model, double t, std::size_t n_paths,
    SeedStream seed, Exec exec = Exec::openmp);

// Batch of waiting-time draws, one stream per draw; deterministic across
// worker counts like the histogram above.
std::vector<double> sample_waiting_times(const renewal::WaitingTimeModel& model,
                                         std::size_t n, SeedStream seed,
                                         Exec exec = Exec::openmp);

}  // namespace fracrenew::mc
