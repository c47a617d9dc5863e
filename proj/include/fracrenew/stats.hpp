#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "fracrenew/rng.hpp"

namespace fracrenew::stats {

// One-sample Kolmogorov-Smirnov statistic against a continuous CDF;
// input must be sorted ascending.
double ks_statistic_sorted(std::span<const double> sorted,
                           const std::function<double(double)>& cdf,
                           mc::Exec exec = mc::Exec::serial);

// Two-sample KS statistic (copies are sorted internally).
double ks_two_sample(std::vector<double> a, std::vector<double> b);

// sup_x |F_emp(x) - F(x)| for a CDF that may carry atoms (e.g. lattice laws
// or a point mass at the origin): tied sample blocks are compared against
// both the right value F(x) and a left-limit probe F(x - eps).
double cdf_sup_distance(std::span<const double> sorted,
                        const std::function<double(double)>& cdf);

// 1% critical value of the one-sample statistic, 1.63 / sqrt(N).
inline double ks_critical_1pct(std::size_t n) {
  return 1.63 / std::sqrt(static_cast<double>(n));
}

// 1% critical value of the two-sample statistic.
inline double ks_two_sample_critical_1pct(std::size_t n, std::size_t m) {
  return 1.628 * std::sqrt((static_cast<double>(n) + m) /
                           (static_cast<double>(n) * m));
}

double mean(std::span<const double> v);
double variance(std::span<const double> v);  // unbiased

}  // namespace fracrenew::stats
