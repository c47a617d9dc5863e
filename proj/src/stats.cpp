#include "fracrenew/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "fracrenew/errors.hpp"

namespace fracrenew::stats {

double ks_statistic_sorted(std::span<const double> sorted,
                           const std::function<double(double)>& cdf,
                           mc::Exec exec) {
  const std::size_t n = sorted.size();
  if (n == 0) throw DomainError("ks_statistic_sorted: empty sample");
  std::vector<double> f(n);
#ifdef _OPENMP
  const bool par = exec == mc::Exec::openmp;
#pragma omp parallel for schedule(static) if (par)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
    f[i] = cdf(sorted[i]);
  }
#else
  (void)exec;
  for (std::size_t i = 0; i < n; ++i) f[i] = cdf(sorted[i]);
#endif
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double hi = static_cast<double>(i + 1) / n - f[i];
    const double lo = f[i] - static_cast<double>(i) / n;
    d = std::max({d, hi, lo});
  }
  return d;
}

double cdf_sup_distance(std::span<const double> sorted,
                        const std::function<double(double)>& cdf) {
  const std::size_t n = sorted.size();
  if (n == 0) throw DomainError("cdf_sup_distance: empty sample");
  double d = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && sorted[j] == sorted[i]) ++j;
    const double x = sorted[i];
    const double fx = cdf(x);
    const double fxm = cdf(x - 1e-9 * (1.0 + std::fabs(x)));
    d = std::max({d, std::fabs(static_cast<double>(j) / n - fx),
                  std::fabs(static_cast<double>(i) / n - fxm)});
    i = j;
  }
  return d;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw DomainError("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    const double fa = static_cast<double>(i) / a.size();
    const double fb = static_cast<double>(j) / b.size();
    d = std::max(d, std::fabs(fa - fb));
  }
  return d;
}

double mean(std::span<const double> v) {
  if (v.empty()) throw DomainError("mean: empty sample");
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double variance(std::span<const double> v) {
  if (v.size() < 2) throw DomainError("variance: need at least 2 samples");
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

}  // namespace fracrenew::stats
