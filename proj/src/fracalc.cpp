#include "fracrenew/fracalc.hpp"

#include <cmath>

#include "fracrenew/quadrature.hpp"

namespace fracrenew::fracalc {

UniformGridSeries::UniformGridSeries(double step_, std::vector<double> values_)
    : step(step_), values(std::move(values_)) {
  if (!(step > 0.0)) throw DomainError("UniformGridSeries: step must be > 0");
  if (values.size() < 3) {
    throw DomainError("UniformGridSeries: need at least 3 nodes");
  }
}

UniformGridSeries caputo_l1(const UniformGridSeries& series, ml::Order order) {
  const double beta = order.beta();
  const double h = series.step;
  const auto& f = series.values;
  const std::size_t M = f.size() - 1;
  std::vector<double> out(f.size(), 0.0);

  if (beta == 1.0) {
    out[0] = (f[1] - f[0]) / h;
    for (std::size_t j = 1; j < M; ++j) {
      out[j] = (f[j + 1] - f[j - 1]) / (2.0 * h);
    }
    out[M] = (f[M] - f[M - 1]) / h;
    return UniformGridSeries(h, std::move(out));
  }

  const double scale =
      std::pow(h, -beta) / std::tgamma(2.0 - beta);
  std::vector<double> b(M);
  for (std::size_t m = 0; m < M; ++m) {
    b[m] = std::pow(static_cast<double>(m + 1), 1.0 - beta) -
           std::pow(static_cast<double>(m), 1.0 - beta);
  }
  for (std::size_t j = 1; j <= M; ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i < j; ++i) {
      acc += b[j - 1 - i] * (f[i + 1] - f[i]);
    }
    out[j] = scale * acc;
  }
  return UniformGridSeries(h, std::move(out));
}

double relaxation_residual(ml::Order order, double h, double T,
                           double window_start) {
  if (!(h > 0.0 && h <= T / 10.0)) {
    throw DomainError("relaxation_residual: need 0 < h <= T/10");
  }
  const double beta = order.beta();
  const std::size_t M = static_cast<std::size_t>(std::llround(T / h));
  std::vector<double> psi(M + 1);
  for (std::size_t j = 0; j <= M; ++j) {
    const double t = j * h;
    psi[j] = (beta == 1.0)
                 ? std::exp(-t)
                 : (t == 0.0 ? 1.0
                             : ml::ml_eval(order, -std::pow(t, beta)).value);
  }
  const UniformGridSeries d = caputo_l1(UniformGridSeries(h, psi), order);
  double max_res = 0.0;
  for (std::size_t j = 1; j <= M; ++j) {
    const double t = j * h;
    if (t < window_start) continue;
    if (beta == 1.0 && j == M) continue;  // one-sided end stencil excluded
    max_res = std::max(max_res, std::fabs(d.values[j] + psi[j]));
  }
  return max_res;
}

double caputo_laplace_check(ml::Order order, double s) {
  if (!(s > 0.0)) throw DomainError("caputo_laplace_check: s must be > 0");
  const double beta = order.beta();
  const auto psi = [&](double t) {
    if (t == 0.0) return 1.0;
    if (beta == 1.0) return std::exp(-t);
    return ml::ml_eval(order, -std::pow(t, beta)).value;
  };

  // quadrature of e^(-st) Psi(t): substitution t = v^(1/beta) smooths the
  // t^beta cusp on [0, 1]; plain adaptive panels beyond
  const double inv_beta = 1.0 / beta;
  const auto head = [&](double v) {
    const double t = std::pow(v, inv_beta);
    return std::exp(-s * t) * psi(t) * inv_beta * std::pow(v, inv_beta - 1.0);
  };
  const auto tail_fn = [&](double t) { return std::exp(-s * t) * psi(t); };
  double psi_tilde = num::integrate(head, 0.0, 1.0, 1e-12);
  psi_tilde += num::integrate_to_inf(tail_fn, 1.0, 1.0, 1e-12);

  const double lhs = std::pow(s, beta) * psi_tilde - std::pow(s, beta - 1.0);
  return std::fabs(lhs + psi_tilde);
}

}  // namespace fracrenew::fracalc
