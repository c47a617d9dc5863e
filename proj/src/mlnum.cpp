#include "fracrenew/mlnum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "fracrenew/special.hpp"

namespace fracrenew::ml {

namespace {

constexpr double kPi = std::numbers::pi;

double series_z_limit(double beta, const MlConfig& cfg) {
  return std::min(cfg.series_abs_z_max, std::pow(cfg.series_arg_cap, beta));
}

// Optimally truncated inverse-power expansion of E_beta(-x) for large x:
//   sum_{m>=1} (-1)^(m-1) x^(-m) / Gamma(1 - beta m)
// Terms whose reciprocal-gamma factor sits on a pole vanish. Stops at the
// smallest term (or n_terms if capped >= 1).
double survival_asymptotic_x(double beta, double x, int n_terms,
                             double* est_abs_error) {
  double sum = 0.0;
  double smallest = std::numeric_limits<double>::infinity();
  double xm = 1.0;
  const int cap = n_terms > 0 ? n_terms : 400;
  for (int m = 1; m <= cap; ++m) {
    xm /= x;
    const double coeff = num::rgamma(1.0 - beta * m);
    const double term = (m % 2 == 1 ? 1.0 : -1.0) * xm * coeff;
    const double mag = std::fabs(term);
    if (n_terms <= 0 && mag != 0.0) {
      if (mag > smallest) break;  // divergent tail reached
      smallest = mag;
    }
    sum += term;
    if (n_terms <= 0 && mag != 0.0 && mag < 1e-18 * std::fabs(sum)) break;
  }
  if (est_abs_error) {
    *est_abs_error = std::isfinite(smallest) ? smallest : xm;
  }
  return sum;
}

}  // namespace

const MlConfig& default_config() {
  static const MlConfig cfg{};
  return cfg;
}

namespace detail {

double ml2_series(double alpha, double gamma, double z, double tol,
                  int max_terms, double* est_abs_error) {
  double sum = 0.0;
  double zn = 1.0;
  double max_mag = 0.0;
  double prev_mag = std::numeric_limits<double>::infinity();
  for (int n = 0; n < max_terms; ++n) {
    const double term = zn * num::rgamma(alpha * n + gamma);
    const double mag = std::fabs(term);
    sum += term;
    max_mag = std::max(max_mag, mag);
    if (n > 0 && mag < tol && mag <= prev_mag) {
      if (est_abs_error) {
        // next-term bound plus the cancellation floor of the partial sums
        *est_abs_error =
            mag + max_mag * std::numeric_limits<double>::epsilon() * 4.0;
      }
      return sum;
    }
    prev_mag = mag;
    zn *= z;
  }
  throw NonConvergent("ml series: stopping rule did not fire");
}

}  // namespace detail

namespace {

double talbot_sum(const LaplaceTransformFn& f, double t, int m) {
  // Abate-Valko fixed-Talbot contour s(theta) = r theta (cot theta + i).
  // r t is capped at 8: past that the e^(rt) node scale turns double
  // rounding into the dominant error, while trapezoid truncation on this
  // contour is already below it for completely monotone transforms.
  const double r = std::min(2.0 * m / 5.0, 8.0) / t;
  double sum = 0.5 * std::exp(r * t) * f(std::complex<double>(r, 0.0)).real();
  for (int k = 1; k < m; ++k) {
    const double theta = k * kPi / m;
    const double cot = std::cos(theta) / std::sin(theta);
    const std::complex<double> s(r * theta * cot, r * theta);
    const double sigma = theta + (theta * cot - 1.0) * cot;
    const std::complex<double> val =
        std::exp(t * s) * f(s) * std::complex<double>(1.0, sigma);
    sum += val.real();
  }
  return sum * r / m;
}

}  // namespace

double laplace_invert(const LaplaceTransformFn& f, double t, int nodes) {
  if (!(t > 0.0)) throw DomainError("laplace_invert: t must be > 0");
  if (nodes < 8) throw DomainError("laplace_invert: need at least 8 nodes");
  const double v = talbot_sum(f, t, nodes);
  if (!std::isfinite(v)) {
    throw InversionUnstable("laplace_invert: non-finite contour sum");
  }
  return v;
}

InversionResult laplace_invert_est(const LaplaceTransformFn& f, double t,
                                   int nodes, double abs_tol) {
  if (!(t > 0.0)) throw DomainError("laplace_invert: t must be > 0");
  if (nodes < 8) throw DomainError("laplace_invert: need at least 8 nodes");

  const double v_full = talbot_sum(f, t, nodes);
  const double v_coarse = talbot_sum(f, t, std::max(8, (3 * nodes) / 4));
  if (!std::isfinite(v_full) || !std::isfinite(v_coarse)) {
    throw InversionUnstable("laplace_invert: non-finite contour sum");
  }
  const double est = std::fabs(v_full - v_coarse);
  if (est > abs_tol) {
    throw InversionUnstable("laplace_invert: error estimate above tolerance");
  }
  return {v_full, est};
}

MlEvalResult ml_series(Order order, double z, double tol) {
  if (!(tol > 0.0)) throw DomainError("ml_series: tol must be > 0");
  if (!(z <= 0.0)) throw DomainError("ml_series: z must be <= 0");
  const MlConfig& cfg = default_config();
  MlEvalResult r;
  r.method_used = Method::series;
  r.value = detail::ml2_series(order.beta(), 1.0, z, tol, cfg.max_terms,
                               &r.est_abs_error);
  return r;
}

double ml_survival_asymptotic(Order order, double t, int n_terms) {
  if (order.beta() == 1.0) {
    throw DomainError("ml_survival_asymptotic: beta=1 has no algebraic tail");
  }
  if (!(t > 0.0)) throw DomainError("ml_survival_asymptotic: t must be > 0");
  if (n_terms < 1) throw DomainError("ml_survival_asymptotic: n_terms >= 1");
  const double x = std::pow(t, order.beta());
  return survival_asymptotic_x(order.beta(), x, n_terms, nullptr);
}

MlEvalResult ml_eval(Order order, double z) {
  return ml_eval(order, z, default_config());
}

MlEvalResult ml_eval(Order order, double z, const MlConfig& cfg) {
  if (std::isnan(z) || z > 0.0) {
    throw DomainError("ml_eval: z must be <= 0 and finite");
  }
  const double beta = order.beta();
  MlEvalResult r;
  if (z == 0.0) {
    r.value = 1.0;
    r.method_used = Method::series;
    r.est_abs_error = 0.0;
    return r;
  }
  if (beta == 1.0) {
    r.value = std::exp(z);
    r.method_used = Method::series;
    r.est_abs_error = 2.0 * std::numeric_limits<double>::epsilon() * r.value;
    return r;
  }
  const double x = -z;
  if (x <= series_z_limit(beta, cfg)) {
    r.method_used = Method::series;
    r.value =
        detail::ml2_series(beta, 1.0, z, 1e-16, cfg.max_terms, &r.est_abs_error);
    return r;
  }
  const double arg = std::pow(x, 1.0 / beta);  // time variable t = x^(1/beta)
  if (arg >= cfg.asymptotic_arg_min) {
    r.method_used = Method::asymptotic;
    r.value = survival_asymptotic_x(beta, x, 0, &r.est_abs_error);
    return r;
  }
  // overlap band: invert Psi~(s) = s^(beta-1) / (1 + s^beta) at t = x^(1/beta)
  const auto psi_hat = [beta](std::complex<double> s) {
    const std::complex<double> sb = std::pow(s, beta);
    return sb / (s * (1.0 + sb));
  };
  const auto inv = laplace_invert_est(psi_hat, arg, cfg.talbot_nodes);
  r.method_used = Method::laplace_inversion;
  r.value = inv.value;
  r.est_abs_error = std::max(inv.est_abs_error, 1e-13);
  return r;
}

double ml_deriv(Order order, int k, double z) {
  return ml_deriv(order, k, z, default_config());
}

double ml_deriv(Order order, int k, double z, const MlConfig& cfg) {
  if (k < 0 || k > cfg.deriv_max_order) {
    throw DomainError("ml_deriv: k outside [0, K_MAX]");
  }
  if (std::isnan(z) || z > 0.0) {
    throw DomainError("ml_deriv: z must be <= 0 and finite");
  }
  if (k == 0) return ml_eval(order, z, cfg).value;
  const double beta = order.beta();
  if (beta == 1.0) return std::exp(z);
  const double x = -z;
  if (x <= series_z_limit(beta, cfg)) {
    // term-wise differentiated series: sum_j (j+k)!/j! z^j / Gamma(beta(j+k)+1)
    double sum = 0.0;
    double zj = 1.0;
    double rising = 1.0;  // (k+j)! / j!
    for (int j = 1; j <= k; ++j) rising *= j;
    double prev_mag = std::numeric_limits<double>::infinity();
    double max_mag = 0.0;
    for (int j = 0; j < cfg.max_terms; ++j) {
      const int n = j + k;
      const double term = rising * zj * num::rgamma(beta * n + 1.0);
      const double mag = std::fabs(term);
      sum += term;
      max_mag = std::max(max_mag, mag);
      if (j > 0 && mag < 1e-16 * max_mag && mag <= prev_mag) return sum;
      prev_mag = mag;
      zj *= z;
      rising *= static_cast<double>(n + 1) / static_cast<double>(j + 1);
    }
    throw NonConvergent("ml_deriv: series stopping rule did not fire");
  }
  // transform route: L{ t^(beta k) E^(k)(-t^beta) } = k! s^(beta-1)/(1+s^beta)^(k+1)
  const double t = std::pow(x, 1.0 / beta);
  const double log_kfact = std::lgamma(static_cast<double>(k) + 1.0);
  const auto fn = [beta, k](std::complex<double> s) {
    const std::complex<double> sb = std::pow(s, beta);
    return sb / (s * std::pow(1.0 + sb, k + 1));
  };
  const double scaled = laplace_invert(fn, t, cfg.talbot_nodes);
  // E^(k)(-x) = k! * scaled / x^k, with the power folded in log space
  const double sign = scaled < 0.0 ? -1.0 : 1.0;
  if (scaled == 0.0) return 0.0;
  return sign * std::exp(std::log(std::fabs(scaled)) + log_kfact -
                         k * std::log(x));
}

double ml_pdf(Order order, double t) { return ml_pdf(order, t, default_config()); }

double ml_pdf(Order order, double t, const MlConfig& cfg) {
  if (!(t > 0.0)) throw DomainError("ml_pdf: t must be > 0");
  const double beta = order.beta();
  if (beta == 1.0) return std::exp(-t);
  const double x = std::pow(t, beta);
  if (x <= series_z_limit(beta, cfg)) {
    // phi(t) = t^(beta-1) sum (-1)^n t^(beta n) / Gamma(beta n + beta)
    double est = 0.0;
    const double s =
        detail::ml2_series(beta, beta, -x, 1e-16, cfg.max_terms, &est);
    return std::pow(t, beta - 1.0) * s;
  }
  if (t >= cfg.asymptotic_arg_min) {
    // -d/dt of the inverse-power survival expansion:
    //   sum_m (-1)^(m-1) beta m t^(-beta m - 1) / Gamma(1 - beta m)
    double sum = 0.0;
    double smallest = std::numeric_limits<double>::infinity();
    for (int m = 1; m <= 400; ++m) {
      const double coeff = num::rgamma(1.0 - beta * m) * beta * m;
      const double term =
          (m % 2 == 1 ? 1.0 : -1.0) * coeff * std::pow(t, -beta * m - 1.0);
      const double mag = std::fabs(term);
      if (mag != 0.0) {
        if (mag > smallest) break;
        smallest = mag;
      }
      sum += term;
      if (mag != 0.0 && mag < 1e-18 * std::fabs(sum)) break;
    }
    return sum;
  }
  const auto phi_hat = [beta](std::complex<double> s) {
    return 1.0 / (1.0 + std::pow(s, beta));
  };
  return laplace_invert(phi_hat, t, cfg.talbot_nodes);
}

}  // namespace fracrenew::ml
