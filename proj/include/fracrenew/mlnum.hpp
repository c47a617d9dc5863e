#pragma once

#include <complex>
#include <functional>
#include <limits>

#include "fracrenew/errors.hpp"

namespace fracrenew::ml {

// Fractional order beta in (0, 1].
class Order {
 public:
  explicit Order(double beta) : beta_(beta) {
    if (!(beta > 0.0 && beta <= 1.0)) {
      throw DomainError("Order: beta must lie in (0, 1]");
    }
  }
  double beta() const { return beta_; }

 private:
  double beta_;
};

enum class Method { series, asymptotic, laplace_inversion };

struct MlEvalResult {
  double value = 0.0;
  Method method_used = Method::series;
  double est_abs_error = 0.0;
};

// Region thresholds and inversion settings; compile-time defaults, overridable.
struct MlConfig {
  // power series used while |z| <= min(series_abs_z_max, series_arg_cap^beta)
  double series_abs_z_max = 5.0;
  // cancellation guard: max term of the alternating series is ~e^(|z|^(1/beta)),
  // so capping the exponent at 8 keeps series rounding below ~1e-12 absolute
  double series_arg_cap = 8.0;
  // asymptotic expansion once |z| >= asymptotic_arg_min^beta (i.e. t >= 50)
  double asymptotic_arg_min = 50.0;
  int talbot_nodes = 48;
  int max_terms = 100000;
  int deriv_max_order = 64;  // K_MAX for ml_deriv
};

const MlConfig& default_config();

// Laplace transform as a function of (complex) s; the Talbot contour lives in
// the right half-plane off the negative real axis, so principal-branch powers
// are safe. Real s > 0 is the special case used for tail checks.
using LaplaceTransformFn =
    std::function<std::complex<double>(std::complex<double>)>;

// Fixed-Talbot numerical inversion evaluated at t > 0.
// Throws InversionUnstable on non-finite node values or when the heuristic
// error estimate exceeds abs_tol.
double laplace_invert(const LaplaceTransformFn& f, double t, int nodes = 48);
struct InversionResult {
  double value;
  double est_abs_error;  // heuristic: node-count sensitivity
};
InversionResult laplace_invert_est(
    const LaplaceTransformFn& f, double t, int nodes = 48,
    double abs_tol = std::numeric_limits<double>::infinity());

// Power series for E_beta(z), z <= 0, truncated when |term| < tol while
// decreasing; throws NonConvergent past max_terms.
MlEvalResult ml_series(Order order, double z, double tol);

// n_terms of the inverse-power expansion of E_beta(-t^beta) for t -> inf;
// the m-th term is (-1)^(m-1) t^(-beta m) / Gamma(1 - beta m).
// Rejects beta = 1 (no algebraic tail) and t <= 0.
double ml_survival_asymptotic(Order order, double t, int n_terms);

// E_beta(z) on the closed negative half-line, dispatching series /
// Talbot inversion / asymptotics by |z| region.
MlEvalResult ml_eval(Order order, double z);
MlEvalResult ml_eval(Order order, double z, const MlConfig& cfg);

// k-th derivative of E_beta at z <= 0, k <= cfg.deriv_max_order.
double ml_deriv(Order order, int k, double z);
double ml_deriv(Order order, int k, double z, const MlConfig& cfg);

// Mittag-Leffler waiting-time density phi(t) = -d/dt E_beta(-t^beta), t > 0.
double ml_pdf(Order order, double t);
double ml_pdf(Order order, double t, const MlConfig& cfg);

namespace detail {
// Two-parameter series sum_{n>=0} z^n / Gamma(alpha n + gamma), internal only.
double ml2_series(double alpha, double gamma, double z, double tol,
                  int max_terms, double* est_abs_error);
}  // namespace detail

}  // namespace fracrenew::ml
