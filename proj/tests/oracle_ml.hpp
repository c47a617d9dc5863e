#pragma once

// Independent slow oracles for the test suite only: 50-digit power series for
// the Mittag-Leffler family, plus small quadrature helpers. Deliberately kept
// free of any code path shared with the library implementation.

#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_dec_float.hpp>

#include <cmath>
#include <functional>
#include <stdexcept>

namespace oracle {

using mp = boost::multiprecision::cpp_dec_float_50;

// E_beta^{(k)}(z) by the raw differentiated series at 50 digits.
inline double ml_deriv_mp(double beta_d, int k, double z_d) {
  const mp beta(beta_d);
  const mp z(z_d);
  mp sum = 0;
  mp rising = 1;  // (j+k)!/j!
  for (int j = 1; j <= k; ++j) rising *= j;
  mp zj = 1;
  for (int j = 0; j < 100000; ++j) {
    const int n = j + k;
    const mp term = rising * zj / boost::math::tgamma(beta * n + 1);
    sum += term;
    if (j > 2 && abs(term) < mp("1e-60") * (1 + abs(sum))) {
      return sum.convert_to<double>();
    }
    zj *= z;
    rising *= mp(n + 1) / mp(j + 1);
  }
  throw std::runtime_error("oracle ml series did not converge");
}

inline double ml_mp(double beta, double z) { return ml_deriv_mp(beta, 0, z); }

// waiting-time density phi(t) = t^(beta-1) sum (-1)^n t^(beta n)/Gamma(beta n + beta)
inline double ml_pdf_mp(double beta_d, double t_d) {
  const mp beta(beta_d);
  const mp t(t_d);
  const mp x = pow(t, beta);
  mp sum = 0;
  mp xn = 1;
  for (int n = 0; n < 100000; ++n) {
    const mp term = (n % 2 == 0 ? 1 : -1) * xn /
                    boost::math::tgamma(beta * n + beta);
    sum += term;
    if (n > 2 && abs(term) < mp("1e-60") * (1 + abs(sum))) {
      return (pow(t, beta - 1) * sum).convert_to<double>();
    }
    xn *= x;
  }
  throw std::runtime_error("oracle ml pdf series did not converge");
}

// P(N(t)=k) for the unit-scale ML renewal process, fused series at 50 digits.
inline double ml_pmf_mp(double beta_d, double u_d, int k) {
  if (u_d == 0.0) return k == 0 ? 1.0 : 0.0;
  const mp beta(beta_d);
  const mp x = pow(mp(u_d), beta);
  mp sum = 0;
  mp comb = 1;  // C(n, k) from n = k upward
  mp xn = pow(x, k);
  for (int n = k; n < 200000; ++n) {
    const mp term =
        ((n - k) % 2 == 0 ? 1 : -1) * comb * xn /
        boost::math::tgamma(beta * n + 1);
    sum += term;
    if (n > k + 2 && abs(term) < mp("1e-60")) {
      return sum.convert_to<double>();
    }
    comb *= mp(n + 1) / mp(n + 1 - k);
    xn *= x;
  }
  throw std::runtime_error("oracle ml pmf series did not converge");
}

// adaptive Simpson, test-grade. The first few levels refine unconditionally
// so a localized integrand cannot fool the error estimate into an early stop,
// and the width floor keeps integrand rounding noise from driving unbounded
// refinement.
inline double simpson(const std::function<double(double)>& f, double a,
                      double b, double tol, int depth = 40) {
  const double width_floor = 1e-9 * (std::fabs(b - a) + 1.0);
  const int forced = depth - 6;  // refine unconditionally while d > forced
  const double fa = f(a), fb = f(b), fc = f(0.5 * (a + b));
  const std::function<double(double, double, double, double, double, double,
                             int)>
      rec = [&](double lo, double hi, double flo, double fhi, double fmid,
                double eps, int d) -> double {
    const double mid = 0.5 * (lo + hi);
    const double lmid = 0.5 * (lo + mid), rmid = 0.5 * (mid + hi);
    const double fl = f(lmid), fr = f(rmid);
    const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
    const double left = (mid - lo) / 6.0 * (flo + 4.0 * fl + fmid);
    const double right = (hi - mid) / 6.0 * (fmid + 4.0 * fr + fhi);
    if (d <= 0 || hi - lo < width_floor ||
        (d <= forced && std::fabs(left + right - whole) < 15.0 * eps)) {
      return left + right + (left + right - whole) / 15.0;
    }
    return rec(lo, mid, flo, fmid, fl, eps * 0.5, d - 1) +
           rec(mid, hi, fmid, fhi, fr, eps * 0.5, d - 1);
  };
  return rec(a, b, fa, fb, fc, tol, depth);
}

}  // namespace oracle
