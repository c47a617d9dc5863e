#pragma once

#include <cmath>

namespace fracrenew::num {

// 1/Gamma(x). Entire on the real line: returns 0 at the poles of Gamma
// (x = 0, -1, -2, ...) and underflows to 0 for large positive x instead of
// tripping the tgamma overflow.
double rgamma(double x);

// Upper incomplete gamma Gamma(a, x) for a in (0, 1], x >= 0.
// Series for small x, Lentz continued fraction otherwise.
double upper_gamma(double a, double x);

// Continued-fraction factor h with Gamma(a, x) = e^-x x^a h, valid for
// x >= a + 1. Lets callers fold away e^x factors that would overflow.
double upper_gamma_cf_factor(double a, double x);

// log Gamma wrapper (std::lgamma; the signgam global is ignored).
inline double lgamma_pos(double x) { return std::lgamma(x); }

}  // namespace fracrenew::num
