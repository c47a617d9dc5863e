#pragma once

#include <complex>
#include <functional>

namespace fracrenew::num {

// Adaptive Gauss-Kronrod 7-15 on [a, b].
// Throws QuadratureFailure if the tolerance cannot be met within max_depth
// levels of bisection.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-10, int max_depth = 60);

std::complex<double> integrate_complex(
    const std::function<std::complex<double>(double)>& f, double a, double b,
    double abs_tol = 1e-10, int max_depth = 60);

// Integral over [a, infinity) of a function with (at least) exponential or
// integrable algebraic decay: panels [a, a+w], [a+w, a+2w], ... of doubling
// width until a panel contributes less than abs_tol/4.
double integrate_to_inf(const std::function<double(double)>& f, double a,
                        double initial_width = 1.0, double abs_tol = 1e-10,
                        int max_panels = 200);

}  // namespace fracrenew::num
