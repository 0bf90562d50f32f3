#pragma once

// Thin wrappers over Boost.Math adaptive quadrature that enforce an absolute
// error budget and turn a missed budget into integration_error.

#include <cmath>
#include <limits>
#include <string>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "csitlab/core.hpp"

namespace csitlab::quadrature {

inline constexpr double kDefaultAbsTol = 1e-9;

namespace detail {

inline double checked(double value, double error, double abs_tol, const char* what) {
    if (!std::isfinite(value) || !(error <= abs_tol)) {
        throw integration_error(std::string(what) + ": estimated error " + std::to_string(error) +
                                " exceeds tolerance " + std::to_string(abs_tol));
    }
    return value;
}

}  // namespace detail

/// Adaptive Gauss-Kronrod (31 points) on [a, b]; either bound may be infinite.
template <class F>
double integrate(F&& f, double a, double b, double abs_tol = kDefaultAbsTol) {
    double error = 0.0;
    const double value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        f, a, b, 15, 1e-11, &error);
    return detail::checked(value, error, abs_tol, "gauss_kronrod");
}

/// Tanh-sinh on finite [a, b]; tolerates integrable endpoint singularities.
template <class F>
double integrate_singular(F&& f, double a, double b, double abs_tol = kDefaultAbsTol) {
    thread_local boost::math::quadrature::tanh_sinh<double> integrator;
    double error = 0.0;
    double l1 = 0.0;
    const double value = integrator.integrate(f, a, b, 1e-12, &error, &l1);
    return detail::checked(value, error, abs_tol, "tanh_sinh");
}

/// Exp-sinh on [a, +inf); suited to exponentially decaying integrands.
template <class F>
double integrate_to_infinity(F&& f, double a, double abs_tol = kDefaultAbsTol) {
    thread_local boost::math::quadrature::exp_sinh<double> integrator;
    double error = 0.0;
    double l1 = 0.0;
    const double value = integrator.integrate(f, a, std::numeric_limits<double>::infinity(),
                                              1e-12, &error, &l1);
    return detail::checked(value, error, abs_tol, "exp_sinh");
}

}  // namespace csitlab::quadrature
