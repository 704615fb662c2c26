#pragma once

#include "ifpt/error.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <limits>
#include <string>

namespace ifpt::quad {

struct Result {
    double value = 0.0;
    double error = 0.0;
};

namespace detail {
inline void check(const Result& r, double tol, const char* what) {
    const double budget = tol * std::max(1.0, std::abs(r.value));
    if (!std::isfinite(r.value) || r.error > budget) {
        throw ModelError(std::string("quadrature did not converge (") + what +
                         "): value " + std::to_string(r.value) + ", residual estimate " +
                         std::to_string(r.error));
    }
}
} // namespace detail

/// Integral over a finite interval; tolerates integrable endpoint singularities.
template <class F>
Result finite(F&& f, double a, double b, double rel_tol = 1e-10) {
    if (a == b) return {};
    boost::math::quadrature::tanh_sinh<double> integrator;
    Result r;
    r.value = integrator.integrate(f, a, b, rel_tol, &r.error);
    detail::check(r, std::max(rel_tol, 1e-14) * 100.0, "finite interval");
    return r;
}

/// Integral over [a, +inf).
template <class F>
Result to_infinity(F&& f, double a, double rel_tol = 1e-10) {
    boost::math::quadrature::exp_sinh<double> integrator;
    Result r;
    r.value = integrator.integrate(f, a, std::numeric_limits<double>::infinity(), rel_tol,
                                   &r.error);
    detail::check(r, std::max(rel_tol, 1e-14) * 100.0, "half line");
    return r;
}

/// Adaptive Gauss-Kronrod (7/15) for smooth integrands. The tolerance is
/// absolute for integrals below 1 in magnitude, relative above.
template <class F>
Result smooth(F&& f, double a, double b, double abs_tol = 1e-10) {
    if (a == b) return {};
    Result r;
    r.value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        f, a, b, 15, abs_tol, &r.error);
    if (!std::isfinite(r.value) || r.error > abs_tol * std::max(1.0, std::abs(r.value))) {
        throw ModelError("adaptive Gauss-Kronrod did not converge: residual estimate " +
                         std::to_string(r.error));
    }
    return r;
}

} // namespace ifpt::quad
