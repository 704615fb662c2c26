#include "ifpt/special.hpp"

#include <boost/math/special_functions/erf.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace ifpt {

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double normal_quantile(double p) {
    if (p <= 0.0) return -std::numeric_limits<double>::infinity();
    if (p >= 1.0) return std::numeric_limits<double>::infinity();
    return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

double bm_linear_boundary_cdf(double c, double drift, double t) {
    if (!(t > 0.0)) return 0.0;
    const double st = std::sqrt(t);
    const double direct = normal_cdf((-c - drift * t) / st);
    const double phi = normal_cdf((drift * t - c) / st);
    // exp(-2 drift c) * phi, in logs to survive large negative drifts
    const double reflected = phi > 0.0 ? std::exp(-2.0 * drift * c + std::log(phi)) : 0.0;
    return std::min(1.0, std::max(0.0, direct + reflected));
}

} // namespace ifpt
