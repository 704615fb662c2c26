#pragma once

namespace ifpt {

/// Standard normal CDF, erfc-based.
double normal_cdf(double x);

/// Standard normal quantile for p in (0,1); returns -inf/+inf at 0/1.
double normal_quantile(double p);

/// P(sup_{s<=t} (B_s - drift*s) >= c) for standard Brownian motion B and c > 0.
double bm_linear_boundary_cdf(double c, double drift, double t);

/// Number of Poisson(mean) events driven by a uniform stream.
template <class Stream>
long poisson_count(double mean, Stream& stream);

} // namespace ifpt

#include <cmath>

namespace ifpt {

template <class Stream>
long poisson_count(double mean, Stream& stream) {
    // Inversion in chunks keeps exp(-mean) away from underflow.
    constexpr double kChunk = 30.0;
    long total = 0;
    while (mean > 0.0) {
        const double m = mean > kChunk ? kChunk : mean;
        mean -= m;
        double p = std::exp(-m);
        double cdf = p;
        const double u = stream.uniform();
        long k = 0;
        while (u > cdf && k < 1000) {
            ++k;
            p *= m / static_cast<double>(k);
            cdf += p;
            if (p == 0.0) break;
        }
        total += k;
    }
    return total;
}

} // namespace ifpt
