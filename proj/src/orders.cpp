#include "ifpt/orders.hpp"

#include "ifpt/error.hpp"

#include <algorithm>
#include <cmath>

namespace ifpt {

namespace {
constexpr double kUsualTolerance = 1e-12;
constexpr double kHazardTolerance = 1e-12;
} // namespace

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> samples)
    : samples_(std::move(samples)) {
    if (samples_.empty()) throw InputError("empirical distribution needs at least one sample");
    for (double x : samples_)
        if (std::isnan(x)) throw InputError("empirical distribution: NaN sample");
    std::sort(samples_.begin(), samples_.end());
}

double EmpiricalDistribution::cdf(double c) const {
    const auto below = std::upper_bound(samples_.begin(), samples_.end(), c) - samples_.begin();
    return static_cast<double>(below) / static_cast<double>(samples_.size());
}

double quantile(const EmpiricalDistribution& dist, double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw InputError("quantile: alpha must lie in (0,1]");
    const std::size_t n = dist.size();
    const double nd = static_cast<double>(n);
    // Smallest rank k with k/n >= alpha, decided in the same arithmetic as the CDF.
    auto k = static_cast<std::size_t>(std::clamp(std::ceil(alpha * nd), 1.0, nd));
    while (k > 1 && static_cast<double>(k - 1) / nd >= alpha) --k;
    while (k < n && static_cast<double>(k) / nd < alpha) ++k;
    return dist.samples()[k - 1];
}

EmpiricalDistribution truncate_T_alpha(const EmpiricalDistribution& dist, double alpha) {
    const double q = quantile(dist, alpha);
    const auto s = dist.samples();
    const auto end = std::upper_bound(s.begin(), s.end(), q);
    return EmpiricalDistribution(std::vector<double>(s.begin(), end));
}

OrderReport check_usual_order(const EmpiricalDistribution& a, const EmpiricalDistribution& b) {
    OrderReport r;
    r.tolerance = kUsualTolerance;
    r.worst_violation = -kInf;
    const auto sa = a.samples();
    const auto sb = b.samples();
    const double na = static_cast<double>(sa.size());
    const double nb = static_cast<double>(sb.size());
    // Merge walk: at every jump point c, compare F_b(c) - F_a(c).
    std::size_t i = 0, j = 0;
    while (i < sa.size() || j < sb.size()) {
        double c;
        if (j >= sb.size() || (i < sa.size() && sa[i] <= sb[j])) c = sa[i];
        else c = sb[j];
        while (i < sa.size() && sa[i] <= c) ++i;
        while (j < sb.size() && sb[j] <= c) ++j;
        const double gap = static_cast<double>(j) / nb - static_cast<double>(i) / na;
        if (gap > r.worst_violation) {
            r.worst_violation = gap;
            r.witness = c;
        }
        if (gap > r.tolerance) ++r.violations;
    }
    r.holds = r.worst_violation <= r.tolerance;
    return r;
}

OrderReport check_hazard_order(const TargetDistribution& a, const TargetDistribution& b,
                               const TimeGrid& grid) {
    OrderReport r;
    r.tolerance = kHazardTolerance;
    r.worst_violation = -kInf;
    double prev = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double sb = survival(b, grid[k]);
        if (!(sb > 0.0))
            throw InputError("hazard order: survival of the larger law vanishes at t=" +
                             format_real(grid[k]) + " (grid exceeds its support)");
        const double ratio = survival(a, grid[k]) / sb;
        if (k > 0) {
            const double increase = ratio - prev;
            if (increase > r.worst_violation) {
                r.worst_violation = increase;
                r.witness = grid[k];
            }
            if (increase > r.tolerance) ++r.violations;
        }
        prev = ratio;
    }
    if (grid.size() < 2) r.worst_violation = 0.0;
    r.holds = r.worst_violation <= r.tolerance;
    return r;
}

} // namespace ifpt
