#include "ifpt/verify.hpp"

#include "ifpt/calibrate.hpp"
#include "ifpt/error.hpp"
#include "ifpt/special.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace ifpt {

double FptSample::censored_fraction() const {
    if (times.empty()) return 0.0;
    const auto c = std::count_if(times.begin(), times.end(), [](double t) { return std::isinf(t); });
    return static_cast<double>(c) / static_cast<double>(times.size());
}

FptSample forward_fpt(const ProcessModel& model, const InitialLaw& initial, const BoundaryCurve& boundary,
                      std::size_t n, std::uint64_t seed) {
    if (n == 0) throw InputError("verify: at least one path required");
    if (n > 0xFFFFFFFFull) throw InputError("verify: path count exceeds 2^32");
    const TimeGrid& grid = boundary.grid();
    const Stepper stepper(model);

    std::vector<double> pos = initial_positions(model, initial, n, seed);
    std::vector<std::uint32_t> ids(n);
    for (std::size_t i = 0; i < n; ++i) ids[i] = static_cast<std::uint32_t>(i);
    FptSample out{std::vector<double>(n, kInf), grid};

    for (std::size_t k = 0; k < grid.size() && !pos.empty(); ++k) {
        stepper.advance(pos, grid.step_length(k), StreamKeys{seed, k, ids});
        const double b = boundary.value(k);
        std::size_t keep = 0;
        for (std::size_t i = 0; i < pos.size(); ++i) {
            if (pos[i] >= b) {
                out.times[ids[i]] = grid[k];
            } else {
                ids[keep] = ids[i];
                pos[keep] = pos[i];
                ++keep;
            }
        }
        ids.resize(keep);
        pos.resize(keep);
    }
    return out;
}

std::vector<double> alive_fraction(const FptSample& sample) {
    std::vector<double> sorted = sample.times;
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> out(sample.grid.size());
    const double n = static_cast<double>(sorted.size());
    for (std::size_t k = 0; k < out.size(); ++k) {
        const auto crossed = std::upper_bound(sorted.begin(), sorted.end(), sample.grid[k]) - sorted.begin();
        out[k] = 1.0 - static_cast<double>(crossed) / n;
    }
    return out;
}

FptSample snap_to_grid(std::span<const double> times, const TimeGrid& grid) {
    const auto pts = grid.points();
    FptSample out{std::vector<double>(times.size(), kInf), grid};
    for (std::size_t i = 0; i < times.size(); ++i) {
        const auto it = std::lower_bound(pts.begin(), pts.end(), times[i]);
        if (it != pts.end()) out.times[i] = *it;
    }
    return out;
}

double ks_statistic(const FptSample& sample, const TargetDistribution& target) {
    if (sample.times.empty()) throw InputError("ks_statistic: empty sample");
    const auto alive = alive_fraction(sample);
    double worst = 0.0;
    for (std::size_t k = 0; k < alive.size(); ++k)
        worst = std::max(worst, std::abs(alive[k] - survival(target, sample.grid[k])));
    return worst;
}

double ks_one_sample(std::vector<double> samples, const std::function<double(double)>& cdf) {
    if (samples.empty()) throw InputError("ks_one_sample: empty sample");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        worst = std::max({worst, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    return worst;
}

OrderReport compare_boundaries(const BoundaryCurve& b1, const BoundaryCurve& b2, double slack) {
    if (!b1.grid().same_points(b2.grid()))
        throw InputError("compare: boundaries live on different time grids");
    if (!(slack >= 0.0)) throw InputError("compare: slack must be nonnegative");
    OrderReport r;
    r.tolerance = 0.0;
    r.worst_violation = -kInf;
    for (std::size_t k = 0; k < b1.grid().size(); ++k) {
        const double x = b1.value(k);
        const double y = b2.value(k);
        double d;
        if (x == y)
            d = -slack;
        else if (std::isinf(x) || std::isinf(y))
            d = x > y ? kInf : -kInf;
        else
            d = x - y - slack;
        if (d > 0.0) ++r.violations;
        if (d > r.worst_violation) {
            r.worst_violation = d;
            r.witness = b1.grid()[k];
        }
    }
    r.holds = r.violations == 0;
    return r;
}

OrderReport compare_boundaries(const BoundaryEstimate& b1, const BoundaryEstimate& b2, double slack) {
    return compare_boundaries(b1.curve, b2.curve, slack);
}

double analytic_bm_level_cdf(double c, double t) {
    if (!(t > 0.0)) return 0.0;
    return 2.0 * normal_cdf(-c / std::sqrt(t));
}

double analytic_bm_linear_cdf(double c, double gamma, double t) {
    return bm_linear_boundary_cdf(c, gamma, t);
}

void write_fpt(std::ostream& os, const FptSample& sample) {
    for (double t : sample.times) os << format_real(t) << '\n';
}

} // namespace ifpt
