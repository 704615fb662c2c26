#pragma once

#include "ifpt/boundary.hpp"
#include "ifpt/initial.hpp"
#include "ifpt/orders.hpp"
#include "ifpt/processes.hpp"
#include "ifpt/targets.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

namespace ifpt {

/// First-passage times observed on a grid; +inf marks paths that never
/// crossed before the horizon.
struct FptSample {
    std::vector<double> times;
    TimeGrid grid;

    std::size_t n() const { return times.size(); }
    double horizon() const { return grid.horizon(); }
    double censored_fraction() const;
};

/// Simulates n fresh paths and records the first grid time with
/// X_t >= b(t). Streams are keyed exactly as in calibrate, so reusing the
/// calibration seed replays the calibration paths.
FptSample forward_fpt(const ProcessModel& model, const InitialLaw& initial, const BoundaryCurve& boundary,
                      std::size_t n, std::uint64_t seed);

/// Fraction of paths with tau > t_k at each grid point.
std::vector<double> alive_fraction(const FptSample& sample);

/// Rounds raw times up to the next grid point (+inf past the horizon).
FptSample snap_to_grid(std::span<const double> times, const TimeGrid& grid);

/// sup_k |P_n(tau <= t_k) - (1 - S(t_k))| over the sample's grid points.
double ks_statistic(const FptSample& sample, const TargetDistribution& target);

/// Classic one-sample Kolmogorov-Smirnov distance for a continuous CDF.
double ks_one_sample(std::vector<double> samples, const std::function<double(double)>& cdf);

/// b1 <= b2 + slack pointwise in the extended order. Throws InputError on
/// grid mismatch.
OrderReport compare_boundaries(const BoundaryEstimate& b1, const BoundaryEstimate& b2, double slack);
OrderReport compare_boundaries(const BoundaryCurve& b1, const BoundaryCurve& b2, double slack);

/// 2 Phi(-c / sqrt(t)): first-passage CDF of Brownian motion to level c.
double analytic_bm_level_cdf(double c, double t);

/// P(B_s >= c + gamma s for some s <= t).
double analytic_bm_linear_cdf(double c, double gamma, double t);

/// Newline-delimited times, `inf` for censored entries.
void write_fpt(std::ostream& os, const FptSample& sample);

} // namespace ifpt
