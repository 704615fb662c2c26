#pragma once

#include "ifpt/boundary.hpp"
#include "ifpt/targets.hpp"

#include <span>
#include <vector>

namespace ifpt {

/// Uniformly weighted empirical law; samples are kept sorted.
class EmpiricalDistribution {
public:
    explicit EmpiricalDistribution(std::vector<double> samples);

    std::span<const double> samples() const { return samples_; }
    std::size_t size() const { return samples_.size(); }
    /// F(c) = #{x <= c} / n.
    double cdf(double c) const;

    friend bool operator==(const EmpiricalDistribution&, const EmpiricalDistribution&) = default;

private:
    std::vector<double> samples_;
};

/// Result of an order check. worst_violation <= tolerance iff the order holds.
struct OrderReport {
    bool holds = true;
    double worst_violation = 0.0;
    double witness = 0.0;
    std::size_t violations = 0;
    double tolerance = 0.0;
};

/// q_alpha = inf{c : F(c) >= alpha}, alpha in (0,1].
double quantile(const EmpiricalDistribution& dist, double alpha);

/// T_alpha: the law conditioned on (-inf, q_alpha]. Ties at q_alpha are kept.
EmpiricalDistribution truncate_T_alpha(const EmpiricalDistribution& dist, double alpha);

/// a <=_st b iff F_a(c) >= F_b(c) for all c; scanned over the merged samples.
OrderReport check_usual_order(const EmpiricalDistribution& a, const EmpiricalDistribution& b);

/// a <=_hr b iff S_a / S_b is non-increasing; checked along the grid points.
/// Throws InputError if S_b vanishes on the grid.
OrderReport check_hazard_order(const TargetDistribution& a, const TargetDistribution& b,
                               const TimeGrid& grid);

} // namespace ifpt
