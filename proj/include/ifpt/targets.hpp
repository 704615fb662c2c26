#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace ifpt {

class TargetDistribution;

namespace target {

struct Exponential {
    double rate = 1.0;
};
struct Weibull {
    double shape = 1.0;
    double scale = 1.0;
};
/// First-passage law of standard Brownian motion to the level c:
/// P(xi <= t) = 2 Phi(-c / sqrt(t)).
struct LevyHitting {
    double level = 1.0;
};
/// First-passage law of standard Brownian motion to the line c + drift*t.
/// Defective, with mass 1 - exp(-2 c drift) at +inf, when drift > 0.
struct InverseGaussianHitting {
    double level = 1.0;
    double drift = 0.0;
};
struct PointMass {
    double time = 1.0;
};
struct Mixture {
    std::vector<double> weights;
    std::vector<TargetDistribution> components;
};
struct Empirical {
    std::shared_ptr<const std::vector<double>> sorted; // ascending
};

} // namespace target

/// Law of a strictly positive random time xi, possibly with atoms and
/// possibly defective (positive mass at +inf).
class TargetDistribution {
public:
    using Kind = std::variant<target::Exponential, target::Weibull, target::LevyHitting,
                              target::InverseGaussianHitting, target::PointMass, target::Mixture,
                              target::Empirical>;

    static TargetDistribution exponential(double rate);
    static TargetDistribution weibull(double shape, double scale);
    static TargetDistribution levy_hitting(double level);
    static TargetDistribution inverse_gaussian_hitting(double level, double drift);
    static TargetDistribution point_mass(double time);
    static TargetDistribution mixture(std::vector<double> weights,
                                      std::vector<TargetDistribution> components);
    static TargetDistribution empirical(std::vector<double> samples);

    const Kind& kind() const { return kind_; }

private:
    explicit TargetDistribution(Kind k) : kind_(std::move(k)) {}
    Kind kind_;
};

/// P(xi > t).
double survival(const TargetDistribution& target, double t);
/// P(xi >= t), the left limit of the survival function.
double survival_left(const TargetDistribution& target, double t);
/// Supremum of the support of xi.
double sup_support_time(const TargetDistribution& target);
/// Finite-time atoms as (time, mass), sorted by time.
std::vector<std::pair<double, double>> atoms(const TargetDistribution& target);
/// Mass at +inf, lim_{t->inf} P(xi > t).
double defect_mass(const TargetDistribution& target);

/// n independent draws (deterministic given seed); defective mass yields +inf.
std::vector<double> sample(const TargetDistribution& target, std::size_t n, std::uint64_t seed);

/// Consistency checks; an empty result means the target is valid.
std::vector<std::string> validate(const TargetDistribution& target);

std::string describe(const TargetDistribution& target);

} // namespace ifpt
