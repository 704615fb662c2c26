#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace ifpt {

namespace init {
struct Point {
    double x = 0.0;
};
struct Uniform {
    double a = 0.0;
    double b = 1.0;
};
struct Normal {
    double mean = 0.0;
    double sd = 1.0;
};
struct Empirical {
    std::shared_ptr<const std::vector<double>> sorted;
};
} // namespace init

/// Initial law mu of the process, sampled by inverse CDF from one uniform per
/// particle so that two laws driven by the same seed are coupled monotonically.
class InitialLaw {
public:
    using Kind = std::variant<init::Point, init::Uniform, init::Normal, init::Empirical>;

    static InitialLaw point(double x);
    static InitialLaw uniform(double a, double b);
    static InitialLaw normal(double mean, double sd);
    static InitialLaw empirical(std::vector<double> samples);

    /// Generalized inverse CDF at u in (0,1).
    double quantile(double u) const;

    /// One draw per particle id, keyed by (seed, id).
    std::vector<double> sample(std::size_t n, std::uint64_t seed) const;

    bool is_point() const { return std::holds_alternative<init::Point>(kind_); }
    const Kind& kind() const { return kind_; }
    std::string describe() const;

private:
    explicit InitialLaw(Kind k) : kind_(std::move(k)) {}
    Kind kind_;
};

} // namespace ifpt
