#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ifpt {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Strictly increasing, strictly positive time points. The origin is never
/// part of a grid; the process starts at t = 0 from its initial law.
///
/// Arithmetic grids (t_start + k*dt) resolve queries by index arithmetic;
/// explicit grids match within relative tolerance 1e-12.
class TimeGrid {
public:
    static TimeGrid arithmetic(double t_start, double dt, std::size_t count);
    static TimeGrid explicit_points(std::vector<double> points);

    std::size_t size() const { return points_.size(); }
    double operator[](std::size_t k) const { return points_[k]; }
    std::span<const double> points() const { return points_; }
    double horizon() const { return points_.back(); }

    bool is_arithmetic() const { return arithmetic_.has_value(); }
    double t_start() const { return points_.front(); }
    /// Spacing of an arithmetic grid (NaN for explicit grids).
    double dt() const;

    /// Index of the grid point matching t, if any.
    std::optional<std::size_t> index_of(double t) const;

    /// Length of the step ending at grid index k (the first step starts at 0).
    double step_length(std::size_t k) const { return k == 0 ? points_[0] : points_[k] - points_[k - 1]; }

    /// Dyadic refinement of an arithmetic grid covering (t_start - dt, horizon].
    TimeGrid refined(unsigned levels) const;

    bool same_points(const TimeGrid& other) const;

private:
    struct Arith {
        double t_start;
        double dt;
    };
    TimeGrid() = default;
    std::vector<double> points_;
    std::optional<Arith> arithmetic_;
};

/// Extended-real curve on a grid; every off-grid time evaluates to
/// off_grid_value (the domain maximum R), which makes the represented
/// function lower semicontinuous.
class BoundaryCurve {
public:
    BoundaryCurve(TimeGrid grid, std::vector<double> values, double lower = -kInf,
                  double upper = kInf);

    const TimeGrid& grid() const { return grid_; }
    std::span<const double> values() const { return values_; }
    double value(std::size_t k) const { return values_[k]; }
    double off_grid_value() const { return upper_; }
    double lower() const { return lower_; }
    double upper() const { return upper_; }

    friend bool operator==(const BoundaryCurve& a, const BoundaryCurve& b);

private:
    TimeGrid grid_;
    std::vector<double> values_;
    double lower_;
    double upper_;
};

double eval(const BoundaryCurve& curve, double t);

/// b|_s: the curve unchanged at grid points >= s and R before s.
BoundaryCurve restrict_after(const BoundaryCurve& curve, double s);

/// b + eps on finite values; infinities are absorbing.
BoundaryCurve shift_up(const BoundaryCurve& curve, double eps);

/// Hausdorff distance between lattice samplings of the two epigraphs on the
/// compactified square, with time mapped by t/(1+t) and space by x/(1+|x|).
double epigraph_hausdorff(const BoundaryCurve& a, const BoundaryCurve& b, int resolution = 128);

/// Time and space compactification maps onto [0,1].
double compact_time(double t);
double compact_space(double x);

/// A calibrated boundary together with the survival it was built to match.
struct BoundaryEstimate {
    BoundaryCurve curve;
    std::vector<double> survival_target;
    std::vector<double> survival_achieved;
    std::size_t particles = 0;
    std::uint64_t seed = 0;

    // Diagnostics
    std::vector<std::size_t> tie_shortfall;  // per grid index
    std::vector<double> level_stderr;        // per grid index (NaN where undefined)
    std::uint64_t rejected_steps = 0;        // interval-diffusion step rejections
};

/// Formats a double with 17 significant digits; infinities print as inf/-inf.
std::string format_real(double x);
/// Parses a real, accepting inf/-inf/+inf.
double parse_real(const std::string& text);

/// CSV `t,b`.
void write_boundary_csv(std::ostream& os, const BoundaryCurve& curve);
/// CSV `t,b,S_target,S_achieved`.
void write_estimate_csv(std::ostream& os, const BoundaryEstimate& est);

/// Parsed boundary CSV (either layout). Survival columns are empty for `t,b`.
struct BoundaryTable {
    std::vector<double> t;
    std::vector<double> b;
    std::vector<double> survival_target;
    std::vector<double> survival_achieved;
};
/// Throws InputError with a line number on malformed input.
BoundaryTable read_boundary_csv(std::istream& is);

} // namespace ifpt
