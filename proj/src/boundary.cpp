#include "ifpt/boundary.hpp"

#include "ifpt/error.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

namespace ifpt {

// ---------------------------------------------------------------- TimeGrid

TimeGrid TimeGrid::arithmetic(double t_start, double dt, std::size_t count) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw InputError("grid: dt must be positive and finite");
    if (!(t_start > 0.0) || !std::isfinite(t_start))
        throw InputError("grid: t_start must be positive (grids exclude 0)");
    if (count == 0) throw InputError("grid: at least one point required");
    TimeGrid g;
    g.points_.resize(count);
    for (std::size_t k = 0; k < count; ++k) g.points_[k] = t_start + static_cast<double>(k) * dt;
    g.arithmetic_ = Arith{t_start, dt};
    return g;
}

TimeGrid TimeGrid::explicit_points(std::vector<double> points) {
    if (points.empty()) throw InputError("grid: at least one point required");
    for (std::size_t k = 0; k < points.size(); ++k) {
        if (!(points[k] > 0.0) || !std::isfinite(points[k]))
            throw InputError("grid: points must be positive and finite");
        if (k > 0 && !(points[k] > points[k - 1]))
            throw InputError("grid: points must be strictly increasing");
    }
    TimeGrid g;
    g.points_ = std::move(points);
    return g;
}

double TimeGrid::dt() const {
    return arithmetic_ ? arithmetic_->dt : std::numeric_limits<double>::quiet_NaN();
}

std::optional<std::size_t> TimeGrid::index_of(double t) const {
    if (arithmetic_) {
        const double x = (t - arithmetic_->t_start) / arithmetic_->dt;
        const double k = std::round(x);
        if (k < 0.0 || k >= static_cast<double>(points_.size()) || std::abs(x - k) > 1e-9)
            return std::nullopt;
        return static_cast<std::size_t>(k);
    }
    auto it = std::lower_bound(points_.begin(), points_.end(), t * (1.0 - 1e-12));
    if (it != points_.end() && std::abs(*it - t) <= 1e-12 * std::abs(t))
        return static_cast<std::size_t>(it - points_.begin());
    return std::nullopt;
}

TimeGrid TimeGrid::refined(unsigned levels) const {
    if (!arithmetic_) throw InputError("grid: only arithmetic grids can be refined");
    const double factor = std::ldexp(1.0, static_cast<int>(levels));
    const double dt_fine = arithmetic_->dt / factor;
    const double start = arithmetic_->t_start - arithmetic_->dt + dt_fine;
    return arithmetic(start, dt_fine, points_.size() << levels);
}

bool TimeGrid::same_points(const TimeGrid& other) const {
    if (size() != other.size()) return false;
    for (std::size_t k = 0; k < size(); ++k) {
        const double a = points_[k];
        const double b = other.points_[k];
        if (std::abs(a - b) > 1e-12 * std::max(std::abs(a), std::abs(b))) return false;
    }
    return true;
}

// ----------------------------------------------------------- BoundaryCurve

BoundaryCurve::BoundaryCurve(TimeGrid grid, std::vector<double> values, double lower, double upper)
    : grid_(std::move(grid)), values_(std::move(values)), lower_(lower), upper_(upper) {
    if (!(lower_ < upper_)) throw InputError("boundary: domain requires L < R");
    if (values_.size() != grid_.size())
        throw InputError("boundary: values length must equal grid length");
    for (double v : values_) {
        if (std::isnan(v) || v < lower_ || v > upper_)
            throw InputError("boundary: value outside the closed domain [L,R]");
    }
}

bool operator==(const BoundaryCurve& a, const BoundaryCurve& b) {
    return a.grid_.same_points(b.grid_) && a.values_ == b.values_ && a.lower_ == b.lower_ &&
           a.upper_ == b.upper_;
}

double eval(const BoundaryCurve& curve, double t) {
    if (auto k = curve.grid().index_of(t)) return curve.value(*k);
    return curve.off_grid_value();
}

BoundaryCurve restrict_after(const BoundaryCurve& curve, double s) {
    std::vector<double> values(curve.values().begin(), curve.values().end());
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (curve.grid()[k] < s) values[k] = curve.upper();
    }
    return BoundaryCurve(curve.grid(), std::move(values), curve.lower(), curve.upper());
}

BoundaryCurve shift_up(const BoundaryCurve& curve, double eps) {
    if (!(eps > 0.0)) throw InputError("shift_up: eps must be positive");
    std::vector<double> values(curve.values().begin(), curve.values().end());
    for (double& v : values) {
        if (std::isfinite(v)) v = std::min(v + eps, curve.upper());
    }
    return BoundaryCurve(curve.grid(), std::move(values), curve.lower(), curve.upper());
}

// ------------------------------------------------------ Hausdorff distance

double compact_time(double t) {
    if (std::isinf(t)) return 1.0;
    return t / (1.0 + t);
}

double compact_space(double x) {
    if (std::isinf(x)) return x > 0 ? 1.0 : 0.0;
    return 0.5 * (x / (1.0 + std::abs(x)) + 1.0);
}

namespace {

// Lowest lattice row of the epigraph in each lattice column. Off-grid times
// carry the value R, so every column contains at least the top row (for
// E = R the compactified top edge).
std::vector<int> epigraph_floor(const BoundaryCurve& curve, int res) {
    const int top = res - 1;
    const int off_grid_row =
        std::clamp(static_cast<int>(std::ceil(compact_space(curve.upper()) * top - 1e-9)), 0, top);
    std::vector<int> floor(static_cast<std::size_t>(res), off_grid_row);
    for (std::size_t k = 0; k < curve.grid().size(); ++k) {
        const int col = static_cast<int>(std::lround(compact_time(curve.grid()[k]) * top));
        const int row =
            std::clamp(static_cast<int>(std::ceil(compact_space(curve.value(k)) * top - 1e-9)), 0, top);
        floor[static_cast<std::size_t>(col)] = std::min(floor[static_cast<std::size_t>(col)], row);
    }
    return floor;
}

// sup over lattice points of A of the distance to B. Within one column the
// lowest point of A is the farthest from B because every column of B extends
// up to the top row.
double directed(const std::vector<int>& a, const std::vector<int>& b, int res) {
    const double h = 1.0 / (res - 1);
    double worst = 0.0;
    for (int i = 0; i < res; ++i) {
        double best = kInf;
        for (int k = 0; k < res; ++k) {
            const double du = (i - k) * h;
            const double dv = std::max(0, b[static_cast<std::size_t>(k)] - a[static_cast<std::size_t>(i)]) * h;
            best = std::min(best, du * du + dv * dv);
        }
        worst = std::max(worst, best);
    }
    return std::sqrt(worst);
}

} // namespace

double epigraph_hausdorff(const BoundaryCurve& a, const BoundaryCurve& b, int resolution) {
    if (resolution < 2) throw InputError("epigraph_hausdorff: resolution must be >= 2");
    const auto fa = epigraph_floor(a, resolution);
    const auto fb = epigraph_floor(b, resolution);
    return std::max(directed(fa, fb, resolution), directed(fb, fa, resolution));
}

// ---------------------------------------------------------------- CSV I/O

std::string format_real(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

double parse_real(const std::string& text) {
    std::string s = text;
    s.erase(0, s.find_first_not_of(" \t\r"));
    s.erase(s.find_last_not_of(" \t\r") + 1);
    if (s == "inf" || s == "+inf") return kInf;
    if (s == "-inf") return -kInf;
    if (s.empty()) throw InputError("empty numeric field");
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || errno == ERANGE || std::isnan(v) || std::isinf(v))
        throw InputError("not a number: '" + s + "'");
    return v;
}

void write_boundary_csv(std::ostream& os, const BoundaryCurve& curve) {
    os << "t,b\n";
    for (std::size_t k = 0; k < curve.grid().size(); ++k)
        os << format_real(curve.grid()[k]) << ',' << format_real(curve.value(k)) << '\n';
}

void write_estimate_csv(std::ostream& os, const BoundaryEstimate& est) {
    os << "t,b,S_target,S_achieved\n";
    const auto& c = est.curve;
    for (std::size_t k = 0; k < c.grid().size(); ++k) {
        os << format_real(c.grid()[k]) << ',' << format_real(c.value(k)) << ','
           << format_real(est.survival_target[k]) << ',' << format_real(est.survival_achieved[k])
           << '\n';
    }
}

BoundaryTable read_boundary_csv(std::istream& is) {
    BoundaryTable table;
    std::string line;
    std::size_t lineno = 0;
    std::size_t columns = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        for (std::string f; std::getline(ss, f, ',');) {
            f.erase(0, f.find_first_not_of(" \t"));
            f.erase(f.find_last_not_of(" \t") + 1);
            fields.push_back(f);
        }
        if (columns == 0) {
            if (fields == std::vector<std::string>{"t", "b"}) {
                columns = 2;
            } else if (fields == std::vector<std::string>{"t", "b", "S_target", "S_achieved"}) {
                columns = 4;
            } else {
                throw InputError("boundary CSV line " + std::to_string(lineno) +
                                 ": expected header 't,b' or 't,b,S_target,S_achieved'");
            }
            continue;
        }
        if (fields.size() != columns)
            throw InputError("boundary CSV line " + std::to_string(lineno) + ": expected " +
                             std::to_string(columns) + " fields, got " +
                             std::to_string(fields.size()));
        try {
            const double t = parse_real(fields[0]);
            if (!std::isfinite(t) || t <= 0.0) throw InputError("t must be finite and positive");
            if (!table.t.empty() && t <= table.t.back()) throw InputError("t must be strictly increasing");
            table.t.push_back(t);
            table.b.push_back(parse_real(fields[1]));
            if (columns == 4) {
                table.survival_target.push_back(parse_real(fields[2]));
                table.survival_achieved.push_back(parse_real(fields[3]));
            }
        } catch (const InputError& e) {
            throw InputError("boundary CSV line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    if (columns == 0) throw InputError("boundary CSV: missing header");
    if (table.t.empty()) throw InputError("boundary CSV: no data rows");
    return table;
}

} // namespace ifpt
