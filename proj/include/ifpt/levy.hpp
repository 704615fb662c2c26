#pragma once

#include <complex>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace ifpt {

namespace levy {

enum class Side { positive, negative };

/// Point masses of the Levy measure: (jump size x != 0, rate).
struct FiniteAtoms {
    std::vector<std::pair<double, double>> atoms;
};

/// Density c * exp(-lambda |x|) / |x|^(1+alpha) on one half-line.
struct OneSidedStable {
    Side side = Side::positive;
    double alpha = 0.5;
    double intensity = 1.0;
    double tempering = 0.0;
};

/// Density shape * exp(-rate |x|) / |x| on one half-line (Gamma subordinator).
struct GammaMeasure {
    Side side = Side::positive;
    double shape = 1.0;
    double rate = 1.0;
};

using Component = std::variant<FiniteAtoms, OneSidedStable, GammaMeasure>;

} // namespace levy

struct LevyMeasureSpec {
    std::vector<levy::Component> components;
};

/// Characteristic triple (a, sigma^2, Pi) with the sign convention
///   -log E exp(i theta X_1) = i theta a + sigma^2 theta^2 / 2
///                             + int (1 - e^{i theta x} + i theta x 1_{|x|<1}) Pi(dx),
/// so a positive `a` produces a negative drift.
struct LevyTriple {
    double a = 0.0;
    double sigma2 = 0.0;
    LevyMeasureSpec measure;
};

/// Throws InputError when a component violates its parameter ranges.
void validate_measure(const LevyMeasureSpec& measure);

/// Characteristic exponent psi(theta) so that E exp(i theta X_t) = exp(-t psi(theta)).
std::complex<double> levy_char_exponent(const LevyTriple& triple, double theta);

struct SmallJumpStats {
    double rate_ge_eta = 0.0;     // Pi({|x| >= eta})
    double mean_truncated = 0.0;  // int_{eta <= |x| < 1} x Pi(dx)
    double variance_lt_eta = 0.0; // int_{|x| < eta} x^2 Pi(dx)
};

SmallJumpStats small_jump_stats(const LevyMeasureSpec& measure, double eta);

enum class Uniqueness { full_interval, support_only, unknown };

struct LevyClassification {
    bool existence_diffuse = false;
    bool unbounded_variation = false;
    bool zero_in_supp = false;
    bool pos_mass = false;
    bool neg_mass = false;
    bool infinite_activity = false;
    Uniqueness uniqueness = Uniqueness::unknown;
    std::string i_xi_description;
};

LevyClassification classify_levy(const LevyTriple& triple);

std::string to_string(Uniqueness u);

} // namespace ifpt
