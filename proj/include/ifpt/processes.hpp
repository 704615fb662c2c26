#pragma once

#include "ifpt/boundary.hpp"
#include "ifpt/levy.hpp"
#include "ifpt/rng.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace ifpt {

namespace coef {
struct Constant {
    double value = 1.0;
};
/// a + b x
struct Linear {
    double a = 0.0;
    double b = 0.0;
};
/// -theta x
struct Ou {
    double theta = 1.0;
};
/// (delta - 1) / (2 x)
struct BesselDrift {
    double delta = 2.0;
};
/// coeff * x^p
struct Power {
    double p = 1.0;
    double coeff = 1.0;
};
} // namespace coef

/// Named coefficient function for drift and diffusion terms.
class Coefficient {
public:
    using Kind = std::variant<coef::Constant, coef::Linear, coef::Ou, coef::BesselDrift, coef::Power>;

    Coefficient() = default;
    Coefficient(Kind kind) : kind_(kind) {}

    double operator()(double x) const;
    const Kind& kind() const { return kind_; }
    std::string describe() const;

private:
    Kind kind_ = coef::Constant{0.0};
};

namespace model {

/// X_t = x0 + mu t + vol B_t.
struct BrownianDrift {
    double mu = 0.0;
    double vol = 1.0;
};

enum class SmallJumpMode { discard, gaussian };

/// Levy process simulated by its Levy-Ito split at the threshold eta.
struct Levy {
    LevyTriple triple;
    SmallJumpMode small_jumps = SmallJumpMode::gaussian;
    double eta = 1e-2;
};

enum class LowerBoundary { unattainable, reflecting };

/// dX = beta(X) dt + sigma(X) dB on (L, R), Euler-Maruyama with substeps.
struct IntervalDiffusion {
    Coefficient beta;
    Coefficient sigma{coef::Constant{1.0}};
    double lower = -kInf;
    double upper = kInf;
    LowerBoundary lower_behavior = LowerBoundary::unattainable;
    int substeps = 1;
};

} // namespace model

using ProcessModel = std::variant<model::BrownianDrift, model::Levy, model::IntervalDiffusion>;

/// Throws InputError for invalid parameters.
void validate_model(const ProcessModel& m);

/// Closure [L, R] of the state space.
std::pair<double, double> state_bounds(const ProcessModel& m);
bool in_state_space(const ProcessModel& m, double x);

std::string describe(const ProcessModel& m);

/// Random keys for one step: streams are keyed by (seed, particle id, step).
struct StreamKeys {
    std::uint64_t seed = 0;
    std::uint64_t step = 0;
    /// Particle id per position; empty means ids 0..n-1.
    std::span<const std::uint32_t> particle_ids;
};

/// Precomputed one-step transition sampler for a model.
///
/// Levy models are split into drift -a' (a' = a + int_{eta<=|x|<1} x Pi),
/// a Gaussian part, compound-Poisson jumps with |x| >= eta, and the
/// compensated small jumps (discarded or replaced by a variance-matched
/// Gaussian). Large jumps of density components are drawn by thinning a
/// dominating Pareto or exponential proposal.
class Stepper {
public:
    explicit Stepper(ProcessModel model);

    /// Advances positions in place. Returns the number of rejected Euler
    /// substeps (interval diffusions only). Throws ModelError if a position is
    /// outside the state space.
    std::uint64_t advance(std::span<double> positions, double dt, const StreamKeys& keys) const;

    const ProcessModel& model() const { return model_; }

    /// Levy diagnostics (zero for other models).
    double drift_rate() const { return drift_; }
    double gaussian_variance_rate() const { return gauss_var_; }
    const SmallJumpStats& jump_stats() const { return stats_; }

    /// Doob-type bound dt * int_{|x|<eta} x^2 Pi / C^2 on the discarded small jumps.
    double discard_bound(double dt, double c) const;

private:
    // Poisson source of jumps with |x| >= eta, drawn from a dominating
    // proposal and thinned to the target density.
    struct JumpSource {
        enum class Kind { atoms, pareto, exponential } kind = Kind::atoms;
        double dominating_rate = 0.0;
        double sign = 1.0;
        double eta = 0.0;
        double alpha = 0.0;
        double decay = 0.0;
        std::vector<double> atom_sizes;
        std::vector<double> atom_cumulative; // normalized cumulative rates
    };

    double levy_increment(KeyedStream& rng, double dt) const;
    std::uint64_t diffusion_advance(double& x, double dt, KeyedStream& rng) const;

    ProcessModel model_;
    double drift_ = 0.0;
    double gauss_var_ = 0.0;
    SmallJumpStats stats_{};
    std::vector<JumpSource> jumps_;
};

/// Pure form of the one-step map: returns advanced positions.
std::vector<double> step_increments(const ProcessModel& m, std::span<const double> positions, double dt,
                                    const StreamKeys& keys);

/// f(x) = int_c^x dz / sigma(z).
double scale_transform(const model::IntervalDiffusion& m, double x, double c);

} // namespace ifpt
