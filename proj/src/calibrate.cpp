#include "ifpt/calibrate.hpp"

#include "ifpt/error.hpp"
#include "ifpt/rng.hpp"

#include <algorithm>
#include <cmath>

namespace ifpt {

namespace {

// Kill step on compact arrays of alive particles. Survivors stay in order.
KillOutcome kill_above_level(std::vector<std::uint32_t>& ids, std::vector<double>& pos, std::size_t target,
                             double lower, double upper, bool diagnostics, std::vector<double>& scratch,
                             std::vector<std::pair<std::uint32_t, double>>* killed) {
    KillOutcome out;
    const std::size_t alive = pos.size();
    if (target == 0) {
        out.level = lower;
        if (killed)
            for (std::size_t i = 0; i < alive; ++i) killed->emplace_back(ids[i], pos[i]);
        ids.clear();
        pos.clear();
        return out;
    }
    if (target >= alive) {
        out.level = upper;
        return out;
    }

    scratch.assign(pos.begin(), pos.end());
    const auto m = static_cast<std::ptrdiff_t>(target);
    std::nth_element(scratch.begin(), scratch.begin() + m, scratch.end());
    out.level = scratch[static_cast<std::size_t>(m)];

    if (diagnostics) {
        // Standard error of the order statistic from the local spacing.
        const auto n = static_cast<std::ptrdiff_t>(alive);
        const auto w = std::max<std::ptrdiff_t>(
            1, std::min({static_cast<std::ptrdiff_t>(std::sqrt(static_cast<double>(n))), m, n - 1 - m}));
        if (w >= 1 && m - w >= 0 && m + w < n) {
            std::nth_element(scratch.begin(), scratch.begin() + (m - w), scratch.begin() + m);
            std::nth_element(scratch.begin() + m + 1, scratch.begin() + (m + w), scratch.end());
            const double spread = scratch[static_cast<std::size_t>(m + w)] - scratch[static_cast<std::size_t>(m - w)];
            const double p = static_cast<double>(m) / static_cast<double>(n);
            out.level_stderr = std::sqrt(p * (1.0 - p) / static_cast<double>(n)) * static_cast<double>(n) *
                               spread / (2.0 * static_cast<double>(w));
        }
    }

    std::size_t keep = 0;
    for (std::size_t i = 0; i < alive; ++i) {
        if (pos[i] < out.level) {
            ids[keep] = ids[i];
            pos[keep] = pos[i];
            ++keep;
        } else if (killed) {
            killed->emplace_back(ids[i], pos[i]);
        }
    }
    ids.resize(keep);
    pos.resize(keep);
    out.shortfall = target - keep;
    return out;
}

std::size_t target_count(double survival_value, std::size_t n) {
    const double scaled = survival_value * static_cast<double>(n);
    return static_cast<std::size_t>(std::clamp<long long>(std::llround(scaled), 0, static_cast<long long>(n)));
}

} // namespace

ParticleEnsemble ParticleEnsemble::from_positions(std::vector<double> positions, std::uint64_t seed) {
    ParticleEnsemble e;
    e.alive.assign(positions.size(), 1);
    e.alive_count = positions.size();
    e.positions = std::move(positions);
    e.seed = seed;
    return e;
}

std::pair<KillOutcome, ParticleEnsemble> calibration_step(const ParticleEnsemble& ensemble,
                                                          std::size_t target_count, double lower,
                                                          double upper) {
    std::vector<std::uint32_t> ids;
    std::vector<double> pos;
    for (std::size_t i = 0; i < ensemble.positions.size(); ++i) {
        if (ensemble.alive[i]) {
            ids.push_back(static_cast<std::uint32_t>(i));
            pos.push_back(ensemble.positions[i]);
        }
    }
    std::vector<double> scratch;
    std::vector<std::pair<std::uint32_t, double>> killed;
    const KillOutcome out = kill_above_level(ids, pos, target_count, lower, upper, true, scratch, &killed);
    ParticleEnsemble next = ensemble;
    for (auto [id, x] : killed) next.alive[id] = 0;
    next.alive_count = ids.size();
    return {out, std::move(next)};
}

std::vector<double> initial_positions(const ProcessModel& model, const InitialLaw& initial, std::size_t n,
                                      std::uint64_t seed) {
    auto positions = initial.sample(n, seed);
    for (double x : positions) {
        if (!in_state_space(model, x))
            throw ModelError("initial law " + initial.describe() + " produced " + format_real(x) +
                             " outside the state space of " + describe(model));
    }
    return positions;
}

BoundaryEstimate calibrate(const ProcessModel& model, const InitialLaw& initial,
                           const TargetDistribution& target, const CalibrationOptions& opts) {
    if (opts.particles < 2) throw InputError("calibrate: at least 2 particles required");
    if (opts.particles > 0xFFFFFFFFull) throw InputError("calibrate: particle count exceeds 2^32");
    if (const auto problems = validate(target); !problems.empty())
        throw InputError("calibrate: invalid target: " + problems.front());

    const Stepper stepper(model);
    const auto [lower, upper] = state_bounds(model);
    const TimeGrid& grid = opts.grid;
    const std::size_t n = opts.particles;
    const std::size_t steps = grid.size();

    std::vector<double> pos = initial_positions(model, initial, n, opts.seed);
    std::vector<std::uint32_t> ids(n);
    for (std::size_t i = 0; i < n; ++i) ids[i] = static_cast<std::uint32_t>(i);

    BoundaryEstimate est{BoundaryCurve(grid, std::vector<double>(steps, upper), lower, upper), {}, {}, n,
                         opts.seed, {}, {}, 0};
    std::vector<double> values(steps);
    est.survival_target.resize(steps);
    est.survival_achieved.resize(steps);
    est.tie_shortfall.assign(steps, 0);
    est.level_stderr.assign(steps, std::numeric_limits<double>::quiet_NaN());

    std::vector<double> scratch;
    double previous_survival = 1.0;
    for (std::size_t k = 0; k < steps; ++k) {
        if (!pos.empty()) {
            est.rejected_steps +=
                stepper.advance(pos, grid.step_length(k), StreamKeys{opts.seed, k, ids});
        }
        const double s = survival(target, grid[k]);
        if (s > previous_survival + 1e-12)
            throw InputError("calibrate: target survival increases at t=" + format_real(grid[k]));
        previous_survival = s;

        const KillOutcome out = kill_above_level(ids, pos, target_count(s, n), lower, upper,
                                                 opts.record_diagnostics, scratch, nullptr);
        values[k] = out.level;
        est.survival_target[k] = s;
        est.survival_achieved[k] = static_cast<double>(pos.size()) / static_cast<double>(n);
        est.tie_shortfall[k] = out.shortfall;
        est.level_stderr[k] = out.level_stderr;
    }
    est.curve = BoundaryCurve(grid, std::move(values), lower, upper);
    return est;
}

Refinement refine_and_diagnose(const ProcessModel& model, const InitialLaw& initial,
                               const TargetDistribution& target, const TimeGrid& base_grid,
                               unsigned levels, const CalibrationOptions& opts, int resolution) {
    if (levels < 1) throw InputError("refine: levels must be >= 1");
    Refinement out;
    for (unsigned level = 0; level < levels; ++level) {
        CalibrationOptions o{opts.particles, level == 0 ? base_grid : base_grid.refined(level), derive_seed(opts.seed, level),
                             opts.record_diagnostics};
        out.estimates.push_back(calibrate(model, initial, target, o));
        if (level > 0) {
            out.hausdorff.push_back(epigraph_hausdorff(out.estimates[level - 1].curve,
                                                       out.estimates[level].curve, resolution));
        }
    }
    return out;
}

} // namespace ifpt
