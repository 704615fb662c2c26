#pragma once

#include "ifpt/boundary.hpp"
#include "ifpt/initial.hpp"
#include "ifpt/processes.hpp"
#include "ifpt/targets.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace ifpt {

/// N simulated paths: positions, alive flags and the survival count.
/// Dead particles keep the position they had when they were killed.
struct ParticleEnsemble {
    std::vector<double> positions;
    std::vector<std::uint8_t> alive;
    std::size_t alive_count = 0;
    std::size_t step_index = 0;
    std::uint64_t seed = 0;

    static ParticleEnsemble from_positions(std::vector<double> positions, std::uint64_t seed = 0);
};

struct CalibrationOptions {
    std::size_t particles = 0;
    TimeGrid grid;
    std::uint64_t seed = 0;
    bool record_diagnostics = false;
};

/// Outcome of one kill step.
struct KillOutcome {
    double level = kInf;
    std::size_t shortfall = 0; // survivors missing because of ties at the level
    double level_stderr = std::numeric_limits<double>::quiet_NaN();
};

/// Kills all alive particles at or above the (target_count+1)-th smallest
/// alive position, which becomes the boundary level. target_count = 0 kills
/// everything (level L); target_count >= alive_count kills nothing (level R).
std::pair<KillOutcome, ParticleEnsemble> calibration_step(const ParticleEnsemble& ensemble,
                                                          std::size_t target_count, double lower = -kInf,
                                                          double upper = kInf);

/// Monte-Carlo boundary construction: after each grid step the alive
/// particles are cut at the quantile that leaves round(N * S(t_k)) survivors.
BoundaryEstimate calibrate(const ProcessModel& model, const InitialLaw& initial,
                           const TargetDistribution& target, const CalibrationOptions& opts);

struct Refinement {
    std::vector<BoundaryEstimate> estimates;
    /// Epigraph Hausdorff distance between consecutive estimates.
    std::vector<double> hausdorff;
};

/// Calibrates on base_grid and on `levels - 1` dyadic refinements with
/// independent sub-seeds.
Refinement refine_and_diagnose(const ProcessModel& model, const InitialLaw& initial,
                               const TargetDistribution& target, const TimeGrid& base_grid,
                               unsigned levels, const CalibrationOptions& opts, int resolution = 128);

/// Positions sampled from the initial law; throws ModelError if a draw lies
/// outside the model's state space.
std::vector<double> initial_positions(const ProcessModel& model, const InitialLaw& initial, std::size_t n,
                                      std::uint64_t seed);

} // namespace ifpt
