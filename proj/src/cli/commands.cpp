#include "ifpt/cli/commands.hpp"

#include "ifpt/calibrate.hpp"
#include "ifpt/cli/config.hpp"
#include "ifpt/error.hpp"
#include "ifpt/orders.hpp"
#include "ifpt/parallel.hpp"
#include "ifpt/rng.hpp"
#include "ifpt/verify.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <optional>
#include <variant>
#include <ostream>

namespace ifpt::cli {

using ordered_json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

// Tag mixed into the run seed for verification paths, so they never reuse
// the calibration streams unless asked to.
constexpr std::uint64_t kVerifySeedTag = 0x7665726966ull;

ordered_json real_json(double x) {
    if (std::isfinite(x)) return x;
    return format_real(x);
}

fs::path output_dir(const CliOptions& opts, const RunConfig& cfg) {
    if (opts.out_dir) return *opts.out_dir;
    if (cfg.output_dir) return *cfg.output_dir;
    return fs::path(".");
}

std::ofstream open_output(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream os(path, std::ios::binary);
    if (!os) throw InputError("cannot write '" + path.string() + "'");
    return os;
}

void write_json(const fs::path& path, const ordered_json& doc) {
    auto os = open_output(path);
    os << doc.dump(2) << '\n';
}

ordered_json grid_json(const TimeGrid& g) {
    ordered_json j;
    j["t_start"] = g.t_start();
    j["dt"] = real_json(g.dt());
    j["steps"] = g.size();
    j["horizon"] = g.horizon();
    return j;
}

ordered_json estimate_json(const BoundaryEstimate& est) {
    ordered_json j;
    j["particles"] = est.particles;
    j["seed"] = est.seed;
    j["tie_shortfall_total"] = std::accumulate(est.tie_shortfall.begin(), est.tie_shortfall.end(), std::size_t{0});
    j["tie_shortfall_max"] =
        est.tie_shortfall.empty() ? std::size_t{0} : *std::max_element(est.tie_shortfall.begin(), est.tie_shortfall.end());
    j["rejected_steps"] = est.rejected_steps;
    double worst_gap = 0.0;
    for (std::size_t k = 0; k < est.survival_target.size(); ++k)
        worst_gap = std::max(worst_gap, std::abs(est.survival_target[k] - est.survival_achieved[k]));
    j["max_survival_gap"] = worst_gap;
    double worst_se = 0.0;
    for (double se : est.level_stderr)
        if (std::isfinite(se)) worst_se = std::max(worst_se, se);
    j["level_stderr_max"] = worst_se;
    return j;
}

// Small-jump budget of a Levy model: P(sup_{s<=t} |M_s| >= C) <= t int_{|x|<eta} x^2 Pi / C^2
// for the compensated jumps below eta, at C = 0.1.
std::optional<ordered_json> small_jump_json(const ProcessModel& model, const TimeGrid& grid) {
    const auto* levy = std::get_if<model::Levy>(&model);
    if (!levy) return std::nullopt;
    const Stepper stepper(model);
    constexpr double c = 0.1;
    ordered_json j;
    j["mode"] = levy->small_jumps == model::SmallJumpMode::gaussian ? "gaussian" : "discard";
    j["eta"] = levy->eta;
    j["variance_lt_eta"] = stepper.jump_stats().variance_lt_eta;
    j["doob_C"] = c;
    j["doob_bound_step"] = stepper.discard_bound(grid.step_length(grid.size() - 1), c);
    j["doob_bound_horizon"] = stepper.discard_bound(grid.horizon(), c);
    return j;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// Fills absent sub-config sections of `compare` from the top level.
RunConfig inherit(const RunConfig& sub, const RunConfig& top) {
    RunConfig out = sub;
    if (!out.process) out.process = top.process;
    if (!out.initial) out.initial = top.initial;
    if (!out.target) out.target = top.target;
    if (!out.grid) out.grid = top.grid;
    if (!out.particles) out.particles = top.particles;
    return out;
}

int cmd_calibrate(const CliOptions& opts, const RunConfig& cfg, std::ostream& out) {
    cfg.require({"process", "target", "grid", "particles"});
    const std::uint64_t seed = opts.seed.value_or(cfg.seed.value_or(0));
    const fs::path dir = output_dir(opts, cfg);
    const InitialLaw initial = cfg.initial_or_default();

    const auto start = std::chrono::steady_clock::now();
    const BoundaryEstimate est = calibrate(*cfg.process, initial, *cfg.target,
                                           CalibrationOptions{*cfg.particles, *cfg.grid, seed, true});
    const double elapsed = seconds_since(start);

    const fs::path csv = dir / "boundary.csv";
    {
        auto os = open_output(csv);
        write_estimate_csv(os, est);
    }
    ordered_json report;
    report["command"] = "calibrate";
    report["config"] = cfg.source.string();
    report["seed"] = seed;
    report["process"] = describe(*cfg.process);
    report["initial"] = initial.describe();
    report["target"] = describe(*cfg.target);
    report["grid"] = grid_json(*cfg.grid);
    report["diagnostics"] = estimate_json(est);
    if (auto sj = small_jump_json(*cfg.process, *cfg.grid)) report["small_jumps"] = *sj;
    report["threads"] = thread_count();
    report["seconds"] = elapsed;
    report["boundary_csv"] = csv.string();
    write_json(dir / "report.json", report);

    out << "calibrated " << cfg.grid->size() << " grid points with " << *cfg.particles << " particles in "
        << elapsed << " s -> " << csv.string() << '\n';
    return kOk;
}

BoundaryCurve load_boundary_for(const fs::path& path, const TimeGrid& grid, const ProcessModel& model) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open boundary '" + path.string() + "'");
    BoundaryTable table;
    try {
        table = read_boundary_csv(in);
    } catch (const InputError& e) {
        throw InputError(path.string() + ": " + e.what());
    }
    if (table.t.size() != grid.size()) {
        throw InputError(path.string() + ": grid mismatch: " + std::to_string(table.t.size()) +
                         " rows but the config grid has " + std::to_string(grid.size()) + " points");
    }
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (std::abs(table.t[k] - grid[k]) > 1e-12 * std::max(1.0, std::abs(grid[k]))) {
            throw InputError(path.string() + ":" + std::to_string(k + 2) + ": grid mismatch: t=" +
                             format_real(table.t[k]) + " but the config grid has t=" + format_real(grid[k]));
        }
    }
    const auto [lower, upper] = state_bounds(model);
    try {
        return BoundaryCurve(grid, table.b, lower, upper);
    } catch (const InputError& e) {
        throw InputError(path.string() + ": " + e.what());
    }
}

int cmd_verify(const CliOptions& opts, const RunConfig& cfg, std::ostream& out) {
    cfg.require({"process", "target", "grid"});
    const VerifySection vs = cfg.verify.value_or(VerifySection{});
    const fs::path dir = output_dir(opts, cfg);
    const fs::path boundary_path = vs.boundary.value_or(dir / "boundary.csv");
    if (!vs.paths) cfg.require({"particles"});
    const std::size_t paths = vs.paths.value_or(cfg.particles.value_or(0));
    const std::uint64_t seed =
        opts.seed ? *opts.seed : vs.seed.value_or(derive_seed(cfg.seed.value_or(0), kVerifySeedTag));
    const InitialLaw initial = cfg.initial_or_default();

    const BoundaryCurve curve = load_boundary_for(boundary_path, *cfg.grid, *cfg.process);
    const auto start = std::chrono::steady_clock::now();
    const FptSample sample = forward_fpt(*cfg.process, initial, curve, paths, seed);
    const double ks = ks_statistic(sample, *cfg.target);
    const double elapsed = seconds_since(start);
    const bool pass = ks <= vs.tolerance;

    {
        auto os = open_output(dir / "fpt.txt");
        write_fpt(os, sample);
    }
    ordered_json report;
    report["command"] = "verify";
    report["config"] = cfg.source.string();
    report["boundary_csv"] = boundary_path.string();
    report["seed"] = seed;
    report["paths"] = paths;
    report["process"] = describe(*cfg.process);
    report["initial"] = initial.describe();
    report["target"] = describe(*cfg.target);
    report["grid"] = grid_json(*cfg.grid);
    report["ks"] = ks;
    report["tolerance"] = vs.tolerance;
    report["censored_fraction"] = sample.censored_fraction();
    report["target_defect_mass"] = defect_mass(*cfg.target);
    report["pass"] = pass;
    report["seconds"] = elapsed;
    write_json(dir / "verify_report.json", report);

    out << "verify: KS " << format_real(ks) << " (tolerance " << vs.tolerance << ") censored "
        << sample.censored_fraction() << " -> " << (pass ? "PASS" : "FAIL") << '\n';
    return pass ? kOk : kCheckFailed;
}

int cmd_compare(const CliOptions& opts, const RunConfig& cfg, std::ostream& out) {
    cfg.require({"compare"});
    const RunConfig first = inherit(*cfg.compare->first, cfg);
    const RunConfig second = inherit(*cfg.compare->second, cfg);
    first.require({"process", "target", "grid", "particles"});
    second.require({"process", "target", "grid", "particles"});
    if (!first.grid->same_points(*second.grid))
        throw InputError(cfg.origin + ": compare: the two runs must share one time grid");
    if (*first.particles != *second.particles)
        throw InputError(cfg.origin + ": compare: the two runs must use the same particle count");

    // Common random numbers: one base seed for both runs.
    const std::uint64_t seed = opts.seed.value_or(cfg.seed.value_or(0));
    const fs::path dir = output_dir(opts, cfg);
    const InitialLaw mu1 = first.initial_or_default();
    const InitialLaw mu2 = second.initial_or_default();
    const std::size_t n = *first.particles;

    const auto e1 = calibrate(*first.process, mu1, *first.target, CalibrationOptions{n, *first.grid, seed, true});
    const auto e2 = calibrate(*second.process, mu2, *second.target, CalibrationOptions{n, *second.grid, seed, true});
    const OrderReport order = compare_boundaries(e1, e2, cfg.compare->slack);

    {
        auto os = open_output(dir / "boundary_first.csv");
        write_estimate_csv(os, e1);
    }
    {
        auto os = open_output(dir / "boundary_second.csv");
        write_estimate_csv(os, e2);
    }

    ordered_json pre;
    const OrderReport initial_order =
        check_usual_order(EmpiricalDistribution(mu1.sample(n, seed)), EmpiricalDistribution(mu2.sample(n, seed)));
    pre["initial_usual_order"] = initial_order.holds;
    try {
        const OrderReport hr = check_hazard_order(*first.target, *second.target, *first.grid);
        pre["target_hazard_rate_order"] = hr.holds;
        pre["target_hazard_rate_worst"] = hr.worst_violation;
    } catch (const InputError& e) {
        pre["target_hazard_rate_order"] = nullptr;
        pre["target_hazard_rate_note"] = e.what();
    }

    ordered_json report;
    report["command"] = "compare";
    report["config"] = cfg.source.string();
    report["seed"] = seed;
    report["particles"] = n;
    report["first"] = {{"process", describe(*first.process)},
                       {"initial", mu1.describe()},
                       {"target", describe(*first.target)},
                       {"diagnostics", estimate_json(e1)}};
    report["second"] = {{"process", describe(*second.process)},
                        {"initial", mu2.describe()},
                        {"target", describe(*second.target)},
                        {"diagnostics", estimate_json(e2)}};
    report["preconditions"] = pre;
    report["slack"] = cfg.compare->slack;
    report["holds"] = order.holds;
    report["violations"] = order.violations;
    report["grid_points"] = first.grid->size();
    report["worst_violation"] = real_json(order.worst_violation);
    report["witness"] = order.witness;
    write_json(dir / "compare_report.json", report);

    out << "compare: b1 <= b2 + " << cfg.compare->slack << " at " << (first.grid->size() - order.violations) << "/"
        << first.grid->size() << " grid points -> " << (order.holds ? "PASS" : "FAIL") << '\n';
    return order.holds ? kOk : kCheckFailed;
}

int cmd_classify(const RunConfig& cfg, std::ostream& out) {
    const ProcessModel& model = cfg.process_or_throw();
    const auto* levy = std::get_if<model::Levy>(&model);
    if (!levy) throw InputError(cfg.origin + ": process: classify requires a process of type 'levy'");
    const LevyClassification c = classify_levy(levy->triple);
    const InitialLaw initial = cfg.initial_or_default();
    const bool diffuse_initial = std::holds_alternative<init::Uniform>(initial.kind()) ||
                                 std::holds_alternative<init::Normal>(initial.kind());

    out << "process: " << describe(model) << '\n';
    out << "initial: " << initial.describe() << '\n';
    if (c.existence_diffuse)
        out << "existence: yes (diffuse marginals)\n";
    else if (diffuse_initial)
        out << "existence: yes (diffuse initial law)\n";
    else
        out << "existence: not guaranteed (marginals not diffuse)\n";
    switch (c.uniqueness) {
    case Uniqueness::full_interval: out << "uniqueness: full interval (0, t^ξ)\n"; break;
    case Uniqueness::support_only: out << "uniqueness: on supp(ξ) ∩ (0, t^ξ)\n"; break;
    case Uniqueness::unknown: out << "uniqueness: not established\n"; break;
    }
    out << "I^ξ: " << c.i_xi_description << '\n';
    if (cfg.target) out << "t^ξ: " << format_real(sup_support_time(*cfg.target)) << '\n';
    auto flag = [](bool b) { return b ? "yes" : "no"; };
    out << "flags: unbounded_variation=" << flag(c.unbounded_variation)
        << " infinite_activity=" << flag(c.infinite_activity) << " zero_in_supp=" << flag(c.zero_in_supp)
        << " pos_mass=" << flag(c.pos_mass) << " neg_mass=" << flag(c.neg_mass) << '\n';
    return kOk;
}

} // namespace

int run_command(const CliOptions& opts, std::ostream& out, std::ostream& err) {
    try {
        if (opts.threads) set_thread_count(*opts.threads);
        const RunConfig cfg = load_config(opts.config);
        if (opts.command == "calibrate") return cmd_calibrate(opts, cfg, out);
        if (opts.command == "verify") return cmd_verify(opts, cfg, out);
        if (opts.command == "compare") return cmd_compare(opts, cfg, out);
        if (opts.command == "classify") return cmd_classify(cfg, out);
        err << "ifpt: unknown command '" << opts.command << "'\n";
        return kConfigError;
    } catch (const InputError& e) {
        err << "ifpt: error: " << e.what() << '\n';
        return kConfigError;
    } catch (const ModelError& e) {
        err << "ifpt: model error: " << e.what() << '\n';
        return kModelError;
    } catch (const fs::filesystem_error& e) {
        err << "ifpt: error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        err << "ifpt: model error: " << e.what() << '\n';
        return kModelError;
    }
}

} // namespace ifpt::cli
