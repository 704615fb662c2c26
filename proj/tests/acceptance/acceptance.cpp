// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include "ifpt/calibrate.hpp"
#include "ifpt/cli/commands.hpp"
#include "ifpt/levy.hpp"
#include "ifpt/orders.hpp"
#include "ifpt/processes.hpp"
#include "ifpt/rng.hpp"
#include "ifpt/special.hpp"
#include "ifpt/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>

using namespace ifpt;
namespace fs = std::filesystem;

namespace {

struct Verdict {
    bool pass;
    std::string detail;
};

int failures = 0;

void criterion(int id, const char* name, const std::function<Verdict()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v{false, ""};
    try {
        v = body();
    } catch (const std::exception& e) {
        v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!v.pass) ++failures;
    std::printf("criterion %2d %s  %s: %s [%.1f s]\n", id, v.pass ? "PASS" : "FAIL", name, v.detail.c_str(), secs);
    std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

std::string csv_of(const BoundaryEstimate& est) {
    std::ostringstream os;
    write_estimate_csv(os, est);
    return os.str();
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

double sup_dev(const BoundaryCurve& b, const std::function<double(double)>& ref, double from, double to) {
    double worst = 0.0;
    for (std::size_t k = 0; k < b.grid().size(); ++k) {
        const double t = b.grid()[k];
        if (t < from || t > to) continue;
        worst = std::max(worst, std::abs(b.value(k) - ref(t)));
    }
    return worst;
}

// Brute-force a <=_st b on the merged support, exact integer arithmetic.
bool brute_usual_order(std::span<const double> a, std::span<const double> b) {
    std::vector<double> pts(a.begin(), a.end());
    pts.insert(pts.end(), b.begin(), b.end());
    for (double c : pts) {
        const auto fa = static_cast<std::size_t>(std::count_if(a.begin(), a.end(), [c](double x) { return x <= c; }));
        const auto fb = static_cast<std::size_t>(std::count_if(b.begin(), b.end(), [c](double x) { return x <= c; }));
        if (fa * b.size() < fb * a.size()) return false;
    }
    return true;
}

model::Levy stable_model() {
    return {LevyTriple{0.0, 0.25, LevyMeasureSpec{{levy::OneSidedStable{levy::Side::positive, 0.5, 0.5, 1.0}}}},
            model::SmallJumpMode::gaussian, 0.01};
}

// Brute-force first-passage CDF of standard Brownian motion to 1 + gamma t:
// 10^6 paths, dt = 1e-4, checked at grid times (tests/oracles,
// `linear_boundary_oracle 1000000 1e-4 20240917`).
struct OraclePoint {
    double gamma, t, p;
};
constexpr OraclePoint kLinearOracle[] = {
    {0.0, 0.25, 0.044324}, {0.0, 0.5, 0.155003}, {0.0, 1.0, 0.314534}, {0.0, 2.0, 0.476421},
    {0.5, 0.25, 0.026191}, {0.5, 0.5, 0.090084}, {0.5, 1.0, 0.178471}, {0.5, 2.0, 0.260071},
    {1.0, 0.25, 0.014791}, {1.0, 0.5, 0.048370}, {1.0, 1.0, 0.089007}, {1.0, 2.0, 0.118208},
};

} // namespace

int main() {
    const fs::path configs = fs::path(IFPT_SOURCE_DIR) / "configs";
    const auto origin = InitialLaw::point(0.0);
    const model::BrownianDrift bm{0.0, 1.0};

    const auto grid512 = TimeGrid::arithmetic(1.0 / 512, 1.0 / 512, 1024);
    const auto levy_target = TargetDistribution::levy_hitting(1.0);
    std::optional<BoundaryEstimate> c1;
    criterion(1, "level-boundary inversion", [&] {
        c1 = calibrate(bm, origin, levy_target, CalibrationOptions{200'000, grid512, 20240601, false});
        const double dev = sup_dev(c1->curve, [](double) { return 1.0; }, 0.1, 2.0);
        return Verdict{dev <= 0.05, fmt("sup_{[0.1,2]} |b - 1| = %.4f (<= 0.05)", dev)};
    });

    criterion(2, "round trip, Brownian motion", [&] {
        const auto s = forward_fpt(bm, origin, c1->curve, 100'000, 777);
        const double ks = ks_statistic(s, levy_target);
        return Verdict{ks <= 0.02, fmt("KS = %.4f (<= 0.02)", ks)};
    });

    const auto grid256 = TimeGrid::arithmetic(1.0 / 256, 1.0 / 256, 1024);
    const auto exp1 = TargetDistribution::exponential(1.0);
    std::optional<BoundaryEstimate> c3;
    criterion(3, "round trip, tempered stable jumps", [&] {
        c3 = calibrate(stable_model(), origin, exp1, CalibrationOptions{100'000, grid256, 31337, false});
        const auto s = forward_fpt(stable_model(), origin, c3->curve, 100'000, 4242);
        const double ks = ks_statistic(s, exp1);
        return Verdict{ks <= 0.03, fmt("KS = %.4f (<= 0.03)", ks)};
    });

    criterion(4, "linear-boundary inversion", [&] {
        double oracle_gap = 0.0;
        for (const auto& o : kLinearOracle)
            oracle_gap = std::max(oracle_gap, std::abs(analytic_bm_linear_cdf(1.0, o.gamma, o.t) - o.p));
        const auto target = TargetDistribution::inverse_gaussian_hitting(1.0, 0.5);
        const auto est = calibrate(bm, origin, target, CalibrationOptions{200'000, grid512, 4, false});
        const double dev = sup_dev(est.curve, [](double t) { return 1.0 + 0.5 * t; }, 0.1, 2.0);
        return Verdict{oracle_gap <= 0.005 && dev <= 0.07,
                       fmt("oracle gap %.4f (<= 0.005), sup_{[0.1,2]} |b - (1 + t/2)| = %.4f (<= 0.07)", oracle_gap,
                           dev)};
    });

    criterion(5, "comparison principle", [&] {
        const auto grid = TimeGrid::arithmetic(1.0 / 256, 1.0 / 256, 512);
        const auto xi1 = TargetDistribution::exponential(2.0), xi2 = TargetDistribution::exponential(1.0);
        const bool hazard = check_hazard_order(xi1, xi2, grid).holds;
        const bool initial = check_usual_order(EmpiricalDistribution({0.0}), EmpiricalDistribution({0.5})).holds;
        const CalibrationOptions o{100'000, grid, 5, false};
        const auto b1 = calibrate(bm, InitialLaw::point(0.0), xi1, o);
        const auto b2 = calibrate(bm, InitialLaw::point(0.5), xi2, o);
        const auto r = compare_boundaries(b1, b2, 0.0);
        return Verdict{hazard && initial && r.holds,
                       fmt("b1 <= b2 at %.0f/%.0f grid points, preconditions ", double(grid.size() - r.violations),
                           double(grid.size())) +
                           (hazard && initial ? "hold" : "fail")};
    });

    criterion(6, "T_alpha order preservation", [&] {
        const auto t0 = std::chrono::steady_clock::now();
        KeyedStream rng(6, StreamTag::test, 0, 0);
        int passed = 0;
        for (int trial = 0; trial < 1000; ++trial) {
            const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform() * 200);
            std::vector<double> a(n), b(n);
            for (std::size_t i = 0; i < n; ++i) {
                a[i] = rng.normal();
                b[i] = a[i] + std::abs(rng.normal());
            }
            double a1 = rng.uniform(), a2 = rng.uniform();
            if (a1 > a2) std::swap(a1, a2);
            const EmpiricalDistribution ea(a), eb(b);
            if (!brute_usual_order(ea.samples(), eb.samples())) continue; // construction guarantees this
            const auto ta = truncate_T_alpha(ea, a1), tb = truncate_T_alpha(eb, a2);
            passed += brute_usual_order(ta.samples(), tb.samples());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return Verdict{passed == 1000 && secs <= 5.0, fmt("%.0f/1000 pairs ordered in %.2f s (<= 5 s)", passed, secs)};
    });

    criterion(7, "Levy simulator characteristic function", [&] {
        const model::Levy atoms{LevyTriple{0.0, 0.25, LevyMeasureSpec{{levy::FiniteAtoms{{{1.0, 2.0}, {-0.5, 1.0}}}}}},
                                model::SmallJumpMode::gaussian, 0.01};
        double worst = 0.0;
        for (const auto& m : {stable_model(), atoms}) {
            const auto x = step_increments(m, std::vector<double>(1'000'000, 0.0), 1.0, StreamKeys{7, 0, {}});
            for (double th : {-2.0, -1.0, 1.0, 2.0}) {
                std::complex<double> ecf = 0.0;
                for (double v : x) ecf += std::exp(std::complex<double>(0.0, th * v));
                ecf /= static_cast<double>(x.size());
                worst = std::max(worst, std::abs(ecf - std::exp(-levy_char_exponent(m.triple, th))));
            }
        }
        return Verdict{worst <= 0.01, fmt("max |phi_n - exp(-psi)| = %.4f (<= 0.01)", worst)};
    });

    criterion(8, "survival exactness with atoms", [&] {
        const auto target = TargetDistribution::mixture(
            {0.5, 0.5}, {TargetDistribution::exponential(1.0), TargetDistribution::point_mass(0.5)});
        const std::size_t n = 100'000;
        const auto grid = TimeGrid::arithmetic(1.0 / 64, 1.0 / 64, 128);
        const auto est = calibrate(bm, origin, target, CalibrationOptions{n, grid, 8, false});
        const auto k = *grid.index_of(0.5);
        const auto alive = std::llround(est.survival_achieved[k] * n);
        const auto want = std::llround(n * survival(target, 0.5));
        double gap = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i)
            gap = std::max(gap, std::abs(est.survival_achieved[i] - est.survival_target[i]));
        return Verdict{alive == want && gap <= 1.0 / n,
                       fmt("alive(0.5) = %.0f, round(N S(0.5)) = %.0f, max |S_ach - S| = %.2g", double(alive),
                           double(want), gap) +
                           " (<= 1/N)"};
    });

    criterion(9, "degenerate point-mass target", [&] {
        const auto grid = TimeGrid::arithmetic(0.3, 0.3, 10);
        const auto est = calibrate(bm, origin, TargetDistribution::point_mass(1.0), CalibrationOptions{10'000, grid, 9, false});
        std::size_t first = 0;
        while (grid[first] < 1.0) ++first;
        bool shape = est.curve.value(first) == -kInf;
        for (std::size_t k = 0; k < first; ++k) shape = shape && est.curve.value(k) == kInf;
        const auto s = forward_fpt(bm, origin, est.curve, 10'000, 90);
        const auto hits = std::count(s.times.begin(), s.times.end(), grid[first]);
        return Verdict{shape && hits == 10'000,
                       fmt("t1* = %.2f, %.0f%% of FPTs at t1*, boundary ", grid[first], 100.0 * hits / 10'000) +
                           (shape ? "+inf then -inf" : "wrong")};
    });

    criterion(10, "monotone boundary, negative Gamma subordinator", [&] {
        const model::Levy neg{LevyTriple{1.0 - std::exp(-1.0), 0.0,
                                         LevyMeasureSpec{{levy::GammaMeasure{levy::Side::negative, 1.0, 1.0}}}},
                              model::SmallJumpMode::discard, 0.01};
        const auto est = calibrate(neg, InitialLaw::uniform(0.0, 1.0), exp1,
                                   CalibrationOptions{100'000, grid256, 99, true});
        std::size_t bad = 0;
        double worst = -kInf;
        for (std::size_t k = 1; k < grid256.size(); ++k) {
            const double prev = est.curve.value(k - 1), cur = est.curve.value(k);
            if (cur <= prev) continue;
            double se = 0.0;
            for (double s : {est.level_stderr[k - 1], est.level_stderr[k]})
                if (std::isfinite(s)) se += s * s;
            const double excess = (cur - prev) / std::sqrt(se);
            worst = std::max(worst, excess);
            if (!(cur - prev <= 2.0 * std::sqrt(se))) ++bad;
        }
        if (!std::isfinite(worst)) return Verdict{true, "boundary never increases"};
        return Verdict{bad == 0, fmt("%.0f increases beyond 2 SE, largest increase %.2f SE", double(bad), worst)};
    });

    criterion(11, "diffusion stepper fidelity", [&] {
        const model::IntervalDiffusion ou{Coefficient(coef::Ou{1.0}), Coefficient(coef::Constant{1.0})};
        const Stepper s(ou);
        std::vector<double> x(100'000, 1.0);
        for (std::uint64_t k = 0; k < 512; ++k) s.advance(x, 1.0 / 512, StreamKeys{11, k, {}});
        const double mean = std::exp(-1.0), sd = std::sqrt((1.0 - std::exp(-2.0)) / 2.0);
        const double ks = ks_one_sample(x, [&](double v) { return normal_cdf((v - mean) / sd); });

        struct Sigma {
            Coefficient c;
            double lower;
        };
        const Sigma sigmas[] = {{Coefficient(coef::Constant{2.0}), -kInf},
                                {Coefficient(coef::Linear{1.0, 0.5}), -2.0},
                                {Coefficient(coef::Ou{-0.7}), 0.0},
                                {Coefficient(coef::BesselDrift{3.0}), 0.0},
                                {Coefficient(coef::Power{0.5, 1.3}), 0.0}};
        KeyedStream rng(11, StreamTag::test, 0, 0);
        double worst = 0.0;
        for (const auto& sg : sigmas) {
            const model::IntervalDiffusion m{Coefficient(coef::Constant{0.0}), sg.c, sg.lower, kInf};
            const double lo = std::isfinite(sg.lower) ? sg.lower + 0.05 : -5.0;
            for (int i = 0; i < 100; ++i) {
                const double p = lo + (5.0 - lo) * rng.uniform();
                const double h = 1e-4 * std::min(1.0, p - lo + 0.05);
                const double deriv = scale_transform(m, p + h, p - h) / (2.0 * h);
                worst = std::max(worst, std::abs(deriv * sg.c(p) - 1.0));
            }
        }
        return Verdict{ks <= 0.02 && worst <= 1e-6,
                       fmt("OU KS = %.4f (<= 0.02), scale derivative rel. error %.1e (<= 1e-6)", ks, worst)};
    });

    criterion(12, "classifier truth table", [&] {
        auto cls = [](double s2, std::vector<levy::Component> m) {
            return classify_levy(LevyTriple{0.0, s2, LevyMeasureSpec{std::move(m)}});
        };
        const auto b = cls(1.0, {});
        const auto g = cls(0.0, {levy::GammaMeasure{levy::Side::negative, 1.0, 1.0}});
        const auto p = cls(0.0, {levy::FiniteAtoms{{{1.0, 1.0}}}});
        bool ok = b.existence_diffuse && b.unbounded_variation && b.uniqueness == Uniqueness::full_interval;
        ok = ok && g.existence_diffuse && g.infinite_activity && !g.unbounded_variation && g.zero_in_supp &&
             g.neg_mass && !g.pos_mass && g.uniqueness == Uniqueness::support_only;
        ok = ok && !p.existence_diffuse && !p.infinite_activity && !p.zero_in_supp && p.pos_mass &&
             p.uniqueness == Uniqueness::unknown;
        int stable_ok = 0;
        for (double alpha : {1.1, 1.5, 1.9})
            stable_ok += cls(0.0, {levy::OneSidedStable{levy::Side::negative, alpha, 1.0, 0.0}}).unbounded_variation;
        for (double alpha : {0.1, 0.5, 0.9})
            stable_ok += !cls(0.0, {levy::OneSidedStable{levy::Side::negative, alpha, 1.0, 0.0}}).unbounded_variation;
        return Verdict{ok && stable_ok == 6,
                       std::string("Brownian/negative Gamma/Poisson flags ") + (ok ? "match" : "differ") +
                           fmt(", stable variation %.0f/6", stable_ok)};
    });

    criterion(13, "determinism across thread counts", [&] {
        const fs::path out = fs::temp_directory_path() / "ifpt_acceptance";
        bool same = true;
        std::string detail;
        const std::pair<const char*, const BoundaryEstimate*> runs[] = {{"bm_levy1", &*c1}, {"levy_stable_exp", &*c3}};
        for (const auto& [name, in_process] : runs) {
            std::vector<std::string> csvs{csv_of(*in_process)};
            for (unsigned threads : {1u, 4u}) {
                const fs::path dir = out / (std::string(name) + "_t" + std::to_string(threads));
                fs::remove_all(dir);
                std::ostringstream sink;
                const cli::CliOptions o{"calibrate", configs / (std::string(name) + ".json"), dir, std::nullopt, threads};
                if (cli::run_command(o, sink, sink) != cli::kOk) return Verdict{false, sink.str()};
                csvs.push_back(slurp(dir / "boundary.csv"));
            }
            const bool eq = csvs[0] == csvs[1] && csvs[1] == csvs[2];
            same = same && eq;
            detail += std::string(detail.empty() ? "" : ", ") + name + (eq ? " identical" : " differs");
        }
        return Verdict{same, detail + " (in-process, --threads 1, --threads 4)"};
    });

    std::printf("%d of 13 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
