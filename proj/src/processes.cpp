#include "ifpt/processes.hpp"

#include "ifpt/error.hpp"
#include "ifpt/parallel.hpp"
#include "ifpt/quadrature.hpp"
#include "ifpt/special.hpp"

#include <atomic>
#include <cmath>
#include <sstream>

namespace ifpt {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::vector<double> probe_points(double lower, double upper) {
    std::vector<double> pts;
    if (std::isfinite(lower) && std::isfinite(upper)) {
        for (int i = 0; i < 64; ++i) pts.push_back(lower + (upper - lower) * (i + 0.5) / 64.0);
    } else if (std::isfinite(lower)) {
        for (int k = -10; k <= 10; ++k) pts.push_back(lower + std::ldexp(1.0, k));
    } else if (std::isfinite(upper)) {
        for (int k = -10; k <= 10; ++k) pts.push_back(upper - std::ldexp(1.0, k));
    } else {
        pts.push_back(0.0);
        for (int k = -10; k <= 10; ++k) {
            pts.push_back(std::ldexp(1.0, k));
            pts.push_back(-std::ldexp(1.0, k));
        }
    }
    return pts;
}

} // namespace

// ------------------------------------------------------------ Coefficient

double Coefficient::operator()(double x) const {
    return std::visit(overloaded{
                          [](const coef::Constant& c) { return c.value; },
                          [x](const coef::Linear& c) { return c.a + c.b * x; },
                          [x](const coef::Ou& c) { return -c.theta * x; },
                          [x](const coef::BesselDrift& c) { return (c.delta - 1.0) / (2.0 * x); },
                          [x](const coef::Power& c) { return c.coeff * std::pow(x, c.p); },
                      },
                      kind_);
}

std::string Coefficient::describe() const {
    std::ostringstream os;
    std::visit(overloaded{
                   [&](const coef::Constant& c) { os << "constant(" << c.value << ")"; },
                   [&](const coef::Linear& c) { os << "linear(" << c.a << ", " << c.b << ")"; },
                   [&](const coef::Ou& c) { os << "ou(" << c.theta << ")"; },
                   [&](const coef::BesselDrift& c) { os << "bessel_drift(" << c.delta << ")"; },
                   [&](const coef::Power& c) { os << "power(" << c.p << ", " << c.coeff << ")"; },
               },
               kind_);
    return os.str();
}

// ---------------------------------------------------------- model helpers

void validate_model(const ProcessModel& m) {
    std::visit(overloaded{
                   [](const model::BrownianDrift& b) {
                       if (!std::isfinite(b.mu)) throw InputError("brownian: mu must be finite");
                       if (!(b.vol >= 0.0) || !std::isfinite(b.vol))
                           throw InputError("brownian: vol must be finite and >= 0");
                   },
                   [](const model::Levy& l) {
                       if (!(l.eta > 0.0 && l.eta < 1.0)) throw InputError("levy: eta must lie in (0,1)");
                       if (!std::isfinite(l.triple.a)) throw InputError("levy: a must be finite");
                       if (!(l.triple.sigma2 >= 0.0) || !std::isfinite(l.triple.sigma2))
                           throw InputError("levy: sigma2 must be finite and >= 0");
                       validate_measure(l.triple.measure);
                   },
                   [](const model::IntervalDiffusion& d) {
                       if (!(d.lower < d.upper)) throw InputError("diffusion: requires L < R");
                       if (d.substeps < 1) throw InputError("diffusion: dt_substeps must be >= 1");
                       for (double x : probe_points(d.lower, d.upper)) {
                           const double s = d.sigma(x);
                           if (!(s > 0.0) || !std::isfinite(s))
                               throw InputError("diffusion: sigma must be positive on (L,R), fails at x=" +
                                                format_real(x));
                           if (!std::isfinite(d.beta(x)))
                               throw InputError("diffusion: beta must be finite on (L,R), fails at x=" +
                                                format_real(x));
                       }
                   },
               },
               m);
}

std::pair<double, double> state_bounds(const ProcessModel& m) {
    if (const auto* d = std::get_if<model::IntervalDiffusion>(&m)) return {d->lower, d->upper};
    return {-kInf, kInf};
}

bool in_state_space(const ProcessModel& m, double x) {
    if (std::isnan(x)) return false;
    if (const auto* d = std::get_if<model::IntervalDiffusion>(&m)) {
        if (!(x < d->upper)) return false;
        if (d->lower_behavior == model::LowerBoundary::reflecting) return x >= d->lower;
        return x > d->lower;
    }
    return std::isfinite(x);
}

std::string describe(const ProcessModel& m) {
    std::ostringstream os;
    std::visit(overloaded{
                   [&](const model::BrownianDrift& b) {
                       os << "BrownianDrift(mu=" << b.mu << ", vol=" << b.vol << ")";
                   },
                   [&](const model::Levy& l) {
                       os << "Levy(a=" << l.triple.a << ", sigma2=" << l.triple.sigma2 << ", "
                          << l.triple.measure.components.size() << " measure component(s), eta=" << l.eta
                          << ", small_jumps="
                          << (l.small_jumps == model::SmallJumpMode::gaussian ? "gaussian" : "discard")
                          << ")";
                   },
                   [&](const model::IntervalDiffusion& d) {
                       os << "IntervalDiffusion(beta=" << d.beta.describe()
                          << ", sigma=" << d.sigma.describe() << ", L=" << d.lower << ", R=" << d.upper
                          << ", substeps=" << d.substeps << ")";
                   },
               },
               m);
    return os.str();
}

// ---------------------------------------------------------------- Stepper

Stepper::Stepper(ProcessModel model) : model_(std::move(model)) {
    validate_model(model_);
    const auto* levy_model = std::get_if<model::Levy>(&model_);
    if (!levy_model) return;

    const double eta = levy_model->eta;
    stats_ = small_jump_stats(levy_model->triple.measure, eta);
    drift_ = -(levy_model->triple.a + stats_.mean_truncated);
    gauss_var_ = levy_model->triple.sigma2;
    if (levy_model->small_jumps == model::SmallJumpMode::gaussian) gauss_var_ += stats_.variance_lt_eta;

    for (const auto& comp : levy_model->triple.measure.components) {
        std::visit(overloaded{
                       [&](const levy::FiniteAtoms& a) {
                           JumpSource src;
                           src.kind = JumpSource::Kind::atoms;
                           for (auto [x, rate] : a.atoms) {
                               if (std::abs(x) < eta || rate <= 0.0) continue;
                               src.dominating_rate += rate;
                               src.atom_sizes.push_back(x);
                               src.atom_cumulative.push_back(src.dominating_rate);
                           }
                           for (double& c : src.atom_cumulative) c /= src.dominating_rate;
                           if (!src.atom_sizes.empty()) jumps_.push_back(std::move(src));
                       },
                       [&](const levy::OneSidedStable& s) {
                           JumpSource src;
                           src.kind = JumpSource::Kind::pareto;
                           src.sign = s.side == levy::Side::positive ? 1.0 : -1.0;
                           src.eta = eta;
                           src.alpha = s.alpha;
                           src.decay = s.tempering;
                           // c e^{-lambda eta} x^{-1-alpha} dominates the tempered density on [eta, inf)
                           src.dominating_rate =
                               s.intensity * std::exp(-s.tempering * eta) * std::pow(eta, -s.alpha) / s.alpha;
                           jumps_.push_back(std::move(src));
                       },
                       [&](const levy::GammaMeasure& g) {
                           JumpSource src;
                           src.kind = JumpSource::Kind::exponential;
                           src.sign = g.side == levy::Side::positive ? 1.0 : -1.0;
                           src.eta = eta;
                           src.decay = g.rate;
                           // (shape/eta) e^{-rate x} dominates shape e^{-rate x}/x on [eta, inf)
                           src.dominating_rate = g.shape / eta * std::exp(-g.rate * eta) / g.rate;
                           jumps_.push_back(std::move(src));
                       },
                   },
                   comp);
    }
}

double Stepper::discard_bound(double dt, double c) const {
    return dt * stats_.variance_lt_eta / (c * c);
}

double Stepper::levy_increment(KeyedStream& rng, double dt) const {
    double inc = drift_ * dt;
    if (gauss_var_ > 0.0) inc += std::sqrt(gauss_var_ * dt) * rng.normal();
    for (const auto& src : jumps_) {
        const long proposals = poisson_count(src.dominating_rate * dt, rng);
        for (long j = 0; j < proposals; ++j) {
            switch (src.kind) {
            case JumpSource::Kind::atoms: {
                const double u = rng.uniform();
                std::size_t k = 0;
                while (k + 1 < src.atom_cumulative.size() && u > src.atom_cumulative[k]) ++k;
                inc += src.atom_sizes[k];
                break;
            }
            case JumpSource::Kind::pareto: {
                const double x = src.eta * std::pow(rng.uniform(), -1.0 / src.alpha);
                const double u = rng.uniform();
                if (src.decay == 0.0 || u < std::exp(-src.decay * (x - src.eta))) inc += src.sign * x;
                break;
            }
            case JumpSource::Kind::exponential: {
                const double x = src.eta - std::log(rng.uniform()) / src.decay;
                const double u = rng.uniform();
                if (u < src.eta / x) inc += src.sign * x;
                break;
            }
            }
        }
    }
    return inc;
}

std::uint64_t Stepper::diffusion_advance(double& x, double dt, KeyedStream& rng) const {
    const auto& d = std::get<model::IntervalDiffusion>(model_);
    const double h = dt / d.substeps;
    const double sqrt_h = std::sqrt(h);
    std::uint64_t rejected = 0;
    for (int s = 0; s < d.substeps; ++s) {
        const double z = rng.normal();
        double next = x + d.beta(x) * h + d.sigma(x) * sqrt_h * z;
        if (next <= d.lower) {
            if (d.lower_behavior == model::LowerBoundary::reflecting) {
                next = d.lower + (d.lower - next);
            } else {
                ++rejected;
                continue;
            }
        }
        // R is not part of the state space: reject the step instead of clamping.
        if (next >= d.upper || !std::isfinite(next)) {
            ++rejected;
            continue;
        }
        x = next;
    }
    return rejected;
}

std::uint64_t Stepper::advance(std::span<double> positions, double dt, const StreamKeys& keys) const {
    if (!(dt > 0.0)) throw InputError("step: dt must be positive");
    if (!keys.particle_ids.empty() && keys.particle_ids.size() != positions.size())
        throw InputError("step: one particle id per position required");
    for (double x : positions) {
        if (!in_state_space(model_, x))
            throw ModelError("step: position " + format_real(x) + " outside the state space");
    }

    std::atomic<std::uint64_t> rejected{0};
    parallel_for(positions.size(), [&](std::size_t begin, std::size_t end) {
        std::uint64_t local_rejected = 0;
        for (std::size_t i = begin; i < end; ++i) {
            const std::uint64_t id = keys.particle_ids.empty() ? i : keys.particle_ids[i];
            KeyedStream rng(keys.seed, StreamTag::increment, id, keys.step);
            double& x = positions[i];
            std::visit(overloaded{
                           [&](const model::BrownianDrift& b) {
                               x += b.mu * dt + b.vol * std::sqrt(dt) * rng.normal();
                           },
                           [&](const model::Levy&) { x += levy_increment(rng, dt); },
                           [&](const model::IntervalDiffusion&) {
                               local_rejected += diffusion_advance(x, dt, rng);
                           },
                       },
                       model_);
        }
        rejected += local_rejected;
    });
    return rejected.load();
}

std::vector<double> step_increments(const ProcessModel& m, std::span<const double> positions, double dt,
                                    const StreamKeys& keys) {
    std::vector<double> out(positions.begin(), positions.end());
    Stepper(m).advance(out, dt, keys);
    return out;
}

double scale_transform(const model::IntervalDiffusion& m, double x, double c) {
    auto inside = [&](double v) { return v > m.lower && v < m.upper; };
    if (!inside(c)) throw InputError("scale_transform: reference point c outside (L,R)");
    if (!inside(x)) throw InputError("scale_transform: x outside (L,R)");
    if (x == c) return 0.0;
    auto inv_sigma = [&](double z) { return 1.0 / m.sigma(z); };
    if (x > c) return quad::smooth(inv_sigma, c, x, 1e-10).value;
    return -quad::smooth(inv_sigma, x, c, 1e-10).value;
}

} // namespace ifpt
