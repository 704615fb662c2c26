#include "ifpt/targets.hpp"

#include "ifpt/boundary.hpp"
#include "ifpt/error.hpp"
#include "ifpt/rng.hpp"
#include "ifpt/special.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

namespace ifpt {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double sample_inverse_gaussian(double mean, double shape, KeyedStream& rng) {
    // Michael, Schucany & Haas transformation.
    const double z = rng.normal();
    const double y = z * z;
    const double x = mean + mean * mean * y / (2.0 * shape) -
                     mean / (2.0 * shape) * std::sqrt(4.0 * mean * shape * y + mean * mean * y * y);
    return rng.uniform() <= mean / (mean + x) ? x : mean * mean / x;
}

double draw_one(const TargetDistribution& target, KeyedStream& rng) {
    return std::visit(
        overloaded{
            [&](const target::Exponential& d) { return -std::log(rng.uniform()) / d.rate; },
            [&](const target::Weibull& d) {
                return d.scale * std::pow(-std::log(rng.uniform()), 1.0 / d.shape);
            },
            [&](const target::LevyHitting& d) {
                const double z = normal_quantile(0.5 * rng.uniform());
                return d.level * d.level / (z * z);
            },
            [&](const target::InverseGaussianHitting& d) {
                if (d.drift == 0.0) {
                    const double z = normal_quantile(0.5 * rng.uniform());
                    return d.level * d.level / (z * z);
                }
                if (d.drift > 0.0 && rng.uniform() > std::exp(-2.0 * d.drift * d.level)) return kInf;
                // Conditioned on hitting, the law is that of drift |gamma| towards the level.
                return sample_inverse_gaussian(d.level / std::abs(d.drift), d.level * d.level, rng);
            },
            [&](const target::PointMass& d) { return d.time; },
            [&](const target::Mixture& d) {
                const double total = std::accumulate(d.weights.begin(), d.weights.end(), 0.0);
                const double u = rng.uniform() * total;
                double acc = 0.0;
                for (std::size_t i = 0; i < d.weights.size(); ++i) {
                    acc += d.weights[i];
                    if (u < acc) return draw_one(d.components[i], rng);
                }
                return draw_one(d.components.back(), rng);
            },
            [&](const target::Empirical& d) {
                const auto& s = *d.sorted;
                const auto idx = std::min<std::size_t>(
                    s.size() - 1, static_cast<std::size_t>(rng.uniform() * static_cast<double>(s.size())));
                return s[idx];
            },
        },
        target.kind());
}

void collect_atoms(const TargetDistribution& target, double weight, std::map<double, double>& out) {
    std::visit(overloaded{
                   [&](const target::PointMass& d) { out[d.time] += weight; },
                   [&](const target::Mixture& d) {
                       for (std::size_t i = 0; i < d.weights.size(); ++i)
                           collect_atoms(d.components[i], weight * d.weights[i], out);
                   },
                   [&](const target::Empirical& d) {
                       const double w = weight / static_cast<double>(d.sorted->size());
                       for (double x : *d.sorted) out[x] += w;
                   },
                   [](const auto&) {},
               },
               target.kind());
}

void validate_params(const TargetDistribution& target, const std::string& where,
                     std::vector<std::string>& out) {
    auto need = [&](bool ok, const std::string& msg) {
        if (!ok) out.push_back(where + msg);
    };
    std::visit(
        overloaded{
            [&](const target::Exponential& d) {
                need(d.rate > 0.0 && std::isfinite(d.rate), "exponential rate must be positive");
            },
            [&](const target::Weibull& d) {
                need(d.shape > 0.0 && std::isfinite(d.shape), "weibull shape must be positive");
                need(d.scale > 0.0 && std::isfinite(d.scale), "weibull scale must be positive");
            },
            [&](const target::LevyHitting& d) {
                need(d.level > 0.0 && std::isfinite(d.level), "levy_hitting level must be positive");
            },
            [&](const target::InverseGaussianHitting& d) {
                need(d.level > 0.0 && std::isfinite(d.level),
                     "inverse_gaussian_hitting level must be positive");
                need(std::isfinite(d.drift), "inverse_gaussian_hitting drift must be finite");
            },
            [&](const target::PointMass& d) {
                need(d.time > 0.0 && std::isfinite(d.time), "point mass requires time > 0 (ξ > 0 required)");
            },
            [&](const target::Mixture& d) {
                need(!d.weights.empty(), "mixture needs at least one component");
                need(d.weights.size() == d.components.size(), "mixture weights/components mismatch");
                double sum = 0.0;
                for (double w : d.weights) {
                    need(w >= 0.0 && std::isfinite(w), "mixture weights must be nonnegative");
                    sum += w;
                }
                if (std::abs(sum - 1.0) > 1e-12) {
                    std::ostringstream msg;
                    msg << "weights sum " << sum;
                    out.push_back(where + msg.str());
                }
                for (std::size_t i = 0; i < d.components.size(); ++i)
                    validate_params(d.components[i], where + "component " + std::to_string(i) + ": ", out);
            },
            [&](const target::Empirical& d) {
                need(d.sorted && !d.sorted->empty(), "empirical target needs at least one sample");
                if (!d.sorted) return;
                bool positive = true;
                for (double x : *d.sorted) positive = positive && x > 0.0 && std::isfinite(x);
                need(positive, "ξ > 0 required (empirical samples must be positive and finite)");
            },
        },
        target.kind());
}

} // namespace

// ------------------------------------------------------------- factories

TargetDistribution TargetDistribution::exponential(double rate) {
    return TargetDistribution(target::Exponential{rate});
}
TargetDistribution TargetDistribution::weibull(double shape, double scale) {
    return TargetDistribution(target::Weibull{shape, scale});
}
TargetDistribution TargetDistribution::levy_hitting(double level) {
    return TargetDistribution(target::LevyHitting{level});
}
TargetDistribution TargetDistribution::inverse_gaussian_hitting(double level, double drift) {
    return TargetDistribution(target::InverseGaussianHitting{level, drift});
}
TargetDistribution TargetDistribution::point_mass(double time) {
    return TargetDistribution(target::PointMass{time});
}
TargetDistribution TargetDistribution::mixture(std::vector<double> weights,
                                               std::vector<TargetDistribution> components) {
    return TargetDistribution(target::Mixture{std::move(weights), std::move(components)});
}
TargetDistribution TargetDistribution::empirical(std::vector<double> samples) {
    std::sort(samples.begin(), samples.end());
    return TargetDistribution(
        target::Empirical{std::make_shared<const std::vector<double>>(std::move(samples))});
}

// ------------------------------------------------------------- evaluation

double survival(const TargetDistribution& target, double t) {
    if (t < 0.0) return 1.0;
    return std::visit(
        overloaded{
            [&](const target::Exponential& d) { return std::exp(-d.rate * t); },
            [&](const target::Weibull& d) { return std::exp(-std::pow(t / d.scale, d.shape)); },
            [&](const target::LevyHitting& d) {
                return t <= 0.0 ? 1.0 : 1.0 - 2.0 * normal_cdf(-d.level / std::sqrt(t));
            },
            [&](const target::InverseGaussianHitting& d) {
                return 1.0 - bm_linear_boundary_cdf(d.level, d.drift, t);
            },
            [&](const target::PointMass& d) { return t < d.time ? 1.0 : 0.0; },
            [&](const target::Mixture& d) {
                double s = 0.0;
                for (std::size_t i = 0; i < d.weights.size(); ++i)
                    s += d.weights[i] * survival(d.components[i], t);
                return s;
            },
            [&](const target::Empirical& d) {
                const auto& v = *d.sorted;
                const auto above = v.end() - std::upper_bound(v.begin(), v.end(), t);
                return static_cast<double>(above) / static_cast<double>(v.size());
            },
        },
        target.kind());
}

double survival_left(const TargetDistribution& target, double t) {
    return std::visit(
        overloaded{
            [&](const target::PointMass& d) { return t <= d.time ? 1.0 : 0.0; },
            [&](const target::Mixture& d) {
                double s = 0.0;
                for (std::size_t i = 0; i < d.weights.size(); ++i)
                    s += d.weights[i] * survival_left(d.components[i], t);
                return s;
            },
            [&](const target::Empirical& d) {
                const auto& v = *d.sorted;
                const auto at_or_above = v.end() - std::lower_bound(v.begin(), v.end(), t);
                return static_cast<double>(at_or_above) / static_cast<double>(v.size());
            },
            [&](const auto&) { return survival(target, t); },
        },
        target.kind());
}

double sup_support_time(const TargetDistribution& target) {
    return std::visit(overloaded{
                          [](const target::PointMass& d) { return d.time; },
                          [](const target::Mixture& d) {
                              double best = 0.0;
                              for (std::size_t i = 0; i < d.weights.size(); ++i)
                                  if (d.weights[i] > 0.0)
                                      best = std::max(best, sup_support_time(d.components[i]));
                              return best;
                          },
                          [](const target::Empirical& d) { return d.sorted->back(); },
                          [](const auto&) { return kInf; },
                      },
                      target.kind());
}

std::vector<std::pair<double, double>> atoms(const TargetDistribution& target) {
    std::map<double, double> acc;
    collect_atoms(target, 1.0, acc);
    std::vector<std::pair<double, double>> out;
    for (auto [t, m] : acc)
        if (m > 0.0) out.emplace_back(t, m);
    return out;
}

double defect_mass(const TargetDistribution& target) {
    return std::visit(overloaded{
                          [](const target::InverseGaussianHitting& d) {
                              return d.drift > 0.0 ? 1.0 - std::exp(-2.0 * d.drift * d.level) : 0.0;
                          },
                          [](const target::Mixture& d) {
                              double m = 0.0;
                              for (std::size_t i = 0; i < d.weights.size(); ++i)
                                  m += d.weights[i] * defect_mass(d.components[i]);
                              return m;
                          },
                          [](const auto&) { return 0.0; },
                      },
                      target.kind());
}

std::vector<double> sample(const TargetDistribution& target, std::size_t n, std::uint64_t seed) {
    if (n == 0) throw InputError("sample: n must be at least 1");
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        KeyedStream rng(seed, StreamTag::target, i, 0);
        out[i] = draw_one(target, rng);
    }
    return out;
}

std::vector<std::string> validate(const TargetDistribution& target) {
    std::vector<std::string> out;
    validate_params(target, "", out);
    if (!out.empty()) return out;

    if (std::abs(survival(target, 0.0) - 1.0) > 1e-12) out.push_back("S(0) must equal 1 (ξ > 0)");

    std::vector<double> probe;
    for (double t = 1e-6; t <= 1e6; t *= 1.05) probe.push_back(t);
    const auto at = atoms(target);
    for (auto [t, m] : at) {
        probe.push_back(t);
        probe.push_back(t * (1 - 1e-9));
        probe.push_back(t * (1 + 1e-9));
    }
    std::sort(probe.begin(), probe.end());
    double prev = survival(target, 0.0);
    for (double t : probe) {
        const double s = survival(target, t);
        if (s > prev + 1e-12) {
            std::ostringstream msg;
            msg << "survival increases at t=" << t;
            out.push_back(msg.str());
            break;
        }
        if (s < -1e-12 || s > 1.0 + 1e-12) {
            out.push_back("survival outside [0,1]");
            break;
        }
        prev = s;
    }
    for (auto [t, m] : at) {
        const double jump = survival_left(target, t) - survival(target, t);
        if (std::abs(jump - m) > 1e-9) {
            std::ostringstream msg;
            msg << "atom at t=" << t << " has mass " << m << " but survival jumps by " << jump;
            out.push_back(msg.str());
        }
    }
    return out;
}

std::string describe(const TargetDistribution& target) {
    std::ostringstream os;
    std::visit(overloaded{
                   [&](const target::Exponential& d) { os << "Exp(rate=" << d.rate << ")"; },
                   [&](const target::Weibull& d) {
                       os << "Weibull(shape=" << d.shape << ", scale=" << d.scale << ")";
                   },
                   [&](const target::LevyHitting& d) { os << "LevyHitting(c=" << d.level << ")"; },
                   [&](const target::InverseGaussianHitting& d) {
                       os << "InverseGaussianHitting(c=" << d.level << ", gamma=" << d.drift << ")";
                   },
                   [&](const target::PointMass& d) { os << "PointMass(" << d.time << ")"; },
                   [&](const target::Mixture& d) {
                       os << "Mixture{";
                       for (std::size_t i = 0; i < d.weights.size(); ++i)
                           os << (i ? ", " : "") << d.weights[i] << "*" << describe(d.components[i]);
                       os << "}";
                   },
                   [&](const target::Empirical& d) {
                       os << "Empirical(n=" << d.sorted->size() << ")";
                   },
               },
               target.kind());
    return os.str();
}

} // namespace ifpt
