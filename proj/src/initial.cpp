#include "ifpt/initial.hpp"

#include "ifpt/error.hpp"
#include "ifpt/rng.hpp"
#include "ifpt/special.hpp"

#include <algorithm>
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
} // namespace

InitialLaw InitialLaw::point(double x) {
    if (!std::isfinite(x)) throw InputError("initial point must be finite");
    return InitialLaw(init::Point{x});
}

InitialLaw InitialLaw::uniform(double a, double b) {
    if (!(a < b) || !std::isfinite(a) || !std::isfinite(b))
        throw InputError("initial uniform requires finite a < b");
    return InitialLaw(init::Uniform{a, b});
}

InitialLaw InitialLaw::normal(double mean, double sd) {
    if (!std::isfinite(mean) || !(sd > 0.0) || !std::isfinite(sd))
        throw InputError("initial normal requires finite mean and sd > 0");
    return InitialLaw(init::Normal{mean, sd});
}

InitialLaw InitialLaw::empirical(std::vector<double> samples) {
    if (samples.empty()) throw InputError("initial empirical law needs at least one sample");
    for (double x : samples)
        if (!std::isfinite(x)) throw InputError("initial empirical samples must be finite");
    std::sort(samples.begin(), samples.end());
    return InitialLaw(init::Empirical{std::make_shared<const std::vector<double>>(std::move(samples))});
}

double InitialLaw::quantile(double u) const {
    return std::visit(overloaded{
                          [](const init::Point& p) { return p.x; },
                          [u](const init::Uniform& d) { return d.a + (d.b - d.a) * u; },
                          [u](const init::Normal& d) { return d.mean + d.sd * normal_quantile(u); },
                          [u](const init::Empirical& d) {
                              const auto& s = *d.sorted;
                              const auto n = static_cast<double>(s.size());
                              const auto k = static_cast<std::size_t>(std::clamp(std::ceil(u * n), 1.0, n));
                              return s[k - 1];
                          },
                      },
                      kind_);
}

std::vector<double> InitialLaw::sample(std::size_t n, std::uint64_t seed) const {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        KeyedStream rng(seed, StreamTag::initial, i, 0);
        out[i] = quantile(rng.uniform());
    }
    return out;
}

std::string InitialLaw::describe() const {
    std::ostringstream os;
    std::visit(overloaded{
                   [&](const init::Point& p) { os << "point(" << p.x << ")"; },
                   [&](const init::Uniform& d) { os << "uniform(" << d.a << ", " << d.b << ")"; },
                   [&](const init::Normal& d) { os << "normal(" << d.mean << ", " << d.sd << ")"; },
                   [&](const init::Empirical& d) { os << "empirical(n=" << d.sorted->size() << ")"; },
               },
               kind_);
    return os.str();
}

} // namespace ifpt
