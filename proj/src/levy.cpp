#include "ifpt/levy.hpp"

#include "ifpt/error.hpp"
#include "ifpt/quadrature.hpp"

#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <numbers>

namespace ifpt {

namespace {

using cplx = std::complex<double>;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kQuadTol = 1e-10;

double sign_of(levy::Side s) { return s == levy::Side::positive ? 1.0 : -1.0; }

// 1 - cos(y) without cancellation.
double one_minus_cos(double y) {
    const double s = std::sin(0.5 * y);
    return 2.0 * s * s;
}

// y - sin(y) without cancellation.
double y_minus_sin(double y) {
    if (std::abs(y) < 0.1) {
        const double y2 = y * y;
        return y * y2 / 6.0 * (1.0 - y2 / 20.0 * (1.0 - y2 / 42.0 * (1.0 - y2 / 72.0)));
    }
    return y - std::sin(y);
}

// psi contribution of a density nu on (0, inf), evaluated at theta, with the
// compensator i theta x 1_{x<1}.
template <class Density>
cplx positive_density_exponent(Density nu, double theta) {
    if (theta == 0.0) return {0.0, 0.0};
    // Both near-zero integrands vanish like x^(1-alpha); tanh_sinh probes
    // abscissae where nu overflows.
    auto finite_or_zero = [](double v) { return std::isfinite(v) ? v : 0.0; };
    const double re_near =
        quad::finite([&](double x) { return finite_or_zero(one_minus_cos(theta * x) * nu(x)); }, 0.0, 1.0,
                     kQuadTol)
            .value;
    const double im_near =
        quad::finite([&](double x) { return finite_or_zero(y_minus_sin(theta * x) * nu(x)); }, 0.0, 1.0,
                     kQuadTol)
            .value;
    const double re_far =
        quad::to_infinity([&](double x) { return one_minus_cos(theta * x) * nu(x); }, 1.0, kQuadTol).value;
    const double im_far =
        quad::to_infinity([&](double x) { return -std::sin(theta * x) * nu(x); }, 1.0, kQuadTol).value;
    return {re_near + re_far, im_near + im_far};
}

cplx stable_exponent(const levy::OneSidedStable& s, double theta) {
    // Mirror image: a measure on (-inf,0) at theta equals its reflection at -theta.
    const double th = sign_of(s.side) * theta;
    if (th == 0.0) return {0.0, 0.0};
    const double c = s.intensity;
    const double alpha = s.alpha;
    if (s.tempering > 0.0) {
        const double lambda = s.tempering;
        return positive_density_exponent(
            [=](double x) { return c * std::exp(-lambda * x) * std::pow(x, -1.0 - alpha); }, th);
    }
    const double abs_th = std::abs(th);
    if (alpha == 1.0) {
        return c * cplx(std::numbers::pi * abs_th / 2.0,
                        th * (std::log(abs_th) + std::numbers::egamma - 1.0));
    }
    // (-i theta)^alpha on the principal branch.
    const cplx power = std::pow(abs_th, alpha) *
                       std::exp(cplx(0.0, -(th > 0 ? 1.0 : -1.0) * std::numbers::pi * alpha / 2.0));
    if (alpha < 1.0) {
        return c * (std::tgamma(1.0 - alpha) / alpha * power + cplx(0.0, th / (1.0 - alpha)));
    }
    return c * (-std::tgamma(-alpha) * power - cplx(0.0, th / (alpha - 1.0)));
}

cplx gamma_exponent(const levy::GammaMeasure& g, double theta) {
    const double th = sign_of(g.side) * theta;
    // Frullani integral plus the compensator over (0,1).
    return g.shape * std::log(cplx(1.0, -th / g.rate)) +
           cplx(0.0, th * g.shape * (-std::expm1(-g.rate)) / g.rate);
}

SmallJumpStats stable_stats(const levy::OneSidedStable& s, double eta) {
    const double c = s.intensity;
    const double alpha = s.alpha;
    const double sgn = sign_of(s.side);
    SmallJumpStats out;
    if (s.tempering == 0.0) {
        out.rate_ge_eta = c * std::pow(eta, -alpha) / alpha;
        if (alpha == 1.0) out.mean_truncated = -c * std::log(eta);
        else out.mean_truncated = c * (1.0 - std::pow(eta, 1.0 - alpha)) / (1.0 - alpha);
        out.variance_lt_eta = c * std::pow(eta, 2.0 - alpha) / (2.0 - alpha);
    } else {
        const double lambda = s.tempering;
        out.rate_ge_eta =
            quad::to_infinity([=](double x) { return c * std::exp(-lambda * x) * std::pow(x, -1.0 - alpha); },
                              eta, kQuadTol)
                .value;
        out.mean_truncated =
            quad::finite([=](double x) { return c * std::exp(-lambda * x) * std::pow(x, -alpha); }, eta,
                         1.0, kQuadTol)
                .value;
        out.variance_lt_eta =
            quad::finite([=](double x) { return c * std::exp(-lambda * x) * std::pow(x, 1.0 - alpha); },
                         0.0, eta, kQuadTol)
                .value;
    }
    out.mean_truncated *= sgn;
    return out;
}

SmallJumpStats gamma_stats(const levy::GammaMeasure& g, double eta) {
    SmallJumpStats out;
    out.rate_ge_eta = g.shape * boost::math::expint(1, g.rate * eta);
    out.mean_truncated =
        sign_of(g.side) * g.shape * (std::exp(-g.rate * eta) - std::exp(-g.rate)) / g.rate;
    // shape * int_0^eta x e^{-rate x} dx = shape * gamma_lower(2, rate*eta) / rate^2
    out.variance_lt_eta = g.shape * boost::math::gamma_p(2.0, g.rate * eta) / (g.rate * g.rate);
    return out;
}

} // namespace

void validate_measure(const LevyMeasureSpec& measure) {
    for (const auto& comp : measure.components) {
        std::visit(overloaded{
                       [](const levy::FiniteAtoms& a) {
                           for (auto [x, rate] : a.atoms) {
                               if (x == 0.0 || !std::isfinite(x))
                                   throw InputError("levy measure: atoms must sit at finite x != 0");
                               if (!(rate >= 0.0) || !std::isfinite(rate))
                                   throw InputError("levy measure: atom rates must be finite and >= 0");
                           }
                       },
                       [](const levy::OneSidedStable& s) {
                           if (!(s.alpha > 0.0 && s.alpha < 2.0))
                               throw InputError("levy measure: stable alpha must lie in (0,2)");
                           if (!(s.intensity > 0.0) || !std::isfinite(s.intensity))
                               throw InputError("levy measure: stable intensity must be positive");
                           if (!(s.tempering >= 0.0) || !std::isfinite(s.tempering))
                               throw InputError("levy measure: tempering must be >= 0");
                       },
                       [](const levy::GammaMeasure& g) {
                           if (!(g.shape > 0.0) || !std::isfinite(g.shape))
                               throw InputError("levy measure: gamma shape must be positive");
                           if (!(g.rate > 0.0) || !std::isfinite(g.rate))
                               throw InputError("levy measure: gamma rate must be positive");
                       },
                   },
                   comp);
    }
}

std::complex<double> levy_char_exponent(const LevyTriple& triple, double theta) {
    cplx psi(triple.sigma2 * theta * theta / 2.0, theta * triple.a);
    for (const auto& comp : triple.measure.components) {
        psi += std::visit(overloaded{
                              [&](const levy::FiniteAtoms& a) {
                                  cplx sum{};
                                  for (auto [x, rate] : a.atoms) {
                                      const double y = theta * x;
                                      const double comp_term = std::abs(x) < 1.0 ? y : 0.0;
                                      sum += rate * cplx(one_minus_cos(y), comp_term - std::sin(y));
                                  }
                                  return sum;
                              },
                              [&](const levy::OneSidedStable& s) { return stable_exponent(s, theta); },
                              [&](const levy::GammaMeasure& g) { return gamma_exponent(g, theta); },
                          },
                          comp);
    }
    return psi;
}

SmallJumpStats small_jump_stats(const LevyMeasureSpec& measure, double eta) {
    if (!(eta > 0.0 && eta < 1.0)) throw InputError("small_jump_stats: eta must lie in (0,1)");
    SmallJumpStats total;
    for (const auto& comp : measure.components) {
        const SmallJumpStats s =
            std::visit(overloaded{
                           [&](const levy::FiniteAtoms& a) {
                               SmallJumpStats out;
                               for (auto [x, rate] : a.atoms) {
                                   const double ax = std::abs(x);
                                   if (ax >= eta) out.rate_ge_eta += rate;
                                   if (ax >= eta && ax < 1.0) out.mean_truncated += x * rate;
                                   if (ax < eta) out.variance_lt_eta += x * x * rate;
                               }
                               return out;
                           },
                           [&](const levy::OneSidedStable& st) { return stable_stats(st, eta); },
                           [&](const levy::GammaMeasure& g) { return gamma_stats(g, eta); },
                       },
                       comp);
        total.rate_ge_eta += s.rate_ge_eta;
        total.mean_truncated += s.mean_truncated;
        total.variance_lt_eta += s.variance_lt_eta;
    }
    return total;
}

LevyClassification classify_levy(const LevyTriple& triple) {
    LevyClassification c;
    bool infinite_variation_integral = false;
    for (const auto& comp : triple.measure.components) {
        std::visit(overloaded{
                       [&](const levy::FiniteAtoms& a) {
                           // finitely many atoms cannot accumulate at 0
                           for (auto [x, rate] : a.atoms) {
                               if (rate <= 0.0) continue;
                               if (x > 0.0) c.pos_mass = true;
                               if (x < 0.0) c.neg_mass = true;
                           }
                       },
                       [&](const levy::OneSidedStable& s) {
                           c.infinite_activity = true;
                           c.zero_in_supp = true;
                           // int_0^1 x * x^{-1-alpha} dx diverges iff alpha >= 1
                           if (s.alpha >= 1.0) infinite_variation_integral = true;
                           (s.side == levy::Side::positive ? c.pos_mass : c.neg_mass) = true;
                       },
                       [&](const levy::GammaMeasure& g) {
                           c.infinite_activity = true;
                           c.zero_in_supp = true;
                           (g.side == levy::Side::positive ? c.pos_mass : c.neg_mass) = true;
                       },
                   },
                   comp);
    }
    c.unbounded_variation = triple.sigma2 > 0.0 || infinite_variation_integral;
    c.existence_diffuse = triple.sigma2 > 0.0 || c.infinite_activity;
    if (c.unbounded_variation || (c.zero_in_supp && c.pos_mass)) {
        c.uniqueness = Uniqueness::full_interval;
        c.i_xi_description = "(0, t^ξ)";
    } else if (c.zero_in_supp && c.neg_mass) {
        c.uniqueness = Uniqueness::support_only;
        c.i_xi_description = "supp(ξ) ∩ (0, t^ξ)";
    } else {
        c.uniqueness = Uniqueness::unknown;
        c.i_xi_description = "not determined";
    }
    return c;
}

std::string to_string(Uniqueness u) {
    switch (u) {
    case Uniqueness::full_interval: return "full_interval";
    case Uniqueness::support_only: return "support_only";
    case Uniqueness::unknown: return "unknown";
    }
    return "unknown";
}

} // namespace ifpt
