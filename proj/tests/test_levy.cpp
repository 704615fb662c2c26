#include "ifpt/error.hpp"
#include "ifpt/levy.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/ooura_fourier_integrals.hpp>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <doctest.h>

#include <cmath>
#include <complex>
#include <functional>

using namespace ifpt;
using cplx = std::complex<double>;

namespace {

// psi contribution of a density g on (0, inf) at theta. Near part by
// tanh-sinh on (0,1); the tail shifted to (0, inf) and split into Ooura
// sine/cosine transforms.
cplx oracle_exponent(const std::function<double(double)>& g, double theta) {
    if (theta == 0.0) return 0.0;
    boost::math::quadrature::tanh_sinh<double> ts;
    auto odd_rest = [](double u) { return std::abs(u) < 1e-3 ? u * u * u / 6 * (1 - u * u / 20) : u - std::sin(u); };
    auto safe = [](double v) { return std::isfinite(v) ? v : 0.0; };
    const double re_near = ts.integrate([&](double x) { return safe(2 * std::pow(std::sin(theta * x / 2), 2) * g(x)); }, 0.0, 1.0);
    const double im_near = ts.integrate([&](double x) { return safe(odd_rest(theta * x) * g(x)); }, 0.0, 1.0);

    const double w = std::abs(theta), sgn = theta > 0 ? 1.0 : -1.0;
    boost::math::quadrature::ooura_fourier_cos<double> fc;
    boost::math::quadrature::ooura_fourier_sin<double> fs;
    auto h = [&](double y) { return g(1.0 + y); };
    const double ic = fc.integrate(h, w).first; // int h(y) cos(w y)
    const double is = fs.integrate(h, w).first; // int h(y) sin(w y)
    const double mass = boost::math::quadrature::exp_sinh<double>().integrate(h, 0.0, INFINITY);
    // cos(theta (1+y)) = cos(w) cos(w y) - sin(w) sin(w y); sin(theta(1+y)) = sgn [sin(w) cos(w y) + cos(w) sin(w y)]
    const double cos_part = std::cos(w) * ic - std::sin(w) * is;
    const double sin_part = sgn * (std::sin(w) * ic + std::cos(w) * is);
    return {re_near + mass - cos_part, im_near - sin_part};
}

cplx oracle_component(const levy::Component& c, double theta) {
    if (const auto* s = std::get_if<levy::OneSidedStable>(&c)) {
        const double th = s->side == levy::Side::positive ? theta : -theta;
        return oracle_exponent([=](double x) { return s->intensity * std::exp(-s->tempering * x) * std::pow(x, -1 - s->alpha); }, th);
    }
    const auto& g = std::get<levy::GammaMeasure>(c);
    const double th = g.side == levy::Side::positive ? theta : -theta;
    return oracle_exponent([=](double x) { return g.shape * std::exp(-g.rate * x) / x; }, th);
}

// Direct quadrature of the small-jump statistics of a positive density.
SmallJumpStats oracle_stats(const std::function<double(double)>& g, double eta) {
    boost::math::quadrature::tanh_sinh<double> ts;
    SmallJumpStats s;
    s.rate_ge_eta = boost::math::quadrature::exp_sinh<double>().integrate(g, eta, INFINITY);
    s.mean_truncated = ts.integrate([&](double x) { return x * g(x); }, eta, 1.0);
    s.variance_lt_eta = ts.integrate(
        [&](double x) {
            const double v = x * x * g(x);
            return std::isfinite(v) ? v : 0.0;
        },
        0.0, eta);
    return s;
}

LevyTriple triple_of(double a, double sigma2, std::vector<levy::Component> comps) {
    return LevyTriple{a, sigma2, LevyMeasureSpec{std::move(comps)}};
}

} // namespace

TEST_SUITE("levy") {

TEST_CASE("characteristic exponent: closed cases") {
    for (double th : {-2.0, -0.3, 0.7, 3.0}) {
        const auto g = levy_char_exponent(triple_of(0, 1, {}), th);
        CHECK(g.real() == doctest::Approx(th * th / 2));
        CHECK(g.imag() == doctest::Approx(0.0));
        const auto p = levy_char_exponent(triple_of(0, 0, {levy::FiniteAtoms{{{2.0, 1.0}}}}), th);
        const cplx expect = 1.0 - std::exp(cplx(0, 2 * th));
        CHECK(std::abs(p - expect) < 1e-14);
        const auto d = levy_char_exponent(triple_of(0.7, 0, {}), th);
        CHECK(d.imag() == doctest::Approx(0.7 * th));
    }
    // small atom is compensated: 1 - e^{i theta x} + i theta x
    const auto s = levy_char_exponent(triple_of(0, 0, {levy::FiniteAtoms{{{-0.5, 2.0}}}}), 1.3);
    CHECK(std::abs(s - 2.0 * (1.0 - std::exp(cplx(0, -0.65)) + cplx(0, -0.65))) < 1e-14);
}

TEST_CASE("characteristic exponent vanishes at zero") {
    const std::vector<LevyTriple> triples{
        triple_of(1, 1, {}),
        triple_of(0.3, 0.2, {levy::FiniteAtoms{{{1.0, 2.0}, {-0.5, 1.0}}}}),
        triple_of(0, 0, {levy::OneSidedStable{levy::Side::positive, 0.5, 0.5, 1.0}}),
        triple_of(0, 0, {levy::OneSidedStable{levy::Side::negative, 1.5, 1.0, 0.0}}),
        triple_of(0, 0, {levy::GammaMeasure{levy::Side::negative, 1.0, 1.0}})};
    for (const auto& t : triples) CHECK(levy_char_exponent(t, 0.0) == cplx(0, 0));
}

TEST_CASE("characteristic exponent of density components matches quadrature") {
    const std::vector<levy::Component> comps{
        levy::OneSidedStable{levy::Side::positive, 0.5, 0.5, 0.0},
        levy::OneSidedStable{levy::Side::negative, 0.5, 0.5, 0.0},
        levy::OneSidedStable{levy::Side::positive, 0.3, 1.2, 0.0},
        levy::OneSidedStable{levy::Side::positive, 1.0, 0.8, 0.0},
        levy::OneSidedStable{levy::Side::negative, 1.0, 0.8, 0.0},
        levy::OneSidedStable{levy::Side::positive, 1.5, 0.6, 0.0},
        levy::OneSidedStable{levy::Side::negative, 1.7, 0.3, 0.0},
        levy::OneSidedStable{levy::Side::positive, 0.5, 0.5, 1.0},
        levy::OneSidedStable{levy::Side::negative, 1.4, 0.5, 2.0},
        levy::GammaMeasure{levy::Side::positive, 1.0, 1.0},
        levy::GammaMeasure{levy::Side::negative, 2.5, 0.7}};
    for (const auto& c : comps) {
        for (double th : {-2.0, -1.0, 0.5, 1.0, 2.0}) {
            const cplx got = levy_char_exponent(triple_of(0, 0, {c}), th);
            const cplx want = oracle_component(c, th);
            CAPTURE(th);
            CAPTURE(got);
            CAPTURE(want);
            CHECK(std::abs(got - want) < 1e-7 * std::max(1.0, std::abs(want)));
        }
    }
}

TEST_CASE("small jump statistics of atoms") {
    const auto a = small_jump_stats(LevyMeasureSpec{{levy::FiniteAtoms{{{0.5, 2.0}}}}}, 0.25);
    CHECK(a.rate_ge_eta == 2.0);
    CHECK(a.mean_truncated == 1.0);
    CHECK(a.variance_lt_eta == 0.0);
    const auto b = small_jump_stats(LevyMeasureSpec{{levy::FiniteAtoms{{{0.1, 10.0}}}}}, 0.25);
    CHECK(b.rate_ge_eta == 0.0);
    CHECK(b.mean_truncated == 0.0);
    CHECK(b.variance_lt_eta == doctest::Approx(0.1));
    CHECK_THROWS_AS(small_jump_stats(LevyMeasureSpec{}, 0.0), InputError);
    CHECK_THROWS_AS(small_jump_stats(LevyMeasureSpec{}, 1.0), InputError);
}

TEST_CASE("small jump statistics of densities match quadrature") {
    struct Case {
        levy::Component comp;
        std::function<double(double)> density; // on (0, inf), mirrored for negative sides
        double sign;
    };
    const std::vector<Case> cases{
        {levy::OneSidedStable{levy::Side::positive, 0.5, 0.5, 0.0}, [](double x) { return 0.5 * std::pow(x, -1.5); }, 1},
        {levy::OneSidedStable{levy::Side::negative, 1.0, 0.8, 0.0}, [](double x) { return 0.8 / (x * x); }, -1},
        {levy::OneSidedStable{levy::Side::positive, 1.5, 0.6, 0.0}, [](double x) { return 0.6 * std::pow(x, -2.5); }, 1},
        {levy::OneSidedStable{levy::Side::positive, 0.5, 0.5, 1.0},
         [](double x) { return 0.5 * std::exp(-x) * std::pow(x, -1.5); }, 1},
        {levy::GammaMeasure{levy::Side::negative, 1.0, 1.0}, [](double x) { return std::exp(-x) / x; }, -1},
        {levy::GammaMeasure{levy::Side::positive, 2.0, 3.0}, [](double x) { return 2.0 * std::exp(-3 * x) / x; }, 1}};
    for (const auto& c : cases) {
        for (double eta : {0.01, 0.1, 0.5}) {
            const auto got = small_jump_stats(LevyMeasureSpec{{c.comp}}, eta);
            const auto want = oracle_stats(c.density, eta);
            CAPTURE(eta);
            CHECK(got.rate_ge_eta == doctest::Approx(want.rate_ge_eta).epsilon(1e-8));
            CHECK(got.mean_truncated == doctest::Approx(c.sign * want.mean_truncated).epsilon(1e-8));
            CHECK(got.variance_lt_eta == doctest::Approx(want.variance_lt_eta).epsilon(1e-8));
        }
    }
}

TEST_CASE("second moment below one does not depend on eta") {
    const LevyMeasureSpec m{{levy::FiniteAtoms{{{0.05, 3.0}, {0.3, 1.0}, {-0.7, 2.0}}},
                             levy::OneSidedStable{levy::Side::positive, 1.2, 0.4, 0.5}}};
    boost::math::quadrature::tanh_sinh<double> ts;
    auto total = [&](double eta) {
        double s = small_jump_stats(m, eta).variance_lt_eta;
        for (auto [x, r] : std::vector<std::pair<double, double>>{{0.05, 3.0}, {0.3, 1.0}, {-0.7, 2.0}})
            if (std::abs(x) >= eta) s += x * x * r;
        s += ts.integrate([](double x) { return x * x * 0.4 * std::exp(-0.5 * x) * std::pow(x, -2.2); }, eta, 1.0);
        return s;
    };
    const double ref = total(0.01);
    for (double eta : {0.02, 0.1, 0.25, 0.6, 0.9}) CHECK(total(eta) == doctest::Approx(ref).epsilon(1e-9));
}

TEST_CASE("classifier examples") {
    const auto bm = classify_levy(triple_of(0, 1, {}));
    CHECK(bm.existence_diffuse);
    CHECK(bm.unbounded_variation);
    CHECK(bm.uniqueness == Uniqueness::full_interval);

    const auto gam = classify_levy(triple_of(0, 0, {levy::GammaMeasure{levy::Side::negative, 1.0, 1.0}}));
    CHECK(gam.existence_diffuse);
    CHECK(gam.infinite_activity);
    CHECK_FALSE(gam.unbounded_variation);
    CHECK(gam.zero_in_supp);
    CHECK(gam.neg_mass);
    CHECK_FALSE(gam.pos_mass);
    CHECK(gam.uniqueness == Uniqueness::support_only);
    CHECK(gam.i_xi_description == "supp(ξ) ∩ (0, t^ξ)");

    const auto poi = classify_levy(triple_of(0, 0, {levy::FiniteAtoms{{{1.0, 1.0}}}}));
    CHECK_FALSE(poi.existence_diffuse);
    CHECK_FALSE(poi.zero_in_supp);
    CHECK(poi.pos_mass);
    CHECK(poi.uniqueness == Uniqueness::unknown);

    for (double alpha : {1.1, 1.5, 1.9}) {
        const auto c = classify_levy(triple_of(0, 0, {levy::OneSidedStable{levy::Side::negative, alpha, 1.0, 0.0}}));
        CHECK(c.unbounded_variation);
        CHECK(c.uniqueness == Uniqueness::full_interval);
    }
    for (double alpha : {0.1, 0.5, 0.9}) {
        const auto c = classify_levy(triple_of(0, 0, {levy::OneSidedStable{levy::Side::negative, alpha, 1.0, 0.0}}));
        CHECK_FALSE(c.unbounded_variation);
        CHECK(c.uniqueness == Uniqueness::support_only);
        const auto p = classify_levy(triple_of(0, 0, {levy::OneSidedStable{levy::Side::positive, alpha, 1.0, 0.3}}));
        CHECK_FALSE(p.unbounded_variation);
        CHECK(p.uniqueness == Uniqueness::full_interval);
    }
}

TEST_CASE("classifier biconditionals") {
    std::vector<std::vector<levy::Component>> measures{
        {},
        {levy::FiniteAtoms{{{1.0, 1.0}}}},
        {levy::FiniteAtoms{{{-1.0, 1.0}, {0.3, 2.0}}}},
        {levy::GammaMeasure{levy::Side::positive, 1, 1}},
        {levy::GammaMeasure{levy::Side::negative, 1, 1}, levy::FiniteAtoms{{{2.0, 1.0}}}},
        {levy::OneSidedStable{levy::Side::negative, 0.5, 1, 0}},
        {levy::OneSidedStable{levy::Side::negative, 1.0, 1, 0}},
        {levy::OneSidedStable{levy::Side::positive, 1.5, 1, 2}}};
    for (const auto& m : measures)
        for (double s2 : {0.0, 0.5}) {
            const auto c = classify_levy(triple_of(0, s2, m));
            const bool full = c.unbounded_variation || (c.zero_in_supp && c.pos_mass);
            CHECK((c.uniqueness == Uniqueness::full_interval) == full);
            CHECK((c.uniqueness == Uniqueness::support_only) == (!full && c.zero_in_supp && c.neg_mass));
            CHECK(c.existence_diffuse == (s2 > 0 || c.infinite_activity));
        }
}

TEST_CASE("measure validation") {
    CHECK_THROWS_AS(validate_measure(LevyMeasureSpec{{levy::FiniteAtoms{{{0.0, 1.0}}}}}), InputError);
    CHECK_THROWS_AS(validate_measure(LevyMeasureSpec{{levy::FiniteAtoms{{{1.0, -1.0}}}}}), InputError);
    CHECK_THROWS_AS(validate_measure(LevyMeasureSpec{{levy::OneSidedStable{levy::Side::positive, 2.0, 1, 0}}}), InputError);
    CHECK_THROWS_AS(validate_measure(LevyMeasureSpec{{levy::OneSidedStable{levy::Side::positive, 0.5, 0, 0}}}), InputError);
    CHECK_THROWS_AS(validate_measure(LevyMeasureSpec{{levy::OneSidedStable{levy::Side::positive, 0.5, 1, -1}}}), InputError);
    CHECK_THROWS_AS(validate_measure(LevyMeasureSpec{{levy::GammaMeasure{levy::Side::positive, 0, 1}}}), InputError);
    CHECK_NOTHROW(validate_measure(LevyMeasureSpec{{levy::GammaMeasure{levy::Side::positive, 1, 1}}}));
}

}
