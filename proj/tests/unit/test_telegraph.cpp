#include <catch_amalgamated.hpp>

#include "linform/errors.hpp"
#include "linform/telegraph.hpp"

#include <cmath>
#include <random>

using namespace linform;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Plain 50-term power series in long double, independent of the library.
long double series_i(int order, long double z) {
    long double sum = 0.0L;
    for (int k = 0; k < 50; ++k) {
        sum += std::pow(z / 2.0L, 2 * k + order) / (std::tgamma(k + 1.0L) * std::tgamma(k + order + 1.0L));
    }
    return sum;
}

// Closed-form AC density written out from the Bessel series oracle.
double density_oracle(double rate, double speed, double x0, double x, double t) {
    const double r = std::sqrt(speed * speed * t * t - (x - x0) * (x - x0));
    const long double z = rate / speed * r;
    const long double i0 = series_i(0, z);
    const long double i1_over_r = r > 0 ? series_i(1, z) / r : rate / (2.0L * speed);
    return static_cast<double>(std::exp(-rate * t) / (2.0 * speed) * (rate * i0 + rate * speed * t * i1_over_r));
}

}  // namespace

TEST_CASE("modified Bessel functions against the series oracle") {
    CHECK(bessel_i0(0.0) == 1.0);
    CHECK(bessel_i1(0.0) == 0.0);
    CHECK_THAT(bessel_i0(1.0), WithinAbs(1.2660658777520, 1e-12));
    CHECK_THAT(bessel_i0(2.0), WithinAbs(2.2795853023360, 1e-12));
    CHECK_THAT(bessel_i1(1.0), WithinAbs(0.5651591039924, 1e-12));
    CHECK(bessel_i1_over_z(0.0) == 0.5);
    for (double z : {0.01, 0.3, 1.0, 4.5, 12.0, 40.0}) {
        INFO(z);
        CHECK_THAT(bessel_i0(z), WithinRel(static_cast<double>(series_i(0, z)), 1e-13));
        CHECK_THAT(bessel_i1(z), WithinRel(static_cast<double>(series_i(1, z)), 1e-13));
        CHECK_THAT(bessel_i1_over_z(z), WithinRel(static_cast<double>(series_i(1, z) / z), 1e-13));
    }
}

TEST_CASE("I0' = I1 by central differences") {
    const double h = 1e-6;
    CHECK_THAT((bessel_i0(1.0 + h) - bessel_i0(1.0 - h)) / (2 * h), WithinAbs(bessel_i1(1.0), 1e-8));
}

TEST_CASE("singular weight") {
    CHECK(singular_weight({1.0, 1.0, 0.0}, 0.0) == 0.5);
    CHECK_THAT(singular_weight({1.0, 1.0, 0.0}, 1.0), WithinRel(std::exp(-1.0) / 2, 1e-15));
    CHECK_THAT(singular_weight({2.0, 1.0, 0.0}, std::log(2.0)), WithinRel(0.125, 1e-14));
}

TEST_CASE("AC density values") {
    const TelegraphParams p{1.3, 0.7, 0.4};
    const double t = 1.5;
    CHECK(density_ac(p, 0.4 + 0.7 * t + 1e-9, t) == 0.0);
    CHECK(density_ac(p, 0.4 - 0.7 * t - 1.0, t) == 0.0);
    const double centre = p.rate * std::exp(-p.rate * t) / (2 * p.speed) *
                          static_cast<double>(series_i(0, p.rate * t) + series_i(1, p.rate * t));
    CHECK_THAT(density_ac(p, p.start, t), WithinRel(centre, 1e-12));
    for (double x : {-0.6, -0.1, 0.4, 0.9, 1.3}) {
        INFO(x);
        CHECK_THAT(density_ac(p, x, t), WithinRel(density_oracle(p.rate, p.speed, p.start, x, t), 1e-12));
    }
    CHECK_THROWS_AS(density_ac(p, 0.0, 0.0), Error);
}

TEST_CASE("AC mass") {
    CHECK_THAT(ac_mass({1.0, 1.0, 0.0}, 1.0), WithinAbs(0.6321205588, 1e-9));
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.1, 5.0);
    for (int i = 0; i < 25; ++i) {
        const TelegraphParams p{u(rng), u(rng), 0.0};
        const double t = u(rng);
        INFO(p.rate << " " << p.speed << " " << t);
        CHECK_THAT(2 * singular_weight(p, t) + ac_mass(p, t), WithinAbs(1.0, 1e-6));
    }
}

TEST_CASE("telegraph characteristic function") {
    const TelegraphParams p{1.0, 2.0, 0.3};
    for (double t : {0.0, 0.5, 2.0}) CHECK(std::abs(char_fn(p, 0.0, t) - 1.0) < 1e-14);
    CHECK(std::abs(char_fn(p, 1.7, 0.0) - std::polar(1.0, 1.7 * 0.3)) < 1e-15);

    // Branch point |alpha| = rate/speed: the sinh(t D)/D -> t limit.
    const double t = 1.2;
    const auto at_branch = char_fn(p, 0.5, t);
    const auto expect = std::polar(1.0, 0.5 * 0.3) * std::exp(-t) * (1.0 + t);
    CHECK(std::abs(at_branch - expect) < 1e-12);
    const double d = 1e-6;
    const double near = std::exp(-t) * (std::cosh(t * d) + std::sinh(t * d) / d);
    CHECK_THAT(damped_factor(1.0, 2.0, std::sqrt(0.25 - d * d / 4.0), t), WithinAbs(near, 1e-9));
}

TEST_CASE("CF is the Fourier transform of atoms plus density") {
    const TelegraphParams p{0.8, 1.5, -0.2};
    const double t = 1.1;
    const double lo = p.start - p.speed * t, hi = p.start + p.speed * t;
    for (double alpha : {0.3, 1.0, 2.5}) {
        const double re = integrate([&](double x) { return std::cos(alpha * x) * density_ac(p, x, t); }, lo, hi);
        const double im = integrate([&](double x) { return std::sin(alpha * x) * density_ac(p, x, t); }, lo, hi);
        const auto atoms = singular_weight(p, t) * (std::polar(1.0, alpha * lo) + std::polar(1.0, alpha * hi));
        CHECK(std::abs(std::complex<double>(re, im) + atoms - char_fn(p, alpha, t)) < 1e-9);
    }
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(TelegraphParams({0.0, 1.0, 0.0}).validate(), Error);
    CHECK_THROWS_AS(TelegraphParams({1.0, -1.0, 0.0}).validate(), Error);
    CHECK_THROWS_AS(TelegraphParams({1.0, std::nan(""), 0.0}).validate(), Error);
}

TEST_CASE("quadrature converges on narrow intervals") {
    double err = 1.0;
    const double b = 1.0 + 1e-6;
    const double w = b - 1.0;  // the representable width
    const double v = integrate([](double x) { return x * x; }, 1.0, b, 1e-12, &err);
    CHECK_THAT(v, WithinRel(w + w * w + w * w * w / 3.0, 1e-12));
    CHECK(err < 1e-18);
    CHECK(integrate([](double) { return 1.0; }, 2.0, 2.0) == 0.0);
    CHECK_THAT(integrate([](double x) { return std::exp(x); }, 1.0, 0.0), WithinRel(1.0 - std::exp(1.0), 1e-13));
}
