#include <catch_amalgamated.hpp>

#include "linform/errors.hpp"
#include "linform/operator_algebra.hpp"
#include "linform/telegraph.hpp"
#include "linform/verifier.hpp"

#include <cmath>
#include <random>

using namespace linform;
using Catch::Matchers::WithinAbs;

namespace {

Rational q(long p, long d = 1) {
    Rational r(p, d);
    r.canonicalize();
    return r;
}

ModelSpec random_spec(std::mt19937_64& rng, std::size_t n) {
    std::uniform_int_distribution<long> num(1, 9), den(1, 4), sgn(0, 1), start(-3, 3);
    std::vector<ExactComponent> comps;
    for (std::size_t k = 0; k < n; ++k) {
        comps.push_back({q(num(rng), den(rng)), q(num(rng), den(rng)), q(start(rng), 2),
                         q(num(rng) * (sgn(rng) ? 1 : -1), den(rng))});
    }
    return ModelSpec::from_exact(comps);
}

std::vector<double> alpha_grid(int count, double lo, double hi) {
    std::vector<double> out;
    for (int i = 0; i < count; ++i) out.push_back(lo + (hi - lo) * i / (count - 1));
    return out;
}

}  // namespace

TEST_CASE("symbol roots for n = 1, 2, 3") {
    std::mt19937_64 rng(21);
    for (std::size_t n = 1; n <= 3; ++n) {
        for (int trial = 0; trial < 4; ++trial) {
            const auto spec = random_spec(rng, n);
            const auto rep = symbol_root_check(spec, alpha_grid(50, -6.0, 6.0));
            INFO("n=" << n << " residual " << rep.max_residual);
            CHECK(rep.passed);
            CHECK(rep.status == CheckStatus::passed);
            CHECK(rep.max_residual < 1e-8);
        }
    }
}

TEST_CASE("zero frequency: the symbol has no constant term") {
    std::mt19937_64 rng(22);
    const auto spec = random_spec(rng, 2);
    CHECK(governing_operator(spec).coefficient(0, 0) == 0);
    const auto rep = symbol_root_check(spec, {0.0});
    CHECK(rep.passed);
}

TEST_CASE("single-process roots solve the telegraph quadratic") {
    const auto spec = ModelSpec::from_exact({{q(3, 2), q(2), q(0), q(1)}});
    const double rate = 1.5, c = 2.0;
    for (double alpha : {0.1, 0.75, 3.0}) {
        const std::complex<double> disc = std::sqrt(std::complex<double>(rate * rate - c * c * alpha * alpha));
        for (const auto s : {-rate + disc, -rate - disc}) {
            CHECK(std::abs(s * s + 2.0 * rate * s + c * c * alpha * alpha) < 1e-12);
        }
    }
    CHECK(symbol_root_check(spec, {0.1, 0.75, 3.0}).passed);
}

TEST_CASE("symbol check respects the component cap") {
    std::mt19937_64 rng(23);
    CHECK_THROWS_AS(symbol_root_check(random_spec(rng, 3), {1.0}, 1e-8, 2), Error);
}

TEST_CASE("Fourier system integration reproduces the CF") {
    std::mt19937_64 rng(24);
    for (std::size_t n = 1; n <= 3; ++n) {
        const auto spec = random_spec(rng, n);
        const auto rep = system_cf_check(spec, {0.5, 1.0, 2.0}, 1.0);
        INFO("n=" << n << " residual " << rep.max_residual);
        CHECK(rep.passed);
    }
    const auto one = ModelSpec::from_doubles({{1.0, 1.0, 0.5}}, {1.0});
    CHECK(system_cf_check(one, {0.0, 0.3}, 2.0, 1e-10).passed);
}

TEST_CASE("initial conditions of the pair CF") {
    std::mt19937_64 rng(25);
    std::uniform_real_distribution<double> u(0.2, 4.0);
    for (int trial = 0; trial < 10; ++trial) {
        const TelegraphParams p1{u(rng), u(rng), u(rng) - 2.0}, p2{u(rng), u(rng), u(rng) - 2.0};
        for (int sign : {1, -1}) {
            const auto rep = initial_condition_check(p1, p2, sign, alpha_grid(11, -3.0, 3.0));
            INFO("residual " << rep.max_residual);
            CHECK(rep.passed);
        }
    }
    CHECK_THROWS_AS(initial_condition_check({1, 1, 0}, {1, 1, 0}, 0, {1.0}), Error);
}

TEST_CASE("finite-difference operator application") {
    const auto T = OperatorPoly::T(), X = OperatorPoly::X();
    // Constant in x: only the pure-T part acts.
    const auto op = T * T + T.scaled(2) - X * X + (T * X).scaled(5);
    const auto f = [](double, double t) { return std::sin(t); };
    CHECK_THAT(apply_operator_fd(op, f, 0.3, 1.1, 0.01, 0.01), WithinAbs(-std::sin(1.1) + 2 * std::cos(1.1), 1e-9));

    // Seven-point fourth-order stencils are exact on low-degree polynomials.
    const auto g = [](double x, double t) { return x * x * x * t * t + x * x * x * x; };
    const auto op2 = (T * T * X).scaled(q(1, 2)) + X.pow(4) + OperatorPoly(3);
    const double x = 0.7, t = 1.3;
    const double expect = 0.5 * (6 * x * x) + 24.0 + 3 * g(x, t);
    CHECK_THAT(apply_operator_fd(op2, g, x, t, 0.1, 0.1), WithinAbs(expect, 1e-9));
}

TEST_CASE("residual of the operator on the density shrinks under refinement") {
    const auto one = ModelSpec::from_doubles({{1.0, 1.0, 0.0}}, {1.0});
    const auto r1 = fd_residual(one);
    INFO(r1.max_residual);
    CHECK(r1.status == CheckStatus::passed);
    CHECK(r1.advisory);

    const auto sym = ModelSpec::from_doubles({{1.0, 1.0, 0.0}, {1.0, 1.0, 0.0}}, {1.0, 1.0});
    const auto r2 = fd_residual(sym);
    INFO(r2.max_residual);
    CHECK(r2.status == CheckStatus::passed);
    CHECK(r2.max_residual < 1.0 / 2.8);

    std::mt19937_64 rng(26);
    CHECK_THROWS_AS(fd_residual(random_spec(rng, 3)), Error);
}

TEST_CASE("report bookkeeping") {
    VerificationReport rep;
    rep.tolerance = 1e-3;
    rep.record({1.0}, 5e-4);
    rep.record({2.0}, 2e-4);
    rep.finalize();
    CHECK(rep.max_residual == 5e-4);
    CHECK(rep.passed);
    CHECK(rep.details.size() == 2);
    rep.record({3.0}, 1.0);
    rep.finalize();
    CHECK_FALSE(rep.passed);
    CHECK(rep.status == CheckStatus::failed);
    CHECK(to_string(CheckStatus::inconclusive) == "inconclusive");
}
