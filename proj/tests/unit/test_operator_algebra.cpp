#include <catch_amalgamated.hpp>

#include "linform/errors.hpp"
#include "linform/operator_algebra.hpp"
#include "linform/operator_poly.hpp"

#include <algorithm>
#include <numeric>
#include <random>

using namespace linform;

namespace {

const OperatorPoly T = OperatorPoly::T();
const OperatorPoly X = OperatorPoly::X();

Rational q(long p, long d = 1) {
    Rational r(p, d);
    r.canonicalize();
    return r;
}

Rational draw(std::mt19937_64& rng, long lo, long hi) {
    std::uniform_int_distribution<long> num(lo, hi), den(1, 6);
    return q(num(rng), den(rng));
}

Rational draw_positive(std::mt19937_64& rng) {
    std::uniform_int_distribution<long> num(1, 9), den(1, 5);
    return q(num(rng), den(rng));
}

OperatorPoly random_poly(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> count(0, 5), exp(0, 4);
    OperatorPoly p;
    for (int i = count(rng); i > 0; --i) {
        p += OperatorPoly::monomial(static_cast<unsigned>(exp(rng)), static_cast<unsigned>(exp(rng)), draw(rng, -9, 9));
    }
    return p;
}

ModelSpec random_spec(std::mt19937_64& rng, std::size_t n, bool unit_coefs = false) {
    std::vector<ExactComponent> comps;
    std::uniform_int_distribution<int> coin(0, 1);
    for (std::size_t k = 0; k < n; ++k) {
        Rational a = unit_coefs ? q(1) : draw(rng, 1, 5) * (coin(rng) ? 1 : -1);
        comps.push_back({draw_positive(rng), draw_positive(rng), draw(rng, -3, 3), a});
    }
    return ModelSpec::from_exact(comps);
}

// Written out independently of the library's closed-form helpers.
OperatorPoly pair_operator(const Rational& l1, const Rational& l2, const Rational& c1, const Rational& c2) {
    const Rational L = l1 + l2;
    const OperatorPoly shift = T + OperatorPoly(L);
    const OperatorPoly inner = T * T + T.scaled(2 * L) - (X * X).scaled(2 * (c1 * c1 + c2 * c2)) -
                               OperatorPoly((l1 - l2) * (l1 - l2));
    const OperatorPoly tail = (X * X).scaled(c1 * c1 - c2 * c2) + OperatorPoly(l1 * l1 - l2 * l2);
    return shift * shift * inner + tail * tail;
}

}  // namespace

TEST_CASE("polynomial arithmetic") {
    CHECK((T + X.scaled(2)) * (T - X.scaled(2)) == T * T - (X * X).scaled(4));
    std::mt19937_64 rng(1);
    for (int i = 0; i < 50; ++i) {
        const auto p = random_poly(rng), r = random_poly(rng);
        CHECK(p * OperatorPoly(1) == p);
        CHECK(p * r == r * p);
        CHECK((p + r) - r == p);
        CHECK(p.pow(2) == p * p);
    }
    CHECK((T - T).is_zero());
    CHECK(OperatorPoly(0).is_zero());
    CHECK(OperatorPoly().total_degree() == -1);
    CHECK((T * X + X).total_degree() == 2);
    CHECK(((T * T) + T * X + X * X).leading_term().first == Monomial{2, 0});
}

TEST_CASE("symbol evaluation") {
    const auto d = T * T - (X * X).scaled(4);
    CHECK(d.evaluate(q(2), q(1)) == 0);
    CHECK(std::abs(d.evaluate(std::complex<double>(2.0), std::complex<double>(1.0))) == 0.0);
    CHECK(OperatorPoly(1).evaluate(q(7, 3), q(-2)) == 1);
    std::mt19937_64 rng(2);
    for (int i = 0; i < 30; ++i) {
        const auto p = random_poly(rng);
        const Rational s = draw(rng, -5, 5), xi = draw(rng, -5, 5);
        const auto exact = to_double(p.evaluate(s, xi));
        const auto approx = p.evaluate(std::complex<double>(to_double(s)), std::complex<double>(to_double(xi)));
        CHECK(std::abs(approx.real() - exact) <= 1e-9 * (1.0 + std::abs(exact)));
        CHECK(approx.imag() == 0.0);
    }
}

TEST_CASE("derivative and rendering") {
    const auto p = T.pow(3) + (T * X).scaled(q(-2, 3)) + OperatorPoly(5);
    CHECK(p.derivative_t() == (T * T).scaled(3) - X.scaled(q(2, 3)));
    CHECK(p.to_string() == "∂t^3 - 2/3 ∂t ∂x + 5");
    CHECK(OperatorPoly().to_string() == "0");
    CHECK(p.to_latex().find("\\frac{2}{3}") != std::string::npos);
}

TEST_CASE("exact division") {
    const Rational l = q(3, 2), c = q(2);
    const auto full = symmetric_reference_operator(l, c);
    const auto quot = poly_divides(shifted_time_power(2 * l, 2), full);
    REQUIRE(quot.has_value());
    CHECK(*quot == T * T + T.scaled(4 * l) - (X * X).scaled(4 * c * c));
    CHECK_FALSE(poly_divides(X, X + OperatorPoly(1)).has_value());
    CHECK_THROWS_AS(poly_divides(OperatorPoly(), T), Error);

    std::mt19937_64 rng(4);
    for (int i = 0; i < 40; ++i) {
        const auto d = random_poly(rng), r = random_poly(rng);
        if (d.is_zero()) continue;
        const auto back = poly_divides(d, d * r);
        REQUIRE(back.has_value());
        CHECK(d * *back == d * r);
    }
}

TEST_CASE("transition matrix") {
    const auto spec = ModelSpec::from_exact({{q(2), q(1), q(0), q(1)}, {q(5), q(1), q(0), q(1)}});
    const auto m = build_lambda_matrix(spec);
    const Rational L = 7, l1 = 2, l2 = 5;
    const std::vector<std::vector<Rational>> expect{
        {L, -l2, -l1, 0}, {-l2, L, 0, -l1}, {-l1, 0, L, -l2}, {0, -l1, -l2, L}};
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c) CHECK(m(r, c) == OperatorPoly(expect[r][c]));

    std::mt19937_64 rng(6);
    for (std::size_t n = 1; n <= 5; ++n) {
        const auto mm = build_lambda_matrix(random_spec(rng, n));
        CHECK(mm.is_symmetric());
        for (std::size_t r = 0; r < mm.dim(); ++r) {
            OperatorPoly sum;
            for (std::size_t c = 0; c < mm.dim(); ++c) sum += mm(r, c);
            CHECK(sum.is_zero());
            CHECK(mm.row_nonzeros(r) == n + 1);
        }
    }
}

TEST_CASE("system matrix") {
    const auto spec = ModelSpec::from_exact({{q(1), q(3), q(0), q(1)}, {q(2), q(5), q(0), q(1)}});
    const auto m = build_system_matrix(spec);
    const std::vector<long> speeds{-8, 2, -2, 8};
    for (std::size_t i = 0; i < 4; ++i) CHECK(m(i, i) == T + X.scaled(speeds[i]) + OperatorPoly(3));
    CHECK(m.is_symmetric());

    std::mt19937_64 rng(8);
    const auto m3 = build_system_matrix(random_spec(rng, 3));
    const auto seqs = enumerate_sign_sequences(3);
    for (std::size_t r = 0; r < 8; ++r)
        for (std::size_t c = 0; c < 8; ++c) CHECK(m3(r, c).is_zero() == (hamming_distance(seqs[r], seqs[c]) > 1));
}

TEST_CASE("cofactor determinant") {
    CHECK(det_cofactor(OperatorMatrix::identity(4)) == OperatorPoly(1));
    OperatorMatrix diag(4);
    OperatorPoly product(1);
    for (std::size_t i = 0; i < 4; ++i) {
        diag(i, i) = T + X.scaled(static_cast<long>(i)) + OperatorPoly(static_cast<long>(i * i));
        product *= diag(i, i);
    }
    CHECK(det_cofactor(diag) == product);
    CHECK_THROWS_AS(det_cofactor(OperatorMatrix(9)), Error);
}

TEST_CASE("block reduction agrees with cofactor expansion") {
    std::mt19937_64 rng(10);
    for (int i = 0; i < 20; ++i) {
        const auto m = build_system_matrix(random_spec(rng, 2 + i % 2));
        CHECK(det_schur(m) == det_cofactor(m));
    }
    OperatorMatrix bad(4);
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c) bad(r, c) = OperatorPoly(static_cast<long>(r * 4 + c + 1));
    CHECK_THROWS_AS(det_schur(bad), Error);
}

TEST_CASE("governing operator closed forms") {
    const auto generic = ModelSpec::from_exact({{q(1), q(3), q(0), q(1)}, {q(2), q(5), q(0), q(1)}});
    CHECK(governing_operator(generic) == pair_operator(1, 2, 3, 5));

    const Rational l = q(3, 4), c = q(5, 2);
    const auto sym = ModelSpec::from_exact({{l, c, q(0), q(1)}, {l, c, q(0), q(1)}});
    const auto shift = T + OperatorPoly(2 * l);
    CHECK(governing_operator(sym) == shift * shift * (T * T + T.scaled(4 * l) - (X * X).scaled(4 * c * c)));

    const auto one = ModelSpec::from_exact({{l, c, q(1), q(1)}});
    CHECK(governing_operator(one) == T * T + T.scaled(2 * l) - (X * X).scaled(c * c));
}

TEST_CASE("pair operator identities on random draws") {
    std::mt19937_64 rng(12);
    for (int i = 0; i < 20; ++i) {
        const ExactComponent p1{draw_positive(rng), draw_positive(rng), draw(rng, -3, 3), q(1)};
        ExactComponent p2{draw_positive(rng), draw_positive(rng), draw(rng, -3, 3), q(1)};
        const auto expect = pair_operator(p1.rate, p2.rate, p1.speed, p2.speed);
        CHECK(reference_operator_closed_form(p1, p2) == expect);
        CHECK(reference_operator_heat_split(p1, p2) == expect);
        CHECK(governing_operator(ModelSpec::from_exact({p1, p2})) == expect);
        p2.coef = -1;
        CHECK(governing_operator(ModelSpec::from_exact({p1, p2})) == expect);
    }
}

TEST_CASE("governing operator structure for n = 3") {
    std::mt19937_64 rng(14);
    for (int i = 0; i < 3; ++i) {
        const auto spec = random_spec(rng, 3);
        const auto op = governing_operator(spec);
        CHECK(op == det_cofactor(build_system_matrix(spec)));
        CHECK(op.coefficient(8, 0) == 1);
        CHECK(op.total_degree() == 8);
        // No constant term: constants are annihilated at zero frequency.
        CHECK(op.coefficient(0, 0) == 0);
    }
}

TEST_CASE("determinant is invariant under relabelling the states") {
    std::mt19937_64 rng(16);
    const auto spec = random_spec(rng, 2);
    const auto m = build_system_matrix(spec);
    const auto base = det_schur(m);
    std::vector<std::size_t> perm(4);
    std::iota(perm.begin(), perm.end(), 0);
    do {
        CHECK(det_cofactor(m.permuted(perm)) == base);
    } while (std::next_permutation(perm.begin(), perm.end()));
}

TEST_CASE("governing operator respects the component cap") {
    std::mt19937_64 rng(18);
    CHECK_THROWS_AS(governing_operator(random_spec(rng, 6)), Error);
}
