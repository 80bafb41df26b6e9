#pragma once

#include "linform/rational.hpp"

#include <complex>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace linform {

/// Exponents of the commuting symbols T = d/dt and X = d/dx.
struct Monomial {
    unsigned dt = 0;
    unsigned dx = 0;

    unsigned degree() const noexcept { return dt + dx; }
    friend bool operator==(const Monomial&, const Monomial&) = default;
};

/// Graded-lexicographic order with T > X: total degree first, then the T power.
struct GradedLexLess {
    bool operator()(const Monomial& a, const Monomial& b) const noexcept {
        if (a.degree() != b.degree()) return a.degree() < b.degree();
        return a.dt < b.dt;
    }
};

/// Polynomial in T and X with exact rational coefficients. A constant-coefficient
/// linear differential operator in (t, x) is identified with its symbol here.
/// Zero coefficients are never stored.
class OperatorPoly {
public:
    using TermMap = std::map<Monomial, Rational, GradedLexLess>;

    OperatorPoly() = default;
    OperatorPoly(const Rational& constant);  // NOLINT: implicit scalar embedding
    OperatorPoly(long constant) : OperatorPoly(Rational(constant)) {}  // NOLINT

    static OperatorPoly T();
    static OperatorPoly X();
    static OperatorPoly monomial(unsigned dt, unsigned dx, const Rational& coef = 1);

    bool is_zero() const noexcept { return terms_.empty(); }
    const TermMap& terms() const noexcept { return terms_; }
    std::size_t term_count() const noexcept { return terms_.size(); }
    Rational coefficient(unsigned dt, unsigned dx) const;

    /// Highest total degree; -1 for the zero polynomial.
    int total_degree() const noexcept;
    /// Largest term in graded-lex order. Requires a nonzero polynomial.
    std::pair<Monomial, Rational> leading_term() const;

    OperatorPoly& operator+=(const OperatorPoly& rhs);
    OperatorPoly& operator-=(const OperatorPoly& rhs);
    OperatorPoly& operator*=(const OperatorPoly& rhs);
    OperatorPoly scaled(const Rational& factor) const;
    OperatorPoly pow(unsigned exponent) const;
    OperatorPoly operator-() const { return scaled(-1); }

    friend OperatorPoly operator+(OperatorPoly a, const OperatorPoly& b) { return a += b; }
    friend OperatorPoly operator-(OperatorPoly a, const OperatorPoly& b) { return a -= b; }
    friend OperatorPoly operator*(const OperatorPoly& a, const OperatorPoly& b);
    friend bool operator==(const OperatorPoly& a, const OperatorPoly& b) { return a.terms_ == b.terms_; }

    /// Symbol evaluation: T -> s, X -> xi.
    std::complex<double> evaluate(std::complex<double> s, std::complex<double> xi) const;
    Rational evaluate(const Rational& s, const Rational& xi) const;

    /// d/dT of the symbol.
    OperatorPoly derivative_t() const;

    /// sum_j |coef_j| * max(1, |xi|)^{dx_j}
    double weighted_norm(double xi_magnitude = 1.0) const;

    /// Descending graded-lex order with the symbols spelled as partials,
    /// e.g. "∂t^4 + 6 ∂t^3 - 34/5 ∂t^2 ∂x^2 + ...".
    std::string to_string() const;
    std::string to_latex() const;

private:
    void add_term(const Monomial& m, const Rational& c);

    TermMap terms_;
};

/// Quotient q with p = d*q when it exists in Q[T, X]; division is by
/// leading-term reduction in graded-lex order, so a remainder term means
/// d does not divide p.
std::optional<OperatorPoly> poly_divides(const OperatorPoly& d, const OperatorPoly& p);

/// Square matrix of operator polynomials.
class OperatorMatrix {
public:
    OperatorMatrix() = default;
    explicit OperatorMatrix(std::size_t dim);

    static OperatorMatrix identity(std::size_t dim, const OperatorPoly& diag = OperatorPoly(1));

    std::size_t dim() const noexcept { return dim_; }
    OperatorPoly& operator()(std::size_t row, std::size_t col) { return entries_[row * dim_ + col]; }
    const OperatorPoly& operator()(std::size_t row, std::size_t col) const { return entries_[row * dim_ + col]; }

    OperatorMatrix transposed() const;
    bool is_symmetric() const;
    /// Square sub-block of side `size` whose top-left entry is (r0, c0).
    OperatorMatrix block(std::size_t r0, std::size_t c0, std::size_t size) const;
    /// P m P^T for the permutation row i -> perm[i].
    OperatorMatrix permuted(const std::vector<std::size_t>& perm) const;

    OperatorMatrix& operator+=(const OperatorMatrix& rhs);
    OperatorMatrix& operator-=(const OperatorMatrix& rhs);
    friend OperatorMatrix operator+(OperatorMatrix a, const OperatorMatrix& b) { return a += b; }
    friend OperatorMatrix operator-(OperatorMatrix a, const OperatorMatrix& b) { return a -= b; }
    friend OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b);
    friend bool operator==(const OperatorMatrix& a, const OperatorMatrix& b) = default;

    /// Number of nonzero entries in a row.
    std::size_t row_nonzeros(std::size_t row) const;

private:
    std::size_t dim_ = 0;
    std::vector<OperatorPoly> entries_;
};

}  // namespace linform
