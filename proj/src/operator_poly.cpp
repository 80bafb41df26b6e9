#include "linform/operator_poly.hpp"

#include "linform/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace linform {

OperatorPoly::OperatorPoly(const Rational& constant) {
    if (constant != 0) terms_.emplace(Monomial{0, 0}, constant);
}

OperatorPoly OperatorPoly::T() { return monomial(1, 0); }
OperatorPoly OperatorPoly::X() { return monomial(0, 1); }

OperatorPoly OperatorPoly::monomial(unsigned dt, unsigned dx, const Rational& coef) {
    OperatorPoly p;
    p.add_term(Monomial{dt, dx}, coef);
    return p;
}

void OperatorPoly::add_term(const Monomial& m, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

Rational OperatorPoly::coefficient(unsigned dt, unsigned dx) const {
    auto it = terms_.find(Monomial{dt, dx});
    return it == terms_.end() ? Rational(0) : it->second;
}

int OperatorPoly::total_degree() const noexcept {
    return terms_.empty() ? -1 : static_cast<int>(terms_.rbegin()->first.degree());
}

std::pair<Monomial, Rational> OperatorPoly::leading_term() const {
    if (terms_.empty()) throw Error(ErrorKind::domain, "zero polynomial has no leading term");
    return *terms_.rbegin();
}

OperatorPoly& OperatorPoly::operator+=(const OperatorPoly& rhs) {
    for (const auto& [m, c] : rhs.terms_) add_term(m, c);
    return *this;
}

OperatorPoly& OperatorPoly::operator-=(const OperatorPoly& rhs) {
    for (const auto& [m, c] : rhs.terms_) add_term(m, -c);
    return *this;
}

OperatorPoly operator*(const OperatorPoly& a, const OperatorPoly& b) {
    OperatorPoly out;
    for (const auto& [ma, ca] : a.terms_) {
        for (const auto& [mb, cb] : b.terms_) {
            out.add_term(Monomial{ma.dt + mb.dt, ma.dx + mb.dx}, ca * cb);
        }
    }
    return out;
}

OperatorPoly& OperatorPoly::operator*=(const OperatorPoly& rhs) {
    *this = *this * rhs;
    return *this;
}

OperatorPoly OperatorPoly::scaled(const Rational& factor) const {
    OperatorPoly out;
    if (factor == 0) return out;
    for (const auto& [m, c] : terms_) out.terms_.emplace(m, c * factor);
    return out;
}

OperatorPoly OperatorPoly::pow(unsigned exponent) const {
    OperatorPoly result(1);
    OperatorPoly base = *this;
    while (exponent > 0) {
        if (exponent & 1u) result *= base;
        exponent >>= 1;
        if (exponent) base *= base;
    }
    return result;
}

std::complex<double> OperatorPoly::evaluate(std::complex<double> s, std::complex<double> xi) const {
    std::complex<double> sum = 0.0;
    for (const auto& [m, c] : terms_) {
        sum += to_double(c) * std::pow(s, static_cast<int>(m.dt)) * std::pow(xi, static_cast<int>(m.dx));
    }
    return sum;
}

Rational OperatorPoly::evaluate(const Rational& s, const Rational& xi) const {
    Rational sum = 0;
    for (const auto& [m, c] : terms_) {
        Rational term = c;
        for (unsigned i = 0; i < m.dt; ++i) term *= s;
        for (unsigned j = 0; j < m.dx; ++j) term *= xi;
        sum += term;
    }
    return sum;
}

OperatorPoly OperatorPoly::derivative_t() const {
    OperatorPoly out;
    for (const auto& [m, c] : terms_) {
        if (m.dt > 0) out.add_term(Monomial{m.dt - 1, m.dx}, c * Rational(m.dt));
    }
    return out;
}

double OperatorPoly::weighted_norm(double xi_magnitude) const {
    const double base = std::max(1.0, xi_magnitude);
    double sum = 0.0;
    for (const auto& [m, c] : terms_) sum += std::abs(to_double(c)) * std::pow(base, m.dx);
    return sum;
}

namespace {

std::string render(const OperatorPoly& p, bool latex) {
    if (p.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
        const auto& [m, c] = *it;
        const bool negative = c < 0;
        const Rational mag = negative ? Rational(-c) : c;
        if (first) {
            if (negative) os << '-';
        } else {
            os << (negative ? " - " : " + ");
        }
        first = false;

        std::vector<std::string> factors;
        const bool constant = m.dt == 0 && m.dx == 0;
        if (mag != 1 || constant) {
            if (latex && mag.get_den() != 1) {
                factors.push_back("\\frac{" + mag.get_num().get_str() + "}{" + mag.get_den().get_str() + "}");
            } else {
                factors.push_back(to_string(mag));
            }
        }
        auto symbol = [&](const char* name, unsigned power) {
            if (power == 0) return;
            std::string f = latex ? std::string("\\partial_") + name : std::string("∂") + name;
            if (power > 1) f += latex ? "^{" + std::to_string(power) + "}" : "^" + std::to_string(power);
            factors.push_back(std::move(f));
        };
        symbol("t", m.dt);
        symbol("x", m.dx);
        for (std::size_t k = 0; k < factors.size(); ++k) {
            if (k > 0) os << ' ';
            os << factors[k];
        }
    }
    return os.str();
}

}  // namespace

std::string OperatorPoly::to_string() const { return render(*this, false); }
std::string OperatorPoly::to_latex() const { return render(*this, true); }

std::optional<OperatorPoly> poly_divides(const OperatorPoly& d, const OperatorPoly& p) {
    if (d.is_zero()) throw Error(ErrorKind::domain, "division by the zero polynomial");
    const auto [lead_m, lead_c] = d.leading_term();
    OperatorPoly remainder = p;
    OperatorPoly quotient;
    while (!remainder.is_zero()) {
        const auto [m, c] = remainder.leading_term();
        if (m.dt < lead_m.dt || m.dx < lead_m.dx) return std::nullopt;
        const OperatorPoly step = OperatorPoly::monomial(m.dt - lead_m.dt, m.dx - lead_m.dx, c / lead_c);
        quotient += step;
        remainder -= step * d;
    }
    return quotient;
}

OperatorMatrix::OperatorMatrix(std::size_t dim) : dim_(dim), entries_(dim * dim) {}

OperatorMatrix OperatorMatrix::identity(std::size_t dim, const OperatorPoly& diag) {
    OperatorMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = diag;
    return m;
}

OperatorMatrix OperatorMatrix::transposed() const {
    OperatorMatrix out(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j) out(j, i) = (*this)(i, j);
    return out;
}

bool OperatorMatrix::is_symmetric() const {
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = i + 1; j < dim_; ++j)
            if (!((*this)(i, j) == (*this)(j, i))) return false;
    return true;
}

OperatorMatrix OperatorMatrix::block(std::size_t r0, std::size_t c0, std::size_t size) const {
    if (r0 + size > dim_ || c0 + size > dim_) throw Error(ErrorKind::dimension, "block exceeds matrix");
    OperatorMatrix out(size);
    for (std::size_t i = 0; i < size; ++i)
        for (std::size_t j = 0; j < size; ++j) out(i, j) = (*this)(r0 + i, c0 + j);
    return out;
}

OperatorMatrix OperatorMatrix::permuted(const std::vector<std::size_t>& perm) const {
    if (perm.size() != dim_) throw Error(ErrorKind::dimension, "permutation size differs from matrix");
    OperatorMatrix out(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j) out(perm[i], perm[j]) = (*this)(i, j);
    return out;
}

OperatorMatrix& OperatorMatrix::operator+=(const OperatorMatrix& rhs) {
    if (rhs.dim_ != dim_) throw Error(ErrorKind::dimension, "matrix sizes differ");
    for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] += rhs.entries_[k];
    return *this;
}

OperatorMatrix& OperatorMatrix::operator-=(const OperatorMatrix& rhs) {
    if (rhs.dim_ != dim_) throw Error(ErrorKind::dimension, "matrix sizes differ");
    for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] -= rhs.entries_[k];
    return *this;
}

OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b) {
    if (a.dim_ != b.dim_) throw Error(ErrorKind::dimension, "matrix sizes differ");
    OperatorMatrix out(a.dim_);
    for (std::size_t i = 0; i < a.dim_; ++i) {
        for (std::size_t k = 0; k < a.dim_; ++k) {
            const OperatorPoly& aik = a(i, k);
            if (aik.is_zero()) continue;
            for (std::size_t j = 0; j < a.dim_; ++j) {
                const OperatorPoly& bkj = b(k, j);
                if (!bkj.is_zero()) out(i, j) += aik * bkj;
            }
        }
    }
    return out;
}

std::size_t OperatorMatrix::row_nonzeros(std::size_t row) const {
    std::size_t n = 0;
    for (std::size_t j = 0; j < dim_; ++j) n += !(*this)(row, j).is_zero();
    return n;
}

}  // namespace linform
