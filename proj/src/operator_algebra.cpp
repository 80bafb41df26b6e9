#include "linform/operator_algebra.hpp"

#include "linform/errors.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>

namespace linform {

OperatorMatrix build_lambda_matrix(const ModelSpec& spec, std::size_t cap) {
    const auto seqs = enumerate_sign_sequences(spec.size(), cap);
    const Rational total = lambda_total_exact(spec);
    OperatorMatrix m(seqs.size());
    for (std::size_t s = 0; s < seqs.size(); ++s) {
        m(s, s) = OperatorPoly(total);
        for (std::size_t k = 0; k < spec.size(); ++k) {
            // flipping position k of sigma_s toggles bit (n-1-k) of its index
            const std::size_t other = s ^ (std::size_t{1} << (spec.size() - 1 - k));
            m(s, other) = OperatorPoly(Rational(-spec[k].exact.rate));
        }
    }
    return m;
}

OperatorMatrix build_system_matrix(const ModelSpec& spec, std::size_t cap) {
    OperatorMatrix m = build_lambda_matrix(spec, cap);
    const auto seqs = enumerate_sign_sequences(spec.size(), cap);
    for (std::size_t s = 0; s < seqs.size(); ++s) {
        m(s, s) += OperatorPoly::T() + OperatorPoly::X().scaled(sigma_speed_exact(spec, seqs[s]));
    }
    return m;
}

OperatorPoly det_cofactor(const OperatorMatrix& m, std::size_t max_dim) {
    const std::size_t dim = m.dim();
    if (dim == 0) return OperatorPoly(1);
    if (dim > max_dim || dim > 20) {
        throw Error(ErrorKind::size_limit, "cofactor expansion refused for dimension " + std::to_string(dim) +
                                               " (limit " + std::to_string(max_dim) + ")");
    }
    // minor(S) = det of rows [dim-|S|, dim) restricted to the column set S.
    std::unordered_map<std::uint32_t, OperatorPoly> memo;
    auto minor = [&](auto&& self, std::uint32_t cols) -> OperatorPoly {
        const auto size = static_cast<std::size_t>(std::popcount(cols));
        if (size == 0) return OperatorPoly(1);
        if (auto it = memo.find(cols); it != memo.end()) return it->second;
        const std::size_t row = dim - size;
        OperatorPoly sum;
        int position = 0;
        for (std::size_t j = 0; j < dim; ++j) {
            if (!(cols & (1u << j))) continue;
            const OperatorPoly& entry = m(row, j);
            if (!entry.is_zero()) {
                OperatorPoly term = entry * self(self, cols & ~(1u << j));
                if (position % 2 == 0) sum += term; else sum -= term;
            }
            ++position;
        }
        memo.emplace(cols, sum);
        return sum;
    };
    return minor(minor, (dim == 32) ? 0xffffffffu : ((1u << dim) - 1u));
}

namespace {

// Polynomial in an auxiliary variable z whose coefficients live in Q[T, X].
using ZPoly = std::vector<OperatorPoly>;

void trim(ZPoly& p) {
    while (!p.empty() && p.back().is_zero()) p.pop_back();
}

ZPoly zadd(const ZPoly& a, const ZPoly& b) {
    ZPoly out(std::max(a.size(), b.size()));
    for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
    trim(out);
    return out;
}

ZPoly zsub(const ZPoly& a, const ZPoly& b) {
    ZPoly out(std::max(a.size(), b.size()));
    for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) out[i] -= b[i];
    trim(out);
    return out;
}

ZPoly zmul(const ZPoly& a, const ZPoly& b) {
    if (a.empty() || b.empty()) return {};
    ZPoly out(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].is_zero()) continue;
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (!b[j].is_zero()) out[i + j] += a[i] * b[j];
        }
    }
    trim(out);
    return out;
}

struct ZMatrix2 {
    ZPoly e[2][2];
};

ZMatrix2 zmatmul(const ZMatrix2& a, const ZMatrix2& b) {
    ZMatrix2 out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out.e[i][j] = zadd(zmul(a.e[i][0], b.e[0][j]), zmul(a.e[i][1], b.e[1][j]));
    return out;
}

// Returns the scalar entry if m equals s*I, otherwise nothing.
std::optional<OperatorPoly> scalar_identity(const OperatorMatrix& m) {
    const OperatorPoly s = m(0, 0);
    for (std::size_t i = 0; i < m.dim(); ++i) {
        for (std::size_t j = 0; j < m.dim(); ++j) {
            const OperatorPoly& e = m(i, j);
            if (i == j ? !(e == s) : !e.is_zero()) return std::nullopt;
        }
    }
    return s;
}

}  // namespace

OperatorPoly det_schur(const OperatorMatrix& m) {
    if (m.dim() == 0 || !std::has_single_bit(m.dim())) {
        throw Error(ErrorKind::structure, "block reduction needs a power-of-two dimension");
    }
    ZPoly q = {OperatorPoly(), OperatorPoly(1)};  // q(z) = z
    OperatorMatrix k = m;
    while (k.dim() > 1) {
        const std::size_t h = k.dim() / 2;
        const OperatorMatrix a = k.block(0, 0, h);
        const OperatorMatrix d = k.block(h, h, h);
        const auto b = scalar_identity(k.block(0, h, h));
        const auto c = scalar_identity(k.block(h, 0, h));
        if (!b || !c) {
            throw Error(ErrorKind::structure,
                        "off-diagonal blocks of the " + std::to_string(k.dim()) + "x" + std::to_string(k.dim()) +
                            " level are not scalar multiples of the identity");
        }
        const auto diff = scalar_identity(d - a);
        if (!diff) {
            throw Error(ErrorKind::structure, "diagonal blocks of the " + std::to_string(k.dim()) + "x" +
                                                  std::to_string(k.dim()) + " level differ by a non-scalar matrix");
        }
        const OperatorPoly u = diff->scaled(Rational(1, 2));

        // N(z) = [[z - u, b], [c, z + u]]; the new running polynomial is Det q(N(z)).
        ZMatrix2 n;
        n.e[0][0] = {-u, OperatorPoly(1)};
        n.e[1][1] = {u, OperatorPoly(1)};
        n.e[0][1] = {*b};
        n.e[1][0] = {*c};
        for (auto& row : n.e)
            for (auto& entry : row) trim(entry);

        ZMatrix2 acc;
        acc.e[0][0] = {q.back()};
        acc.e[1][1] = {q.back()};
        for (std::size_t deg = q.size() - 1; deg-- > 0;) {
            acc = zmatmul(acc, n);
            acc.e[0][0] = zadd(acc.e[0][0], ZPoly{q[deg]});
            acc.e[1][1] = zadd(acc.e[1][1], ZPoly{q[deg]});
        }
        q = zsub(zmul(acc.e[0][0], acc.e[1][1]), zmul(acc.e[0][1], acc.e[1][0]));

        OperatorMatrix next = a;
        for (std::size_t i = 0; i < h; ++i) next(i, i) += u;
        k = std::move(next);
    }

    const OperatorPoly& z = k(0, 0);
    OperatorPoly result;
    for (std::size_t deg = q.size(); deg-- > 0;) result = result * z + q[deg];
    return result;
}

OperatorPoly governing_operator(const ModelSpec& spec, std::size_t cap) {
    if (spec.size() > cap) {
        throw Error(ErrorKind::size_limit, "governing operator limited to n <= " + std::to_string(cap));
    }
    return det_schur(build_system_matrix(spec, std::max(cap, spec.size())));
}

OperatorPoly shifted_time_power(const Rational& shift, unsigned power) {
    return (OperatorPoly::T() + OperatorPoly(shift)).pow(power);
}

OperatorPoly reference_operator_closed_form(const ExactComponent& p1, const ExactComponent& p2) {
    const OperatorPoly T = OperatorPoly::T();
    const OperatorPoly X2 = OperatorPoly::monomial(0, 2);
    const Rational total = p1.rate + p2.rate;
    const Rational c1s = p1.speed * p1.speed;
    const Rational c2s = p2.speed * p2.speed;
    const Rational gap = p1.rate - p2.rate;

    const OperatorPoly telegraph_part = T * T + T.scaled(2 * total) - X2.scaled(2 * (c1s + c2s)) -
                                        OperatorPoly(Rational(gap * gap));
    const OperatorPoly square_part =
        X2.scaled(c1s - c2s) + OperatorPoly(Rational(p1.rate * p1.rate - p2.rate * p2.rate));
    return shifted_time_power(total, 2) * telegraph_part + square_part * square_part;
}

OperatorPoly reference_operator_heat_split(const ExactComponent& p1, const ExactComponent& p2) {
    const OperatorPoly T = OperatorPoly::T();
    const OperatorPoly X2 = OperatorPoly::monomial(0, 2);
    const Rational total = p1.rate + p2.rate;
    const Rational c_diff = p1.speed * p1.speed - p2.speed * p2.speed;
    const Rational c_sum = p1.speed * p1.speed + p2.speed * p2.speed;
    const Rational gap = p1.rate - p2.rate;
    const Rational sq_gap = p1.rate * p1.rate - p2.rate * p2.rate;

    const OperatorPoly telegraph_part = T * T + T.scaled(2 * total) - X2.scaled(2 * c_sum);
    const OperatorPoly forward_heat = T.scaled(gap) - X2.scaled(c_diff);
    const OperatorPoly backward_heat = T.scaled(gap) + X2.scaled(c_diff) + OperatorPoly(Rational(2 * sq_gap));
    return shifted_time_power(total, 2) * telegraph_part - forward_heat * backward_heat;
}

OperatorPoly symmetric_reference_operator(const Rational& rate, const Rational& speed) {
    const OperatorPoly T = OperatorPoly::T();
    const OperatorPoly second =
        T * T + T.scaled(4 * rate) - OperatorPoly::monomial(0, 2).scaled(4 * speed * speed);
    return shifted_time_power(2 * rate, 2) * second;
}

}  // namespace linform
