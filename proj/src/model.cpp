#include "linform/model.hpp"

#include "linform/errors.hpp"

#include <cmath>
#include <string>

namespace linform {

void TelegraphParams::validate() const {
    if (!std::isfinite(rate) || !std::isfinite(speed) || !std::isfinite(start)) {
        throw Error(ErrorKind::domain, "telegraph parameters must be finite");
    }
    if (rate <= 0.0) throw Error(ErrorKind::domain, "rate must be positive");
    if (speed <= 0.0) throw Error(ErrorKind::domain, "speed must be positive");
}

ModelSpec::ModelSpec(std::vector<Component> components, bool exact_mode)
    : components_(std::move(components)), exact_mode_(exact_mode) {
    if (components_.empty()) throw Error(ErrorKind::domain, "a model needs at least one component");
    for (std::size_t k = 0; k < components_.size(); ++k) {
        const auto& c = components_[k];
        try {
            c.params.validate();
        } catch (const Error& e) {
            throw Error(e.kind(), "component " + std::to_string(k) + ": " + e.what());
        }
        if (c.exact.coef == 0 || c.coef == 0.0 || !std::isfinite(c.coef)) {
            throw Error(ErrorKind::domain, "component " + std::to_string(k) + ": coefficient must be nonzero");
        }
    }
}

ModelSpec ModelSpec::from_exact(std::vector<ExactComponent> components) {
    std::vector<Component> out;
    out.reserve(components.size());
    for (auto& e : components) {
        for (Rational* r : {&e.rate, &e.speed, &e.start, &e.coef}) r->canonicalize();
        if (e.rate <= 0) throw Error(ErrorKind::domain, "rate must be positive");
        if (e.speed <= 0) throw Error(ErrorKind::domain, "speed must be positive");
        Component c;
        c.params = {to_double(e.rate), to_double(e.speed), to_double(e.start)};
        c.coef = to_double(e.coef);
        c.exact = std::move(e);
        out.push_back(std::move(c));
    }
    return ModelSpec(std::move(out), true);
}

ModelSpec ModelSpec::from_doubles(const std::vector<TelegraphParams>& params,
                                  const std::vector<double>& coefs) {
    if (params.size() != coefs.size()) {
        throw Error(ErrorKind::dimension, "parameter and coefficient lists differ in length");
    }
    std::vector<Component> out;
    out.reserve(params.size());
    for (std::size_t k = 0; k < params.size(); ++k) {
        params[k].validate();
        Component c;
        c.params = params[k];
        c.coef = coefs[k];
        c.exact = {rational_from_double(params[k].rate), rational_from_double(params[k].speed),
                   rational_from_double(params[k].start), rational_from_double(coefs[k])};
        out.push_back(std::move(c));
    }
    return ModelSpec(std::move(out), false);
}

double ModelSpec::center() const noexcept {
    double s = 0.0;
    for (const auto& c : components_) s += c.coef * c.params.start;
    return s;
}

Rational ModelSpec::center_exact() const {
    Rational s = 0;
    for (const auto& c : components_) s += c.exact.coef * c.exact.start;
    return s;
}

SignSeq::SignSeq(std::vector<int> signs) : signs_(std::move(signs)) {
    for (int s : signs_) {
        if (s != -1 && s != 1) throw Error(ErrorKind::domain, "sign entries must be -1 or +1");
    }
}

SignSeq SignSeq::from_index(std::uint32_t index, std::size_t n) {
    SignSeq out;
    out.signs_.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::uint32_t bit = (index >> (n - 1 - k)) & 1u;
        out.signs_[k] = bit ? 1 : -1;
    }
    return out;
}

std::uint32_t SignSeq::index() const noexcept {
    std::uint32_t idx = 0;
    for (int s : signs_) idx = (idx << 1) | (s > 0 ? 1u : 0u);
    return idx;
}

SignSeq SignSeq::negated() const {
    SignSeq out = *this;
    for (int& s : out.signs_) s = -s;
    return out;
}

std::vector<SignSeq> enumerate_sign_sequences(std::size_t n, std::size_t cap) {
    if (n < 1 || n > cap || n > 30) {
        throw Error(ErrorKind::size_limit,
                    "number of components " + std::to_string(n) + " outside [1, " + std::to_string(cap) + "]");
    }
    const std::uint32_t count = 1u << n;
    std::vector<SignSeq> out;
    out.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) out.push_back(SignSeq::from_index(i, n));
    return out;
}

std::size_t hamming_distance(const SignSeq& a, const SignSeq& b) {
    if (a.size() != b.size()) throw Error(ErrorKind::dimension, "sign sequences differ in length");
    std::size_t d = 0;
    for (std::size_t k = 0; k < a.size(); ++k) d += a[k] != b[k];
    return d;
}

double sigma_speed(const ModelSpec& spec, const SignSeq& sigma) {
    if (sigma.size() != spec.size()) throw Error(ErrorKind::dimension, "sign sequence length differs from n");
    double s = 0.0;
    for (std::size_t k = 0; k < spec.size(); ++k) s += spec[k].coef * sigma[k] * spec[k].params.speed;
    return s;
}

Rational sigma_speed_exact(const ModelSpec& spec, const SignSeq& sigma) {
    if (sigma.size() != spec.size()) throw Error(ErrorKind::dimension, "sign sequence length differs from n");
    Rational s = 0;
    for (std::size_t k = 0; k < spec.size(); ++k) {
        Rational term = spec[k].exact.coef * spec[k].exact.speed;
        if (sigma[k] > 0) s += term; else s -= term;
    }
    return s;
}

double lambda_total(const ModelSpec& spec) {
    double s = 0.0;
    for (const auto& c : spec.components()) s += c.params.rate;
    return s;
}

Rational lambda_total_exact(const ModelSpec& spec) {
    Rational s = 0;
    for (const auto& c : spec.components()) s += c.exact.rate;
    return s;
}

double support_speed(const ModelSpec& spec) {
    double v = 0.0;
    for (const auto& c : spec.components()) v += std::abs(c.coef) * c.params.speed;
    return v;
}

}  // namespace linform
