#include "linform/rational.hpp"

#include "linform/errors.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <system_error>

namespace linform {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::size_limit: return "size-limit";
        case ErrorKind::dimension: return "dimension";
        case ErrorKind::domain: return "domain";
        case ErrorKind::precision: return "precision";
        case ErrorKind::bandwidth: return "bandwidth";
        case ErrorKind::structure: return "structure";
        case ErrorKind::schema: return "schema";
        case ErrorKind::numerical: return "numerical";
        case ErrorKind::consistency: return "consistency";
    }
    return "unknown";
}

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char ch : s) {
        if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
    }
    return true;
}

Rational parse_integer(std::string_view s, std::string_view original) {
    std::string_view digits = s;
    bool negative = false;
    if (!digits.empty() && (digits.front() == '+' || digits.front() == '-')) {
        negative = digits.front() == '-';
        digits.remove_prefix(1);
    }
    if (!all_digits(digits)) {
        throw Error(ErrorKind::schema, "not a rational number: '" + std::string(original) + "'");
    }
    mpz_class z(std::string(digits), 10);
    if (negative) z = -z;
    return Rational(z);
}

Rational pow10(long exponent) {
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
    return exponent < 0 ? Rational(mpz_class(1), p) : Rational(p);
}

Rational parse_decimal(std::string_view s, std::string_view original) {
    auto bad = [&] {
        return Error(ErrorKind::schema, "not a decimal number: '" + std::string(original) + "'");
    };
    bool negative = false;
    if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    long exponent = 0;
    if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
        std::string_view exp_text = s.substr(e + 1);
        if (!exp_text.empty() && exp_text.front() == '+') exp_text.remove_prefix(1);
        auto [ptr, ec] = std::from_chars(exp_text.data(), exp_text.data() + exp_text.size(), exponent);
        if (ec != std::errc() || ptr != exp_text.data() + exp_text.size() || exp_text.empty()) throw bad();
        if (exponent > 4000 || exponent < -4000) throw bad();
        s = s.substr(0, e);
    }
    std::string mantissa;
    long fraction_digits = 0;
    if (auto dot = s.find('.'); dot != std::string_view::npos) {
        std::string_view whole = s.substr(0, dot);
        std::string_view frac = s.substr(dot + 1);
        if (whole.empty() && frac.empty()) throw bad();
        if ((!whole.empty() && !all_digits(whole)) || (!frac.empty() && !all_digits(frac))) throw bad();
        mantissa = std::string(whole) + std::string(frac);
        fraction_digits = static_cast<long>(frac.size());
    } else {
        if (!all_digits(s)) throw bad();
        mantissa = std::string(s);
    }
    Rational value(mpz_class(mantissa, 10));
    value *= pow10(exponent - fraction_digits);
    value.canonicalize();
    return negative ? Rational(-value) : value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    std::string_view s = text;
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    if (s.empty()) throw Error(ErrorKind::schema, "empty number");

    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        Rational num = parse_integer(s.substr(0, slash), text);
        Rational den = parse_integer(s.substr(slash + 1), text);
        if (den == 0) throw Error(ErrorKind::schema, "zero denominator in '" + std::string(text) + "'");
        Rational r = num / den;
        r.canonicalize();
        return r;
    }
    return parse_decimal(s, text);
}

Rational rational_from_double(double value) {
    if (!std::isfinite(value)) throw Error(ErrorKind::domain, "non-finite value has no rational form");
    Rational r(value);
    r.canonicalize();
    return r;
}

std::string shortest_decimal(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc()) throw Error(ErrorKind::numerical, "cannot format double");
    return std::string(buf, ptr);
}

std::string to_string(const Rational& value) {
    if (value.get_den() == 1) return value.get_num().get_str();
    return value.get_str();
}

}  // namespace linform
