#include "linform/telegraph.hpp"

#include "linform/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <string>

namespace linform {

namespace {

// Sum of term_0 * prod_{j<=k} ratio(j) until a term drops below the
// relative tolerance of the running sum.
template <typename Ratio>
double positive_series(double first, Ratio ratio, const BesselConfig& cfg, const char* name) {
    if (cfg.rel_tolerance <= 0.0 || cfg.max_terms < 1) {
        throw Error(ErrorKind::domain, "invalid Bessel configuration");
    }
    double sum = first;
    double term = first;
    for (int k = 1; k < cfg.max_terms; ++k) {
        term *= ratio(k);
        sum += term;
        if (term <= cfg.rel_tolerance * sum) return sum;
        if (!std::isfinite(sum)) break;
    }
    throw Error(ErrorKind::precision, std::string(name) + " series did not converge within " +
                                          std::to_string(cfg.max_terms) + " terms");
}

void require_nonnegative(double z) {
    if (!(z >= 0.0)) throw Error(ErrorKind::domain, "Bessel argument must be nonnegative");
}

}  // namespace

double bessel_i0(double z, const BesselConfig& cfg) {
    require_nonnegative(z);
    if (z == 0.0) return 1.0;
    const double q = 0.25 * z * z;
    return positive_series(1.0, [q](int k) { return q / (double(k) * double(k)); }, cfg, "I0");
}

double bessel_i1(double z, const BesselConfig& cfg) {
    require_nonnegative(z);
    if (z == 0.0) return 0.0;
    return z * bessel_i1_over_z(z, cfg);
}

double bessel_i1_over_z(double z, const BesselConfig& cfg) {
    require_nonnegative(z);
    if (z == 0.0) return 0.5;
    const double q = 0.25 * z * z;
    return positive_series(0.5, [q](int k) { return q / (double(k) * double(k + 1)); }, cfg, "I1");
}

double singular_weight(const TelegraphParams& p, double t) {
    if (t < 0.0) throw Error(ErrorKind::domain, "time must be nonnegative");
    return 0.5 * std::exp(-p.rate * t);
}

double density_ac(const TelegraphParams& p, double x, double t, const BesselConfig& cfg) {
    if (!(t > 0.0)) throw Error(ErrorKind::domain, "density requires t > 0");
    const double d = x - p.start;
    const double ct = p.speed * t;
    if (std::abs(d) >= ct) return 0.0;
    const double r = std::sqrt((ct - d) * (ct + d));
    const double xi = p.rate * r / p.speed;
    // d/dt I0(xi) = I1(xi) * rate*c*t / r = rate^2 t * I1(xi)/xi
    const double bracket = bessel_i0(xi, cfg) + p.rate * t * bessel_i1_over_z(xi, cfg);
    return std::exp(-p.rate * t) * p.rate * bracket / (2.0 * p.speed);
}

double damped_factor(double rate, double speed, double xi, double t) {
    if (t < 0.0) throw Error(ErrorKind::domain, "time must be nonnegative");
    if (t == 0.0) return 1.0;
    const double cx = speed * xi;
    const double disc = rate * rate - cx * cx;  // Delta^2
    if (std::abs(disc) < 1e-9 * rate * rate) {
        // Taylor in w = (t Delta)^2 around the branch point.
        const double w = t * t * disc;
        const double cosh_part = 1.0 + w / 2.0 + w * w / 24.0 + w * w * w / 720.0;
        const double sinhc_part = 1.0 + w / 6.0 + w * w / 120.0 + w * w * w / 5040.0;
        return std::exp(-rate * t) * (cosh_part + rate * t * sinhc_part);
    }
    if (disc > 0.0) {
        const double delta = std::sqrt(disc);
        // -rate + delta written without cancellation.
        const double slow = -(cx * cx) / (rate + delta);
        const double fast = -rate - delta;
        const double ratio = rate / delta;
        return 0.5 * (1.0 + ratio) * std::exp(slow * t) + 0.5 * (1.0 - ratio) * std::exp(fast * t);
    }
    const double omega = std::sqrt(-disc);
    return std::exp(-rate * t) * (std::cos(t * omega) + rate * std::sin(t * omega) / omega);
}

std::complex<double> char_fn(const TelegraphParams& p, double alpha, double t) {
    const double h = damped_factor(p.rate, p.speed, alpha, t);
    return std::polar(1.0, alpha * p.start) * h;
}

double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol,
                 double* error_estimate) {
    if (a == b) {
        if (error_estimate) *error_estimate = 0.0;
        return 0.0;
    }
    // The rule compares an unscaled round-off floor against a width-scaled
    // tolerance, so narrow intervals never converge; integrate over [-1, 1].
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    const auto g = [&](double u) { return f(mid + half * u); };
    double err = 0.0;
    const double value =
        boost::math::quadrature::gauss_kronrod<double, 31>::integrate(g, -1.0, 1.0, 20, rel_tol, &err);
    if (error_estimate) *error_estimate = std::abs(half) * err;
    return half * value;
}

double ac_mass(const TelegraphParams& p, double t, const BesselConfig& cfg) {
    const double ct = p.speed * t;
    return integrate([&](double x) { return density_ac(p, x, t, cfg); }, p.start - ct, p.start + ct);
}

}  // namespace linform
