#include "linform/verifier.hpp"

#include "linform/errors.hpp"
#include "linform/linear_form.hpp"
#include "linform/telegraph.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <sstream>

namespace linform {

std::string_view to_string(CheckStatus status) {
    switch (status) {
        case CheckStatus::passed: return "passed";
        case CheckStatus::failed: return "failed";
        case CheckStatus::inconclusive: return "inconclusive";
    }
    return "unknown";
}

void VerificationReport::record(std::vector<double> point, double residual) {
    if (!(residual <= max_residual)) max_residual = residual;  // NaN propagates
    details.push_back({std::move(point), residual});
}

void VerificationReport::finalize() {
    passed = max_residual <= tolerance;
    if (status != CheckStatus::inconclusive) status = passed ? CheckStatus::passed : CheckStatus::failed;
}

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

}  // namespace

VerificationReport symbol_root_check(const ModelSpec& spec, const std::vector<double>& alphas, double tolerance,
                                     std::size_t cap) {
    VerificationReport rep;
    rep.check_name = "symbol_root_check";
    rep.tolerance = tolerance;
    const OperatorPoly p = governing_operator(spec, cap);
    const OperatorPoly dp = p.derivative_t();
    const int order = 1 << spec.size();
    std::size_t confluent = 0;

    for (double alpha : alphas) {
        const std::complex<double> xi(0.0, alpha);
        const double norm = p.weighted_norm(std::abs(alpha));
        const double dnorm = dp.weighted_norm(std::abs(alpha));
        const ExpSumRep e = exp_sum_representation(spec, alpha);
        for (std::size_t s = 0; s < e.terms.size(); ++s) {
            const std::complex<double> mu = e.terms[s].exponent;
            const double scale = std::pow(std::max(1.0, std::abs(mu)), order);
            double r = std::abs(p.evaluate(mu, xi)) / (1.0 + norm * scale);
            if (e.terms[s].t_power > 0) {
                ++confluent;
                r = std::max(r, std::abs(dp.evaluate(mu, xi)) / (1.0 + dnorm * scale));
            }
            rep.record({alpha, static_cast<double>(s)}, r);
        }
    }
    if (confluent > 0) rep.notes.push_back(std::to_string(confluent) + " confluent exponents also checked via dP/ds");
    rep.finalize();
    return rep;
}

namespace {

using OdeState = std::vector<double>;

// Real form of df/dt = (i zeta diag(c) - Lambda_n) f with state [Re f, Im f].
struct FourierSystem {
    std::vector<double> speeds;
    std::vector<double> rates;
    double total = 0.0;
    double zeta = 0.0;
    std::size_t n = 0;

    void operator()(const OdeState& x, OdeState& dxdt, double /*t*/) const {
        const std::size_t dim = speeds.size();
        for (std::size_t s = 0; s < dim; ++s) {
            double re = -zeta * speeds[s] * x[dim + s] - total * x[s];
            double im = zeta * speeds[s] * x[s] - total * x[dim + s];
            for (std::size_t k = 0; k < n; ++k) {
                const std::size_t other = s ^ (std::size_t{1} << (n - 1 - k));
                re += rates[k] * x[other];
                im += rates[k] * x[dim + other];
            }
            dxdt[s] = re;
            dxdt[dim + s] = im;
        }
    }
};

std::complex<double> integrate_system(const ModelSpec& spec, double alpha, double t, int convention,
                                      double ode_tolerance) {
    namespace odeint = boost::numeric::odeint;
    FourierSystem sys;
    sys.n = spec.size();
    for (const auto& sigma : enumerate_sign_sequences(spec.size(), std::max<std::size_t>(spec.size(), 6))) {
        sys.speeds.push_back(sigma_speed(spec, sigma));
    }
    for (const auto& c : spec.components()) sys.rates.push_back(c.params.rate);
    sys.total = lambda_total(spec);
    sys.zeta = convention * alpha;

    const std::size_t dim = sys.speeds.size();
    const std::complex<double> start = std::polar(1.0, convention * alpha * spec.center()) / static_cast<double>(dim);
    OdeState x(2 * dim);
    for (std::size_t s = 0; s < dim; ++s) {
        x[s] = start.real();
        x[dim + s] = start.imag();
    }
    std::size_t steps = 0;
    try {
        auto stepper = odeint::make_controlled(ode_tolerance, ode_tolerance, odeint::runge_kutta_dopri5<OdeState>());
        steps = odeint::integrate_adaptive(stepper, sys, x, 0.0, t, std::min(t, 1e-3));
    } catch (const std::exception& e) {
        throw Error(ErrorKind::numerical, std::string("ODE integration failed after ") + std::to_string(steps) +
                                              " steps at alpha=" + fmt(alpha) + ": " + e.what());
    }
    std::complex<double> sum = 0.0;
    for (std::size_t s = 0; s < dim; ++s) sum += std::complex<double>(x[s], x[dim + s]);
    if (!std::isfinite(sum.real()) || !std::isfinite(sum.imag())) {
        throw Error(ErrorKind::numerical, "ODE integration diverged after " + std::to_string(steps) +
                                              " steps at alpha=" + fmt(alpha));
    }
    return sum;
}

}  // namespace

VerificationReport system_cf_check(const ModelSpec& spec, const std::vector<double>& alphas, double t,
                                   double tolerance, double ode_tolerance) {
    if (spec.size() > 6) throw Error(ErrorKind::size_limit, "system_cf_check is limited to n <= 6");
    if (!(t > 0.0)) throw Error(ErrorKind::domain, "t must be positive");
    VerificationReport rep;
    rep.check_name = "system_cf_check";
    rep.tolerance = tolerance;

    // Fix the transform convention once: E exp(i alpha L) should come out of
    // i alpha diag(c) - Lambda; the reflected system gives the conjugate.
    const double probe = 1.0;
    const std::complex<double> target = char_fn_L(spec, probe, t);
    const double plus = std::abs(integrate_system(spec, probe, t, +1, ode_tolerance) - target);
    const double minus = std::abs(integrate_system(spec, probe, t, -1, ode_tolerance) - target);
    const int convention = plus <= minus ? +1 : -1;
    if (std::abs(target.imag()) < 1e-12) {
        rep.notes.push_back("convention probe indistinguishable (real CF at the probe point); using M = i alpha C - Lambda");
    } else {
        rep.notes.push_back(convention > 0 ? "convention resolved: M = i alpha C - Lambda (CF = E exp(i alpha L))"
                                           : "convention resolved: M = -i alpha C - Lambda");
    }

    for (double alpha : alphas) {
        const std::complex<double> sum = integrate_system(spec, alpha, t, convention, ode_tolerance);
        rep.record({alpha, t}, std::abs(sum - char_fn_L(spec, alpha, t)));
    }
    rep.finalize();
    return rep;
}

VerificationReport initial_condition_check(const TelegraphParams& p1, const TelegraphParams& p2, int sign,
                                           const std::vector<double>& alphas, double tolerance) {
    if (sign != 1 && sign != -1) throw Error(ErrorKind::domain, "sign must be +1 or -1");
    const ModelSpec spec = ModelSpec::from_doubles({p1, p2}, {1.0, static_cast<double>(sign)});
    VerificationReport rep;
    rep.check_name = "initial_condition_check";
    rep.tolerance = tolerance;
    const double c1s = p1.speed * p1.speed;
    const double c2s = p2.speed * p2.speed;
    for (double alpha : alphas) {
        const ExpSumRep e = exp_sum_representation(spec, alpha);
        const double a2 = alpha * alpha;
        const std::array<std::complex<double>, 4> expected = {
            e.phase, 0.0, -(c1s + c2s) * a2 * e.phase, 2.0 * (p1.rate * c1s + p2.rate * c2s) * a2 * e.phase};
        for (unsigned k = 0; k < 4; ++k) {
            double magnitude = 0.0;
            for (const auto& term : e.terms) {
                magnitude += std::abs(term.weight) * std::pow(std::abs(term.exponent), static_cast<int>(k));
            }
            const double scale = std::max(std::abs(expected[k]), magnitude);
            const double diff = std::abs(e.derivative_at_zero(k) - expected[k]);
            rep.record({alpha, static_cast<double>(k)}, scale > 0.0 ? diff / scale : diff);
        }
    }
    rep.finalize();
    return rep;
}

namespace {

// 7-point fourth-order central stencils at offsets -3..3, by derivative order.
constexpr std::array<std::array<double, 7>, 5> kStencils = {{
    {0, 0, 0, 1, 0, 0, 0},
    {0, 1.0 / 12, -2.0 / 3, 0, 2.0 / 3, -1.0 / 12, 0},
    {0, -1.0 / 12, 4.0 / 3, -5.0 / 2, 4.0 / 3, -1.0 / 12, 0},
    {1.0 / 8, -1, 13.0 / 8, 0, -13.0 / 8, 1, -1.0 / 8},
    {-1.0 / 6, 2, -13.0 / 2, 28.0 / 3, -13.0 / 2, 2, -1.0 / 6},
}};

}  // namespace

double apply_operator_fd(const OperatorPoly& op, const std::function<double(double, double)>& f, double x,
                         double t, double hx, double ht) {
    std::array<std::array<double, 7>, 7> samples{};
    std::array<std::array<bool, 7>, 7> have{};
    double sum = 0.0;
    for (const auto& [m, c] : op.terms()) {
        if (m.dt >= kStencils.size() || m.dx >= kStencils.size()) {
            throw Error(ErrorKind::domain, "finite-difference stencils cover derivative orders up to 4");
        }
        const auto& st = kStencils[m.dt];
        const auto& sx = kStencils[m.dx];
        double acc = 0.0;
        for (int b = 0; b < 7; ++b) {
            if (st[b] == 0.0) continue;
            for (int a = 0; a < 7; ++a) {
                if (sx[a] == 0.0) continue;
                if (!have[b][a]) {
                    samples[b][a] = f(x + (a - 3) * hx, t + (b - 3) * ht);
                    have[b][a] = true;
                }
                acc += st[b] * sx[a] * samples[b][a];
            }
        }
        sum += to_double(c) * acc / (std::pow(hx, m.dx) * std::pow(ht, m.dt));
    }
    return sum;
}

namespace {

// AC density of a*X for a single telegraph component.
double scaled_density(const TelegraphParams& p, double a, double y, double t) {
    return density_ac(p, y / a, t) / std::abs(a);
}

// AC density of a1 X1 + a2 X2 as atom-times-density terms plus the
// density-density convolution, the latter by composite fixed-node
// Gauss-Legendre so the result varies smoothly with (x, t).
double two_component_density(const ModelSpec& spec, double x, double t) {
    const auto& p1 = spec[0].params;
    const auto& p2 = spec[1].params;
    const double a1 = spec[0].coef;
    const double a2 = spec[1].coef;
    const double m1 = singular_weight(p1, t);
    const double m2 = singular_weight(p2, t);
    double value = 0.0;
    for (int s : {-1, 1}) {
        value += m1 * scaled_density(p2, a2, x - a1 * (p1.start + s * p1.speed * t), t);
        value += m2 * scaled_density(p1, a1, x - a2 * (p2.start + s * p2.speed * t), t);
    }
    const double c1 = a1 * p1.start;
    const double h1 = std::abs(a1) * p1.speed * t;
    const double c2 = a2 * p2.start;
    const double h2 = std::abs(a2) * p2.speed * t;
    const double lo = std::max(c1 - h1, x - c2 - h2);
    const double hi = std::min(c1 + h1, x - c2 + h2);
    if (hi > lo) {
        constexpr int panels = 8;
        const double w = (hi - lo) / panels;
        auto integrand = [&](double y) {
            return scaled_density(p1, a1, y, t) * scaled_density(p2, a2, x - y, t);
        };
        for (int k = 0; k < panels; ++k) {
            value += boost::math::quadrature::gauss<double, 20>::integrate(integrand, lo + k * w, lo + (k + 1) * w);
        }
    }
    return value;
}

}  // namespace

VerificationReport fd_residual(const ModelSpec& spec, const FdOptions& opts) {
    if (spec.size() > 2) throw Error(ErrorKind::size_limit, "fd_residual supports n <= 2");
    if (opts.levels < 2) throw Error(ErrorKind::domain, "fd_residual needs at least two grids");
    VerificationReport rep;
    rep.check_name = "fd_residual";
    rep.advisory = true;
    rep.tolerance = 1.0 / opts.min_reduction;

    const OperatorPoly op = governing_operator(spec);
    const double t0 = opts.t;
    const double v = support_speed(spec);
    const double center = spec.center();
    double h = opts.h > 0.0 ? opts.h : v * t0 / 16.0;

    std::function<double(double, double)> density;
    if (spec.size() == 1) {
        density = [&](double x, double t) { return density_ac(spec[0].params, x, t); };
    } else {
        density = [&](double x, double t) { return two_component_density(spec, x, t); };
        rep.notes.push_back("n=2 density from atom/density convolution with fixed-node quadrature");
    }

    // Points fixed by the coarsest grid: 5 cells plus the drift of each line
    // across the time stencil, clear of every atom trajectory and the boundary.
    std::vector<double> speeds;
    for (const auto& sigma : enumerate_sign_sequences(spec.size())) speeds.push_back(sigma_speed(spec, sigma));
    std::vector<double> points;
    auto select = [&](double step) {
        points.clear();
        const double dt = step / v;
        const int reach = static_cast<int>(std::ceil(v * t0 / step));
        for (int m = -reach; m <= reach; ++m) {
            const double x = center + m * step;
            bool ok = std::abs(x - center) < v * t0 - (5.0 * step + 3.0 * dt * v);
            for (double c : speeds) ok = ok && std::abs(x - (center + c * t0)) > 5.0 * step + 3.0 * dt * std::abs(c);
            if (ok) points.push_back(x);
        }
    };
    select(h);
    // The automatic step shrinks when lines crowd the support.
    for (int tries = 0; points.empty() && opts.h <= 0.0 && tries < 4; ++tries) select(h *= 0.5);
    const double ht = h / v;
    if (!(t0 - 3.0 * ht > 0.0)) throw Error(ErrorKind::domain, "time stencil reaches t <= 0; use a smaller h");
    if (points.empty()) {
        rep.status = CheckStatus::inconclusive;
        rep.max_residual = std::numeric_limits<double>::infinity();
        rep.notes.push_back("no interior points clear of the singular lines; use a smaller h");
        rep.finalize();
        return rep;
    }

    std::vector<double> level_residual;
    for (int level = 0; level < opts.levels; ++level) {
        const double scale = std::ldexp(1.0, -level);
        double worst = 0.0;
        for (double x : points) {
            worst = std::max(worst, std::abs(apply_operator_fd(op, density, x, t0, h * scale, ht * scale)));
        }
        level_residual.push_back(worst);
        rep.notes.push_back("h=" + fmt(h * scale) + " max |P f| = " + fmt(worst));
    }

    bool monotone = true;
    double worst_ratio = 0.0;
    for (std::size_t i = 1; i < level_residual.size(); ++i) {
        const double ratio = level_residual[i - 1] > 0.0 ? level_residual[i] / level_residual[i - 1] : 0.0;
        if (level_residual[i] > level_residual[i - 1]) monotone = false;
        worst_ratio = std::max(worst_ratio, ratio);
        rep.record({h * std::ldexp(1.0, -static_cast<int>(i)), static_cast<double>(i)}, ratio);
    }
    rep.max_residual = worst_ratio;
    if (!monotone) {
        rep.status = CheckStatus::inconclusive;
        rep.notes.push_back("residual grew under refinement");
    }
    rep.finalize();
    return rep;
}

}  // namespace linform
