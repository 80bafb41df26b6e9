#include "linform/linear_form.hpp"

#include "linform/errors.hpp"
#include "linform/telegraph.hpp"

#include <fftw3.h>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace linform {

namespace {

void require_positive_time(double t) {
    if (!(t > 0.0)) throw Error(ErrorKind::domain, "t must be positive");
}

std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

// Owns an FFTW buffer; planning is not thread-safe, execution is.
struct FftwBuffer {
    explicit FftwBuffer(std::size_t n)
        : data(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {
        if (!data) throw Error(ErrorKind::numerical, "FFT buffer allocation failed");
    }
    ~FftwBuffer() { fftw_free(data); }
    FftwBuffer(const FftwBuffer&) = delete;
    FftwBuffer& operator=(const FftwBuffer&) = delete;
    fftw_complex* data;
};

}  // namespace

Interval support(const ModelSpec& spec, double t) {
    if (t < 0.0) throw Error(ErrorKind::domain, "t must be nonnegative");
    const double c = spec.center();
    const double half = t * support_speed(spec);
    return {c - half, c + half};
}

double singular_location(const ModelSpec& spec, const SignSeq& sigma, double t) {
    if (sigma.size() != spec.size()) throw Error(ErrorKind::dimension, "sign sequence length differs from n");
    double sum = 0.0;
    for (std::size_t k = 0; k < spec.size(); ++k) {
        const auto& p = spec[k].params;
        const double s = sigma[k] > 0 ? t : -t;
        sum += spec[k].coef * (p.start + p.speed * s);
    }
    return sum;
}

std::vector<SingularAtom> singular_atoms(const ModelSpec& spec, double t) {
    require_positive_time(t);
    const auto seqs = enumerate_sign_sequences(spec.size(), std::max(spec.size(), kDefaultComponentCap));
    const double each = std::exp(-lambda_total(spec) * t) / static_cast<double>(seqs.size());

    std::vector<SingularAtom> atoms;
    if (spec.exact_mode()) {
        // Locations coincide exactly when the sigma speeds agree as rationals.
        std::map<Rational, std::size_t> by_speed;
        for (const auto& s : seqs) {
            const Rational key = sigma_speed_exact(spec, s);
            auto [it, inserted] = by_speed.try_emplace(key, atoms.size());
            if (inserted) {
                atoms.push_back({singular_location(spec, s, t), 0.0, 0, {}});
            }
            SingularAtom& a = atoms[it->second];
            a.multiplicity += 1;
            a.sign_indices.push_back(s.index());
        }
    } else {
        std::vector<std::pair<double, std::uint32_t>> raw;
        raw.reserve(seqs.size());
        for (const auto& s : seqs) raw.emplace_back(singular_location(spec, s, t), s.index());
        std::stable_sort(raw.begin(), raw.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });
        const double tol = 1e-12 * support(spec, t).width();
        for (const auto& [loc, idx] : raw) {
            if (atoms.empty() || loc - atoms.back().location > tol) {
                atoms.push_back({loc, 0.0, 0, {}});
            }
            atoms.back().multiplicity += 1;
            atoms.back().sign_indices.push_back(idx);
        }
    }
    for (auto& a : atoms) {
        a.mass = each * a.multiplicity;
        std::sort(a.sign_indices.begin(), a.sign_indices.end());
    }
    std::stable_sort(atoms.begin(), atoms.end(),
                     [](const SingularAtom& a, const SingularAtom& b) { return a.location < b.location; });
    return atoms;
}

std::complex<double> char_fn_L(const ModelSpec& spec, double alpha, double t) {
    if (t < 0.0) throw Error(ErrorKind::domain, "t must be nonnegative");
    double h = 1.0;
    for (const auto& c : spec.components()) h *= damped_factor(c.params.rate, c.params.speed, c.coef * alpha, t);
    return std::polar(1.0, alpha * spec.center()) * h;
}

std::complex<double> ExpSumRep::evaluate(double t) const {
    std::complex<double> sum = 0.0;
    for (const auto& term : terms) {
        sum += term.weight * std::pow(t, static_cast<int>(term.t_power)) * std::exp(term.exponent * t);
    }
    return phase * sum;
}

std::complex<double> ExpSumRep::derivative_at_zero(unsigned k) const {
    std::complex<double> sum = 0.0;
    for (const auto& term : terms) {
        if (term.t_power > k) continue;
        // d^k/dt^k [t^p e^{mu t}] at 0 = k!/(k-p)! mu^{k-p}
        double falling = 1.0;
        for (unsigned j = 0; j < term.t_power; ++j) falling *= static_cast<double>(k - j);
        sum += term.weight * falling * std::pow(term.exponent, static_cast<int>(k - term.t_power));
    }
    return phase * sum;
}

std::vector<ExpTerm> ExpSumRep::merged() const {
    std::vector<ExpTerm> out;
    for (const auto& term : terms) {
        auto it = std::find_if(out.begin(), out.end(), [&](const ExpTerm& o) {
            return o.exponent == term.exponent && o.t_power == term.t_power;
        });
        if (it == out.end()) out.push_back(term); else it->weight += term.weight;
    }
    return out;
}

ExpSumRep exp_sum_representation(const ModelSpec& spec, double alpha, double confluent_threshold) {
    const std::size_t n = spec.size();
    // Per component: the (i=-1, i=+1) pair of (weight, exponent, t power).
    std::vector<std::array<ExpTerm, 2>> factors(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double rate = spec[k].params.rate;
        const double zeta = spec[k].params.speed * spec[k].coef * alpha;
        const double disc = rate * rate - zeta * zeta;
        const double mag = std::sqrt(std::abs(disc));
        if (mag < confluent_threshold * rate) {
            factors[k][0] = {1.0, -rate, 0};
            factors[k][1] = {rate, -rate, 1};
            continue;
        }
        if (disc > 0.0) {
            const double ratio = rate / mag;
            factors[k][0] = {0.5 * (1.0 - ratio), -rate - mag, 0};
            factors[k][1] = {0.5 * (1.0 + ratio), -(zeta * zeta) / (rate + mag), 0};
        } else {
            const std::complex<double> delta(0.0, mag);
            const std::complex<double> ratio = rate / delta;
            factors[k][0] = {0.5 * (1.0 - ratio), -rate - delta, 0};
            factors[k][1] = {0.5 * (1.0 + ratio), -rate + delta, 0};
        }
    }

    ExpSumRep rep;
    rep.phase = std::polar(1.0, alpha * spec.center());
    const std::size_t count = std::size_t{1} << n;
    rep.terms.reserve(count);
    for (std::size_t idx = 0; idx < count; ++idx) {
        ExpTerm term{1.0, 0.0, 0};
        for (std::size_t k = 0; k < n; ++k) {
            const ExpTerm& f = factors[k][(idx >> (n - 1 - k)) & 1u];
            term.weight *= f.weight;
            term.exponent += f.exponent;
            term.t_power += f.t_power;
        }
        rep.terms.push_back(term);
    }
    return rep;
}

std::complex<double> ac_char_fn(const ModelSpec& spec, double alpha, double t,
                                const std::vector<SingularAtom>& atoms) {
    std::complex<double> value = char_fn_L(spec, alpha, t);
    for (const auto& a : atoms) value -= a.mass * std::polar(1.0, alpha * a.location);
    return value;
}

double ac_tail_magnitude(const ModelSpec& spec, double t, double alpha_max,
                         const std::vector<SingularAtom>& atoms) {
    constexpr int samples = 256;
    double worst = 0.0;
    for (int i = 0; i <= samples; ++i) {
        const double alpha = alpha_max * (0.9 + 0.1 * i / samples);
        worst = std::max(worst, std::abs(ac_char_fn(spec, alpha, t, atoms)));
    }
    return worst;
}

std::vector<double> invert_ac_char_fn(const ModelSpec& spec, double t, double x0, double dx,
                                      std::size_t points, int filter_order) {
    require_positive_time(t);
    if (points < 2 || !std::has_single_bit(points)) {
        throw Error(ErrorKind::domain, "grid size must be a power of two");
    }
    if (!(dx > 0.0)) throw Error(ErrorKind::domain, "grid step must be positive");
    const auto atoms = singular_atoms(spec, t);
    const double dalpha = 2.0 * std::numbers::pi / (static_cast<double>(points) * dx);
    const double alpha_max = std::numbers::pi / dx;
    const auto half = static_cast<std::ptrdiff_t>(points / 2);

    FftwBuffer buf(points);
    for (std::size_t m = 0; m < points; ++m) {
        const double alpha = static_cast<double>(static_cast<std::ptrdiff_t>(m) - half) * dalpha;
        std::complex<double> g = ac_char_fn(spec, alpha, t, atoms) * std::polar(1.0, -alpha * x0);
        if (filter_order > 0) g *= std::exp(-36.0 * std::pow(std::abs(alpha) / alpha_max, filter_order));
        buf.data[m][0] = g.real();
        buf.data[m][1] = g.imag();
    }

    fftw_plan plan;
    {
        std::lock_guard lock(fftw_planner_mutex());
        plan = fftw_plan_dft_1d(static_cast<int>(points), buf.data, buf.data, FFTW_FORWARD, FFTW_ESTIMATE);
    }
    if (!plan) throw Error(ErrorKind::numerical, "FFT planning failed");
    fftw_execute(plan);
    {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(plan);
    }

    // f_j = (dalpha/2pi) sum_m g_m e^{-i alpha_m j dx}; the shift by N/2 gives (-1)^j.
    std::vector<double> values(points);
    const double scale = dalpha / (2.0 * std::numbers::pi);
    for (std::size_t j = 0; j < points; ++j) {
        values[j] = scale * (j % 2 == 0 ? buf.data[j][0] : -buf.data[j][0]);
    }
    return values;
}

DistributionGrid ac_density(const ModelSpec& spec, double t, const AcDensityOptions& opts) {
    require_positive_time(t);
    if (!(opts.half_width_factor >= 1.0)) throw Error(ErrorKind::domain, "half_width_factor must be >= 1");
    if (opts.points != 0 && (opts.points < 256 || !std::has_single_bit(opts.points))) {
        throw Error(ErrorKind::domain, "points must be a power of two >= 256");
    }
    const auto atoms = singular_atoms(spec, t);
    const double half = opts.half_width_factor * t * support_speed(spec);
    const double x0 = spec.center() - half;

    auto nyquist = [&](std::size_t n) { return std::numbers::pi * static_cast<double>(n) / (2.0 * half); };

    std::size_t n = opts.points;
    double tail = 0.0;
    if (n == 0) {
        for (n = 256;; n *= 2) {
            if (n > opts.max_points) {
                throw Error(ErrorKind::bandwidth,
                            "characteristic function has not decayed to " + std::to_string(opts.tail_tolerance) +
                                " within " + std::to_string(opts.max_points) + " points; increase the point cap");
            }
            tail = ac_tail_magnitude(spec, t, nyquist(n), atoms);
            if (tail < opts.tail_tolerance) break;
        }
    } else {
        tail = ac_tail_magnitude(spec, t, nyquist(n), atoms);
        if (tail > opts.tail_tolerance) {
            throw Error(ErrorKind::bandwidth, "|phi_ac| = " + std::to_string(tail) + " at the Nyquist frequency of " +
                                                  std::to_string(n) + " points exceeds " +
                                                  std::to_string(opts.tail_tolerance) + "; use more points");
        }
    }

    DistributionGrid grid;
    grid.t = t;
    grid.x0 = x0;
    grid.dx = 2.0 * half / static_cast<double>(n);
    grid.alpha_max = nyquist(n);
    grid.tail_magnitude = tail;
    grid.values = invert_ac_char_fn(spec, t, x0, grid.dx, n, opts.filter_order);

    double low = 0.0;
    double sum = 0.0;
    for (double& v : grid.values) {
        low = std::min(low, v);
        if (v < 0.0) v = 0.0;
        sum += v;
    }
    grid.min_raw_value = low;
    if (low < -1e-8) {
        grid.warnings.push_back("clipped negative density values (minimum " + std::to_string(low) + ")");
    }
    grid.ac_mass = grid.dx * sum;
    return grid;
}

LinearFormCdf::LinearFormCdf(const ModelSpec& spec, double t, const AcDensityOptions& opts)
    : support_(linform::support(spec, t)), atoms_(singular_atoms(spec, t)), grid_(ac_density(spec, t, opts)) {
    const auto& f = grid_.values;
    cumulative_.assign(f.size(), 0.0);
    for (std::size_t j = 1; j < f.size(); ++j) {
        cumulative_[j] = cumulative_[j - 1] + 0.5 * grid_.dx * (f[j - 1] + f[j]);
    }
}

double LinearFormCdf::ac_cumulative(double x) const {
    const double u = (x - grid_.x0) / grid_.dx;
    if (!(u > 0.0)) return 0.0;
    const double last = static_cast<double>(cumulative_.size() - 1);
    if (u >= last) return cumulative_.back();
    const auto j = static_cast<std::size_t>(u);
    const double frac = u - static_cast<double>(j);
    return cumulative_[j] + frac * (cumulative_[j + 1] - cumulative_[j]);
}

double LinearFormCdf::ac_cdf(double x) const {
    const double total = ac_mass();
    return total > 0.0 ? std::min(1.0, ac_cumulative(x) / total) : 0.0;
}

double LinearFormCdf::operator()(double x) const {
    if (x <= support_.lo) return 0.0;
    if (x > support_.hi) return 1.0;
    double value = ac_cumulative(x);
    for (const auto& a : atoms_) {
        if (a.location < x) value += a.mass;
    }
    return std::clamp(value, 0.0, 1.0);
}

double cdf(const ModelSpec& spec, double x, double t, const AcDensityOptions& opts) {
    return LinearFormCdf(spec, t, opts)(x);
}

}  // namespace linform
