#include "linform/montecarlo.hpp"

#include "linform/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <string>
#include <thread>
#include <unordered_map>

namespace linform {

namespace {

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::mt19937_64 chunk_engine(std::uint64_t seed, std::uint64_t chunk) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(chunk), static_cast<std::uint32_t>(chunk >> 32)};
    return std::mt19937_64(seq);
}

}  // namespace

PositionDraw sample_position(const TelegraphParams& p, double t, std::mt19937_64& rng) {
    if (!(t > 0.0)) throw Error(ErrorKind::domain, "t must be positive");
    PositionDraw d;
    d.initial_sign = (rng() >> 63) ? 1 : -1;
    double sign = d.initial_sign;
    double s = 0.0;
    double remaining = t;
    for (;;) {
        const double tau = -std::log1p(-uniform01(rng)) / p.rate;
        if (tau >= remaining) {
            s += sign * remaining;
            break;
        }
        s += sign * tau;
        remaining -= tau;
        sign = -sign;
        ++d.events;
    }
    d.signed_time = std::clamp(s, -t, t);
    d.position = p.start + p.speed * d.signed_time;
    return d;
}

SampleSet sample_linear_form(const ModelSpec& spec, double t, std::size_t count, std::uint64_t seed,
                             unsigned workers) {
    if (count == 0) throw Error(ErrorKind::domain, "sample count must be at least 1");
    if (!(t > 0.0)) throw Error(ErrorKind::domain, "t must be positive");
    SampleSet out;
    out.t = t;
    out.seed = seed;
    out.values.resize(count);
    out.event_counts.resize(count);
    out.initial_signs.resize(count);

    const std::size_t n = spec.size();
    const std::size_t chunks = (count + kSampleChunk - 1) / kSampleChunk;
    std::atomic<std::size_t> next{0};

    auto work = [&] {
        for (std::size_t c = next++; c < chunks; c = next++) {
            auto rng = chunk_engine(seed, c);
            const std::size_t end = std::min(count, (c + 1) * kSampleChunk);
            for (std::size_t i = c * kSampleChunk; i < end; ++i) {
                double value = 0.0;
                std::uint32_t events = 0;
                std::uint32_t index = 0;
                for (std::size_t k = 0; k < n; ++k) {
                    const PositionDraw d = sample_position(spec[k].params, t, rng);
                    // Same expression as singular_location, so zero-event draws match it bitwise.
                    value += spec[k].coef * d.position;
                    events += d.events;
                    index = (index << 1) | (d.initial_sign > 0 ? 1u : 0u);
                }
                out.values[i] = value;
                out.event_counts[i] = events;
                out.initial_signs[i] = index;
            }
        }
    };

    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, chunks));
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    return out;
}

std::vector<AtomFraction> empirical_atom_masses(const SampleSet& s, const std::vector<SingularAtom>& atoms,
                                                double z) {
    std::unordered_map<std::uint32_t, std::size_t> owner;
    for (std::size_t a = 0; a < atoms.size(); ++a) {
        for (auto idx : atoms[a].sign_indices) owner.emplace(idx, a);
    }
    std::vector<std::size_t> hits(atoms.size(), 0);
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s.event_counts[i] != 0) continue;
        auto it = owner.find(s.initial_signs[i]);
        if (it == owner.end()) {
            throw Error(ErrorKind::consistency,
                        "zero-event draw with sign index " + std::to_string(s.initial_signs[i]) + " matches no atom");
        }
        ++hits[it->second];
    }
    const double n = static_cast<double>(s.size());
    std::vector<AtomFraction> out;
    out.reserve(atoms.size());
    for (std::size_t a = 0; a < atoms.size(); ++a) {
        AtomFraction f;
        f.atom = atoms[a];
        f.hits = hits[a];
        f.fraction = static_cast<double>(hits[a]) / n;
        f.expected = atoms[a].mass;
        f.sigma = std::sqrt(f.expected * (1.0 - f.expected) / n);
        f.ci_lo = f.expected - z * f.sigma;
        f.ci_hi = f.expected + z * f.sigma;
        out.push_back(std::move(f));
    }
    return out;
}

double zero_event_fraction(const SampleSet& s) {
    const auto zeros = std::count(s.event_counts.begin(), s.event_counts.end(), 0u);
    return static_cast<double>(zeros) / static_cast<double>(s.size());
}

std::complex<double> empirical_char_fn(const SampleSet& s, double alpha) {
    double re = 0.0;
    double im = 0.0;
    for (double v : s.values) {
        re += std::cos(alpha * v);
        im += std::sin(alpha * v);
    }
    const double n = static_cast<double>(s.size());
    return {re / n, im / n};
}

double ks_statistic(std::vector<double> values, const std::function<double(double)>& cdf) {
    if (values.empty()) throw Error(ErrorKind::domain, "KS statistic of an empty sample");
    std::sort(values.begin(), values.end());
    const double n = static_cast<double>(values.size());
    double worst = 0.0;
    std::size_t i = 0;
    while (i < values.size()) {
        const double v = values[i];
        std::size_t j = i;
        while (j < values.size() && values[j] == v) ++j;
        // Empirical left limit i/N against F(v) = Pr{L < v}; right value j/N against F(v+).
        const double left = cdf(v);
        const double right = cdf(std::nextafter(v, std::numeric_limits<double>::infinity()));
        worst = std::max(worst, std::abs(static_cast<double>(i) / n - left));
        worst = std::max(worst, std::abs(static_cast<double>(j) / n - right));
        i = j;
    }
    return worst;
}

double ks_statistic(const SampleSet& s, const std::function<double(double)>& cdf, KsCondition condition) {
    if (condition == KsCondition::all) return ks_statistic(s.values, cdf);
    std::vector<double> kept;
    kept.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s.event_counts[i] >= 1) kept.push_back(s.values[i]);
    }
    return ks_statistic(std::move(kept), cdf);
}

double ks_threshold(std::size_t n) { return 1.95 / std::sqrt(static_cast<double>(n)); }

double normal_cdf(double x, double mean, double variance) {
    return 0.5 * std::erfc(-(x - mean) / std::sqrt(2.0 * variance));
}

ModelSpec kac_scaled_spec(const ModelSpec& base, const std::vector<double>& rhos, double scale) {
    if (rhos.size() != base.size()) throw Error(ErrorKind::dimension, "need one rho per component");
    if (!(scale > 0.0)) throw Error(ErrorKind::domain, "Kac scale must be positive");
    std::vector<TelegraphParams> params;
    std::vector<double> coefs;
    for (std::size_t k = 0; k < base.size(); ++k) {
        if (!(rhos[k] > 0.0)) throw Error(ErrorKind::domain, "rho must be positive");
        TelegraphParams p = base[k].params;
        p.rate = scale * base[k].params.rate;
        p.speed = std::sqrt(rhos[k] * p.rate);
        params.push_back(p);
        coefs.push_back(base[k].coef);
    }
    return ModelSpec::from_doubles(params, coefs);
}

KacTable kac_convergence(const ModelSpec& base, const std::vector<double>& rhos,
                         const std::vector<double>& scales, double t, std::size_t count, std::uint64_t seed) {
    KacTable table;
    table.limit_mean = base.center();
    double var = 0.0;
    for (std::size_t k = 0; k < base.size(); ++k) var += rhos.at(k) * base[k].coef * base[k].coef;
    table.limit_variance = t * var;
    for (double m : scales) {
        if (!(m >= 1.0)) throw Error(ErrorKind::domain, "Kac scales must be >= 1");
        const ModelSpec spec = kac_scaled_spec(base, rhos, m);
        const SampleSet s = sample_linear_form(spec, t, count, seed);
        const double mean = table.limit_mean;
        const double variance = table.limit_variance;
        table.rows.push_back({m, ks_statistic(s, [&](double x) { return normal_cdf(x, mean, variance); }), count});
    }
    return table;
}

}  // namespace linform
