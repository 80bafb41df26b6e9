#pragma once

#include "linform/linear_form.hpp"
#include "linform/model.hpp"

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace linform {

/// Draws per independent RNG stream; part of the reproducibility contract.
inline constexpr std::size_t kSampleChunk = 4096;

struct PositionDraw {
    double position = 0.0;
    std::uint32_t events = 0;
    int initial_sign = 1;
    /// Net signed travel time in [-t, t]; position = start + speed * signed_time.
    double signed_time = 0.0;
};

/// One telegraph path to time t by exact event simulation.
PositionDraw sample_position(const TelegraphParams& p, double t, std::mt19937_64& rng);

/// Draws of L(t). Initial directions are stored as lexicographic sign indices.
struct SampleSet {
    double t = 0.0;
    std::uint64_t seed = 0;
    std::vector<double> values;
    std::vector<std::uint32_t> event_counts;
    std::vector<std::uint32_t> initial_signs;

    std::size_t size() const noexcept { return values.size(); }
    SignSeq initial_sign_seq(std::size_t i, std::size_t n) const { return SignSeq::from_index(initial_signs[i], n); }
};

/// Deterministic in (spec, t, count, seed): chunk c uses its own mt19937_64
/// seeded from (seed, c), and results land at fixed indices, so the number of
/// worker threads (0 = hardware concurrency) never changes the output.
SampleSet sample_linear_form(const ModelSpec& spec, double t, std::size_t count, std::uint64_t seed,
                             unsigned workers = 0);

struct AtomFraction {
    SingularAtom atom;
    std::size_t hits = 0;
    double fraction = 0.0;
    double expected = 0.0;
    /// Binomial standard deviation of the fraction under the expected mass.
    double sigma = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;

    bool within() const noexcept { return ci_lo <= fraction && fraction <= ci_hi; }
};

/// Fractions of zero-event draws per atom, grouped through the initial sign
/// index of each draw (never by comparing positions). CI is expected +- z sigma.
/// Throws a consistency error if a sign index belongs to no atom.
std::vector<AtomFraction> empirical_atom_masses(const SampleSet& s, const std::vector<SingularAtom>& atoms,
                                                double z = 4.0);

/// Fraction of draws with no reversal at all.
double zero_event_fraction(const SampleSet& s);

/// (1/N) sum_j exp(i alpha value_j).
std::complex<double> empirical_char_fn(const SampleSet& s, double alpha);

enum class KsCondition { all, ac_only };

/// sup_x |F_N(x) - F(x)| for a left-continuous model CDF F(x) = Pr{L < x}.
/// ac_only keeps the draws with at least one reversal; F should then be the
/// normalised AC distribution function.
double ks_statistic(const SampleSet& s, const std::function<double(double)>& cdf,
                    KsCondition condition = KsCondition::all);

/// Same statistic for an arbitrary sample.
double ks_statistic(std::vector<double> values, const std::function<double(double)>& cdf);

/// Asymptotic 0.1% Kolmogorov-Smirnov critical value, 1.95/sqrt(N).
double ks_threshold(std::size_t n);

double normal_cdf(double x, double mean, double variance);

/// rate_k = M rate0_k and speed_k = sqrt(rho_k M rate0_k), so speed^2/rate = rho exactly.
ModelSpec kac_scaled_spec(const ModelSpec& base, const std::vector<double>& rhos, double scale);

struct KacRow {
    double scale = 1.0;
    double ks = 0.0;
    std::size_t count = 0;
};

struct KacTable {
    double limit_mean = 0.0;
    double limit_variance = 0.0;
    std::vector<KacRow> rows;
};

/// KS distance of sampled L(t) under Kac scaling against the Gaussian limit
/// with mean sum a_k x_k and variance t sum rho_k a_k^2, one row per scale.
KacTable kac_convergence(const ModelSpec& base, const std::vector<double>& rhos,
                         const std::vector<double>& scales, double t, std::size_t count, std::uint64_t seed);

}  // namespace linform
