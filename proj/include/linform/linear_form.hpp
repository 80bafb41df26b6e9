#pragma once

#include "linform/model.hpp"

#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace linform {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double width() const noexcept { return hi - lo; }
    bool contains(double x) const noexcept { return lo <= x && x <= hi; }
};

/// Closed support [center - tV, center + tV] of L(t), V = support_speed(spec).
Interval support(const ModelSpec& spec, double t);

/// Position reached by L(t) when no component reverses: center + sum_k a_k c_k (i_k t).
/// The sampler uses this same expression, so zero-event draws land on it bitwise.
double singular_location(const ModelSpec& spec, const SignSeq& sigma, double t);

struct SingularAtom {
    double location = 0.0;
    double mass = 0.0;
    int multiplicity = 1;
    /// Lexicographic indices of the sign sequences merged into this atom.
    std::vector<std::uint32_t> sign_indices;
};

/// The discrete part of L(t): 2^n zero-reversal endpoints, each of mass
/// e^{-Lambda t}/2^n, merged where locations coincide (exactly in exact mode,
/// within 1e-12 * support width otherwise). Sorted by location.
std::vector<SingularAtom> singular_atoms(const ModelSpec& spec, double t);

/// E exp(i alpha L(t)) = exp(i alpha center) prod_k damped_factor(rate_k, c_k, a_k alpha, t).
std::complex<double> char_fn_L(const ModelSpec& spec, double alpha, double t);

struct ExpTerm {
    std::complex<double> weight;
    std::complex<double> exponent;
    unsigned t_power = 0;
};

/// char_fn_L(alpha, t) = phase * sum_j weight_j t^{p_j} exp(exponent_j t).
struct ExpSumRep {
    std::complex<double> phase;
    /// One term per sign sequence, in lexicographic order.
    std::vector<ExpTerm> terms;

    std::complex<double> evaluate(double t) const;
    /// k-th time derivative at t = 0, phase included.
    std::complex<double> derivative_at_zero(unsigned k) const;
    /// Terms with identical (exponent, t_power) combined.
    std::vector<ExpTerm> merged() const;
};

/// Relative size of |Delta_k| below which a factor switches to the
/// confluent e^{-rate t}(1 + rate t) form.
inline constexpr double kConfluentThreshold = 1e-7;

/// Each factor split as sum_{+-} (1 +- rate/Delta)/2 exp((-rate +- Delta) t),
/// Delta = sqrt(rate^2 - c^2 a^2 alpha^2).
ExpSumRep exp_sum_representation(const ModelSpec& spec, double alpha,
                                 double confluent_threshold = kConfluentThreshold);

struct AcDensityOptions {
    /// Grid half-width as a multiple of the support half-width (>= 1).
    double half_width_factor = 1.25;
    /// Power of two >= 256, or 0 to double from 256 until the tail is small.
    std::size_t points = 0;
    double tail_tolerance = 1e-6;
    std::size_t max_points = std::size_t{1} << 20;
    /// Order p of an exp(-36 (alpha/alpha_max)^p) spectral filter; 0 disables it.
    int filter_order = 0;
};

/// Uniform grid of absolutely continuous density values at fixed t.
struct DistributionGrid {
    double t = 0.0;
    double x0 = 0.0;
    double dx = 0.0;
    std::vector<double> values;
    double ac_mass = 0.0;

    double alpha_max = 0.0;
    double tail_magnitude = 0.0;
    double min_raw_value = 0.0;
    std::vector<std::string> warnings;

    double x_at(std::size_t i) const noexcept { return x0 + static_cast<double>(i) * dx; }
};

/// Characteristic function of the absolutely continuous part:
/// char_fn_L minus the transform of the atoms.
std::complex<double> ac_char_fn(const ModelSpec& spec, double alpha, double t,
                                const std::vector<SingularAtom>& atoms);

/// max |ac_char_fn| sampled over [0.9 alpha_max, alpha_max].
double ac_tail_magnitude(const ModelSpec& spec, double t, double alpha_max,
                         const std::vector<SingularAtom>& atoms);

/// Raw (unclipped) discrete Fourier inversion of the AC characteristic function
/// on x_j = x0 + j dx, j < points. The lattice must cover the support.
std::vector<double> invert_ac_char_fn(const ModelSpec& spec, double t, double x0, double dx,
                                      std::size_t points, int filter_order = 0);

/// AC density by FFT inversion; throws a bandwidth error if the characteristic
/// function has not decayed to tail_tolerance at the grid's Nyquist frequency.
DistributionGrid ac_density(const ModelSpec& spec, double t, const AcDensityOptions& opts = {});

/// Left-continuous distribution function F(x) = Pr{L(t) < x} assembled from the
/// atoms and the cumulative (trapezoid) integral of an AC density grid.
class LinearFormCdf {
public:
    LinearFormCdf(const ModelSpec& spec, double t, const AcDensityOptions& opts = {});

    double operator()(double x) const;
    /// Integral of the AC density up to x (not normalised).
    double ac_cumulative(double x) const;
    /// ac_cumulative normalised to a probability distribution.
    double ac_cdf(double x) const;

    double ac_mass() const noexcept { return cumulative_.back(); }
    const DistributionGrid& grid() const noexcept { return grid_; }
    const std::vector<SingularAtom>& atoms() const noexcept { return atoms_; }
    const Interval& support() const noexcept { return support_; }

private:
    Interval support_;
    std::vector<SingularAtom> atoms_;
    DistributionGrid grid_;
    std::vector<double> cumulative_;
};

/// One-shot F(x) = Pr{L(t) < x}; builds the density grid on every call.
double cdf(const ModelSpec& spec, double x, double t, const AcDensityOptions& opts = {});

}  // namespace linform
