#pragma once

#include "linform/model.hpp"

#include <complex>
#include <functional>

namespace linform {

/// Truncation controls for the modified Bessel series.
struct BesselConfig {
    double rel_tolerance = 1e-15;
    int max_terms = 500;
};

/// I_0(z) = sum_k (z/2)^{2k} / (k!)^2, z >= 0.
double bessel_i0(double z, const BesselConfig& cfg = {});

/// I_1(z) = sum_k (z/2)^{2k+1} / (k!(k+1)!), z >= 0.
double bessel_i1(double z, const BesselConfig& cfg = {});

/// I_1(z)/z, finite at z = 0 (value 1/2).
double bessel_i1_over_z(double z, const BesselConfig& cfg = {});

/// Probability mass sitting at each endpoint x0 +- ct: e^{-rate t}/2.
double singular_weight(const TelegraphParams& p, double t);

/// Density of the absolutely continuous part of X(t); zero outside the open
/// interval (x0 - ct, x0 + ct). Requires t > 0.
double density_ac(const TelegraphParams& p, double x, double t, const BesselConfig& cfg = {});

/// e^{-rate t} [cosh(t D) + rate sinh(t D)/D], D = sqrt(rate^2 - (speed*xi)^2),
/// continued through the trigonometric branch. This is the characteristic
/// function of a telegraph process started at the origin, evaluated at xi.
double damped_factor(double rate, double speed, double xi, double t);

/// Characteristic function E exp(i alpha X(t)) for a process started at p.start.
std::complex<double> char_fn(const TelegraphParams& p, double alpha, double t);

/// Adaptive Gauss-Kronrod (15/31) quadrature; the rule never samples the
/// interval endpoints.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-12, double* error_estimate = nullptr);

/// Integral of density_ac over the open support.
double ac_mass(const TelegraphParams& p, double t, const BesselConfig& cfg = {});

}  // namespace linform
