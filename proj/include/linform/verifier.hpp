#pragma once

#include "linform/model.hpp"
#include "linform/operator_algebra.hpp"
#include "linform/operator_poly.hpp"

#include <functional>
#include <string>
#include <vector>

namespace linform {

enum class CheckStatus { passed, failed, inconclusive };

std::string_view to_string(CheckStatus status);

struct ResidualPoint {
    /// Check-specific coordinates, e.g. (alpha, sign index) or (x, t, level).
    std::vector<double> point;
    double residual = 0.0;
};

struct VerificationReport {
    std::string check_name;
    double max_residual = 0.0;
    double tolerance = 0.0;
    bool passed = false;
    CheckStatus status = CheckStatus::failed;
    /// Advisory checks never decide an overall verdict.
    bool advisory = false;
    std::vector<ResidualPoint> details;
    std::vector<std::string> notes;

    void record(std::vector<double> point, double residual);
    /// passed = max_residual <= tolerance; status follows unless already inconclusive.
    void finalize();
};

/// Every exponent of the exponential-sum CF must be a root in s of the symbol
/// P(s, i alpha) of the governing operator. Residual per (alpha, sigma):
///   |P(mu, i alpha)| / (1 + ||P||_alpha max(1, |mu|)^(2^n)),
/// with ||P||_alpha = sum |coef| max(1,|alpha|)^dx. Confluent exponents are
/// double roots, so dP/ds is checked there as well.
VerificationReport symbol_root_check(const ModelSpec& spec, const std::vector<double>& alphas,
                                     double tolerance = 1e-8, std::size_t cap = kGoverningOperatorCap);

/// Integrates df/dt = M(alpha) f, M = i alpha diag(c_sigma) - Lambda_n, from
/// f(0) = exp(i alpha center)/2^n to t and compares sum_sigma f_sigma with char_fn_L.
VerificationReport system_cf_check(const ModelSpec& spec, const std::vector<double>& alphas, double t,
                                   double tolerance = 1e-8, double ode_tolerance = 1e-10);

/// Time derivatives k = 0..3 at t = 0 of the CF of X1 + sign X2 against
///   phase, 0, -(c1^2 + c2^2) alpha^2 phase, 2(l1 c1^2 + l2 c2^2) alpha^2 phase.
/// Residuals are relative to max(|expected|, sum_sigma |W_sigma| |mu_sigma|^k).
VerificationReport initial_condition_check(const TelegraphParams& p1, const TelegraphParams& p2, int sign,
                                           const std::vector<double>& alphas, double tolerance = 1e-10);

/// Finite-difference application of a constant-coefficient operator of order
/// at most 4 in each variable, with 7-point fourth-order central stencils.
double apply_operator_fd(const OperatorPoly& op, const std::function<double(double, double)>& f, double x,
                         double t, double hx, double ht);

struct FdOptions {
    double t = 1.0;
    /// Coarsest spatial step; 0 picks support half-width / 16.
    double h = 0.0;
    /// Grids h, h/2, ..., h/2^(levels-1).
    int levels = 3;
    /// Minimum residual reduction per halving.
    double min_reduction = 2.8;
};

/// Advisory: applies the governing operator to the AC density on the smooth
/// interior (away from atom trajectories and the support boundary) on
/// successively halved grids. max_residual is the largest ratio
/// r_fine / r_coarse; the tolerance is 1/min_reduction. A residual that grows
/// under refinement gives an inconclusive status. Supports n <= 2.
VerificationReport fd_residual(const ModelSpec& spec, const FdOptions& opts = {});

}  // namespace linform
