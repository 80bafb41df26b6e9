#pragma once

#include "linform/model.hpp"
#include "linform/operator_poly.hpp"

#include <cstddef>

namespace linform {

/// Largest matrix det_cofactor will expand (8! terms before memoisation).
inline constexpr std::size_t kCofactorMaxDim = 8;
/// Default component cap for governing_operator.
inline constexpr std::size_t kGoverningOperatorCap = 5;

/// Scalar transition matrix: the total rate on the diagonal, -lambda_k where the
/// sign sequences differ only in position k, zero elsewhere. Rows and columns
/// follow the lexicographic order of enumerate_sign_sequences.
OperatorMatrix build_lambda_matrix(const ModelSpec& spec, std::size_t cap = kDefaultComponentCap);

/// Lambda matrix plus diag(T + c_sigma X).
OperatorMatrix build_system_matrix(const ModelSpec& spec, std::size_t cap = kDefaultComponentCap);

/// Laplace expansion over the commutative ring Q[T, X], memoised on column subsets.
OperatorPoly det_cofactor(const OperatorMatrix& m, std::size_t max_dim = kCofactorMaxDim);

/// Determinant of a system matrix by repeated block reduction
///   Det [[K - uE, bE], [cE, K + uE]] = Det[(K - uE)(K + uE) - bcE].
/// All blocks stay polynomials in the next-level matrix K, so the reduction
/// applies again to K; the running polynomial is carried symbolically in an
/// auxiliary variable and evaluated at the final 1x1 entry.
/// Throws a structure error when the matrix does not have this nested form.
OperatorPoly det_schur(const OperatorMatrix& m);

/// Det of the system matrix: the governing operator of the transition density.
OperatorPoly governing_operator(const ModelSpec& spec, std::size_t cap = kGoverningOperatorCap);

/// Closed form for the sum/difference of two processes (rates and speeds only;
/// start points and coefficients are ignored):
///   (T+L)^2 [T^2 + 2LT - 2(c1^2+c2^2)X^2 - (l1-l2)^2] + [(c1^2-c2^2)X^2 + (l1^2-l2^2)]^2
OperatorPoly reference_operator_closed_form(const ExactComponent& p1, const ExactComponent& p2);

/// Same operator written as a telegraph-type part minus a product of two
/// heat-type operators:
///   (T+L)^2 [T^2 + 2LT - 2(c1^2+c2^2)X^2]
///     - [(l1-l2)T - (c1^2-c2^2)X^2][(l1-l2)T + (c1^2-c2^2)X^2 + 2(l1^2-l2^2)]
OperatorPoly reference_operator_heat_split(const ExactComponent& p1, const ExactComponent& p2);

/// (T + 2 lambda)^2 (T^2 + 4 lambda T - 4 c^2 X^2), the equal-parameter case.
OperatorPoly symmetric_reference_operator(const Rational& rate, const Rational& speed);

/// (T + c)^power.
OperatorPoly shifted_time_power(const Rational& shift, unsigned power);

}  // namespace linform
