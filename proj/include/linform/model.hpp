#pragma once

#include "linform/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace linform {

/// Default upper bound on the number of components (2^8 direction states).
inline constexpr std::size_t kDefaultComponentCap = 8;

/// One Goldstein-Kac process: reversal rate, speed and starting point.
struct TelegraphParams {
    double rate = 1.0;
    double speed = 1.0;
    double start = 0.0;

    /// Throws a domain error unless rate > 0 and speed > 0 (and all finite).
    void validate() const;
};

/// Exact counterpart of TelegraphParams plus the linear-form coefficient.
struct ExactComponent {
    Rational rate;
    Rational speed;
    Rational start;
    Rational coef;
};

/// n independent telegraph processes together with the nonzero coefficients
/// of the linear form L(t) = sum_k a_k X_k(t).
class ModelSpec {
public:
    struct Component {
        TelegraphParams params;
        double coef = 1.0;
        ExactComponent exact;
    };

    /// Every value supplied as an exact rational; exact_mode() is true.
    static ModelSpec from_exact(std::vector<ExactComponent> components);

    /// Values supplied as doubles; their dyadic values are kept as the exact
    /// form, but exact_mode() is false.
    static ModelSpec from_doubles(const std::vector<TelegraphParams>& params,
                                  const std::vector<double>& coefs);

    std::size_t size() const noexcept { return components_.size(); }
    const Component& operator[](std::size_t k) const { return components_[k]; }
    const std::vector<Component>& components() const noexcept { return components_; }
    bool exact_mode() const noexcept { return exact_mode_; }

    /// sum_k a_k x_k^0, the centre of the support.
    double center() const noexcept;
    Rational center_exact() const;

private:
    ModelSpec(std::vector<Component> components, bool exact_mode);

    std::vector<Component> components_;
    bool exact_mode_ = false;
};

/// Joint direction state: one entry of -1 or +1 per component.
class SignSeq {
public:
    SignSeq() = default;
    explicit SignSeq(std::vector<int> signs);

    /// The sequence at position `index` of the lexicographic enumeration of
    /// {-1,+1}^n (first component most significant, -1 before +1).
    static SignSeq from_index(std::uint32_t index, std::size_t n);

    std::size_t size() const noexcept { return signs_.size(); }
    int operator[](std::size_t k) const { return signs_[k]; }
    const std::vector<int>& signs() const noexcept { return signs_; }

    /// Inverse of from_index.
    std::uint32_t index() const noexcept;

    SignSeq negated() const;

    friend bool operator==(const SignSeq&, const SignSeq&) = default;

private:
    std::vector<int> signs_;
};

/// All 2^n sign sequences in lexicographic order; position = canonical index.
std::vector<SignSeq> enumerate_sign_sequences(std::size_t n, std::size_t cap = kDefaultComponentCap);

std::size_t hamming_distance(const SignSeq& a, const SignSeq& b);

/// c_sigma = sum_k a_k i_k c_k.
double sigma_speed(const ModelSpec& spec, const SignSeq& sigma);
Rational sigma_speed_exact(const ModelSpec& spec, const SignSeq& sigma);

/// Sum of the reversal rates.
double lambda_total(const ModelSpec& spec);
Rational lambda_total_exact(const ModelSpec& spec);

/// sum_{a_k>0} a_k c_k - sum_{a_k<0} a_k c_k: growth rate of the support half-width.
double support_speed(const ModelSpec& spec);

}  // namespace linform
