#ifndef CHEMO_MODEL_HPP
#define CHEMO_MODEL_HPP

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "chemo/errors.hpp"

namespace chemo {

enum class KineticsFamily {
    SaturatingRational,     ///< g = G0 u/(kg+u), b = B0/(1+n/kb)
    SaturatingExponential,  ///< g = G0 (1-exp(-u/kg)), b = B0 exp(-n/kb)
    CustomTable,            ///< piecewise-linear interpolation of tabulated values
    Inert,                  ///< g = b = 0; reactions switched off (test kinetics)
};

std::string_view to_string(KineticsFamily family);
KineticsFamily kinetics_family_from_string(std::string_view name);

/// Piecewise-linear table with strictly increasing abscissae; constant beyond the last point.
struct KineticsTable {
    std::vector<double> x;
    std::vector<double> y;

    void validate() const;

    template <typename Scalar>
    Scalar operator()(Scalar v) const {
        if (v <= x.front()) return Scalar(y.front());
        if (v >= x.back()) return Scalar(y.back());
        std::size_t lo = 0, hi = x.size() - 1;
        while (hi - lo > 1) {
            const std::size_t mid = (lo + hi) / 2;
            if (x[mid] <= v) lo = mid; else hi = mid;
        }
        const Scalar s = (v - x[lo]) / (x[hi] - x[lo]);
        return Scalar(y[lo]) + s * Scalar(y[hi] - y[lo]);
    }
};

/// Reads a two-column CSV (abscissa, value). Lines starting with '#' and a non-numeric header are skipped.
KineticsTable read_kinetics_table(const std::string& path);

struct KineticsSpec {
    KineticsFamily family = KineticsFamily::SaturatingRational;
    double G0 = 1.0;
    double B0 = 1.0;
    double g_shape = 1.0;
    double b_shape = 1.0;
    KineticsTable g_table;
    KineticsTable b_table;

    /// Throws ConfigError unless G0, B0 > 0 and the shape parameters are positive
    /// (the Inert family only requires the record to be well formed).
    void validate() const;
};

struct ModelParams {
    double alpha = 1.0;
    double beta = 1.0;
    double gamma = 1.0;
    double epsilon = 0.0;  ///< 0: hyperbolic transport; > 0: vanishing-viscosity variant
    KineticsSpec kinetics;

    void validate() const;
};

/// Proliferation rate g(u). Throws DomainError for u < 0.
template <typename Scalar>
Scalar g_eval(Scalar u, const KineticsSpec& k) {
    using std::exp;
    if (!(u >= Scalar(0))) throw DomainError("g_eval: density must be nonnegative");
    switch (k.family) {
        case KineticsFamily::SaturatingRational:
            return Scalar(k.G0) * u / (Scalar(k.g_shape) + u);
        case KineticsFamily::SaturatingExponential:
            return Scalar(k.G0) * -std::expm1(-u / Scalar(k.g_shape));
        case KineticsFamily::CustomTable:
            return k.g_table(u);
        case KineticsFamily::Inert:
            return Scalar(0);
    }
    return Scalar(0);
}

/// Inactivation rate b(n). Throws DomainError for n < 0.
template <typename Scalar>
Scalar b_eval(Scalar n, const KineticsSpec& k) {
    using std::exp;
    if (!(n >= Scalar(0))) throw DomainError("b_eval: density must be nonnegative");
    switch (k.family) {
        case KineticsFamily::SaturatingRational:
            return Scalar(k.B0) / (Scalar(1) + n / Scalar(k.b_shape));
        case KineticsFamily::SaturatingExponential:
            return Scalar(k.B0) * exp(-n / Scalar(k.b_shape));
        case KineticsFamily::CustomTable:
            return k.b_table(n);
        case KineticsFamily::Inert:
            return Scalar(0);
    }
    return Scalar(0);
}

/// Cellwise g over a field; negative entries within round-off of zero are read as zero.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> g_field(const Eigen::MatrixBase<Derived>& u,
                                                                   const KineticsSpec& k) {
    using Scalar = typename Derived::Scalar;
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out(u.size());
    for (Eigen::Index i = 0; i < u.size(); ++i) out[i] = g_eval(std::max(u[i], Scalar(0)), k);
    return out;
}

template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> b_field(const Eigen::MatrixBase<Derived>& n,
                                                                   const KineticsSpec& k) {
    using Scalar = typename Derived::Scalar;
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out(n.size());
    for (Eigen::Index i = 0; i < n.size(); ++i) out[i] = b_eval(std::max(n[i], Scalar(0)), k);
    return out;
}

struct HypothesisCheck {
    std::string name;
    bool passed = true;
    long worst_index = -1;  ///< sample index of the worst violation, -1 when passed
    double worst_value = 0.0;
    std::string detail;
};

struct ValidationReport {
    std::vector<HypothesisCheck> checks;

    bool all_passed() const;
    const HypothesisCheck* find(std::string_view name) const;
    std::vector<std::string> failed_names() const;
};

namespace hypothesis {
inline constexpr std::string_view g_zero = "g(0)=0";
inline constexpr std::string_view g_increasing = "g increasing";
inline constexpr std::string_view g_bounded = "g <= G0";
inline constexpr std::string_view g_lipschitz = "g' bounded";
inline constexpr std::string_view b_zero = "b(0)=B0";
inline constexpr std::string_view b_positive = "b > 0";
inline constexpr std::string_view b_decreasing = "b decreasing";
inline constexpr std::string_view b_lipschitz = "b' bounded";
}  // namespace hypothesis

/// Samples g on [0,u_max] and b on [0,n_max] and checks the structural hypotheses.
/// Boundedness of the derivative is judged by refinement: the largest difference
/// quotient must not grow by more than 1.5x when the sampling is refined 4x.
ValidationReport validate_kinetics(const KineticsSpec& k, double u_max, double n_max, std::size_t samples);

}  // namespace chemo

#endif  // CHEMO_MODEL_HPP
