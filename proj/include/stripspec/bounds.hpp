#pragma once

#include <cmath>
#include <limits>
#include <numbers>

#include "stripspec/curvature.hpp"
#include "stripspec/errors.hpp"
#include "stripspec/quadrature.hpp"
#include "stripspec/transverse.hpp"

namespace stripspec {

/// Closed-form threshold bound with every intermediate constant.
/// h and g are reported at c2_plus for the D case.
struct BoundReport {
    BoundaryType iota = BoundaryType::DN;
    double E1 = 0.0;
    double alpha = 0.0;
    double s0 = 0.0;
    double d = 0.0;
    double bound_value = 0.0;
    double C = 0.0;
    bool degenerate = false;
    // DN intermediates
    double mean_u = std::numeric_limits<double>::quiet_NaN();
    double c_plus = std::numeric_limits<double>::quiet_NaN();
    double f_min = std::numeric_limits<double>::quiet_NaN();
    // D intermediates
    double h = std::numeric_limits<double>::quiet_NaN();
    double g = std::numeric_limits<double>::quiet_NaN();
    double A_value = std::numeric_limits<double>::quiet_NaN();
    double c1_plus = std::numeric_limits<double>::quiet_NaN();
    double c2_plus = std::numeric_limits<double>::quiet_NaN();
    double epsilon0 = std::numeric_limits<double>::quiet_NaN();
};

namespace detail {
inline void check_two_forms_agree(double E1, double f_min, double bound) {
    // the two printed forms of the theorem must be the same number
    if (std::abs(E1 + f_min - bound) > 1e-12 * std::max(1.0, std::abs(E1)))
        throw std::logic_error("bound report: E1 + f_min != E1 - C^2 alpha^p beyond 1e-12");
}
} // namespace detail

/// DN threshold bound: E1 - C^{DN}(s0,d,alpha)^2 alpha^2 for alpha <= 0.
inline BoundReport bound_dn(double s0, double d, double alpha) {
    if (s0 <= 0.0 || d <= 0.0) throw std::invalid_argument("bound_dn: s0, d must be positive");
    if (alpha > 0.0) throw DomainError("bound_dn: requires alpha <= 0");
    constexpr double pi = std::numbers::pi;
    BoundReport r;
    r.iota = BoundaryType::DN;
    r.E1 = transverse_eigenvalue(BoundaryType::DN, 1, d);
    r.alpha = alpha;
    r.s0 = s0;
    r.d = d;
    r.mean_u = mean_u_dn(d);
    if (alpha == 0.0) {
        r.degenerate = true;
        r.bound_value = r.E1;
        r.C = std::sqrt(r.E1) * (std::sqrt(3.0) / pi) / 2.0;
        r.f_min = 0.0;
        r.c_plus = std::numeric_limits<double>::infinity();
        return r;
    }
    const double uod = r.mean_u / d;  // 1/2 + 2/pi^2
    const double root = std::sqrt(1.0 - 1.5 * alpha * s0 / d + 0.75 * alpha * alpha * uod);
    r.c_plus = -2.0 * d / (alpha * s0) + 1.0 -
               (d / (alpha * s0)) *
                   std::sqrt(-6.0 * alpha * s0 / d + 4.0 + 3.0 * alpha * alpha * r.mean_u / d);
    r.f_min = (-3.0 * alpha * alpha / (d * d)) / (4.0 * (1.0 + root) * (1.0 + root));
    r.C = std::sqrt(r.E1) * (std::sqrt(3.0) / pi) / (1.0 + root);
    r.bound_value = r.E1 - r.C * r.C * alpha * alpha;
    detail::check_two_forms_agree(r.E1, r.f_min, r.bound_value);
    return r;
}

/// D threshold bound: E1 - C^D(s0,d,alpha)^2 alpha^4.
inline BoundReport bound_d(double s0, double d, double alpha) {
    if (s0 <= 0.0 || d <= 0.0) throw std::invalid_argument("bound_d: s0, d must be positive");
    constexpr double pi = std::numbers::pi;
    const double q = s0 / d - alpha / 4.0;
    if (!(q > 0.0)) throw DomainError("bound_d: requires s0/d - alpha/4 > 0");
    BoundReport r;
    r.iota = BoundaryType::D;
    r.E1 = transverse_eigenvalue(BoundaryType::D, 1, d);
    r.alpha = alpha;
    r.s0 = s0;
    r.d = d;
    r.c2_plus = 1.0 + d / (pi * s0);
    auto hfun = [&](double c) { return (2.0 / (pi * pi)) * (d / s0) / (c - 1.0); };
    auto gfun = [&](double c) { return (s0 / d) * (c + 2.0) - 0.75 * alpha; };
    r.h = hfun(r.c2_plus);
    r.g = gfun(r.c2_plus);
    r.epsilon0 = -(8.0 * alpha / (3.0 * pi * pi)) / (r.h + 2.0 * r.g);
    r.A_value = (16.0 / (3.0 * pi * pi)) * alpha * r.epsilon0 +
                r.epsilon0 * r.epsilon0 * (2.0 * r.g + r.h);
    if (alpha == 0.0) {
        r.f_min = 0.0;
        r.c1_plus = std::numeric_limits<double>::quiet_NaN();
    } else {
        // stationary quadratic in x = c1 - 1 (root greater than 1 chosen)
        const double a = (s0 / d) * r.A_value;
        const double b = 4.0 / (pi * pi);
        const double c = (6.0 / (pi * pi)) * (d / s0) * q;
        const double disc = b * b - 4.0 * a * c;
        r.c1_plus = 1.0 + (b + std::sqrt(disc)) / (-2.0 * a);
        const double root = std::sqrt(1.0 - 1.5 * r.A_value * pi * pi * q);
        r.f_min = -(3.0 * std::pow(pi, 4) / (4.0 * d * d)) * r.A_value * r.A_value /
                  ((1.0 + root) * (1.0 + root));
    }
    const double ratio = (4.0 * s0 - alpha * d) / (4.0 * s0 - alpha * d + 8.0 * d / (3.0 * pi));
    const double t = 4.0 * alpha / (3.0 * pi);
    r.C = (16.0 / 27.0) * (std::sqrt(3.0) / (pi * pi)) / (d * (q + 2.0 / (3.0 * pi))) /
          (1.0 + std::sqrt(1.0 + t * t * ratio));
    r.bound_value = r.E1 - r.C * r.C * std::pow(alpha, 4);
    detail::check_two_forms_agree(r.E1, r.f_min, r.bound_value);
    return r;
}

/// Leading term of the DN thin-strip gap estimate: -alpha/(2 s0 d).
inline double thin_gap_dn(double s0, double d, double alpha) {
    return -alpha / (2.0 * s0 * d);
}

struct MildCoeff {
    double C_thin;      ///< |k|_{L2}^2 / 8
    double ratio_bound; ///< 128/(9 sqrt(3) pi^2)
};

/// Thin-width limit of the mildly-curved comparison constant.
inline MildCoeff mild_coeff_d(const CurvatureProfile& profile) {
    if (!profile.integrable() || !profile.has_compact_support())
        throw NonIntegrable("mild_coeff_d: profile must be square-integrable (compact support)");
    const double lo = profile.support_lo(), hi = profile.support_hi();
    double l2 = 0.0;
    if (hi > lo)
        l2 = simpson([&](double s) { const double k = profile(s); return k * k; }, lo, hi, 4096);
    constexpr double pi = std::numbers::pi;
    return {l2 / 8.0, 128.0 / (9.0 * std::sqrt(3.0) * pi * pi)};
}

/// Critical width d_n of the bound-state counting argument:
/// min over j of int |phi0|^2 |k(. - s0 + s_{j-1})| / |phi0'|^2 over the
/// first of the n equal subdivisions of J=(j_lo, j_hi).
inline double dn_count_width(const CurvatureProfile& profile, double j_lo, double j_hi,
                             const SampledFunction& phi0, int n) {
    if (!(j_hi > j_lo)) throw std::invalid_argument("dn_count_width: empty interval J");
    if (n < 1) throw std::invalid_argument("dn_count_width: n must be >= 1");
    // k must be strictly negative on J (sampled check)
    const int probes = 1024;
    for (int i = 1; i < probes; ++i) {
        const double s = j_lo + (j_hi - j_lo) * i / probes;
        if (!(profile(s) < 0.0))
            throw DomainError("dn_count_width: curvature not strictly negative on J");
    }
    const double sub = (j_hi - j_lo) / n;
    const double s1 = j_lo + sub;
    if (phi0.s_begin < j_lo - 1e-12 || phi0.s_end() > s1 + 1e-12)
        throw DomainError("dn_count_width: phi0 not supported in the first subdivision");
    const double ndot2 = phi0.derivative_norm2();
    if (ndot2 <= 0.0) throw std::invalid_argument("dn_count_width: phi0 is constant");
    double best = std::numeric_limits<double>::infinity();
    for (int j = 1; j <= n; ++j) {
        const double shift = (j - 1) * sub;  // sigma - s0 + s_{j-1} = sigma + shift
        const double val =
            phi0.weighted_l2([&](double sigma) { return std::abs(profile(sigma + shift)); });
        best = std::min(best, val);
    }
    return best / ndot2;
}

} // namespace stripspec
