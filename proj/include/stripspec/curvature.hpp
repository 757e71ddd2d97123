#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <utility>
#include <vector>

#include "stripspec/errors.hpp"

namespace stripspec {

/// Symbolic curvature profile k(s): a closed set of primitives with
/// analytically known integrals and sup-norms, plus scaling and sums.
class CurvatureProfile {
  public:
    enum class Kind { Zero, CompactBump, PiecewiseLinear, PeriodicCosine, Scaled, Sum };

    CurvatureProfile() : kind_(Kind::Zero) { finish(); }

    static CurvatureProfile zero() { return CurvatureProfile(); }

    /// amplitude*(1-x^2)^order on |x|<1 with x=(s-center)/half_width.
    /// order >= 2 keeps the profile C^1.
    static CurvatureProfile compact_bump(double amplitude, double center,
                                         double half_width, int order = 2) {
        if (half_width <= 0.0) throw std::invalid_argument("compact_bump: half_width must be positive");
        if (order < 2) throw std::invalid_argument("compact_bump: order must be >= 2");
        CurvatureProfile p;
        p.kind_ = Kind::CompactBump;
        p.a_ = amplitude;
        p.b_ = center;
        p.c_ = half_width;
        p.order_ = order;
        p.finish();
        return p;
    }

    /// Linear interpolation through (s,k) knots, zero outside the knot range.
    static CurvatureProfile piecewise_linear(std::vector<std::pair<double, double>> knots) {
        if (knots.size() < 2) throw std::invalid_argument("piecewise_linear: need at least 2 knots");
        for (std::size_t i = 1; i < knots.size(); ++i)
            if (knots[i].first <= knots[i - 1].first)
                throw std::invalid_argument("piecewise_linear: knots must be strictly increasing in s");
        CurvatureProfile p;
        p.kind_ = Kind::PiecewiseLinear;
        p.knots_ = std::move(knots);
        p.finish();
        return p;
    }

    /// amplitude * cos(2 pi s / period).
    static CurvatureProfile periodic_cosine(double amplitude, double period) {
        if (period <= 0.0) throw std::invalid_argument("periodic_cosine: period must be positive");
        CurvatureProfile p;
        p.kind_ = Kind::PeriodicCosine;
        p.a_ = amplitude;
        p.b_ = period;
        p.finish();
        return p;
    }

    static CurvatureProfile scaled(double beta, CurvatureProfile base) {
        CurvatureProfile p;
        p.kind_ = Kind::Scaled;
        p.a_ = beta;
        p.children_.push_back(std::move(base));
        p.finish();
        return p;
    }

    static CurvatureProfile sum(std::vector<CurvatureProfile> terms) {
        CurvatureProfile p;
        p.kind_ = Kind::Sum;
        p.children_ = std::move(terms);
        p.finish();
        return p;
    }

    double operator()(double s) const {
        switch (kind_) {
            case Kind::Zero: return 0.0;
            case Kind::CompactBump: {
                const double x = (s - b_) / c_;
                if (std::abs(x) >= 1.0) return 0.0;
                return a_ * std::pow(1.0 - x * x, order_);
            }
            case Kind::PiecewiseLinear: {
                if (s < knots_.front().first || s > knots_.back().first) return 0.0;
                auto it = std::upper_bound(knots_.begin(), knots_.end(), s,
                                           [](double x, const auto& kn) { return x < kn.first; });
                if (it == knots_.begin()) return knots_.front().second;
                if (it == knots_.end()) return knots_.back().second;
                const auto& hi = *it;
                const auto& lo = *(it - 1);
                const double t = (s - lo.first) / (hi.first - lo.first);
                return (1.0 - t) * lo.second + t * hi.second;
            }
            case Kind::PeriodicCosine:
                return a_ * std::cos(2.0 * std::numbers::pi * s / b_);
            case Kind::Scaled:
                return a_ * children_[0](s);
            case Kind::Sum: {
                double acc = 0.0;
                for (const auto& ch : children_) acc += ch(s);
                return acc;
            }
        }
        return 0.0;
    }

    Kind kind() const { return kind_; }
    bool integrable() const { return integrable_; }
    bool decays_at_infinity() const { return decays_; }
    double sup_kplus() const { return sup_plus_; }
    double sup_kminus() const { return sup_minus_; }
    bool has_compact_support() const { return compact_; }
    double support_lo() const { return lo_; }
    double support_hi() const { return hi_; }
    bool is_periodic() const { return kind_ == Kind::PeriodicCosine; }
    double period() const { return is_periodic() ? b_ : 0.0; }

    /// Total bending angle, analytic per primitive and additive for sums.
    double alpha() const {
        if (!integrable_) throw NonIntegrable("alpha undefined for non-integrable profile");
        return alpha_;
    }

    /// L1 norm; exact for single primitives, additive upper bound for sums.
    double l1_norm() const {
        if (!integrable_) throw NonIntegrable("l1 norm undefined for non-integrable profile");
        return l1_;
    }

  private:
    // integral of (1-x^2)^p over [-1,1]: 2*(2p)!!/(2p+1)!!
    static double bump_moment(int p) {
        double r = 2.0;
        for (int j = 1; j <= p; ++j) r *= 2.0 * j / (2.0 * j + 1.0);
        return r;
    }

    void finish() {
        const double inf = std::numeric_limits<double>::infinity();
        switch (kind_) {
            case Kind::Zero:
                alpha_ = l1_ = sup_plus_ = sup_minus_ = 0.0;
                lo_ = hi_ = 0.0;
                compact_ = decays_ = integrable_ = true;
                break;
            case Kind::CompactBump: {
                const double I = bump_moment(order_);
                alpha_ = a_ * c_ * I;
                l1_ = std::abs(alpha_);
                sup_plus_ = std::max(0.0, a_);
                sup_minus_ = std::max(0.0, -a_);
                lo_ = b_ - c_;
                hi_ = b_ + c_;
                compact_ = decays_ = integrable_ = true;
                break;
            }
            case Kind::PiecewiseLinear: {
                alpha_ = 0.0;
                l1_ = 0.0;
                sup_plus_ = sup_minus_ = 0.0;
                for (std::size_t i = 0; i < knots_.size(); ++i) {
                    sup_plus_ = std::max(sup_plus_, knots_[i].second);
                    sup_minus_ = std::max(sup_minus_, -knots_[i].second);
                    if (i == 0) continue;
                    const double h = knots_[i].first - knots_[i - 1].first;
                    const double ka = knots_[i - 1].second, kb = knots_[i].second;
                    alpha_ += 0.5 * h * (ka + kb);
                    if (ka * kb >= 0.0) {
                        l1_ += 0.5 * h * (std::abs(ka) + std::abs(kb));
                    } else {  // sign change: split at the root
                        const double t = ka / (ka - kb);
                        l1_ += 0.5 * (t * h) * std::abs(ka) + 0.5 * ((1.0 - t) * h) * std::abs(kb);
                    }
                }
                lo_ = knots_.front().first;
                hi_ = knots_.back().first;
                compact_ = decays_ = integrable_ = true;
                break;
            }
            case Kind::PeriodicCosine:
                sup_plus_ = sup_minus_ = std::abs(a_);
                lo_ = -inf;
                hi_ = inf;
                compact_ = decays_ = integrable_ = false;
                alpha_ = l1_ = 0.0;
                break;
            case Kind::Scaled: {
                const auto& ch = children_[0];
                const double b = a_;
                sup_plus_ = b >= 0.0 ? b * ch.sup_plus_ : -b * ch.sup_minus_;
                sup_minus_ = b >= 0.0 ? b * ch.sup_minus_ : -b * ch.sup_plus_;
                lo_ = ch.lo_;
                hi_ = ch.hi_;
                compact_ = ch.compact_;
                decays_ = ch.decays_;
                integrable_ = ch.integrable_;
                alpha_ = integrable_ ? b * ch.alpha_ : 0.0;
                l1_ = integrable_ ? std::abs(b) * ch.l1_ : 0.0;
                break;
            }
            case Kind::Sum: {
                alpha_ = l1_ = sup_plus_ = sup_minus_ = 0.0;
                lo_ = inf;
                hi_ = -inf;
                compact_ = decays_ = integrable_ = true;
                for (const auto& ch : children_) {
                    sup_plus_ += ch.sup_plus_;    // sub-additive upper bound
                    sup_minus_ += ch.sup_minus_;
                    compact_ = compact_ && ch.compact_;
                    decays_ = decays_ && ch.decays_;
                    integrable_ = integrable_ && ch.integrable_;
                    lo_ = std::min(lo_, ch.lo_);
                    hi_ = std::max(hi_, ch.hi_);
                }
                if (integrable_)
                    for (const auto& ch : children_) {
                        alpha_ += ch.alpha_;
                        l1_ += ch.l1_;
                    }
                if (children_.empty()) { lo_ = hi_ = 0.0; }
                break;
            }
        }
    }

    Kind kind_;
    double a_ = 0.0, b_ = 0.0, c_ = 0.0;  // primitive parameters
    int order_ = 2;
    std::vector<std::pair<double, double>> knots_;
    std::vector<CurvatureProfile> children_;
    // cached metadata
    double alpha_ = 0.0, l1_ = 0.0, sup_plus_ = 0.0, sup_minus_ = 0.0, lo_ = 0.0, hi_ = 0.0;
    bool compact_ = true, decays_ = true, integrable_ = true;
};

inline double eval_curvature(const CurvatureProfile& p, double s) { return p(s); }

struct ProfileStats {
    double alpha;
    double l1_norm;
    double sup_kplus;
    double sup_kminus;
    double support_lo;
    double support_hi;
    double s0;  ///< half-width of the recentered symmetric support interval
};

inline ProfileStats profile_stats(const CurvatureProfile& p) {
    if (!p.integrable()) throw NonIntegrable("profile_stats: profile is not integrable");
    ProfileStats st;
    st.alpha = p.alpha();
    st.l1_norm = p.l1_norm();
    st.sup_kplus = p.sup_kplus();
    st.sup_kminus = p.sup_kminus();
    st.support_lo = p.support_lo();
    st.support_hi = p.support_hi();
    st.s0 = 0.5 * (st.support_hi - st.support_lo);
    return st;
}

} // namespace stripspec
