#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <unordered_map>
#include <vector>

#include "stripspec/curvature.hpp"
#include "stripspec/errors.hpp"
#include "stripspec/quadrature.hpp"

namespace stripspec {

using Point = std::array<double, 2>;

/// Discrete Frenet reconstruction of the reference curve on a uniform
/// arc-length grid over [-S, S], gauge-fixed by theta(0)=0, Gamma(0)=0.
struct CurveTrace {
    double S = 0.0;
    double step = 0.0;
    std::vector<double> s;
    std::vector<double> theta;
    std::vector<Point> gamma;

    std::size_t size() const { return s.size(); }
    Point normal(std::size_t i) const { return {-std::sin(theta[i]), std::cos(theta[i])}; }
    Point tangent(std::size_t i) const { return {std::cos(theta[i]), std::sin(theta[i])}; }
};

/// theta = int_0^s k, Gamma = int_0^s (cos theta, sin theta) by cumulative
/// Simpson on the uniform grid. n_s must be even so s=0 is a grid node.
inline CurveTrace reconstruct_curve(const CurvatureProfile& profile, double S, int n_s) {
    if (S <= 0.0) throw std::invalid_argument("reconstruct_curve: S must be positive");
    if (n_s < 2) throw std::invalid_argument("reconstruct_curve: n_s must be >= 2");
    if (n_s % 2) throw std::invalid_argument("reconstruct_curve: n_s must be even (gauge node at s=0)");

    CurveTrace tr;
    tr.S = S;
    tr.step = 2.0 * S / n_s;
    tr.s.resize(n_s + 1);
    std::vector<double> k(n_s + 1);
    for (int i = 0; i <= n_s; ++i) {
        tr.s[i] = -S + i * tr.step;
        k[i] = profile(tr.s[i]);
    }
    tr.theta = cumulative_simpson(k, tr.step);
    const std::size_t mid = static_cast<std::size_t>(n_s / 2);
    const double th0 = tr.theta[mid];
    for (auto& t : tr.theta) t -= th0;

    std::vector<double> cs(n_s + 1), sn(n_s + 1);
    for (int i = 0; i <= n_s; ++i) {
        cs[i] = std::cos(tr.theta[i]);
        sn[i] = std::sin(tr.theta[i]);
    }
    const auto gx = cumulative_simpson(cs, tr.step);
    const auto gy = cumulative_simpson(sn, tr.step);
    tr.gamma.resize(n_s + 1);
    for (int i = 0; i <= n_s; ++i)
        tr.gamma[i] = {gx[i] - gx[mid], gy[i] - gy[mid]};
    return tr;
}

/// Gamma(s) + u N(s) with linear interpolation of Gamma and N on the trace grid.
inline Point strip_map(const CurveTrace& tr, double s, double u) {
    if (s < -tr.S || s > tr.S) throw OutOfRange("strip_map: s outside [-S, S]");
    const double t = (s + tr.S) / tr.step;
    std::size_t i = static_cast<std::size_t>(t);
    if (i >= tr.size() - 1) i = tr.size() - 2;
    const double w = t - double(i);
    const Point na = tr.normal(i), nb = tr.normal(i + 1);
    const Point& ga = tr.gamma[i];
    const Point& gb = tr.gamma[i + 1];
    return {(1.0 - w) * ga[0] + w * gb[0] + u * ((1.0 - w) * na[0] + w * nb[0]),
            (1.0 - w) * ga[1] + w * gb[1] + u * ((1.0 - w) * na[1] + w * nb[1])};
}

struct HypothesisReport {
    double thinness = 0.0;       ///< d * sup k_+
    bool thinness_ok = false;
    bool umlauf_violation = false;
    bool self_intersection_found = false;
    bool has_witness = false;
    double witness_s1 = 0.0, witness_u1 = 0.0, witness_s2 = 0.0, witness_u2 = 0.0;
    double C_minus = 0.0, C_plus = 0.0;  ///< ellipticity constants 1 -+ d*sup k_{+-}
    double lattice_step_s = 0.0, lattice_step_u = 0.0;

    bool ok() const { return thinness_ok && !umlauf_violation && !self_intersection_found; }
};

/// Certifies hypothesis <H> at lattice resolution: exact thinness from
/// metadata, Umlaufsatz pre-check on cumulative turning, and a spatial-hash
/// collision scan of the mapped (s,u) sample lattice.
inline HypothesisReport check_hypothesis(const CurvatureProfile& profile, double d,
                                         double S, int resolution) {
    if (d <= 0.0) throw std::invalid_argument("check_hypothesis: d must be positive");
    HypothesisReport rep;
    rep.thinness = d * profile.sup_kplus();
    rep.thinness_ok = rep.thinness < 1.0;
    rep.C_minus = 1.0 - d * profile.sup_kplus();
    rep.C_plus = 1.0 + d * profile.sup_kminus();

    int n_s = std::max(resolution, 16);
    if (n_s % 2) ++n_s;
    const CurveTrace tr = reconstruct_curve(profile, S, n_s);

    double tmin = tr.theta[0], tmax = tr.theta[0];
    for (double t : tr.theta) {
        tmin = std::min(tmin, t);
        tmax = std::max(tmax, t);
    }
    rep.umlauf_violation = (tmax - tmin) > 2.0 * std::numbers::pi;

    // sample lattice: fibers at the trace nodes, u-samples chosen so the
    // lattice is roughly isotropic
    const int n_u = std::clamp(int(std::lround(resolution * d / (2.0 * S))), 2, 64);
    rep.lattice_step_s = tr.step;
    rep.lattice_step_u = d / n_u;

    struct Sample {
        double x, y, s, u, spacing;
    };
    std::vector<Sample> samples;
    samples.reserve(tr.size() * (n_u + 1));
    for (std::size_t i = 0; i < tr.size(); ++i) {
        const Point n = tr.normal(i);
        const double k = profile(tr.s[i]);
        for (int j = 0; j <= n_u; ++j) {
            const double u = d * j / n_u;
            const double local = std::min(tr.step * std::abs(1.0 - u * k), rep.lattice_step_u);
            samples.push_back({tr.gamma[i][0] + u * n[0], tr.gamma[i][1] + u * n[1],
                               tr.s[i], u, local});
        }
    }

    const double cell = d / 4.0;
    auto key = [cell](double x, double y) {
        const auto ix = static_cast<std::int64_t>(std::floor(x / cell));
        const auto iy = static_cast<std::int64_t>(std::floor(y / cell));
        return (static_cast<std::uint64_t>(ix) << 32) ^ static_cast<std::uint32_t>(iy);
    };
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> hash;
    hash.reserve(samples.size() * 2);
    for (std::size_t idx = 0; idx < samples.size(); ++idx)
        hash[key(samples[idx].x, samples[idx].y)].push_back(idx);

    // deterministic witness: lexicographically smallest (s, s', u, u')
    bool found = false;
    std::array<double, 4> best{};
    auto consider = [&](const Sample& a, const Sample& b) {
        if (std::abs(a.s - b.s) <= 2.0 * d) return;
        const double dx = a.x - b.x, dy = a.y - b.y;
        const double thr = 0.5 * std::min(a.spacing, b.spacing);
        if (dx * dx + dy * dy >= thr * thr) return;
        const Sample& p = (a.s < b.s || (a.s == b.s && a.u <= b.u)) ? a : b;
        const Sample& q = (&p == &a) ? b : a;
        std::array<double, 4> cand{p.s, q.s, p.u, q.u};
        if (!found || cand < best) {
            best = cand;
            found = true;
        }
    };
    for (std::size_t idx = 0; idx < samples.size(); ++idx) {
        const Sample& a = samples[idx];
        const auto ix = static_cast<std::int64_t>(std::floor(a.x / cell));
        const auto iy = static_cast<std::int64_t>(std::floor(a.y / cell));
        for (std::int64_t ox = -1; ox <= 1; ++ox)
            for (std::int64_t oy = -1; oy <= 1; ++oy) {
                const std::uint64_t k2 =
                    (static_cast<std::uint64_t>(ix + ox) << 32) ^ static_cast<std::uint32_t>(iy + oy);
                auto it = hash.find(k2);
                if (it == hash.end()) continue;
                for (std::size_t other : it->second)
                    if (other > idx) consider(a, samples[other]);
            }
    }
    rep.self_intersection_found = found;
    rep.has_witness = found;
    if (found) {
        rep.witness_s1 = best[0];
        rep.witness_s2 = best[1];
        rep.witness_u1 = best[2];
        rep.witness_u2 = best[3];
    }
    return rep;
}

} // namespace stripspec
