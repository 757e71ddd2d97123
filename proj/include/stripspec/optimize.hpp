#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

namespace stripspec {

inline std::vector<double> log_spaced(double a, double b, int count) {
    std::vector<double> out(count);
    const double la = std::log(a), lb = std::log(b);
    for (int i = 0; i < count; ++i)
        out[i] = std::exp(la + (lb - la) * i / double(count - 1));
    return out;
}

inline std::vector<double> lin_spaced(double a, double b, int count) {
    std::vector<double> out(count);
    for (int i = 0; i < count; ++i) out[i] = a + (b - a) * i / double(count - 1);
    return out;
}

/// Golden-section minimization on [a, b] to absolute x-tolerance.
template <typename F>
double golden_section(F&& f, double a, double b, double xtol, int maxit = 200) {
    constexpr double inv_phi = 0.6180339887498949;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < maxit && (b - a) > xtol; ++it) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

struct SimplexResult {
    std::vector<double> x;
    double f = 0.0;
    int iterations = 0;
};

/// Deterministic Nelder-Mead with fixed axis-aligned initial simplex.
inline SimplexResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                                 std::vector<double> x0, std::vector<double> scales,
                                 double ftol = 1e-13, int maxit = 2000) {
    const int n = int(x0.size());
    std::vector<std::vector<double>> pts(n + 1, x0);
    for (int i = 0; i < n; ++i) pts[i + 1][i] += scales[i];
    std::vector<double> fv(n + 1);
    for (int i = 0; i <= n; ++i) fv[i] = f(pts[i]);

    auto order = [&] {
        for (int i = 0; i <= n; ++i)
            for (int j = i + 1; j <= n; ++j)
                if (fv[j] < fv[i]) {
                    std::swap(fv[i], fv[j]);
                    std::swap(pts[i], pts[j]);
                }
    };
    order();

    int it = 0;
    for (; it < maxit; ++it) {
        if (std::abs(fv[n] - fv[0]) <= ftol * (std::abs(fv[0]) + ftol)) break;
        std::vector<double> centroid(n, 0.0);
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) centroid[k] += pts[i][k] / n;
        auto at = [&](double t) {
            std::vector<double> p(n);
            for (int k = 0; k < n; ++k) p[k] = centroid[k] + t * (pts[n][k] - centroid[k]);
            return p;
        };
        auto xr = at(-1.0);
        const double fr = f(xr);
        if (fr < fv[0]) {
            auto xe = at(-2.0);
            const double fe = f(xe);
            if (fe < fr) {
                pts[n] = xe;
                fv[n] = fe;
            } else {
                pts[n] = xr;
                fv[n] = fr;
            }
        } else if (fr < fv[n - 1]) {
            pts[n] = xr;
            fv[n] = fr;
        } else {
            auto xc = at(fr < fv[n] ? -0.5 : 0.5);
            const double fc = f(xc);
            if (fc < std::min(fr, fv[n])) {
                pts[n] = xc;
                fv[n] = fc;
            } else {  // shrink toward best
                for (int i = 1; i <= n; ++i) {
                    for (int k = 0; k < n; ++k) pts[i][k] = pts[0][k] + 0.5 * (pts[i][k] - pts[0][k]);
                    fv[i] = f(pts[i]);
                }
            }
        }
        order();
    }
    return {pts[0], fv[0], it};
}

inline SimplexResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                                 std::vector<double> x0, double scale, double ftol = 1e-13,
                                 int maxit = 2000) {
    std::vector<double> scales(x0.size(), scale);
    return nelder_mead(f, std::move(x0), std::move(scales), ftol, maxit);
}

} // namespace stripspec
