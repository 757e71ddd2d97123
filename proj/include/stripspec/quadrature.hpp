#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "stripspec/errors.hpp"

namespace stripspec {

/// Composite Simpson rule with n subintervals (n rounded up to even).
template <typename F>
double simpson(F&& f, double a, double b, int n) {
    if (n < 2) n = 2;
    if (n % 2) ++n;
    const double h = (b - a) / n;
    double acc = f(a) + f(b);
    for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

/// Cumulative integral of uniformly sampled values, 4th order.
/// Full panels use Simpson; the intermediate node of each panel uses the
/// matching half-panel Newton-Cotes rule.
inline std::vector<double> cumulative_simpson(const std::vector<double>& f, double h) {
    const std::size_t n = f.size();
    std::vector<double> I(n, 0.0);
    if (n < 3) {
        for (std::size_t i = 1; i < n; ++i)
            I[i] = I[i - 1] + 0.5 * h * (f[i - 1] + f[i]);
        return I;
    }
    for (std::size_t i = 0; i + 2 < n; i += 2) {
        I[i + 1] = I[i] + h / 12.0 * (5.0 * f[i] + 8.0 * f[i + 1] - f[i + 2]);
        I[i + 2] = I[i] + h / 3.0 * (f[i] + 4.0 * f[i + 1] + f[i + 2]);
    }
    if (n % 2 == 0)  // odd interval count: close the last interval
        I[n - 1] = I[n - 2] + h / 12.0 * (-f[n - 3] + 8.0 * f[n - 2] + 5.0 * f[n - 1]);
    return I;
}

/// Uniformly sampled function on [s_begin, s_begin + step*(size-1)],
/// interpreted as its piecewise-linear interpolant, zero outside.
struct SampledFunction {
    double s_begin = 0.0;
    double step = 1.0;
    std::vector<double> v;

    std::size_t size() const { return v.size(); }
    double s_end() const { return s_begin + step * (v.size() - 1); }
    double s_at(std::size_t i) const { return s_begin + step * i; }

    double operator()(double s) const {
        if (v.empty()) return 0.0;
        const double t = (s - s_begin) / step;
        if (t <= 0.0) return (t == 0.0) ? v.front() : 0.0;
        if (t >= double(v.size() - 1)) return (t == double(v.size() - 1)) ? v.back() : 0.0;
        const auto i = static_cast<std::size_t>(t);
        const double w = t - double(i);
        return (1.0 - w) * v[i] + w * v[i + 1];
    }

    /// Trapezoid integral of weight(s)*v(s)^2 over the table.
    template <typename W>
    double weighted_l2(W&& weight) const {
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < v.size(); ++i) {
            const double fa = weight(s_at(i)) * v[i] * v[i];
            const double fb = weight(s_at(i + 1)) * v[i + 1] * v[i + 1];
            acc += 0.5 * step * (fa + fb);
        }
        return acc;
    }

    double l2_norm2() const {
        return weighted_l2([](double) { return 1.0; });
    }

    /// Exact L2 norm of the derivative of the piecewise-linear interpolant.
    double derivative_norm2() const {
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < v.size(); ++i) {
            const double d = (v[i + 1] - v[i]) / step;
            acc += d * d * step;
        }
        return acc;
    }
};

template <typename F>
SampledFunction sample(F&& f, double a, double b, int n) {
    SampledFunction t;
    t.s_begin = a;
    t.step = (b - a) / n;
    t.v.resize(n + 1);
    for (int i = 0; i <= n; ++i) t.v[i] = f(a + i * t.step);
    return t;
}

/// C1 quadratic bump (1-x^2)^2 on (center-b, center+b), L2-normalized.
inline SampledFunction quadratic_bump_table(double center, double b, int n = 512) {
    SampledFunction t = sample(
        [&](double s) {
            const double x = (s - center) / b;
            return std::abs(x) < 1.0 ? (1.0 - x * x) * (1.0 - x * x) : 0.0;
        },
        center - b, center + b, n);
    const double nrm = std::sqrt(t.l2_norm2());
    for (auto& x : t.v) x /= nrm;
    return t;
}

} // namespace stripspec
