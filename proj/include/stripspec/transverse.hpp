#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "stripspec/errors.hpp"

namespace stripspec {

/// Boundary condition of the strip. DN orientation is fixed: Dirichlet on
/// the reference curve u=0, Neumann on u=d.
enum class BoundaryType { D, N, DN };

inline std::string to_string(BoundaryType t) {
    switch (t) {
        case BoundaryType::D: return "D";
        case BoundaryType::N: return "N";
        case BoundaryType::DN: return "DN";
    }
    return "?";
}

inline BoundaryType boundary_from_string(const std::string& s) {
    if (s == "D" || s == "d") return BoundaryType::D;
    if (s == "N" || s == "n") return BoundaryType::N;
    if (s == "DN" || s == "dn" || s == "Dn") return BoundaryType::DN;
    throw ConfigError("unknown boundary type: " + s);
}

/// Transverse eigenvalues: (pi/d)^2 n^2, (pi/d)^2 (n-1)^2, (pi/d)^2 (n-1/2)^2.
inline double transverse_eigenvalue(BoundaryType iota, int n, double d) {
    if (n < 1) throw std::invalid_argument("transverse_eigenvalue: n must be >= 1");
    if (d <= 0.0) throw std::invalid_argument("transverse_eigenvalue: d must be positive");
    const double base = std::numbers::pi / d;
    switch (iota) {
        case BoundaryType::D: return base * base * double(n) * double(n);
        case BoundaryType::N: return base * base * double(n - 1) * double(n - 1);
        case BoundaryType::DN: return base * base * (n - 0.5) * (n - 0.5);
    }
    return 0.0;
}

/// L2(0,d)-normalized transverse modes.
inline double transverse_mode(BoundaryType iota, int n, double d, double u) {
    if (n < 1) throw std::invalid_argument("transverse_mode: n must be >= 1");
    const double E = transverse_eigenvalue(iota, n, d);
    switch (iota) {
        case BoundaryType::D:
        case BoundaryType::DN:
            return std::sqrt(2.0 / d) * std::sin(std::sqrt(E) * u);
        case BoundaryType::N:
            if (n == 1) return std::sqrt(1.0 / d);
            return std::sqrt(2.0 / d) * std::cos(std::sqrt(E) * u);
    }
    return 0.0;
}

/// Bottom of the essential spectrum for asymptotically straight strips.
inline double essential_threshold(BoundaryType iota, double d) {
    return transverse_eigenvalue(iota, 1, d);
}

/// <u> under the first DN mode: d (1/2 + 2/pi^2).
inline double mean_u_dn(double d) {
    if (d <= 0.0) throw std::invalid_argument("mean_u_dn: d must be positive");
    return d * (0.5 + 2.0 / (std::numbers::pi * std::numbers::pi));
}

} // namespace stripspec
