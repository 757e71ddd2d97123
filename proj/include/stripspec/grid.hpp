#pragma once

#include <stdexcept>

namespace stripspec {

/// Uniform tensor grid on [-S,S] x [0,d], nodes ordered s-major.
struct Grid {
    double S = 0.0;
    double d = 0.0;
    int n_s = 0;
    int n_u = 0;

    double h_s() const { return 2.0 * S / n_s; }
    double h_u() const { return d / n_u; }
    int node_count() const { return (n_s + 1) * (n_u + 1); }
    int cell_count() const { return n_s * n_u; }
    int node(int i, int j) const { return i * (n_u + 1) + j; }
    double s(int i) const { return -S + i * h_s(); }
    double u(int j) const { return j * h_u(); }
};

inline Grid build_grid(double S, double d, int n_s, int n_u) {
    if (S <= 0.0 || d <= 0.0) throw std::invalid_argument("build_grid: S and d must be positive");
    if (n_s < 4) throw std::invalid_argument("build_grid: n_s must be >= 4");
    if (n_u < 2) throw std::invalid_argument("build_grid: n_u must be >= 2");
    return Grid{S, d, n_s, n_u};
}

} // namespace stripspec
