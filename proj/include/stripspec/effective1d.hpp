#pragma once

#include "stripspec/assemble.hpp"
#include "stripspec/curvature.hpp"
#include "stripspec/eigsolve.hpp"

namespace stripspec {

struct Effective1DResult {
    double lambda = 0.0;     ///< ground eigenvalue of -d^2/ds^2 - k^2/4 on [-S,S], Dirichlet ends
    bool bound_state = false;  ///< lambda < 0
};

/// Thin-strip effective operator l = -Delta - k^2/4 in one dimension.
inline Effective1DResult effective_1d_ground(const CurvatureProfile& profile, double S, int n_s) {
    SampledFunction pot = sample(
        [&](double s) {
            const double k = profile(s);
            return -0.25 * k * k;
        },
        -S, S, n_s);
    const FormAssembly fa = assemble_1d_schrodinger(pot, S, n_s);
    // K >= (min V) M, so a shift below min V keeps the factor positive definite
    double vmin = 0.0;
    for (double v : pot.v) vmin = std::min(vmin, v);
    const SpectralResult res = smallest_eigs(fa, 1, 1e-11, kDefaultSeed, vmin - 0.5);
    Effective1DResult out;
    out.lambda = res.eigenvalues.at(0);
    out.bound_state = out.lambda < 0.0;
    return out;
}

} // namespace stripspec
