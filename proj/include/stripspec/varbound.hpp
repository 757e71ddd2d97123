#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <vector>

#include "stripspec/bounds.hpp"
#include "stripspec/curvature.hpp"
#include "stripspec/errors.hpp"
#include "stripspec/optimize.hpp"
#include "stripspec/quadrature.hpp"
#include "stripspec/transverse.hpp"

namespace stripspec {

/// Evaluated trial-function energy: Q1 = Q[psi] - E1 |psi|^2 and the
/// squared norm, plus the two terms of the separated expansion.
struct TrialEvaluation {
    double Q1 = 0.0;
    double norm2 = 0.0;
    double quotient = 0.0;
    double longitudinal_term = 0.0;   ///< (phi', <G^{-1/2}> phi')
    double curvature_term = 0.0;      ///< 1/2 [chi1(d)^2 - chi1(0)^2] (phi, k phi)
};

/// Separated trial psi = phi(s) chi_1(u): Simpson in u for the transverse
/// expectations, trapezoid in s, P1-exact derivative term.
inline TrialEvaluation quotient_separated(const CurvatureProfile& profile, double d,
                                          BoundaryType iota, const SampledFunction& phi,
                                          int u_points = 32) {
    if (phi.size() < 2) throw std::invalid_argument("quotient_separated: empty trial");
    const double tail = std::max(std::abs(phi.v.front()), std::abs(phi.v.back()));
    double vmax = 0.0;
    for (double x : phi.v) vmax = std::max(vmax, std::abs(x));
    if (tail > 1e-12 * vmax)
        throw UnsupportedTail("quotient_separated: trial must vanish at the table ends");

    auto chi = [&](double u) { return transverse_mode(iota, 1, d, u); };
    const std::size_t np = phi.size();
    std::vector<double> inv_exp(np), mass_exp(np), kval(np);
    for (std::size_t i = 0; i < np; ++i) {
        const double s = phi.s_at(i);
        const double k = profile(s);
        kval[i] = k;
        inv_exp[i] = simpson(
            [&](double u) { const double c = chi(u); return c * c / (1.0 - u * k); }, 0.0, d,
            u_points);
        mass_exp[i] = simpson(
            [&](double u) { const double c = chi(u); return c * c * (1.0 - u * k); }, 0.0, d,
            u_points);
    }

    TrialEvaluation ev;
    const double h = phi.step;
    for (std::size_t i = 0; i + 1 < np; ++i) {
        const double dv = (phi.v[i + 1] - phi.v[i]) / h;
        ev.longitudinal_term += dv * dv * 0.5 * (inv_exp[i] + inv_exp[i + 1]) * h;
    }
    const double chid = chi(d), chi0 = chi(0.0);
    const double jump = 0.5 * (chid * chid - chi0 * chi0);
    double kphi2 = 0.0, norm2 = 0.0;
    for (std::size_t i = 0; i + 1 < np; ++i) {
        kphi2 += 0.5 * h * (kval[i] * phi.v[i] * phi.v[i] + kval[i + 1] * phi.v[i + 1] * phi.v[i + 1]);
        norm2 += 0.5 * h * (mass_exp[i] * phi.v[i] * phi.v[i] + mass_exp[i + 1] * phi.v[i + 1] * phi.v[i + 1]);
    }
    ev.curvature_term = jump * kphi2;
    ev.Q1 = ev.longitudinal_term + ev.curvature_term;
    ev.norm2 = norm2;
    ev.quotient = ev.Q1 / ev.norm2;
    return ev;
}

/// Piecewise-linear plateau mollifier: 1 on |s|<=n, ramp to 0 at |s|=cn.
inline double mollifier(double s, double n, double c) {
    if (!(c > 1.0) || !(n > 0.0)) throw std::invalid_argument("mollifier: need c > 1, n > 0");
    const double a = std::abs(s);
    if (a <= n) return 1.0;
    if (a >= c * n) return 0.0;
    return (c * n - a) / ((c - 1.0) * n);
}

/// DN mollifier-trial quotient f(n,c) = (2/(c-1) + alpha n / d) /
/// ((2/3)(c+2) n^2 - alpha <u> n).
inline double f_dn(double n, double c, double s0, double d, double alpha) {
    if (!(n >= s0)) throw std::invalid_argument("f_dn: requires n >= s0");
    if (!(c > 1.0)) throw std::invalid_argument("f_dn: requires c > 1");
    const double mu = mean_u_dn(d);
    return (2.0 / (c - 1.0) + alpha * n / d) /
           ((2.0 / 3.0) * (c + 2.0) * n * n - alpha * mu * n);
}

struct FdnMin {
    double n_star = 0.0;
    double c_star = 0.0;
    double f_star = 0.0;
};

/// Grid scan (log-spaced 64x64 over [s0,50 s0] x (1,100]) plus alternating
/// golden-section refinement.
inline FdnMin minimize_f_dn(double s0, double d, double alpha) {
    if (!(alpha < 0.0)) throw DomainError("minimize_f_dn: requires alpha < 0");
    const auto ngrid = log_spaced(s0, 50.0 * s0, 64);
    auto cgrid = log_spaced(5e-3, 99.0, 64);
    for (auto& c : cgrid) c += 1.0;

    double bn = ngrid[0], bc = cgrid[0];
    double bf = std::numeric_limits<double>::infinity();
    int bi = 0, bj = 0;
    for (int i = 0; i < 64; ++i)
        for (int j = 0; j < 64; ++j) {
            const double f = f_dn(ngrid[i], cgrid[j], s0, d, alpha);
            if (f < bf) {
                bf = f;
                bn = ngrid[i];
                bc = cgrid[j];
                bi = i;
                bj = j;
            }
        }
    double nlo = ngrid[std::max(0, bi - 1)], nhi = ngrid[std::min(63, bi + 1)];
    double clo = cgrid[std::max(0, bj - 1)], chi = cgrid[std::min(63, bj + 1)];
    for (int round = 0; round < 60; ++round) {
        bn = golden_section([&](double n) { return f_dn(n, bc, s0, d, alpha); }, nlo, nhi, 1e-12);
        bc = golden_section([&](double c) { return f_dn(bn, c, s0, d, alpha); }, clo, chi, 1e-12);
        const double f = f_dn(bn, bc, s0, d, alpha);
        if (std::abs(f - bf) <= 1e-15 * std::abs(f)) { bf = f; break; }
        bf = f;
        nlo = std::max(s0, bn - (nhi - nlo) * 0.25);
        nhi = bn + (nhi - nlo) * 0.25;
        clo = std::max(1.0 + 1e-9, bc - (chi - clo) * 0.25);
        chi = bc + (chi - clo) * 0.25;
    }
    return {bn, bc, bf};
}

namespace detail {
inline double h_of(double c, double s0, double d) {
    constexpr double pi = std::numbers::pi;
    return (2.0 / (pi * pi)) * (d / s0) / (c - 1.0);
}
inline double g_of(double c, double s0, double d, double alpha) {
    return (s0 / d) * (c + 2.0) - 0.75 * alpha;
}
inline double f_d_numerator(double c1, double c2, double eps, double s0, double d, double alpha) {
    constexpr double pi = std::numbers::pi;
    return h_of(c1, s0, d) + (16.0 / (3.0 * pi * pi)) * alpha * eps +
           eps * eps * (2.0 * g_of(c2, s0, d, alpha) + h_of(c2, s0, d));
}
} // namespace detail

/// Two-mode Dirichlet quotient tilde f (exact Rayleigh quotient of the trial).
inline double tilde_f_d(double c1, double c2, double eps, double s0, double d, double alpha) {
    if (!(c1 > 1.0 && c2 > 1.0)) throw std::invalid_argument("tilde_f_d: requires c1, c2 > 1");
    constexpr double pi = std::numbers::pi;
    const double num = detail::f_d_numerator(c1, c2, eps, s0, d, alpha);
    const double den = detail::g_of(c1, s0, d, alpha) + (16.0 / (3.0 * pi * pi)) * alpha * eps +
                       eps * eps * detail::g_of(c2, s0, d, alpha);
    return (3.0 * pi * pi / (2.0 * d * d)) * num / den;
}

/// Simplified majorant f on the negative region N (numerator < 0).
inline double f_d(double c1, double c2, double eps, double s0, double d, double alpha) {
    if (!(c1 > 1.0 && c2 > 1.0)) throw std::invalid_argument("f_d: requires c1, c2 > 1");
    constexpr double pi = std::numbers::pi;
    const double num = detail::f_d_numerator(c1, c2, eps, s0, d, alpha);
    if (!(num < 0.0))
        throw OutsideNegativeRegion("f_d: point is outside the negative region");
    return (3.0 * pi * pi / (2.0 * d * d)) * num / detail::g_of(c1, s0, d, alpha);
}

struct FdMin {
    double c1_star = 0.0;
    double c2_star = 0.0;
    double eps_star = 0.0;
    double f_star = 0.0;
};

/// Coordinate grid over (c1, c2) log-spaced and eps in the a-priori window
/// |eps| < 32/(9 pi^2), followed by deterministic simplex refinement in
/// (log(c1-1), log(c2-1), eps).
inline FdMin minimize_f_d(double s0, double d, double alpha) {
    if (alpha == 0.0) throw DomainError("minimize_f_d: requires alpha != 0");
    constexpr double pi = std::numbers::pi;
    const double eps_cap = 32.0 / (9.0 * pi * pi);
    auto value = [&](double c1, double c2, double eps) {
        const double num = detail::f_d_numerator(c1, c2, eps, s0, d, alpha);
        if (!(num < 0.0)) return std::numeric_limits<double>::infinity();
        return (3.0 * pi * pi / (2.0 * d * d)) * num / detail::g_of(c1, s0, d, alpha);
    };

    const auto c1g = log_spaced(1e-3, 1e7, 64);
    const auto c2g = log_spaced(1e-4, 1e3, 48);
    // the negative region is a thin sliver in eps near the tiny stationary
    // value, so sample |eps| on a log scale, both signs
    std::vector<double> eg;
    for (double e : log_spaced(1e-7, eps_cap * (1.0 - 1e-9), 30)) {
        eg.push_back(e);
        eg.push_back(-e);
    }
    double bf = std::numeric_limits<double>::infinity();
    double b1 = 1.0 + c1g[32], b2 = 1.0 + c2g[24], be = 0.0;
    for (double x1 : c1g)
        for (double x2 : c2g)
            for (double e : eg) {
                const double f = value(1.0 + x1, 1.0 + x2, e);
                if (f < bf) {
                    bf = f;
                    b1 = 1.0 + x1;
                    b2 = 1.0 + x2;
                    be = e;
                }
            }
    if (!(bf < 0.0)) throw Error("minimize_f_d: grid scan found no negative value");

    auto obj = [&](std::span<const double> p) {
        const double c1 = 1.0 + std::exp(p[0]);
        const double c2 = 1.0 + std::exp(p[1]);
        const double eps = p[2];
        if (std::abs(eps) >= eps_cap) return std::numeric_limits<double>::infinity();
        return value(c1, c2, eps);
    };
    std::vector<double> x0{std::log(b1 - 1.0), std::log(b2 - 1.0), be};
    const std::vector<double> wide{0.3, 0.3, 0.5 * std::abs(be)};
    const std::vector<double> tight{0.02, 0.02, 0.02 * std::abs(be)};
    auto r1 = nelder_mead(obj, x0, wide, 1e-15, 4000);
    auto r2 = nelder_mead(obj, r1.x, tight, 1e-15, 4000);  // polish
    return {1.0 + std::exp(r2.x[0]), 1.0 + std::exp(r2.x[1]), r2.x[2], r2.f};
}

/// Perturbed Goldstone-Jaffe trial psi = phi_plateau chi1 + eps phi upsilon chi1
/// with upsilon^D = -2u/d, upsilon^DN = 1. Midpoint rule in s on the bump
/// table's grid extended over the plateau, Simpson in u.
struct PerturbedEval {
    TrialEvaluation total;
    double plateau_Q1 = 0.0;        ///< Q1 of the plateau part alone
    double bump_Q1 = 0.0;           ///< Q1 of phi upsilon chi1 (the eps^2 coefficient)
    double eps_linear_coeff = 0.0;  ///< coefficient of eps in Q1
};

inline PerturbedEval quotient_perturbed(const CurvatureProfile& profile, double d,
                                        BoundaryType iota, double plateau_n, double plateau_c,
                                        const SampledFunction& phi_bump, double eps,
                                        int u_points = 64) {
    if (iota == BoundaryType::N)
        throw std::invalid_argument("quotient_perturbed: iota must be D or DN");
    // the bump must sit where k is single-signed and nonzero
    {
        double kmin = 0.0, kmax = 0.0;
        bool seen = false;
        for (std::size_t i = 0; i < phi_bump.size(); ++i) {
            if (std::abs(phi_bump.v[i]) < 1e-14) continue;
            const double k = profile(phi_bump.s_at(i));
            kmin = seen ? std::min(kmin, k) : k;
            kmax = seen ? std::max(kmax, k) : k;
            seen = true;
        }
        if (!seen || (kmin < 0.0 && kmax > 0.0) || (kmin == 0.0 && kmax == 0.0))
            throw BadSupport("quotient_perturbed: bump must live where k is single-signed and nonzero");
    }

    const double E1 = transverse_eigenvalue(iota, 1, d);
    auto chi = [&](double u) { return transverse_mode(iota, 1, d, u); };
    auto chi_du = [&](double u) {
        return std::sqrt(2.0 / d) * std::sqrt(E1) * std::cos(std::sqrt(E1) * u);
    };
    auto ups = [&](double u) { return iota == BoundaryType::D ? -2.0 * u / d : 1.0; };
    auto ups_du = [&](double) { return iota == BoundaryType::D ? -2.0 / d : 0.0; };

    const double h = phi_bump.step;
    const double lim = plateau_c * plateau_n;
    const long n_half = std::lround(std::ceil(lim / h)) + 1;

    // u-moments at fixed s: Simpson integrals of the transverse factors
    // against 1/(1-uk), (1-uk), for the pair (chi, ups*chi)
    struct UMoments {
        double inv_aa, inv_ab, inv_bb;  // weight 1/(1-uk), products of values
        double du_aa, du_ab, du_bb;     // weight (1-uk), products of u-derivatives
        double m_aa, m_ab, m_bb;        // weight (1-uk), products of values
    };
    auto moments = [&](double k) {
        UMoments r{};
        const int nq = u_points % 2 ? u_points + 1 : u_points;
        const double hu = d / nq;
        for (int q = 0; q <= nq; ++q) {
            const double u = q * hu;
            const double w = (q == 0 || q == nq) ? 1.0 : (q % 2 ? 4.0 : 2.0);
            const double cinv = 1.0 / (1.0 - u * k);
            const double cfor = 1.0 - u * k;
            const double va = chi(u);
            const double vb = ups(u) * va;
            const double da = chi_du(u);
            const double db = ups(u) * chi_du(u) + ups_du(u) * chi(u);
            r.inv_aa += w * cinv * va * va;
            r.inv_ab += w * cinv * va * vb;
            r.inv_bb += w * cinv * vb * vb;
            r.du_aa += w * cfor * da * da;
            r.du_ab += w * cfor * da * db;
            r.du_bb += w * cfor * db * db;
            r.m_aa += w * cfor * va * va;
            r.m_ab += w * cfor * va * vb;
            r.m_bb += w * cfor * vb * vb;
        }
        const double f = hu / 3.0;
        r.inv_aa *= f; r.inv_ab *= f; r.inv_bb *= f;
        r.du_aa *= f; r.du_ab *= f; r.du_bb *= f;
        r.m_aa *= f; r.m_ab *= f; r.m_bb *= f;
        return r;
    };

    // midpoint rule in s over [-lim, lim]; the straight sections reuse the
    // k = 0 moments
    const UMoments flat = moments(0.0);
    double q_aa = 0.0, q_ab = 0.0, q_bb = 0.0;
    double m_aa = 0.0, m_ab = 0.0, m_bb = 0.0;
    for (long i = -n_half; i < n_half; ++i) {
        const double s = (i + 0.5) * h;
        if (s < -lim || s > lim) continue;
        const double pa = mollifier(s, plateau_n, plateau_c);
        const double da = (mollifier(s + 0.5 * h, plateau_n, plateau_c) -
                           mollifier(s - 0.5 * h, plateau_n, plateau_c)) /
                          h;
        const double pb = phi_bump(s);
        const double db = (phi_bump(s + 0.5 * h) - phi_bump(s - 0.5 * h)) / h;
        const double ks = profile(s);
        const UMoments mm = ks == 0.0 ? flat : moments(ks);
        q_aa += h * (da * da * mm.inv_aa + pa * pa * (mm.du_aa - E1 * mm.m_aa));
        q_ab += h * (da * db * mm.inv_ab + pa * pb * (mm.du_ab - E1 * mm.m_ab));
        q_bb += h * (db * db * mm.inv_bb + pb * pb * (mm.du_bb - E1 * mm.m_bb));
        m_aa += h * pa * pa * mm.m_aa;
        m_ab += h * pa * pb * mm.m_ab;
        m_bb += h * pb * pb * mm.m_bb;
    }

    PerturbedEval out;
    out.plateau_Q1 = q_aa;
    out.bump_Q1 = q_bb;
    out.eps_linear_coeff = 2.0 * q_ab;
    out.total.Q1 = q_aa + 2.0 * eps * q_ab + eps * eps * q_bb;
    out.total.norm2 = m_aa + 2.0 * eps * m_ab + eps * eps * m_bb;
    out.total.quotient = out.total.Q1 / out.total.norm2;
    out.total.longitudinal_term = q_aa;
    out.total.curvature_term = out.total.Q1 - q_aa;
    return out;
}

/// Periodic-cell trial energies of the DN existence test: A over the period
/// cell, B over the two edge cells with a C1 cutoff; the n-cell trial energy
/// equals nA + B.
struct PeriodicCellEnergy {
    double A = 0.0;
    double B = 0.0;
    bool exists_below = false;  ///< A < 0 implies inf sigma < E1
};

namespace detail {

// C1 smoothstep used for the edge cutoff phi_1
inline double edge_cutoff(double s, double L) {
    if (s <= -L || s >= 2.0 * L) return 0.0;
    if (s < 0.0) {
        const double t = (s + L) / L;
        return t * t * (3.0 - 2.0 * t);
    }
    if (s <= L) return 1.0;
    const double t = (2.0 * L - s) / L;
    return t * t * (3.0 - 2.0 * t);
}
inline double edge_cutoff_d(double s, double L) {
    if (s <= -L || s >= 2.0 * L || (s >= 0.0 && s <= L)) return 0.0;
    if (s < 0.0) {
        const double t = (s + L) / L;
        return 6.0 * t * (1.0 - t) / L;
    }
    const double t = (2.0 * L - s) / L;
    return -6.0 * t * (1.0 - t) / L;
}

} // namespace detail

inline PeriodicCellEnergy periodic_cell_energy(const CurvatureProfile& profile, double L,
                                               double d, const SampledFunction& phi, double eps,
                                               int s_points_per_cell = 512, int u_points = 64) {
    if (!profile.is_periodic() || std::abs(profile.period() - L) > 1e-12 * L)
        throw NotPeriodic("periodic_cell_energy: profile must be L-periodic");
    if (std::abs(phi.s_begin) > 1e-12 || std::abs(phi.s_end() - L) > 1e-12 * L)
        throw NotPeriodic("periodic_cell_energy: phi table must cover exactly [0, L]");
    if (std::abs(phi.v.front() - phi.v.back()) > 1e-12)
        throw NotPeriodic("periodic_cell_energy: phi must be periodic");

    const double E1 = transverse_eigenvalue(BoundaryType::DN, 1, d);
    auto chi = [&](double u) { return transverse_mode(BoundaryType::DN, 1, d, u); };
    auto chi_du = [&](double u) {
        return std::sqrt(2.0 / d) * std::sqrt(E1) * std::cos(std::sqrt(E1) * u);
    };
    auto phi_per = [&](double s) {
        double t = std::fmod(s, L);
        if (t < 0.0) t += L;
        return phi(t);
    };
    auto dphi_per = [&](double s) {
        const double h = phi.step;
        return (phi_per(s + 0.5 * h) - phi_per(s - 0.5 * h)) / h;
    };

    // form-energy density of psi = F(s) chi(u): integrate u by Simpson
    auto density = [&](double s, double F, double dF) {
        const double k = profile(s);
        const int nq = u_points % 2 ? u_points + 1 : u_points;
        const double hu = d / nq;
        double acc = 0.0;
        for (int q = 0; q <= nq; ++q) {
            const double u = q * hu;
            const double w = (q == 0 || q == nq) ? 1.0 : (q % 2 ? 4.0 : 2.0);
            const double cc = chi(u), cd = chi_du(u);
            acc += w * (dF * dF * cc * cc / (1.0 - u * k) +
                        F * F * (1.0 - u * k) * (cd * cd - E1 * cc * cc));
        }
        return acc * hu / 3.0;
    };

    const double h = L / s_points_per_cell;
    PeriodicCellEnergy out;
    for (int i = 0; i < s_points_per_cell; ++i) {
        const double s = (i + 0.5) * h;
        const double F = 1.0 + eps * phi_per(s);
        const double dF = eps * dphi_per(s);
        out.A += h * density(s, F, dF);
    }
    for (int cell = 0; cell < 2; ++cell) {
        const double base = cell == 0 ? -L : L;
        for (int i = 0; i < s_points_per_cell; ++i) {
            const double s = base + (i + 0.5) * h;
            const double c = detail::edge_cutoff(s, L);
            const double dc = detail::edge_cutoff_d(s, L);
            const double F = c * (1.0 + eps * phi_per(s));
            const double dF = dc * (1.0 + eps * phi_per(s)) + c * eps * dphi_per(s);
            out.B += h * density(s, F, dF);
        }
    }
    out.exists_below = out.A < 0.0;
    return out;
}

/// n-cell trial energy (edge cutoff + n period cells); equals nA + B up to
/// quadrature alignment.
inline double periodic_trial_energy(const CurvatureProfile& profile, double L, double d,
                                    const SampledFunction& phi, double eps, int n_cells,
                                    int s_points_per_cell = 512, int u_points = 64) {
    const double E1 = transverse_eigenvalue(BoundaryType::DN, 1, d);
    auto chi = [&](double u) { return transverse_mode(BoundaryType::DN, 1, d, u); };
    auto chi_du = [&](double u) {
        return std::sqrt(2.0 / d) * std::sqrt(E1) * std::cos(std::sqrt(E1) * u);
    };
    auto phi_per = [&](double s) {
        double t = std::fmod(s, L);
        if (t < 0.0) t += L;
        return phi(t);
    };
    auto dphi_per = [&](double s) {
        const double h = phi.step;
        return (phi_per(s + 0.5 * h) - phi_per(s - 0.5 * h)) / h;
    };
    auto cutoff = [&](double s) {
        // phi_n of the induction: ramps on (-L,0) and (nL, (n+1)L)
        if (s < 0.0) return detail::edge_cutoff(s, L);
        if (s <= n_cells * L) return 1.0;
        return detail::edge_cutoff(s - double(n_cells - 1) * L, L);
    };
    auto cutoff_d = [&](double s) {
        if (s < 0.0) return detail::edge_cutoff_d(s, L);
        if (s <= n_cells * L) return 0.0;
        return detail::edge_cutoff_d(s - double(n_cells - 1) * L, L);
    };
    auto density = [&](double s, double F, double dF) {
        const double k = profile(s);
        const int nq = u_points % 2 ? u_points + 1 : u_points;
        const double hu = d / nq;
        double acc = 0.0;
        for (int q = 0; q <= nq; ++q) {
            const double u = q * hu;
            const double w = (q == 0 || q == nq) ? 1.0 : (q % 2 ? 4.0 : 2.0);
            const double cc = chi(u), cd = chi_du(u);
            acc += w * (dF * dF * cc * cc / (1.0 - u * k) +
                        F * F * (1.0 - u * k) * (cd * cd - E1 * cc * cc));
        }
        return acc * hu / 3.0;
    };
    const double h = L / s_points_per_cell;
    double total = 0.0;
    const long cells = n_cells + 2;
    for (long cell = 0; cell < cells; ++cell) {
        const double base = -L + cell * L;
        for (int i = 0; i < s_points_per_cell; ++i) {
            const double s = base + (i + 0.5) * h;
            const double c = cutoff(s);
            const double dc = cutoff_d(s);
            const double F = c * (1.0 + eps * phi_per(s));
            const double dF = dc * (1.0 + eps * phi_per(s)) + c * eps * dphi_per(s);
            total += h * density(s, F, dF);
        }
    }
    return total;
}

} // namespace stripspec
