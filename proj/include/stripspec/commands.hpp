#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "stripspec/bounds.hpp"
#include "stripspec/config.hpp"
#include "stripspec/csv.hpp"
#include "stripspec/curve.hpp"
#include "stripspec/eigsolve.hpp"
#include "stripspec/svg.hpp"
#include "stripspec/varbound.hpp"

namespace stripspec {

// exit codes: 0 ok, 1 config, 2 hypothesis violated, 3 solver, 4 verification
enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 1,
    kExitHypothesis = 2,
    kExitSolver = 3,
    kExitVerify = 4,
};

namespace detail {

inline void ensure_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error("cannot create output directory " + dir);
}

inline void write_hypothesis_csv(const std::string& path, const HypothesisReport& rep) {
    CsvWriter csv(path, {"thinness", "thinness_ok", "umlauf_violation",
                         "self_intersection_found", "witness_s1", "witness_u1", "witness_s2",
                         "witness_u2", "C_minus", "C_plus", "lattice_step_s", "lattice_step_u"});
    csv.row({rep.thinness, int(rep.thinness_ok), int(rep.umlauf_violation),
             int(rep.self_intersection_found), rep.witness_s1, rep.witness_u1, rep.witness_s2,
             rep.witness_u2, rep.C_minus, rep.C_plus, rep.lattice_step_s, rep.lattice_step_u});
}

inline void write_trace_csv(const std::string& path, const CurveTrace& tr) {
    CsvWriter csv(path, {"s", "theta", "gamma_x", "gamma_y", "n_x", "n_y"});
    for (std::size_t i = 0; i < tr.size(); ++i) {
        const auto n = tr.normal(i);
        csv.row({tr.s[i], tr.theta[i], tr.gamma[i][0], tr.gamma[i][1], n[0], n[1]});
    }
}

inline CurveTrace trace_from_csv(const CsvTable& t) {
    CurveTrace tr;
    const int cs = t.column("s"), cth = t.column("theta");
    const int cx = t.column("gamma_x"), cy = t.column("gamma_y");
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        tr.s.push_back(std::stod(t.rows[r][cs]));
        tr.theta.push_back(std::stod(t.rows[r][cth]));
        tr.gamma.push_back({std::stod(t.rows[r][cx]), std::stod(t.rows[r][cy])});
    }
    if (tr.s.size() < 2) throw Error("trace csv too short");
    tr.S = std::max(std::abs(tr.s.front()), std::abs(tr.s.back()));
    tr.step = tr.s[1] - tr.s[0];
    return tr;
}

/// Solves with m raised until count_below has enough screened pairs.
inline SpectralResult solve_with_screen(const FormAssembly& fa, const RunConfig& rc,
                                        double threshold, int* count_out) {
    int m = rc.m;
    for (int attempt = 0;; ++attempt) {
        SpectralResult res = smallest_eigs(fa, std::min(m, fa.dim), rc.tol, rc.seed);
        if (!res.converged) {
            *count_out = -1;
            return res;
        }
        try {
            *count_out = count_below(res, threshold, rc.margin);
            return res;
        } catch (const InsufficientPairs&) {
            if (attempt >= 3 || m >= fa.dim) {
                *count_out = -1;
                return res;
            }
            m *= 2;
        }
    }
}

} // namespace detail

/// geometry: hypothesis report + curve trace; exit 2 when <H> fails.
inline int cmd_geometry(const RunConfig& rc) {
    detail::ensure_dir(rc.out_dir);
    const HypothesisReport rep = check_hypothesis(rc.profile, rc.d, rc.S, rc.resolution);
    detail::write_hypothesis_csv(rc.out_dir + "/hypothesis_report.csv", rep);
    int n = std::max(rc.n_s, 64);
    if (n % 2) ++n;
    detail::write_trace_csv(rc.out_dir + "/curve_trace.csv",
                            reconstruct_curve(rc.profile, rc.S, n));
    return rep.ok() ? kExitOk : kExitHypothesis;
}

/// spectrum: eigenvalues, residuals, bound-state count below the essential
/// threshold; optional end-condition bracketing.
inline int cmd_spectrum(const RunConfig& rc) {
    detail::ensure_dir(rc.out_dir);
    const HypothesisReport rep = check_hypothesis(rc.profile, rc.d, rc.S, rc.resolution);
    if (!rep.ok()) return kExitHypothesis;

    const Grid grid = build_grid(rc.S, rc.d, rc.n_s, rc.n_u);
    const double threshold = essential_threshold(rc.iota, rc.d);

    struct Run {
        EndBC bc;
        SpectralResult res;
        int count = -1;
    };
    std::vector<Run> runs;
    runs.push_back({rc.end_bc, {}, -1});
    if (rc.bracket)
        runs.push_back({rc.end_bc == EndBC::DirichletEnds ? EndBC::NeumannEnds
                                                          : EndBC::DirichletEnds,
                        {},
                        -1});

    for (auto& run : runs) {
        const FormAssembly fa = assemble_forms(rc.profile, grid, rc.iota, run.bc);
        if (rc.dump_matrices) {
            std::ofstream km(rc.out_dir + "/K_" + to_string(run.bc) + ".mtx");
            fa.K.write_matrix_market(km);
            std::ofstream mm(rc.out_dir + "/M_" + to_string(run.bc) + ".mtx");
            fa.M.write_matrix_market(mm);
        }
        run.res = detail::solve_with_screen(fa, rc, threshold, &run.count);
        if (!run.res.converged) return kExitSolver;
        if (rc.dump_eigenvector && run.bc == rc.end_bc) {
            const auto field = fa.node_field(run.res.eigenvector(0));
            CsvWriter csv(rc.out_dir + "/eigenvector_field.csv", {"s", "u", "value"});
            for (int i = 0; i <= grid.n_s; ++i)
                for (int j = 0; j <= grid.n_u; ++j)
                    csv.row({grid.s(i), grid.u(j), field[grid.node(i, j)]});
        }
    }

    {
        CsvWriter csv(rc.out_dir + "/eigenvalues.csv",
                      {"end_bc", "index", "eigenvalue", "residual"});
        for (const auto& run : runs)
            for (int i = 0; i < run.res.count(); ++i)
                csv.row({to_string(run.bc), i, run.res.eigenvalues[i], run.res.residuals[i]});
    }
    {
        CsvWriter csv(rc.out_dir + "/spectrum_summary.csv",
                      {"end_bc", "lambda_min", "count_below_threshold", "threshold", "margin"});
        for (const auto& run : runs)
            csv.row({to_string(run.bc), run.res.eigenvalues.at(0), run.count, threshold,
                     rc.margin});
        if (runs.size() == 2) {
            const double lo = std::min(runs[0].res.eigenvalues[0], runs[1].res.eigenvalues[0]);
            const double hi = std::max(runs[0].res.eigenvalues[0], runs[1].res.eigenvalues[0]);
            csv.row({std::string("bracket-interval"), hi - lo, -1, lo, hi});
        }
    }
    return kExitOk;
}

/// bounds: closed-form threshold bounds plus independent numeric minimizers.
inline int cmd_bounds(const RunConfig& rc) {
    detail::ensure_dir(rc.out_dir);
    if (!rc.profile.integrable() || !rc.profile.has_compact_support()) {
        std::cerr << "bounds: profile must have compact support\n";
        return kExitConfig;
    }
    const ProfileStats st = profile_stats(rc.profile);
    const double s0 = st.s0, alpha = st.alpha;

    CsvWriter csv(rc.out_dir + "/bound_report.csv",
                  {"iota", "E1", "alpha", "s0", "d", "bound_value", "C", "mean_u", "c_plus",
                   "f_min", "h", "g", "A_value", "c1_plus", "c2_plus", "epsilon0",
                   "numeric_f_min", "two_path_rel_gap"});
    auto emit = [&](const BoundReport& r, double numeric_f) {
        const double gap = r.f_min == 0.0 ? std::abs(numeric_f)
                                          : std::abs(numeric_f - r.f_min) / std::abs(r.f_min);
        csv.row({to_string(r.iota), r.E1, r.alpha, r.s0, r.d, r.bound_value, r.C, r.mean_u,
                 r.c_plus, r.f_min, r.h, r.g, r.A_value, r.c1_plus, r.c2_plus, r.epsilon0,
                 numeric_f, gap});
    };

    try {
        if (alpha <= 0.0) {
            const BoundReport dn = bound_dn(s0, rc.d, alpha);
            double numeric = 0.0;
            if (alpha < 0.0) numeric = minimize_f_dn(s0, rc.d, alpha).f_star;
            emit(dn, numeric);
        }
        const BoundReport dd = bound_d(s0, rc.d, alpha);
        double numeric = 0.0;
        if (alpha != 0.0) numeric = minimize_f_d(s0, rc.d, alpha).f_star;
        emit(dd, numeric);
    } catch (const DomainError& e) {
        std::cerr << "bounds: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitOk;
}

struct SweepFit {
    double exponent = 0.0;
    int points_used = 0;
};

/// log-log least squares of gap against the sweep variable.
inline SweepFit fit_gap_exponent(const std::vector<double>& x, const std::vector<double>& gap) {
    SweepFit fit;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(gap[i] > 0.0)) continue;
        const double lx = std::log(x[i]), ly = std::log(gap[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++fit.points_used;
    }
    if (fit.points_used >= 2)
        fit.exponent = (fit.points_used * sxy - sx * sy) / (fit.points_used * sxx - sx * sx);
    return fit;
}

/// sweep over beta, d, or S: one CSV row per point with lambda_min, gaps,
/// bound values and counts; fits the leading-order gap exponent.
inline int cmd_sweep(const RunConfig& rc) {
    detail::ensure_dir(rc.out_dir);
    if (rc.sweep_axis.empty()) {
        std::cerr << "sweep: [sweep] section required\n";
        return kExitConfig;
    }
    std::vector<double> pts(rc.sweep_count);
    for (int i = 0; i < rc.sweep_count; ++i) {
        const double t = double(i) / (rc.sweep_count - 1);
        pts[i] = rc.sweep_log
                     ? rc.sweep_min * std::pow(rc.sweep_max / rc.sweep_min, t)
                     : rc.sweep_min + (rc.sweep_max - rc.sweep_min) * t;
    }

    CsvWriter csv(rc.out_dir + "/sweep.csv",
                  {"axis", "value", "lambda_min", "gap", "gap_ref", "count", "bound_dn",
                   "bound_d", "hypothesis_ok"});
    std::vector<double> xs, gaps;

    // straight reference on the same grid/box (reused when it is unchanged)
    std::optional<double> fixed_ref;
    auto straight_ref = [&](double d, double S) {
        const Grid g = build_grid(S, d, rc.n_s, rc.n_u);
        const FormAssembly fa =
            assemble_forms(CurvatureProfile::zero(), g, rc.iota, rc.end_bc);
        return smallest_eigs(fa, 1, rc.tol, rc.seed).eigenvalues[0];
    };

    for (int i = 0; i < rc.sweep_count; ++i) {
        double d = rc.d, S = rc.S;
        CurvatureProfile prof = rc.profile;
        if (rc.sweep_axis == "beta")
            prof = CurvatureProfile::scaled(pts[i], rc.profile);
        else if (rc.sweep_axis == "d")
            d = pts[i];
        else
            S = pts[i];

        const HypothesisReport rep = check_hypothesis(prof, d, S, rc.resolution);
        const Grid g = build_grid(S, d, rc.n_s, rc.n_u);
        const double threshold = essential_threshold(rc.iota, d);
        const FormAssembly fa = assemble_forms(prof, g, rc.iota, rc.end_bc);
        int count = -1;
        const SpectralResult res = detail::solve_with_screen(fa, rc, threshold, &count);
        if (!res.converged) return kExitSolver;
        const double lam = res.eigenvalues[0];

        double ref;
        if (rc.sweep_axis == "beta") {
            if (!fixed_ref) fixed_ref = straight_ref(d, S);
            ref = *fixed_ref;
        } else {
            ref = straight_ref(d, S);
        }

        double bdn = std::numeric_limits<double>::quiet_NaN();
        double bd = std::numeric_limits<double>::quiet_NaN();
        if (prof.integrable() && prof.has_compact_support()) {
            const ProfileStats st = profile_stats(prof);
            if (st.s0 > 0.0) {
                if (st.alpha <= 0.0) bdn = bound_dn(st.s0, d, st.alpha).bound_value;
                if (st.s0 / d - st.alpha / 4.0 > 0.0) bd = bound_d(st.s0, d, st.alpha).bound_value;
            }
        }
        csv.row({rc.sweep_axis, pts[i], lam, threshold - lam, ref - lam, count, bdn, bd,
                 int(rep.ok())});
        xs.push_back(pts[i]);
        gaps.push_back(ref - lam);
    }

    const SweepFit fit = fit_gap_exponent(xs, gaps);
    CsvWriter fcsv(rc.out_dir + "/sweep_fit.csv", {"axis", "exponent", "points_used"});
    fcsv.row({rc.sweep_axis, fit.exponent, fit.points_used});
    std::cout << "sweep fit: axis=" << rc.sweep_axis << " exponent=" << csv_num(fit.exponent)
              << " points=" << fit.points_used << "\n";
    return kExitOk;
}

/// plot: strip outline, ground-state heat map on the physical strip, and
/// gap-vs-parameter curves, from prior run artifacts in out_dir.
inline int cmd_plot(const RunConfig& rc) {
    namespace fs = std::filesystem;
    detail::ensure_dir(rc.out_dir);
    const std::string dir = rc.plot_input.empty() ? rc.out_dir : rc.plot_input;
    bool made_any = false;

    const std::string trace_path = dir + "/curve_trace.csv";
    if (fs::exists(trace_path)) {
        const CurveTrace tr = detail::trace_from_csv(read_csv(trace_path));
        SvgFigure fig;
        std::vector<std::array<double, 2>> lower, upper;
        for (std::size_t i = 0; i < tr.size(); ++i) {
            const auto n = tr.normal(i);
            lower.push_back(tr.gamma[i]);
            upper.push_back({tr.gamma[i][0] + rc.d * n[0], tr.gamma[i][1] + rc.d * n[1]});
        }
        fig.add_polyline(lower, "#1b4f9c", 0.02 * rc.d);
        fig.add_polyline(upper, "#9c1b1b", 0.02 * rc.d);
        fig.add_polyline({lower.front(), upper.front()}, "#666666", 0.02 * rc.d);
        fig.add_polyline({lower.back(), upper.back()}, "#666666", 0.02 * rc.d);
        fig.write(rc.out_dir + "/strip.svg");
        made_any = true;

        const std::string field_path = dir + "/eigenvector_field.csv";
        if (fs::exists(field_path)) {
            const CsvTable t = read_csv(field_path);
            // infer the tensor grid from the field rows
            const int cu = t.column("u"), cs = t.column("s"), cv = t.column("value");
            std::vector<double> svals, uvals;
            for (const auto& row : t.rows) {
                const double sv = std::stod(row[cs]);
                const double uv = std::stod(row[cu]);
                if (svals.empty() || sv > svals.back() + 1e-12) svals.push_back(sv);
                if (svals.size() == 1) uvals.push_back(uv);
            }
            const std::size_t nu = uvals.size(), ns = svals.size();
            if (ns * nu == t.rows.size()) {
                double vmax = 0.0;
                for (const auto& row : t.rows)
                    vmax = std::max(vmax, std::abs(std::stod(row[cv])));
                SvgFigure heat;
                auto point = [&](std::size_t i, std::size_t j) {
                    return strip_map(tr, std::clamp(svals[i], -tr.S, tr.S), uvals[j]);
                };
                for (std::size_t i = 0; i + 1 < ns; ++i)
                    for (std::size_t j = 0; j + 1 < nu; ++j) {
                        const double v = std::abs(std::stod(t.rows[i * nu + j][cv])) / vmax;
                        heat.add_cell({point(i, j), point(i + 1, j), point(i + 1, j + 1),
                                       point(i, j + 1)},
                                      v);
                    }
                heat.write(rc.out_dir + "/heatmap.svg");
            }
        }
    }

    const std::string sweep_path = dir + "/sweep.csv";
    if (fs::exists(sweep_path)) {
        const CsvTable t = read_csv(sweep_path);
        SvgFigure fig;
        std::vector<std::array<double, 2>> curve;
        for (std::size_t r = 0; r < t.rows.size(); ++r) {
            const double x = t.num(r, "value");
            const double gap = t.num(r, "gap_ref");
            if (x > 0.0 && gap > 0.0) curve.push_back({std::log10(x), std::log10(gap)});
        }
        if (curve.size() >= 2) {
            fig.add_polyline(curve, "#1b4f9c", 0.02);
            fig.add_text(curve.front()[0], curve.front()[1], "log10 gap vs log10 value", 0.08);
            fig.write(rc.out_dir + "/gap_curve.svg");
            made_any = true;
        }
    }

    if (!made_any) {
        std::cerr << "plot: no input artifacts found in " << dir << "\n";
        return kExitConfig;
    }
    return kExitOk;
}

} // namespace stripspec
