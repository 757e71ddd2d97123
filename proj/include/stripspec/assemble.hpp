#pragma once

#include <array>
#include <vector>

#include "stripspec/curvature.hpp"
#include "stripspec/errors.hpp"
#include "stripspec/grid.hpp"
#include "stripspec/quadrature.hpp"
#include "stripspec/sparse.hpp"
#include "stripspec/transverse.hpp"

namespace stripspec {

/// Artificial condition at the truncation ends s = +-S.
enum class EndBC { DirichletEnds, NeumannEnds };

inline std::string to_string(EndBC e) {
    return e == EndBC::DirichletEnds ? "dirichlet-ends" : "neumann-ends";
}

inline EndBC end_bc_from_string(const std::string& s) {
    if (s == "dirichlet-ends" || s == "dirichlet") return EndBC::DirichletEnds;
    if (s == "neumann-ends" || s == "neumann") return EndBC::NeumannEnds;
    throw ConfigError("unknown end condition: " + s);
}

/// Discretized quadratic form pair: K represents Q^iota, M the G^{1/2}
/// weighted mass, after boundary dof elimination.
struct FormAssembly {
    SparseSymMatrix K;
    SparseSymMatrix M;
    Grid grid;
    BoundaryType iota = BoundaryType::D;
    EndBC end_bc = EndBC::DirichletEnds;
    std::vector<int> dof_of_node;  ///< node index -> dof index, -1 if eliminated
    int dim = 0;
    bool one_dimensional = false;

    /// Scatters a dof vector back to grid nodes (zeros on eliminated nodes).
    std::vector<double> node_field(const std::vector<double>& dof_values) const {
        std::vector<double> out(dof_of_node.size(), 0.0);
        for (std::size_t n = 0; n < dof_of_node.size(); ++n)
            if (dof_of_node[n] >= 0) out[n] = dof_values[dof_of_node[n]];
        return out;
    }
};

namespace detail {

// 1-D reference matrices: stiffness [[1,-1],[-1,1]]/h and mass h[[2,1],[1,2]]/6
struct Element1D {
    double s[2][2];
    double m[2][2];
};
inline Element1D element_1d(double h) {
    return {{{1.0 / h, -1.0 / h}, {-1.0 / h, 1.0 / h}},
            {{h / 3.0, h / 6.0}, {h / 6.0, h / 3.0}}};
}

inline SparseSymMatrix eliminate(const SparseSymMatrix& A, const std::vector<int>& dof_of_node,
                                 int dim) {
    std::vector<int> rows, cols;
    std::vector<double> vals;
    rows.reserve(A.nnz());
    cols.reserve(A.nnz());
    vals.reserve(A.nnz());
    const auto& rp = A.row_ptr();
    const auto& cc = A.col();
    const auto& vv = A.values();
    for (int r = 0; r < A.dim(); ++r) {
        const int dr = dof_of_node[r];
        if (dr < 0) continue;
        for (int p = rp[r]; p < rp[r + 1]; ++p) {
            const int dc = dof_of_node[cc[p]];
            if (dc < 0) continue;
            rows.push_back(dr);
            cols.push_back(dc);
            vals.push_back(vv[p]);
        }
    }
    return SparseSymMatrix::from_triplets(dim, rows, cols, vals);
}

} // namespace detail

/// Bilinear elements on the tensor grid with cell-midpoint coefficients:
///   a1 = 1/(1 - u_m k(s_m)) on the d/ds terms,
///   a2 = w = (1 - u_m k(s_m)) on the d/du terms and the mass,
/// i.e. the combinations G^{1/2}G^{11}, G^{1/2}G^{22}, G^{1/2}.
/// Boundary rows are eliminated per iota and end condition.
inline FormAssembly assemble_forms(const CurvatureProfile& profile, const Grid& grid,
                                   BoundaryType iota, EndBC end_bc) {
    if (grid.d * profile.sup_kplus() >= 1.0)
        throw HypothesisViolated("assemble_forms: d*sup k_+ >= 1, metric not uniformly elliptic");

    const int nu = grid.n_u, ns = grid.n_s;
    const double hs = grid.h_s(), hu = grid.h_u();
    const auto es = detail::element_1d(hs);
    const auto eu = detail::element_1d(hu);

    std::vector<int> rows, cols;
    std::vector<double> kvals, mvals;
    const std::size_t nnz = std::size_t(grid.cell_count()) * 16;
    rows.reserve(nnz);
    cols.reserve(nnz);
    kvals.reserve(nnz);
    mvals.reserve(nnz);

    for (int i = 0; i < ns; ++i) {
        const double sm = grid.s(i) + 0.5 * hs;
        const double k = profile(sm);
        for (int j = 0; j < nu; ++j) {
            const double um = grid.u(j) + 0.5 * hu;
            const double c = 1.0 - um * k;
            const double a1 = 1.0 / c;
            const double a2 = c;
            const int n00 = grid.node(i, j);
            const std::array<int, 4> nd{n00, n00 + 1, n00 + (nu + 1), n00 + (nu + 2)};
            // local index = 2*(s-local) + (u-local)
            for (int a = 0; a < 4; ++a) {
                const int as = a >> 1, au = a & 1;
                for (int b = 0; b < 4; ++b) {
                    const int bs = b >> 1, bu = b & 1;
                    const double kv = a1 * es.s[as][bs] * eu.m[au][bu] +
                                      a2 * es.m[as][bs] * eu.s[au][bu];
                    const double mv = a2 * es.m[as][bs] * eu.m[au][bu];
                    rows.push_back(nd[a]);
                    cols.push_back(nd[b]);
                    kvals.push_back(kv);
                    mvals.push_back(mv);
                }
            }
        }
    }

    FormAssembly fa;
    fa.grid = grid;
    fa.iota = iota;
    fa.end_bc = end_bc;
    fa.dof_of_node.assign(grid.node_count(), 0);
    for (int i = 0; i <= ns; ++i)
        for (int j = 0; j <= nu; ++j) {
            bool kill = false;
            if (iota == BoundaryType::D && (j == 0 || j == nu)) kill = true;
            if (iota == BoundaryType::DN && j == 0) kill = true;
            if (end_bc == EndBC::DirichletEnds && (i == 0 || i == ns)) kill = true;
            fa.dof_of_node[grid.node(i, j)] = kill ? -1 : 0;
        }
    int dof = 0;
    for (auto& v : fa.dof_of_node)
        if (v == 0) v = dof++;
    fa.dim = dof;

    const auto Kfull = SparseSymMatrix::from_triplets(grid.node_count(), rows, cols, kvals);
    const auto Mfull = SparseSymMatrix::from_triplets(grid.node_count(), rows, cols, mvals);
    fa.K = detail::eliminate(Kfull, fa.dof_of_node, dof);
    fa.M = detail::eliminate(Mfull, fa.dof_of_node, dof);
    return fa;
}

/// 1-D Schroedinger assembly on [-S,S] with Dirichlet ends: linear elements;
/// left matrix = stiffness + potential-weighted mass (per-cell nodal mean),
/// right matrix = plain mass.
inline FormAssembly assemble_1d_schrodinger(const SampledFunction& potential, double S, int n_s) {
    if (n_s < 2) throw std::invalid_argument("assemble_1d_schrodinger: n_s must be >= 2");
    if (int(potential.size()) != n_s + 1)
        throw std::invalid_argument("assemble_1d_schrodinger: potential must be sampled on the grid nodes");
    const double h = 2.0 * S / n_s;
    const auto e1 = detail::element_1d(h);

    std::vector<int> rows, cols;
    std::vector<double> kvals, mvals;
    rows.reserve(std::size_t(n_s) * 4);
    cols.reserve(std::size_t(n_s) * 4);
    kvals.reserve(std::size_t(n_s) * 4);
    mvals.reserve(std::size_t(n_s) * 4);
    for (int i = 0; i < n_s; ++i) {
        const double vc = 0.5 * (potential.v[i] + potential.v[i + 1]);
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
                rows.push_back(i + a);
                cols.push_back(i + b);
                kvals.push_back(e1.s[a][b] + vc * e1.m[a][b]);
                mvals.push_back(e1.m[a][b]);
            }
    }

    FormAssembly fa;
    fa.one_dimensional = true;
    fa.grid = Grid{S, 1.0, n_s, 0};
    fa.iota = BoundaryType::D;
    fa.end_bc = EndBC::DirichletEnds;
    fa.dof_of_node.assign(n_s + 1, -1);
    for (int i = 1; i < n_s; ++i) fa.dof_of_node[i] = i - 1;
    fa.dim = n_s - 1;
    const auto Kfull = SparseSymMatrix::from_triplets(n_s + 1, rows, cols, kvals);
    const auto Mfull = SparseSymMatrix::from_triplets(n_s + 1, rows, cols, mvals);
    fa.K = detail::eliminate(Kfull, fa.dof_of_node, fa.dim);
    fa.M = detail::eliminate(Mfull, fa.dof_of_node, fa.dim);
    return fa;
}

} // namespace stripspec
