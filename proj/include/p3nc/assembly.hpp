#pragma once

#include <array>
#include <functional>
#include <vector>

#include "dofs.hpp"
#include "element.hpp"
#include "exact_solution.hpp"
#include "lagrange_p3.hpp"
#include "mesh.hpp"
#include "pressure_basis.hpp"
#include "quadrature.hpp"
#include "sparse.hpp"

namespace p3nc {

/// Element-local velocity ordering: 60 conforming component dofs first
/// (node-major, component-minor), then the 9 bubbles.
constexpr int kLocalVelocityDofs = 69;
constexpr int kLocalConforming = 60;

/// Quadrature degrees: the stiffness integrand is grad(P4):grad(P4)
/// (degree 6), divergence and mass integrands are P2 x P2 (degree 4),
/// and the load pairs a degree-9 polynomial forcing plus a trig part
/// with degree-4 test functions.
struct AssemblyOptions {
    int stiffness_degree = 6;
    int divergence_degree = 4;
    int load_degree = 14;
};

/// Reference-cell evaluations of the nine mapped bubbles at the points of
/// a quadrature rule. Element independent: for ordering i with reference
/// self-map S_i (vertex-slot permutation), the physical quantities on a
/// tet with geometric map G are
///   b_i(x)       = J_G * value[q][i]
///   grad b_i(x)  = J_G * gradient[q][i] * J_G^{-1}
///   div b_i(x)   = divergence[q][i]
/// at x = G(reference point q).
struct BubbleTables {
    std::vector<std::array<Vec3, 9>> value;
    std::vector<std::array<Mat3, 9>> gradient;
    std::vector<std::array<double, 9>> divergence;

    static BubbleTables build(const QuadratureRule& rule) {
        static const std::array<Vec3, 4> ref_corners = {
            Vec3{0, 0, 0}, Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}};
        static const PolyD div_target = to_double(bubble_divergence_target());
        BubbleTables tables;
        tables.value.resize(rule.size());
        tables.gradient.resize(rule.size());
        tables.divergence.resize(rule.size());
        for (int i = 0; i < 9; ++i) {
            const auto ord = bubble_orderings()[static_cast<std::size_t>(i)];
            const AffineMap S = AffineMap::from_vertices(
                ref_corners[ord[0]], ref_corners[ord[1]], ref_corners[ord[2]],
                ref_corners[ord[3]]);
            for (std::size_t q = 0; q < rule.size(); ++q) {
                const Vec3 pulled = S.pull_back(rule.points[q]);
                tables.value[q][i] = S.J * eval_bubble(pulled);
                tables.gradient[q][i] = S.J * grad_bubble(pulled) * S.Jinv;
                tables.divergence[q][i] = div_target.eval(pulled);
            }
        }
        return tables;
    }
};

namespace detail {

struct LagrangeTables {
    std::vector<std::array<double, 20>> value;
    std::vector<std::array<Vec3, 20>> grad;

    static LagrangeTables build(const QuadratureRule& rule) {
        LagrangeTables t;
        t.value.resize(rule.size());
        t.grad.resize(rule.size());
        const auto& lag = LagrangeP3::instance();
        for (std::size_t q = 0; q < rule.size(); ++q) {
            t.value[q] = lag.eval(rule.points[q]);
            t.grad[q] = lag.eval_grad(rule.points[q]);
        }
        return t;
    }
};

inline std::vector<int> element_velocity_dofs(const VelocityDofMap& vmap, int t) {
    std::vector<int> dofs(kLocalVelocityDofs);
    for (int n = 0; n < 20; ++n)
        for (int c = 0; c < 3; ++c) dofs[3 * n + c] = vmap.velocity_dof(vmap.tet_nodes[t][n], c);
    for (int i = 0; i < 9; ++i) dofs[kLocalConforming + i] = vmap.bubble_dof(t, i);
    return dofs;
}

}  // namespace detail

/// 69x69 element stiffness block: broken-gradient inner products of the
/// 60 conforming component basis functions and 9 bubbles.
inline std::array<std::array<double, kLocalVelocityDofs>, kLocalVelocityDofs>
element_stiffness(const AffineMap& G, const QuadratureRule& rule,
                  const detail::LagrangeTables& lag, const BubbleTables& bub) {
    std::array<std::array<double, kLocalVelocityDofs>, kLocalVelocityDofs> K{};
    const Mat3 JinvT = G.Jinv.transposed();
    const double jac = std::abs(G.detJ);
    std::array<Vec3, 20> pg;       // physical scalar gradients
    std::array<Mat3, 9> bg;        // physical bubble Jacobians
    for (std::size_t q = 0; q < rule.size(); ++q) {
        const double w = rule.weights[q] * jac;
        for (int n = 0; n < 20; ++n) pg[n] = JinvT * lag.grad[q][n];
        for (int i = 0; i < 9; ++i) bg[i] = G.J * bub.gradient[q][i] * G.Jinv;
        // conforming-conforming: component-diagonal scalar products
        for (int n = 0; n < 20; ++n)
            for (int m = n; m < 20; ++m) {
                const double v = w * dot(pg[n], pg[m]);
                for (int c = 0; c < 3; ++c) {
                    K[3 * n + c][3 * m + c] += v;
                    if (m != n) K[3 * m + c][3 * n + c] += v;
                }
            }
        // conforming-bubble: row c of the bubble Jacobian against the scalar gradient
        for (int i = 0; i < 9; ++i) {
            const Mat3& Gi = bg[i];
            for (int n = 0; n < 20; ++n)
                for (int c = 0; c < 3; ++c) {
                    const double v = w * (Gi(c, 0) * pg[n].x + Gi(c, 1) * pg[n].y +
                                          Gi(c, 2) * pg[n].z);
                    K[3 * n + c][kLocalConforming + i] += v;
                    K[kLocalConforming + i][3 * n + c] += v;
                }
        }
        // bubble-bubble: Frobenius products
        for (int i = 0; i < 9; ++i)
            for (int j = i; j < 9; ++j) {
                double s = 0.0;
                for (int r = 0; r < 3; ++r)
                    for (int c = 0; c < 3; ++c) s += bg[i](r, c) * bg[j](r, c);
                const double v = w * s;
                K[kLocalConforming + i][kLocalConforming + j] += v;
                if (j != i) K[kLocalConforming + j][kLocalConforming + i] += v;
            }
    }
    return K;
}

/// 10x69 element divergence block: int_T div(velocity basis) * modal P2.
inline std::array<std::array<double, kLocalVelocityDofs>, ModalP2::kDim>
element_divergence(const AffineMap& G, const QuadratureRule& rule,
                   const detail::LagrangeTables& lag, const BubbleTables& bub) {
    std::array<std::array<double, kLocalVelocityDofs>, ModalP2::kDim> D{};
    const Mat3 JinvT = G.Jinv.transposed();
    const double jac = std::abs(G.detJ);
    const auto& modal = ModalP2::instance();
    for (std::size_t q = 0; q < rule.size(); ++q) {
        const double w = rule.weights[q] * jac;
        const auto pvals = modal.eval(rule.points[q]);
        std::array<double, kLocalVelocityDofs> divs{};
        for (int n = 0; n < 20; ++n) {
            const Vec3 g = JinvT * lag.grad[q][n];
            divs[3 * n + 0] = g.x;
            divs[3 * n + 1] = g.y;
            divs[3 * n + 2] = g.z;
        }
        for (int i = 0; i < 9; ++i) divs[kLocalConforming + i] = bub.divergence[q][i];
        for (int a = 0; a < ModalP2::kDim; ++a) {
            const double wa = w * pvals[a];
            for (int d = 0; d < kLocalVelocityDofs; ++d) D[a][d] += wa * divs[d];
        }
    }
    return D;
}

inline CsrMatrix assemble_stiffness(const TetMesh& mesh, const VelocityDofMap& vmap,
                                    int degree = AssemblyOptions{}.stiffness_degree) {
    const QuadratureRule rule = tet_quadrature(degree);
    const auto lag = detail::LagrangeTables::build(rule);
    const auto bub = BubbleTables::build(rule);

    CsrBuilder builder(vmap.total, vmap.total);
    std::vector<std::vector<int>> dofs(mesh.tets.size());
    for (std::size_t t = 0; t < mesh.tets.size(); ++t) {
        dofs[t] = detail::element_velocity_dofs(vmap, static_cast<int>(t));
        builder.add_clique(dofs[t], dofs[t]);
    }
    CsrMatrix A = builder.finalize();

    for (std::size_t t = 0; t < mesh.tets.size(); ++t) {
        const auto verts = mesh.tet_vertices(static_cast<int>(t));
        const AffineMap G = AffineMap::from_vertices(verts[0], verts[1], verts[2], verts[3]);
        if (std::abs(G.detJ) < 1e-14)
            throw std::runtime_error("assemble_stiffness: degenerate tet " + std::to_string(t));
        const auto K = element_stiffness(G, rule, lag, bub);
        for (int a = 0; a < kLocalVelocityDofs; ++a)
            for (int b = 0; b < kLocalVelocityDofs; ++b)
                if (K[a][b] != 0.0) A.add(dofs[t][a], dofs[t][b], K[a][b]);
    }
    return A;
}

inline CsrMatrix assemble_divergence(const TetMesh& mesh, const VelocityDofMap& vmap,
                                     const PressureDofMap& pmap,
                                     int degree = AssemblyOptions{}.divergence_degree) {
    const QuadratureRule rule = tet_quadrature(degree);
    const auto lag = detail::LagrangeTables::build(rule);
    const auto bub = BubbleTables::build(rule);

    CsrBuilder builder(pmap.total, vmap.total);
    for (std::size_t t = 0; t < mesh.tets.size(); ++t) {
        const auto dofs = detail::element_velocity_dofs(vmap, static_cast<int>(t));
        std::vector<int> rows(ModalP2::kDim);
        for (int a = 0; a < ModalP2::kDim; ++a) rows[a] = pmap.dof(static_cast<int>(t), a);
        builder.add_clique(rows, dofs);
    }
    CsrMatrix B = builder.finalize();

    for (std::size_t t = 0; t < mesh.tets.size(); ++t) {
        const auto verts = mesh.tet_vertices(static_cast<int>(t));
        const AffineMap G = AffineMap::from_vertices(verts[0], verts[1], verts[2], verts[3]);
        const auto D = element_divergence(G, rule, lag, bub);
        const auto dofs = detail::element_velocity_dofs(vmap, static_cast<int>(t));
        for (int a = 0; a < ModalP2::kDim; ++a)
            for (int d = 0; d < kLocalVelocityDofs; ++d)
                if (D[a][d] != 0.0) B.add(pmap.dof(static_cast<int>(t), a), dofs[d], D[a][d]);
    }
    return B;
}

/// Block-diagonal pressure mass. Per element the block is |det J| times
/// the exact reference mass matrix of the modal basis, which is the
/// degree-exact value of the quadrature form.
inline CsrMatrix assemble_pressure_mass(const TetMesh& mesh, const PressureDofMap& pmap) {
    const auto& modal = ModalP2::instance();
    CsrBuilder builder(pmap.total, pmap.total);
    for (int t = 0; t < pmap.n_tets; ++t) {
        std::vector<int> rows(ModalP2::kDim);
        for (int a = 0; a < ModalP2::kDim; ++a) rows[a] = pmap.dof(t, a);
        builder.add_clique(rows, rows);
    }
    CsrMatrix M = builder.finalize();
    for (int t = 0; t < pmap.n_tets; ++t) {
        const double jac = 6.0 * mesh.tet_volume(t);
        for (int a = 0; a < ModalP2::kDim; ++a)
            for (int b = 0; b < ModalP2::kDim; ++b)
                M.add(pmap.dof(t, a), pmap.dof(t, b),
                      jac * to_double(modal.reference_mass()[a][b]));
    }
    return M;
}

inline std::vector<double> assemble_load(const TetMesh& mesh, const VelocityDofMap& vmap,
                                         const std::function<Vec3(const Vec3&)>& forcing,
                                         int degree = AssemblyOptions{}.load_degree) {
    const QuadratureRule rule = tet_quadrature(degree);
    const auto lag = detail::LagrangeTables::build(rule);
    const auto bub = BubbleTables::build(rule);
    std::vector<double> load(vmap.total, 0.0);
    for (std::size_t t = 0; t < mesh.tets.size(); ++t) {
        const auto verts = mesh.tet_vertices(static_cast<int>(t));
        const AffineMap G = AffineMap::from_vertices(verts[0], verts[1], verts[2], verts[3]);
        const double jac = std::abs(G.detJ);
        const auto dofs = detail::element_velocity_dofs(vmap, static_cast<int>(t));
        std::array<double, kLocalVelocityDofs> local{};
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const double w = rule.weights[q] * jac;
            const Vec3 f = forcing(G.apply(rule.points[q]));
            for (int n = 0; n < 20; ++n) {
                const double v = w * lag.value[q][n];
                local[3 * n + 0] += v * f.x;
                local[3 * n + 1] += v * f.y;
                local[3 * n + 2] += v * f.z;
            }
            for (int i = 0; i < 9; ++i)
                local[kLocalConforming + i] += w * dot(f, G.J * bub.value[q][i]);
        }
        for (int d = 0; d < kLocalVelocityDofs; ++d) load[dofs[d]] += local[d];
    }
    return load;
}

/// The assembled saddle system
///   A u - B^T p = f,   B u = 0
/// with A the broken-gradient stiffness, B the (div velocity, pressure)
/// coupling and M the pressure mass used as Schur preconditioner.
struct SaddleSystem {
    CsrMatrix A;
    CsrMatrix B;
    CsrMatrix M;
    std::vector<double> load;
    std::vector<bool> is_constrained;
    std::vector<int> constrained;
    std::vector<double> pressure_mean_weights;
    double domain_volume = 0.0;

    int n_velocity() const { return A.rows(); }
    int n_pressure() const { return B.rows(); }
};

/// Symmetric elimination of homogeneous Dirichlet dofs: constrained rows
/// and columns of A become identity rows/columns, the matching load
/// entries and B columns are zeroed.
inline void apply_dirichlet(SaddleSystem& sys) {
    const auto& flag = sys.is_constrained;
    auto& Av = sys.A.values();
    for (int r = 0; r < sys.A.rows(); ++r) {
        const bool row_fixed = flag[r];
        for (int p = sys.A.row_ptr()[r]; p < sys.A.row_ptr()[r + 1]; ++p) {
            const int c = sys.A.col_idx()[p];
            if (row_fixed || flag[c]) Av[p] = (r == c) ? 1.0 : 0.0;
        }
        if (row_fixed) sys.load[r] = 0.0;
    }
    auto& Bv = sys.B.values();
    for (int r = 0; r < sys.B.rows(); ++r)
        for (int p = sys.B.row_ptr()[r]; p < sys.B.row_ptr()[r + 1]; ++p)
            if (flag[sys.B.col_idx()[p]]) Bv[p] = 0.0;
}

inline SaddleSystem assemble_saddle_system(const TetMesh& mesh, const VelocityDofMap& vmap,
                                           const PressureDofMap& pmap,
                                           const std::function<Vec3(const Vec3&)>& forcing,
                                           const AssemblyOptions& opts = {}) {
    SaddleSystem sys;
    sys.A = assemble_stiffness(mesh, vmap, opts.stiffness_degree);
    sys.B = assemble_divergence(mesh, vmap, pmap, opts.divergence_degree);
    sys.M = assemble_pressure_mass(mesh, pmap);
    sys.load = assemble_load(mesh, vmap, forcing, opts.load_degree);
    sys.is_constrained.assign(vmap.total, false);
    for (int d : vmap.boundary) sys.is_constrained[d] = true;
    sys.constrained = vmap.boundary;
    sys.pressure_mean_weights = pmap.mean_weights;
    sys.domain_volume = pmap.domain_volume;
    apply_dirichlet(sys);
    return sys;
}

}  // namespace p3nc
