#pragma once

#include <chrono>
#include <cstdio>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "assembly.hpp"
#include "exact_solution.hpp"
#include "solver.hpp"

namespace p3nc {

struct ErrorNorms {
    double velocity_l2 = 0.0;
    double velocity_h1 = 0.0;  // broken H1 seminorm of the error
    double pressure_l2 = 0.0;
};

namespace detail {

/// Evaluates the discrete velocity and its broken gradient on one
/// element at the points of a rule, given precomputed reference tables.
struct DiscreteField {
    const TetMesh& mesh;
    const VelocityDofMap& vmap;
    const std::vector<double>& coefs;
    const QuadratureRule& rule;
    const LagrangeTables& lag;
    const BubbleTables& bub;

    AffineMap G;
    std::array<double, kLocalVelocityDofs> local{};

    void bind(int t) {
        const auto verts = mesh.tet_vertices(t);
        G = AffineMap::from_vertices(verts[0], verts[1], verts[2], verts[3]);
        const auto dofs = element_velocity_dofs(vmap, t);
        for (int d = 0; d < kLocalVelocityDofs; ++d) local[d] = coefs[dofs[d]];
    }

    Vec3 value(std::size_t q) const {
        Vec3 u{0, 0, 0};
        for (int n = 0; n < 20; ++n) {
            const double v = lag.value[q][n];
            u.x += local[3 * n + 0] * v;
            u.y += local[3 * n + 1] * v;
            u.z += local[3 * n + 2] * v;
        }
        for (int i = 0; i < 9; ++i)
            u += local[kLocalConforming + i] * (G.J * bub.value[q][i]);
        return u;
    }

    Mat3 gradient(std::size_t q) const {
        const Mat3 JinvT = G.Jinv.transposed();
        Mat3 g;
        for (int n = 0; n < 20; ++n) {
            const Vec3 pg = JinvT * lag.grad[q][n];
            for (int c = 0; c < 3; ++c)
                for (int d = 0; d < 3; ++d) g(c, d) += local[3 * n + c] * pg[d];
        }
        for (int i = 0; i < 9; ++i) {
            const double ci = local[kLocalConforming + i];
            if (ci == 0.0) continue;
            const Mat3 bg = G.J * bub.gradient[q][i] * G.Jinv;
            for (int c = 0; c < 3; ++c)
                for (int d = 0; d < 3; ++d) g(c, d) += ci * bg(c, d);
        }
        return g;
    }
};

}  // namespace detail

/// L2 / broken H1 velocity errors and the mean-aligned L2 pressure error
/// against an analytic solution (any type providing velocity,
/// velocity_gradient and pressure members).
template <typename Exact>
ErrorNorms error_norms(const TetMesh& mesh, const VelocityDofMap& vmap,
                       const PressureDofMap& pmap, const Solution& sol, const Exact& exact,
                       int degree = 14) {
    const QuadratureRule rule = tet_quadrature(degree);
    const auto lag = detail::LagrangeTables::build(rule);
    const auto bub = BubbleTables::build(rule);
    const auto& modal = ModalP2::instance();
    const int nt = static_cast<int>(mesh.tets.size());

    // Mean of (p - p_h): the discrete part from the exact dof weights,
    // the analytic part by quadrature.
    double exact_pressure_integral = 0.0;
    for (int t = 0; t < nt; ++t) {
        const auto verts = mesh.tet_vertices(t);
        const AffineMap G = AffineMap::from_vertices(verts[0], verts[1], verts[2], verts[3]);
        const double jac = std::abs(G.detJ);
        for (std::size_t q = 0; q < rule.size(); ++q)
            exact_pressure_integral += rule.weights[q] * jac * exact.pressure(G.apply(rule.points[q]));
    }
    double discrete_pressure_integral = 0.0;
    for (int i = 0; i < pmap.total; ++i)
        discrete_pressure_integral += pmap.mean_weights[i] * sol.pressure[i];
    const double shift =
        (exact_pressure_integral - discrete_pressure_integral) / pmap.domain_volume;

    detail::DiscreteField uh{mesh, vmap, sol.velocity, rule, lag, bub, {}, {}};
    double err_l2 = 0.0, err_h1 = 0.0, err_p = 0.0;
    for (int t = 0; t < nt; ++t) {
        uh.bind(t);
        const double jac = std::abs(uh.G.detJ);
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const double w = rule.weights[q] * jac;
            const Vec3 x = uh.G.apply(rule.points[q]);
            const Vec3 du = uh.value(q) - exact.velocity(x);
            err_l2 += w * dot(du, du);
            const Mat3 dg = uh.gradient(q);
            const Mat3 eg = exact.velocity_gradient(x);
            for (int r = 0; r < 3; ++r)
                for (int c = 0; c < 3; ++c) {
                    const double d = dg(r, c) - eg(r, c);
                    err_h1 += w * d * d;
                }
            const auto pvals = modal.eval(rule.points[q]);
            double ph = shift;
            for (int a = 0; a < ModalP2::kDim; ++a)
                ph += sol.pressure[pmap.dof(t, a)] * pvals[a];
            const double dp = ph - exact.pressure(x);
            err_p += w * dp * dp;
        }
    }
    return {std::sqrt(err_l2), std::sqrt(err_h1), std::sqrt(err_p)};
}

/// Broken H1-type norm sqrt(|u_h|_0^2 + |grad u_h|_0^2) of a discrete
/// velocity. The integrand is polynomial of degree 8, integrated exactly.
inline double velocity_norm_1h(const TetMesh& mesh, const VelocityDofMap& vmap,
                               const std::vector<double>& velocity, int degree = 8) {
    const QuadratureRule rule = tet_quadrature(degree);
    const auto lag = detail::LagrangeTables::build(rule);
    const auto bub = BubbleTables::build(rule);
    detail::DiscreteField uh{mesh, vmap, velocity, rule, lag, bub, {}, {}};
    double total = 0.0;
    for (int t = 0; t < static_cast<int>(mesh.tets.size()); ++t) {
        uh.bind(t);
        const double jac = std::abs(uh.G.detJ);
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const double w = rule.weights[q] * jac;
            const Vec3 u = uh.value(q);
            total += w * dot(u, u);
            const Mat3 g = uh.gradient(q);
            for (int r = 0; r < 3; ++r)
                for (int c = 0; c < 3; ++c) total += w * g(r, c) * g(r, c);
        }
    }
    return std::sqrt(total);
}

/// Max |div u_h| over `samples` random points per tet. The divergence of
/// the discrete velocity is an elementwise quadratic: the conforming part
/// contributes the trace of its gradient, each bubble its pulled-back
/// reference divergence.
inline double divergence_check(const TetMesh& mesh, const VelocityDofMap& vmap,
                               const std::vector<double>& velocity, int samples = 10,
                               unsigned seed = 348652u) {
    static const std::array<Vec3, 4> ref_corners = {
        Vec3{0, 0, 0}, Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}};
    static const PolyD div_target = to_double(bubble_divergence_target());
    std::array<AffineMap, 9> S;
    for (int i = 0; i < 9; ++i) {
        const auto ord = bubble_orderings()[static_cast<std::size_t>(i)];
        S[i] = AffineMap::from_vertices(ref_corners[ord[0]], ref_corners[ord[1]],
                                        ref_corners[ord[2]], ref_corners[ord[3]]);
    }
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const auto& lagrange = LagrangeP3::instance();
    double worst = 0.0;
    for (int t = 0; t < static_cast<int>(mesh.tets.size()); ++t) {
        const auto verts = mesh.tet_vertices(t);
        const AffineMap G = AffineMap::from_vertices(verts[0], verts[1], verts[2], verts[3]);
        const Mat3 JinvT = G.Jinv.transposed();
        const auto dofs = detail::element_velocity_dofs(vmap, t);
        for (int s = 0; s < samples; ++s) {
            Vec3 ref{uni(rng), uni(rng), uni(rng)};
            while (ref.x + ref.y + ref.z > 1.0) ref = {uni(rng), uni(rng), uni(rng)};
            double div = 0.0;
            const auto grads = lagrange.eval_grad(ref);
            for (int n = 0; n < 20; ++n) {
                const Vec3 pg = JinvT * grads[n];
                for (int c = 0; c < 3; ++c) div += velocity[dofs[3 * n + c]] * pg[c];
            }
            for (int i = 0; i < 9; ++i)
                div += velocity[dofs[kLocalConforming + i]] * div_target.eval(S[i].pull_back(ref));
            worst = std::max(worst, std::abs(div));
        }
    }
    return worst;
}

struct LevelResult {
    int level = 0;
    int cubes_per_axis = 0;
    int n_tets = 0;
    int velocity_dofs = 0;
    int pressure_dofs = 0;
    bool solved = false;
    std::string failure;
    double velocity_l2 = 0.0, velocity_h1 = 0.0, pressure_l2 = 0.0;
    double rate_l2 = 0.0, rate_h1 = 0.0, rate_p = 0.0;
    int uzawa = 0;
    double seconds = 0.0;
};

struct ConvergenceReport {
    std::vector<LevelResult> rows;
    bool all_solved() const {
        for (const auto& r : rows)
            if (!r.solved) return false;
        return true;
    }
};

/// Runs the manufactured problem on levels 1..levels (level k uses
/// 2^{k-1} cubes per axis), measuring errors, rates and Uzawa counts.
inline ConvergenceReport convergence_study(int levels, const SolverConfig& config = {},
                                           const AssemblyOptions& opts = {}) {
    if (levels < 1) throw std::invalid_argument("convergence_study: need levels >= 1");
    ConvergenceReport report;
    const ExactSolution exact;
    for (int level = 1; level <= levels; ++level) {
        LevelResult row;
        row.level = level;
        row.cubes_per_axis = 1 << (level - 1);
        const auto start = std::chrono::steady_clock::now();
        try {
            const TetMesh mesh = build_cube_mesh(row.cubes_per_axis);
            const VelocityDofMap vmap = build_velocity_dofs(mesh);
            const PressureDofMap pmap = build_pressure_dofs(mesh);
            row.n_tets = static_cast<int>(mesh.tets.size());
            row.velocity_dofs = vmap.total;
            row.pressure_dofs = pmap.total;
            const SaddleSystem sys = assemble_saddle_system(
                mesh, vmap, pmap, [&](const Vec3& x) { return exact.forcing(x); }, opts);
            const Solution sol = solve_stokes(sys, config);
            const ErrorNorms err = error_norms(mesh, vmap, pmap, sol, exact);
            row.velocity_l2 = err.velocity_l2;
            row.velocity_h1 = err.velocity_h1;
            row.pressure_l2 = err.pressure_l2;
            row.uzawa = sol.uzawa_iterations;
            row.solved = true;
        } catch (const std::exception& e) {
            row.failure = e.what();
        }
        row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (row.solved && !report.rows.empty() && report.rows.back().solved) {
            const LevelResult& prev = report.rows.back();
            row.rate_l2 = std::log2(prev.velocity_l2 / row.velocity_l2);
            row.rate_h1 = std::log2(prev.velocity_h1 / row.velocity_h1);
            row.rate_p = std::log2(prev.pressure_l2 / row.pressure_l2);
        }
        report.rows.push_back(std::move(row));
    }
    return report;
}

/// Scientific notation with a leading "0." mantissa (0.231E+00 style).
inline std::string format_error(double v) {
    if (v == 0.0) return "0.000E+00";
    const bool neg = v < 0.0;
    double a = std::abs(v);
    int e = static_cast<int>(std::floor(std::log10(a))) + 1;
    double m = a / std::pow(10.0, e);
    if (m >= 1.0) {
        m /= 10.0;
        ++e;
    }
    if (m < 0.1) {
        m *= 10.0;
        --e;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s0.%03dE%+03d", neg ? "-" : "",
                  static_cast<int>(std::lround(m * 1000.0)), e);
    return buf;
}

inline void write_markdown(const ConvergenceReport& report, std::ostream& out) {
    out << "| grid | dofs (u) | dofs (p) | ||u-u_h||_0 | rate | ||grad(u-u_h)||_0 | rate | "
           "||p-p_h||_0 | rate | #Uz | time (s) |\n";
    out << "|-----:|---------:|---------:|------------:|-----:|------------------:|-----:|"
           "------------:|-----:|----:|---------:|\n";
    char buf[64];
    for (const auto& r : report.rows) {
        if (!r.solved) {
            out << "| " << r.level << " | - | - | failed: " << r.failure << " |\n";
            continue;
        }
        out << "| " << r.level << " | " << r.velocity_dofs << " | " << r.pressure_dofs << " | "
            << format_error(r.velocity_l2);
        std::snprintf(buf, sizeof(buf), " | %.1f | ", r.rate_l2);
        out << buf << format_error(r.velocity_h1);
        std::snprintf(buf, sizeof(buf), " | %.1f | ", r.rate_h1);
        out << buf << format_error(r.pressure_l2);
        std::snprintf(buf, sizeof(buf), " | %.1f | %d | %.1f |", r.rate_p, r.uzawa, r.seconds);
        out << buf << "\n";
    }
}

inline void write_csv(const ConvergenceReport& report, std::ostream& out) {
    out << "level,cubes_per_axis,tets,velocity_dofs,pressure_dofs,velocity_l2,rate_l2,"
           "velocity_h1,rate_h1,pressure_l2,rate_p,uzawa_iterations,seconds,solved\n";
    char buf[256];
    for (const auto& r : report.rows) {
        std::snprintf(buf, sizeof(buf), "%d,%d,%d,%d,%d,%.10e,%.2f,%.10e,%.2f,%.10e,%.2f,%d,%.3f,%d\n",
                      r.level, r.cubes_per_axis, r.n_tets, r.velocity_dofs, r.pressure_dofs,
                      r.velocity_l2, r.rate_l2, r.velocity_h1, r.rate_h1, r.pressure_l2, r.rate_p,
                      r.uzawa, r.seconds, r.solved ? 1 : 0);
        out << buf;
    }
}

/// Nodal interpolation of an analytic velocity field into the conforming
/// block (bubble coefficients zero). Test utility.
inline std::vector<double> interpolate_velocity(const VelocityDofMap& vmap,
                                                const std::function<Vec3(const Vec3&)>& field) {
    std::vector<double> coefs(vmap.total, 0.0);
    for (int node = 0; node < vmap.n_scalar; ++node) {
        const Vec3 u = field(vmap.node_positions[node]);
        for (int c = 0; c < 3; ++c) coefs[vmap.velocity_dof(node, c)] = u[c];
    }
    return coefs;
}

}  // namespace p3nc
