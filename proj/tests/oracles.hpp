// Test-only oracles, kept independent of the library's assembly and
// evaluation paths: exact rational face moments, dense quadrature-loop
// element matrices, and brute-force mesh entity counting.
#pragma once

#include <array>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "p3nc/bubble.hpp"
#include "p3nc/element.hpp"
#include "p3nc/lagrange_p3.hpp"
#include "p3nc/mesh.hpp"
#include "p3nc/pressure_basis.hpp"
#include "p3nc/quadrature.hpp"

namespace oracles {

using namespace p3nc;

/// Substitute (x,y,z) -> origin + s*ea + t*eb into a rational polynomial;
/// the result is a bivariate polynomial carried in the (x,y) exponent
/// slots.
inline PolyQ substitute_face_param(const PolyQ& p, const std::array<Rational, 3>& origin,
                                   const std::array<Rational, 3>& ea,
                                   const std::array<Rational, 3>& eb) {
    std::array<PolyQ, 3> lin;
    for (int axis = 0; axis < 3; ++axis) {
        lin[axis] = PolyQ::constant(origin[axis]);
        lin[axis].add_term({1, 0, 0}, ea[axis]);
        lin[axis].add_term({0, 1, 0}, eb[axis]);
    }
    PolyQ result;
    for (const auto& [e, c] : p.terms()) {
        PolyQ term = PolyQ::constant(c);
        for (int axis = 0; axis < 3; ++axis)
            for (int k = 0; k < e[axis]; ++k) term = term * lin[axis];
        result = result + term;
    }
    return result;
}

struct RefFace {
    std::array<Rational, 3> origin, ea, eb;
};

inline std::array<RefFace, 4> reference_faces() {
    using R = Rational;
    return {{
        {{R(1), R(0), R(0)}, {R(-1), R(1), R(0)}, {R(-1), R(0), R(1)}},  // x+y+z=1
        {{R(0), R(0), R(0)}, {R(0), R(1), R(0)}, {R(0), R(0), R(1)}},    // x=0
        {{R(0), R(0), R(0)}, {R(1), R(0), R(0)}, {R(0), R(0), R(1)}},    // y=0
        {{R(0), R(0), R(0)}, {R(1), R(0), R(0)}, {R(0), R(1), R(0)}},    // z=0
    }};
}

/// Exact moment of a scalar rational polynomial against s^a t^b on one
/// reference face (area element dropped: only vanishing matters).
inline Rational exact_face_moment(const PolyQ& p, const RefFace& face, int a, int b) {
    const PolyQ restricted = substitute_face_param(p, face.origin, face.ea, face.eb);
    Rational total = 0;
    for (const auto& [e, c] : restricted.terms())
        total += c * tri_monomial_integral(e[0] + a, e[1] + b);
    return total;
}

/// Uniformly random non-degenerate positively oriented tetrahedron in
/// the unit cube, with volume bounded away from zero.
inline std::array<Vec3, 4> random_tet(std::mt19937& rng) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (;;) {
        std::array<Vec3, 4> verts;
        for (auto& v : verts) v = {uni(rng), uni(rng), uni(rng)};
        const double vol = signed_volume(verts[0], verts[1], verts[2], verts[3]);
        if (vol < -0.01) {
            std::swap(verts[1], verts[2]);
            return verts;
        }
        if (vol > 0.01) return verts;
    }
}

/// Velocity basis evaluation straight from definitions: component fields
/// of the 20 Lagrange functions plus the 9 Piola bubbles, at a physical
/// point. Node-major/component-minor ordering, bubbles last.
inline Vec3 velocity_basis_value(const std::array<Vec3, 4>& verts, int dof, const Vec3& x) {
    const AffineMap G = AffineMap::from_vertices(verts[0], verts[1], verts[2], verts[3]);
    if (dof < 60) {
        const int node = dof / 3, comp = dof % 3;
        const double v = LagrangeP3::instance().eval(G.pull_back(x))[node];
        Vec3 r{0, 0, 0};
        r[comp] = v;
        return r;
    }
    return piola_bubble(bubble_map(verts, dof - 60), x);
}

inline Mat3 velocity_basis_gradient(const std::array<Vec3, 4>& verts, int dof, const Vec3& x) {
    const AffineMap G = AffineMap::from_vertices(verts[0], verts[1], verts[2], verts[3]);
    Mat3 g;
    if (dof < 60) {
        const int node = dof / 3, comp = dof % 3;
        const Vec3 pg = G.Jinv.transposed() * LagrangeP3::instance().eval_grad(G.pull_back(x))[node];
        for (int c = 0; c < 3; ++c) g(comp, c) = pg[c];
        return g;
    }
    return bubble_gradient(bubble_map(verts, dof - 60), x);
}

/// Dense element stiffness by a plain quadrature loop over physical
/// points, evaluating basis gradients directly (no precomputed tables).
inline std::vector<std::vector<double>> dense_stiffness(const std::array<Vec3, 4>& verts,
                                                        int degree = 8) {
    const AffineMap G = AffineMap::from_vertices(verts[0], verts[1], verts[2], verts[3]);
    const QuadratureRule rule = tet_quadrature(degree);
    std::vector<std::vector<double>> K(69, std::vector<double>(69, 0.0));
    for (std::size_t q = 0; q < rule.size(); ++q) {
        const Vec3 x = G.apply(rule.points[q]);
        const double w = rule.weights[q] * std::abs(G.detJ);
        std::array<Mat3, 69> grads;
        for (int d = 0; d < 69; ++d) grads[d] = velocity_basis_gradient(verts, d, x);
        for (int a = 0; a < 69; ++a)
            for (int b = 0; b < 69; ++b) {
                double s = 0.0;
                for (int r = 0; r < 3; ++r)
                    for (int c = 0; c < 3; ++c) s += grads[a](r, c) * grads[b](r, c);
                K[a][b] += w * s;
            }
    }
    return K;
}

/// Dense element divergence block: rows are the 10 modal pressure
/// functions composed with the inverse element map, columns the 69
/// velocity basis functions; divergence taken as the gradient trace.
inline std::vector<std::vector<double>> dense_divergence(const std::array<Vec3, 4>& verts,
                                                         int degree = 6) {
    const AffineMap G = AffineMap::from_vertices(verts[0], verts[1], verts[2], verts[3]);
    const QuadratureRule rule = tet_quadrature(degree);
    std::vector<std::vector<double>> D(10, std::vector<double>(69, 0.0));
    for (std::size_t q = 0; q < rule.size(); ++q) {
        const Vec3 x = G.apply(rule.points[q]);
        const double w = rule.weights[q] * std::abs(G.detJ);
        const auto pvals = ModalP2::instance().eval(rule.points[q]);
        for (int d = 0; d < 69; ++d) {
            const double divv = velocity_basis_gradient(verts, d, x).trace();
            for (int a = 0; a < 10; ++a) D[a][d] += w * pvals[a] * divv;
        }
    }
    return D;
}

/// Dense element pressure mass by quadrature.
inline std::vector<std::vector<double>> dense_mass(const std::array<Vec3, 4>& verts,
                                                   int degree = 6) {
    const AffineMap G = AffineMap::from_vertices(verts[0], verts[1], verts[2], verts[3]);
    const QuadratureRule rule = tet_quadrature(degree);
    std::vector<std::vector<double>> M(10, std::vector<double>(10, 0.0));
    for (std::size_t q = 0; q < rule.size(); ++q) {
        const double w = rule.weights[q] * std::abs(G.detJ);
        const auto pvals = ModalP2::instance().eval(rule.points[q]);
        for (int a = 0; a < 10; ++a)
            for (int b = 0; b < 10; ++b) M[a][b] += w * pvals[a] * pvals[b];
    }
    return M;
}

struct EntityCounts {
    int faces = 0, boundary_faces = 0, edges = 0;
};

/// Brute-force entity census from the raw tet list alone.
inline EntityCounts count_entities(const TetMesh& mesh) {
    std::map<std::array<int, 3>, int> face_count;
    std::set<std::array<int, 2>> edge_set;
    for (const auto& tet : mesh.tets) {
        const auto& v = tet.v;
        const int idx[4][3] = {{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}};
        for (const auto& f : idx) {
            std::array<int, 3> key = {v[f[0]], v[f[1]], v[f[2]]};
            std::sort(key.begin(), key.end());
            ++face_count[key];
        }
        for (int a = 0; a < 4; ++a)
            for (int b = a + 1; b < 4; ++b)
                edge_set.insert({std::min(v[a], v[b]), std::max(v[a], v[b])});
    }
    EntityCounts counts;
    counts.faces = static_cast<int>(face_count.size());
    for (const auto& [key, n] : face_count)
        if (n == 1) ++counts.boundary_faces;
    counts.edges = static_cast<int>(edge_set.size());
    return counts;
}

}  // namespace oracles
