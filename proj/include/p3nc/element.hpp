#pragma once

#include <array>

#include "bubble.hpp"
#include "geometry.hpp"
#include "polynomial.hpp"

namespace p3nc {

/// Affine map x = J xhat + t from the reference tetrahedron, with cached
/// inverse and determinant. The map sends reference vertex 0 (origin) to
/// p0 and reference vertex i (unit point on axis i) to pi. J may have
/// either determinant sign; it must be invertible.
struct AffineMap {
    Mat3 J;
    Vec3 t;
    Mat3 Jinv;
    double detJ = 0.0;

    static AffineMap from_vertices(const Vec3& p0, const Vec3& p1, const Vec3& p2,
                                   const Vec3& p3) {
        AffineMap map;
        map.J = Mat3::from_columns(p1 - p0, p2 - p0, p3 - p0);
        map.t = p0;
        map.detJ = map.J.det();
        if (map.detJ == 0.0) throw std::runtime_error("AffineMap: degenerate tetrahedron");
        map.Jinv = map.J.inverse();
        return map;
    }

    Vec3 apply(const Vec3& ref) const { return J * ref + t; }
    Vec3 pull_back(const Vec3& phys) const { return Jinv * (phys - t); }
};

/// The nine vertex orderings that generate the per-element bubbles, as
/// permutations of the element's four local vertex slots. Ordering i
/// sends reference vertex k to local slot orderings()[i][k].
constexpr std::array<std::array<int, 4>, 9> bubble_orderings() {
    return {{{0, 1, 2, 3},
             {0, 2, 3, 1},
             {0, 3, 1, 2},
             {1, 2, 0, 3},
             {1, 0, 3, 2},
             {1, 3, 2, 0},
             {2, 0, 1, 3},
             {2, 3, 0, 1},
             {3, 0, 2, 1}}};
}

/// Affine map for bubble i on the tet with the given (ordered) vertices.
inline AffineMap bubble_map(const std::array<Vec3, 4>& verts, int i) {
    const std::array<int, 4> ord = bubble_orderings()[static_cast<std::size_t>(i)];
    return AffineMap::from_vertices(verts[ord[0]], verts[ord[1]], verts[ord[2]], verts[ord[3]]);
}

/// Piola image of the reference bubble: b(x) = J bhat(F^{-1} x).
/// There is no 1/det(J) factor; with constant J this transform leaves the
/// divergence invariant as a function of the reference point.
inline Vec3 piola_bubble(const AffineMap& map, const Vec3& x) {
    return map.J * eval_bubble(map.pull_back(x));
}

/// Physical Jacobian of the mapped bubble: J grad(bhat)(F^{-1}x) J^{-1}.
inline Mat3 bubble_gradient(const AffineMap& map, const Vec3& x) {
    return map.J * grad_bubble(map.pull_back(x)) * map.Jinv;
}

/// The divergences of the nine bubbles on a tet, as quadratic polynomials
/// in physical coordinates. Each integrates to zero over the tet, and
/// together they span the mean-zero quadratics.
inline std::array<PolyD, 9> bubble_divergences(const std::array<Vec3, 4>& verts) {
    static const PolyD target = to_double(bubble_divergence_target());
    std::array<PolyD, 9> divs;
    for (int i = 0; i < 9; ++i) {
        const AffineMap map = bubble_map(verts, i);
        // div b_i (x) = target(F_i^{-1} x).
        divs[i] = compose_affine(target, map.Jinv, -1.0 * (map.Jinv * map.t));
    }
    return divs;
}

/// Regression fixture: the tetrahedron cut from the unit cube on which
/// the expected divergence table below was derived. The vertex order is
/// the unique assignment of cube corners reproducing that table (found by
/// exhaustive search, re-verified by the acceptance suite).
inline std::array<Vec3, 4> cube_fixture_tet() {
    return {Vec3{0, 0, 0}, Vec3{1, 0, 1}, Vec3{1, 1, 1}, Vec3{1, 0, 0}};
}

/// Expected divergence of bubble i on cube_fixture_tet(), tabulated in
/// the modal order {1, x, y, z, x^2, xy, xz, y^2, yz, z^2}.
inline PolyD cube_fixture_divergence(int i) {
    static constexpr double table[9][10] = {
        {0, 0, 0, 0, 0, 4, -4, 8, -16, 8},
        {0, 0, 0, 0, 0, -4, 0, 8, 0, 0},
        {0, 0, 0, 0, 4, 0, -12, 0, 0, 8},
        {0, 0, -4, 0, 0, 0, 0, 4, 4, 0},
        {4, -12, -4, 4, 8, 4, -4, 0, 0, 0},
        {0, -4, 0, 4, 8, -4, -12, 0, 4, 4},
        {4, -12, 4, 0, 8, -4, 0, 0, 0, 0},
        {0, -4, 0, 4, 8, 4, -16, 0, -4, 8},
        {4, -8, 0, -4, 4, 0, 4, 0, 0, 0},
    };
    static constexpr std::array<std::array<int, 3>, 10> exps = {
        {{0, 0, 0},
         {1, 0, 0},
         {0, 1, 0},
         {0, 0, 1},
         {2, 0, 0},
         {1, 1, 0},
         {1, 0, 1},
         {0, 2, 0},
         {0, 1, 1},
         {0, 0, 2}}};
    PolyD p;
    for (int m = 0; m < 10; ++m)
        if (table[i][m] != 0.0) p.add_term(exps[m], table[i][m]);
    return p;
}

}  // namespace p3nc
