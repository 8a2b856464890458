#pragma once

#include <array>
#include <cmath>

#include "polynomial.hpp"
#include "quadrature.hpp"

namespace p3nc {

/// The vector-valued quartic bubble on the reference tetrahedron.
///
/// Its defining properties, all verified by tests at exact-rational level
/// where possible:
///   * every quadratic moment of every component vanishes on each of the
///     four faces (72 moments total),
///   * the divergence is the quadratic 4 x (x - y - z), which integrates
///     to zero over the tetrahedron.
/// Coefficients are stored as exact rationals; floating-point evaluation
/// is derived from them.
struct ReferenceBubble {
    std::array<PolyQ, 3> component;

    PolyQ divergence() const {
        return component[0].derivative(0) + component[1].derivative(1)
             + component[2].derivative(2);
    }

    Vec3 eval(const Vec3& p) const {
        return {component[0].eval(p), component[1].eval(p), component[2].eval(p)};
    }
};

namespace detail {

struct BubbleTerm {
    int i, j, k;
    long long num, den;
};

// clang-format off
inline constexpr BubbleTerm kBubbleTerms1[] = {
    {4, 0, 0, 263, 12}, {3, 1, 0, 38, 1},    {3, 0, 1, 265, 3},  {2, 2, 0, 29, 1},
    {2, 1, 1, 96, 1},   {2, 0, 2, 209, 2},   {1, 3, 0, -16, 1},  {1, 2, 1, 42, 1},
    {1, 1, 2, 42, 1},   {1, 0, 3, 103, 3},   {0, 4, 0, 7, 6},    {0, 2, 2, -1, 1},
    {0, 0, 4, -335, 12},{3, 0, 0, -253, 6},  {2, 1, 0, -87, 2},  {2, 0, 1, -119, 1},
    {1, 2, 0, 21, 2},   {1, 1, 1, -56, 1},   {1, 0, 2, -65, 1},  {0, 0, 3, 112, 3},
    {2, 0, 0, 703, 28}, {1, 1, 0, 7, 2},     {1, 0, 1, 251, 7},  {0, 2, 0, -41, 28},
    {0, 1, 1, 2, 7},    {0, 0, 2, -169, 14}, {1, 0, 0, -181, 42},{0, 1, 0, 13, 21},
    {0, 0, 0, 73, 840},
};
inline constexpr BubbleTerm kBubbleTerms2[] = {
    {3, 1, 0, -233, 3}, {3, 0, 1, 67, 9},    {2, 2, 0, -233, 2}, {2, 1, 1, -235, 1},
    {2, 0, 2, 163, 6},  {1, 3, 0, -203, 3},  {1, 2, 1, -225, 1}, {1, 1, 2, -209, 1},
    {1, 0, 3, 301, 9},  {0, 3, 1, -64, 3},   {0, 2, 2, -21, 1},  {0, 1, 3, -16, 3},
    {3, 0, 0, 113, 18}, {2, 1, 0, 1105, 8},  {2, 0, 1, 155, 24}, {1, 2, 0, 1025, 8},
    {1, 1, 1, 1077, 4}, {1, 0, 2, -469, 24}, {0, 3, 0, 79, 8},   {0, 2, 1, 417, 8},
    {0, 1, 2, 289, 8},  {0, 0, 3, -199, 72}, {2, 0, 0, -625, 56},{1, 1, 0, -505, 7},
    {1, 0, 1, -94, 7},  {0, 2, 0, -447, 28}, {0, 1, 1, -251, 7}, {1, 0, 0, 317, 56},
    {0, 1, 0, 625, 84}, {0, 0, 1, 101, 42},  {0, 0, 0, -383, 630},
};
inline constexpr BubbleTerm kBubbleTerms3[] = {
    {3, 1, 0, -10, 1},  {3, 0, 1, -10, 1},   {2, 2, 0, 1, 1},    {2, 1, 1, 119, 1},
    {2, 0, 2, -15, 1},  {1, 3, 0, 16, 1},    {1, 2, 1, 145, 1},  {1, 1, 2, 129, 1},
    {0, 3, 1, 16, 1},   {0, 2, 2, 11, 1},    {0, 0, 4, -29, 4},  {2, 1, 0, -93, 8},
    {2, 0, 1, -61, 8},  {1, 2, 0, -301, 8},  {1, 1, 1, -693, 4}, {1, 0, 2, -141, 8},
    {0, 3, 0, -13, 4},  {0, 2, 1, -321, 8},  {0, 1, 2, -193, 8}, {0, 0, 3, 77, 8},
    {2, 0, 0, 181, 56}, {1, 1, 0, 363, 14},  {1, 0, 1, 307, 14}, {0, 2, 0, 389, 56},
    {0, 1, 1, 199, 7},  {1, 0, 0, -563, 168},{0, 1, 0, -33, 8},  {0, 0, 1, -263, 84},
    {0, 0, 0, 103, 210},
};
// clang-format on

template <std::size_t N>
inline PolyQ build_component(const BubbleTerm (&terms)[N]) {
    PolyQ p;
    for (const auto& t : terms) p.add_term({t.i, t.j, t.k}, Rational(t.num, t.den));
    return p;
}

}  // namespace detail

inline const ReferenceBubble& reference_bubble() {
    static const ReferenceBubble bubble{{detail::build_component(detail::kBubbleTerms1),
                                         detail::build_component(detail::kBubbleTerms2),
                                         detail::build_component(detail::kBubbleTerms3)}};
    return bubble;
}

/// The divergence the bubble is constructed to have: 4 x (x - y - z).
inline PolyQ bubble_divergence_target() {
    PolyQ p;
    p.add_term({2, 0, 0}, 4);
    p.add_term({1, 1, 0}, -4);
    p.add_term({1, 0, 1}, -4);
    return p;
}

inline Vec3 eval_bubble(const Vec3& p) { return reference_bubble().eval(p); }

/// Jacobian of the bubble, J(i,j) = d component_i / d x_j.
inline Mat3 grad_bubble(const Vec3& p) {
    static const std::array<std::array<PolyD, 3>, 3> grads = [] {
        std::array<std::array<PolyD, 3>, 3> g;
        const ReferenceBubble& b = reference_bubble();
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) g[i][j] = to_double(b.component[i].derivative(j));
        return g;
    }();
    Mat3 m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m(i, j) = grads[i][j].eval(p);
    return m;
}

/// Max absolute quadratic face moment of a (candidate) bubble over
/// 4 faces x 3 components x 6 quadratic test monomials. The transcribed
/// bubble must return a value at floating-point roundoff level.
inline double verify_face_moments(const ReferenceBubble& bubble) {
    // Faces of the reference tet as (origin, span_a, span_b) triples;
    // face k is opposite vertex k.
    struct FaceParam {
        Vec3 origin, ea, eb;
    };
    const std::array<FaceParam, 4> faces = {{
        {{1, 0, 0}, {-1, 1, 0}, {-1, 0, 1}},  // x+y+z = 1
        {{0, 0, 0}, {0, 1, 0}, {0, 0, 1}},    // x = 0
        {{0, 0, 0}, {1, 0, 0}, {0, 0, 1}},    // y = 0
        {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}},    // z = 0
    }};
    // Integrand is (P4 component) x (P2 monomial): degree 6.
    const QuadratureRule rule = tri_quadrature(6);
    double worst = 0.0;
    for (const auto& f : faces) {
        const double area_jac = norm(cross(f.ea, f.eb));
        for (int comp = 0; comp < 3; ++comp) {
            std::array<double, 6> moments{};
            for (std::size_t q = 0; q < rule.size(); ++q) {
                const double s = rule.points[q].x, t = rule.points[q].y;
                const Vec3 p = f.origin + s * f.ea + t * f.eb;
                const double v = bubble.component[comp].eval(p) * rule.weights[q] * area_jac;
                const std::array<double, 6> mono = {1.0, s, t, s * s, s * t, t * t};
                for (int m = 0; m < 6; ++m) moments[m] += v * mono[m];
            }
            for (int m = 0; m < 6; ++m) worst = std::max(worst, std::abs(moments[m]));
        }
    }
    return worst;
}

}  // namespace p3nc
