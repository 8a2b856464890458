#pragma once

#include <array>

#include "polynomial.hpp"

namespace p3nc {

/// Cubic Lagrange basis on the reference tetrahedron with vertices
/// v0=(0,0,0), v1=(1,0,0), v2=(0,1,0), v3=(0,0,1).
///
/// Local node layout (20 nodes):
///   0..3   vertices
///   4..15  two nodes per edge, edges in the order
///          (0,1),(0,2),(0,3),(1,2),(1,3),(2,3); per edge first the node
///          at 1/3 from the lower-numbered local vertex, then 2/3
///   16..19 face barycenters, face k opposite vertex k
class LagrangeP3 {
public:
    static constexpr int kNodes = 20;
    static constexpr std::array<std::array<int, 2>, 6> kEdges = {
        {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
    // Face k lists the three local vertices opposite vertex k, ascending.
    static constexpr std::array<std::array<int, 3>, 4> kFaces = {
        {{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}}};

    static const LagrangeP3& instance() {
        static const LagrangeP3 basis;
        return basis;
    }

    const std::array<PolyQ, kNodes>& polynomials() const { return poly_; }
    const std::array<Vec3, kNodes>& nodes() const { return nodes_; }

    /// Barycentric weights of each node w.r.t. the 4 local vertices,
    /// multiples of 1/3. Used to place nodes on physical elements.
    const std::array<std::array<Rational, 4>, kNodes>& node_barycentrics() const {
        return bary_;
    }

    std::array<double, kNodes> eval(const Vec3& p) const {
        std::array<double, kNodes> v;
        for (int i = 0; i < kNodes; ++i) v[i] = poly_d_[i].eval(p);
        return v;
    }

    std::array<Vec3, kNodes> eval_grad(const Vec3& p) const {
        std::array<Vec3, kNodes> g;
        for (int i = 0; i < kNodes; ++i)
            g[i] = {grad_d_[i][0].eval(p), grad_d_[i][1].eval(p), grad_d_[i][2].eval(p)};
        return g;
    }

private:
    LagrangeP3() {
        // Barycentric coordinates as polynomials in (x,y,z).
        std::array<PolyQ, 4> lam;
        lam[0] = PolyQ::constant(1);
        lam[0].add_term({1, 0, 0}, -1);
        lam[0].add_term({0, 1, 0}, -1);
        lam[0].add_term({0, 0, 1}, -1);
        lam[1] = PolyQ::monomial(1, 0, 0);
        lam[2] = PolyQ::monomial(0, 1, 0);
        lam[3] = PolyQ::monomial(0, 0, 1);

        auto scaled = [](const PolyQ& p, const Rational& s) { return p * s; };

        int n = 0;
        // Vertex functions: l = lam (3 lam - 1)(3 lam - 2) / 2.
        for (int i = 0; i < 4; ++i, ++n) {
            PolyQ a = scaled(lam[i], 3) - PolyQ::constant(1);
            PolyQ b = scaled(lam[i], 3) - PolyQ::constant(2);
            poly_[n] = scaled(lam[i] * a * b, Rational(1, 2));
            bary_[n] = {Rational(i == 0), Rational(i == 1), Rational(i == 2), Rational(i == 3)};
        }
        // Edge functions: 9/2 lam_a lam_b (3 lam_near - 1), near = the
        // endpoint the node sits closer to.
        for (const auto& e : kEdges) {
            for (int which = 0; which < 2; ++which, ++n) {
                const int near = which == 0 ? e[0] : e[1];
                PolyQ a = scaled(lam[near], 3) - PolyQ::constant(1);
                poly_[n] = scaled(lam[e[0]] * lam[e[1]] * a, Rational(9, 2));
                for (int k = 0; k < 4; ++k) bary_[n][k] = 0;
                bary_[n][near] = Rational(2, 3);
                bary_[n][which == 0 ? e[1] : e[0]] = Rational(1, 3);
            }
        }
        // Face functions: 27 lam_a lam_b lam_c.
        for (const auto& f : kFaces) {
            poly_[n] = scaled(lam[f[0]] * lam[f[1]] * lam[f[2]], 27);
            for (int k = 0; k < 4; ++k) bary_[n][k] = 0;
            for (int k = 0; k < 3; ++k) bary_[n][f[k]] = Rational(1, 3);
            ++n;
        }

        const std::array<Vec3, 4> verts = {
            Vec3{0, 0, 0}, Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}};
        for (int i = 0; i < kNodes; ++i) {
            Vec3 pos{0, 0, 0};
            for (int k = 0; k < 4; ++k) pos += to_double(bary_[i][k]) * verts[k];
            nodes_[i] = pos;
            poly_d_[i] = to_double(poly_[i]);
            for (int axis = 0; axis < 3; ++axis)
                grad_d_[i][axis] = to_double(poly_[i].derivative(axis));
        }
    }

    std::array<PolyQ, kNodes> poly_;
    std::array<PolyD, kNodes> poly_d_;
    std::array<std::array<PolyD, 3>, kNodes> grad_d_;
    std::array<Vec3, kNodes> nodes_;
    std::array<std::array<Rational, 4>, kNodes> bary_;
};

}  // namespace p3nc
