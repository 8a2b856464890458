#pragma once

#include <array>
#include <cmath>

#include "geometry.hpp"

namespace p3nc {

/// Manufactured Stokes solution on the unit cube:
///   g = 2^9 x^2(1-x)^2 y^2(1-y)^2 z^2(1-z)^2,
///   u = (-dg/dz, dg/dz, dg/dx - dg/dy),   p = 100 sin(2 pi x).
/// u is a curl, so div u = 0 identically, and u vanishes on the boundary.
/// The forcing is f = -laplace(u) + grad(p), evaluated analytically.
struct ExactSolution {
    static std::array<double, 4> factor_derivs(double t) {
        // q = t^2 (1-t)^2 and its first three derivatives.
        return {t * t * (1 - t) * (1 - t),
                2 * t - 6 * t * t + 4 * t * t * t,
                2 - 12 * t + 12 * t * t,
                -12 + 24 * t};
    }

    // d^{a+b+c} g / dx^a dy^b dz^c
    static double g_deriv(const Vec3& p, int a, int b, int c) {
        const auto qx = factor_derivs(p.x);
        const auto qy = factor_derivs(p.y);
        const auto qz = factor_derivs(p.z);
        return 512.0 * qx[a] * qy[b] * qz[c];
    }

    Vec3 velocity(const Vec3& p) const {
        const double gz = g_deriv(p, 0, 0, 1);
        return {-gz, gz, g_deriv(p, 1, 0, 0) - g_deriv(p, 0, 1, 0)};
    }

    /// (i, j) entry is d u_i / d x_j.
    Mat3 velocity_gradient(const Vec3& p) const {
        const double gxz = g_deriv(p, 1, 0, 1);
        const double gyz = g_deriv(p, 0, 1, 1);
        const double gzz = g_deriv(p, 0, 0, 2);
        const double gxx = g_deriv(p, 2, 0, 0);
        const double gxy = g_deriv(p, 1, 1, 0);
        const double gyy = g_deriv(p, 0, 2, 0);
        Mat3 m;
        m(0, 0) = -gxz, m(0, 1) = -gyz, m(0, 2) = -gzz;
        m(1, 0) = gxz, m(1, 1) = gyz, m(1, 2) = gzz;
        m(2, 0) = gxx - gxy, m(2, 1) = gxy - gyy, m(2, 2) = gxz - gyz;
        return m;
    }

    double pressure(const Vec3& p) const { return 100.0 * std::sin(2.0 * M_PI * p.x); }

    Vec3 pressure_gradient(const Vec3& p) const {
        return {200.0 * M_PI * std::cos(2.0 * M_PI * p.x), 0.0, 0.0};
    }

    Vec3 forcing(const Vec3& p) const {
        // laplace(u) = (-(Dg)_z, (Dg)_z, (Dg)_x - (Dg)_y) with Dg = laplace(g).
        const double Dz = g_deriv(p, 2, 0, 1) + g_deriv(p, 0, 2, 1) + g_deriv(p, 0, 0, 3);
        const double Dx = g_deriv(p, 3, 0, 0) + g_deriv(p, 1, 2, 0) + g_deriv(p, 1, 0, 2);
        const double Dy = g_deriv(p, 2, 1, 0) + g_deriv(p, 0, 3, 0) + g_deriv(p, 0, 1, 2);
        const Vec3 gp = pressure_gradient(p);
        return {Dz + gp.x, -Dz + gp.y, -Dx + Dy + gp.z};
    }
};

}  // namespace p3nc
