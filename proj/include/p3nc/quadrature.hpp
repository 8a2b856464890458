#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "geometry.hpp"
#include "rational.hpp"

namespace p3nc {

/// Quadrature rule on a reference cell (unit tetrahedron or unit triangle).
/// Triangle rules use the (x, y) slots of the points with z = 0.
struct QuadratureRule {
    std::vector<Vec3> points;
    std::vector<double> weights;
    int degree = 0;

    std::size_t size() const { return points.size(); }

    double weight_sum() const {
        double s = 0.0;
        for (double w : weights) s += w;
        return s;
    }
};

namespace detail {

/// Gauss-Legendre nodes/weights on [0,1], exact for polynomials of
/// degree 2n-1. Newton iteration on the Legendre recurrence.
inline void gauss_legendre_unit(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
        // Chebyshev initial guess on [-1,1].
        double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double p0 = 0.0, p1 = 0.0;
        for (int it = 0; it < 100; ++it) {
            p0 = 1.0;
            p1 = 0.0;
            for (int k = 0; k < n; ++k) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k + 1.0) * t * p1 - k * p2) / (k + 1.0);
            }
            const double dp = n * (t * p0 - p1) / (t * t - 1.0);
            const double dt = p0 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-16) break;
        }
        p0 = 1.0;
        p1 = 0.0;
        for (int k = 0; k < n; ++k) {
            const double p2 = p1;
            p1 = p0;
            p0 = ((2.0 * k + 1.0) * t * p1 - k * p2) / (k + 1.0);
        }
        const double dp = n * (t * p0 - p1) / (t * t - 1.0);
        x[i] = 0.5 * (1.0 + t);
        w[i] = 1.0 / ((1.0 - t * t) * dp * dp);
    }
}

constexpr int kMaxQuadratureDegree = 30;

}  // namespace detail

/// Rule on the unit tetrahedron exact for total degree <= `degree`.
/// Built as a conical product of Gauss-Legendre rules on the collapsed
/// coordinates; all weights positive. Degree <= 1 uses the one-point
/// centroid rule.
inline QuadratureRule tet_quadrature(int degree) {
    if (degree < 0 || degree > detail::kMaxQuadratureDegree)
        throw std::invalid_argument("tet_quadrature: unsupported degree " + std::to_string(degree));
    QuadratureRule rule;
    rule.degree = degree;
    if (degree <= 1) {
        rule.points = {{0.25, 0.25, 0.25}};
        rule.weights = {1.0 / 6.0};
        return rule;
    }
    // x = a, y = b(1-a), z = c(1-a)(1-b); Jacobian (1-a)^2 (1-b).
    const int na = (degree + 3) / 2 + ((degree + 3) % 2 ? 1 : 0);
    const int nb = (degree + 2) / 2 + ((degree + 2) % 2 ? 1 : 0);
    const int nc = (degree + 1) / 2 + ((degree + 1) % 2 ? 1 : 0);
    std::vector<double> xa, wa, xb, wb, xc, wc;
    detail::gauss_legendre_unit(na, xa, wa);
    detail::gauss_legendre_unit(nb, xb, wb);
    detail::gauss_legendre_unit(nc, xc, wc);
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < nb; ++j)
            for (int k = 0; k < nc; ++k) {
                const double a = xa[i], b = xb[j], c = xc[k];
                rule.points.push_back({a, b * (1.0 - a), c * (1.0 - a) * (1.0 - b)});
                rule.weights.push_back(wa[i] * wb[j] * wc[k] * (1.0 - a) * (1.0 - a) * (1.0 - b));
            }
    return rule;
}

/// Rule on the unit triangle {s,t >= 0, s+t <= 1} exact for total degree
/// <= `degree`; points carried in (x, y) with z = 0.
inline QuadratureRule tri_quadrature(int degree) {
    if (degree < 0 || degree > detail::kMaxQuadratureDegree)
        throw std::invalid_argument("tri_quadrature: unsupported degree " + std::to_string(degree));
    QuadratureRule rule;
    rule.degree = degree;
    if (degree <= 1) {
        rule.points = {{1.0 / 3.0, 1.0 / 3.0, 0.0}};
        rule.weights = {0.5};
        return rule;
    }
    const int na = (degree + 2) / 2 + ((degree + 2) % 2 ? 1 : 0);
    const int nb = (degree + 1) / 2 + ((degree + 1) % 2 ? 1 : 0);
    std::vector<double> xa, wa, xb, wb;
    detail::gauss_legendre_unit(na, xa, wa);
    detail::gauss_legendre_unit(nb, xb, wb);
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < nb; ++j) {
            const double a = xa[i], b = xb[j];
            rule.points.push_back({a, b * (1.0 - a), 0.0});
            rule.weights.push_back(wa[i] * wb[j] * (1.0 - a));
        }
    return rule;
}

/// Max absolute error of the rule over all reference-cell monomial
/// integrals up to its exactness degree, against the closed forms.
inline double quadrature_monomial_error(const QuadratureRule& rule, bool triangle) {
    double worst = 0.0;
    for (int d = 0; d <= rule.degree; ++d) {
        for (int i = 0; i <= d; ++i)
            for (int j = 0; j + i <= d; ++j) {
                const int k = d - i - j;
                if (triangle && k > 0) continue;
                double q = 0.0;
                for (std::size_t m = 0; m < rule.size(); ++m) {
                    const Vec3& p = rule.points[m];
                    double v = 1.0;
                    for (int c = 0; c < i; ++c) v *= p.x;
                    for (int c = 0; c < j; ++c) v *= p.y;
                    for (int c = 0; c < k; ++c) v *= p.z;
                    q += rule.weights[m] * v;
                }
                const double exact = triangle ? to_double(tri_monomial_integral(i, j))
                                              : to_double(tet_monomial_integral(i, j, k));
                worst = std::max(worst, std::abs(q - exact));
            }
    }
    return worst;
}

}  // namespace p3nc
