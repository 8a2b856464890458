#pragma once

#include <cstdio>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "bubble.hpp"
#include "element.hpp"
#include "lagrange_p3.hpp"
#include "quadrature.hpp"

namespace p3nc {

struct VerificationCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Construction-time self-checks: quadrature against closed-form
/// monomial integrals, the bubble constraints (exact where possible),
/// the frozen vertex-ordering fixture, and the Lagrange basis.
/// The bubble can be substituted to exercise the failure paths.
inline std::vector<VerificationCheck> run_verification(
    const ReferenceBubble& bubble = reference_bubble()) {
    std::vector<VerificationCheck> checks;
    char buf[128];

    {
        double worst = 0.0;
        for (int d = 1; d <= 14; ++d)
            worst = std::max(worst, quadrature_monomial_error(tet_quadrature(d), false));
        std::snprintf(buf, sizeof(buf), "max deviation %.3e (tol 1e-14)", worst);
        checks.push_back({"tet quadrature vs closed-form monomial integrals, degrees 1-14",
                          worst <= 1e-14, buf});
    }
    {
        double worst = 0.0;
        for (int d = 1; d <= 8; ++d)
            worst = std::max(worst, quadrature_monomial_error(tri_quadrature(d), true));
        std::snprintf(buf, sizeof(buf), "max deviation %.3e (tol 1e-14)", worst);
        checks.push_back({"triangle quadrature vs closed-form monomial integrals, degrees 1-8",
                          worst <= 1e-14, buf});
    }
    {
        const double worst = verify_face_moments(bubble);
        std::snprintf(buf, sizeof(buf), "max |moment| %.3e (tol 1e-12)", worst);
        checks.push_back({"72 quadratic face moments of the bubble vanish", worst <= 1e-12, buf});
    }
    {
        const PolyQ residual = bubble.divergence() - bubble_divergence_target();
        checks.push_back({"bubble divergence equals 4x(x-y-z) at the coefficient level",
                          residual.is_zero(),
                          residual.is_zero() ? "exact" : "nonzero residual polynomial"});
    }
    {
        const Rational integral = integrate_reference_tet(bubble.divergence());
        checks.push_back({"integral of the bubble divergence over the reference tet is zero",
                          integral == 0, integral == 0 ? "exact" : "nonzero"});
    }
    {
        bool deg_ok = true;
        for (int c = 0; c < 3; ++c) deg_ok = deg_ok && bubble.component[c].total_degree() == 4;
        checks.push_back({"bubble components have total degree 4", deg_ok, ""});
    }
    {
        // Frozen vertex-ordering fixture: the nine divergences on the
        // unit-cube tetrahedron match their tabulated quadratics.
        std::mt19937 rng(1234);
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        const auto divs = bubble_divergences(cube_fixture_tet());
        double worst = 0.0;
        for (int i = 0; i < 9; ++i) {
            const PolyD expected = cube_fixture_divergence(i);
            for (int s = 0; s < 20; ++s) {
                const Vec3 p{uni(rng), uni(rng), uni(rng)};
                worst = std::max(worst, std::abs(divs[i].eval(p) - expected.eval(p)));
            }
        }
        std::snprintf(buf, sizeof(buf), "max deviation %.3e (tol 1e-11)", worst);
        checks.push_back({"vertex-ordering regression: nine divergence polynomials reproduced",
                          worst <= 1e-11, buf});
    }
    {
        const auto& lag = LagrangeP3::instance();
        double worst = 0.0;
        for (int i = 0; i < LagrangeP3::kNodes; ++i) {
            const auto vals = lag.eval(lag.nodes()[i]);
            for (int j = 0; j < LagrangeP3::kNodes; ++j)
                worst = std::max(worst, std::abs(vals[j] - (i == j ? 1.0 : 0.0)));
        }
        std::snprintf(buf, sizeof(buf), "max deviation %.3e (tol 1e-12)", worst);
        checks.push_back({"cubic Lagrange basis is nodal", worst <= 1e-12, buf});
    }
    return checks;
}

inline bool report_verification(const std::vector<VerificationCheck>& checks, std::ostream& out) {
    bool all = true;
    for (const auto& c : checks) {
        out << (c.passed ? "PASS" : "FAIL") << "  " << c.name;
        if (!c.detail.empty()) out << "  [" << c.detail << "]";
        out << "\n";
        all = all && c.passed;
    }
    return all;
}

}  // namespace p3nc
