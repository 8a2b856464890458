#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <random>

#include "oracles.hpp"
#include "p3nc/bubble.hpp"

using namespace p3nc;

TEST_CASE("constant terms match the published values") {
    const ReferenceBubble& b = reference_bubble();
    CHECK(b.component[0].coefficient(0, 0, 0) == Rational(73, 840));
    CHECK(b.component[1].coefficient(0, 0, 0) == Rational(-383, 630));
    CHECK(b.component[2].coefficient(0, 0, 0) == Rational(103, 210));
    const Vec3 v = eval_bubble({0, 0, 0});
    CHECK(v.x == Catch::Approx(73.0 / 840));
    CHECK(v.y == Catch::Approx(-383.0 / 630));
    CHECK(v.z == Catch::Approx(103.0 / 210));
}

TEST_CASE("divergence identity holds at the coefficient level") {
    const PolyQ residual = reference_bubble().divergence() - bubble_divergence_target();
    CHECK(residual.is_zero());
    CHECK(integrate_reference_tet(reference_bubble().divergence()) == 0);
}

TEST_CASE("divergence matches 4x(x-y-z) at sampled points") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> uni(0.0, 0.33);
    const PolyD div = to_double(reference_bubble().divergence());
    for (int s = 0; s < 30; ++s) {
        const Vec3 p{uni(rng), uni(rng), uni(rng)};
        CHECK(div.eval(p) ==
              Catch::Approx(4.0 * p.x * (p.x - p.y - p.z)).margin(1e-14));
    }
}

TEST_CASE("components have total degree exactly 4") {
    for (int c = 0; c < 3; ++c) CHECK(reference_bubble().component[c].total_degree() == 4);
}

TEST_CASE("all 72 face moments vanish") {
    SECTION("by quadrature") { CHECK(verify_face_moments(reference_bubble()) <= 1e-12); }
    SECTION("exactly, by rational integration") {
        for (const auto& face : oracles::reference_faces())
            for (int c = 0; c < 3; ++c)
                for (int a = 0; a <= 2; ++a)
                    for (int b = 0; a + b <= 2; ++b)
                        CHECK(oracles::exact_face_moment(reference_bubble().component[c], face, a,
                                                         b) == 0);
    }
}

TEST_CASE("perturbing one coefficient breaks the moment conditions") {
    ReferenceBubble corrupted = reference_bubble();
    corrupted.component[0].add_term({4, 0, 0}, Rational(1));
    CHECK(verify_face_moments(corrupted) > 1e-3);
}

TEST_CASE("the zero polynomial has zero moments") {
    ReferenceBubble zero;
    CHECK(verify_face_moments(zero) == 0.0);
}

TEST_CASE("gradient: trace equals the divergence") {
    const Mat3 g = grad_bubble({0.25, 0.25, 0.25});
    CHECK(g.trace() == Catch::Approx(-0.25).margin(1e-14));
}

TEST_CASE("gradient agrees with central differences") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> uni(0.05, 0.28);
    const double h = 1e-6;
    for (int s = 0; s < 20; ++s) {
        const Vec3 p{uni(rng), uni(rng), uni(rng)};
        const Mat3 g = grad_bubble(p);
        for (int j = 0; j < 3; ++j) {
            Vec3 lo = p, hi = p;
            lo[j] -= h;
            hi[j] += h;
            const Vec3 fd = (eval_bubble(hi) - eval_bubble(lo)) * (1.0 / (2.0 * h));
            for (int i = 0; i < 3; ++i)
                CHECK(g(i, j) ==
                      Catch::Approx(fd[i]).epsilon(1e-7).margin(1e-7));
        }
    }
}

TEST_CASE("gradient components are cubic") {
    for (int c = 0; c < 3; ++c)
        for (int axis = 0; axis < 3; ++axis)
            CHECK(reference_bubble().component[c].derivative(axis).total_degree() <= 3);
}

TEST_CASE("constraint system has a 14-dimensional solution manifold") {
    // Unknowns: 3 x 35 quartic monomial coefficients. Constraints: 72
    // vanishing face moments, 10 vanishing cubic divergence coefficients,
    // 10 prescribed divergence coefficients of degree <= 2. One equation
    // is dependent (the mean of the divergence is forced by the face
    // moments), so the rank is 91 and the solution manifold has
    // dimension 105 - 91 = 14.
    std::vector<std::array<int, 3>> quartic_monomials;
    for (int i = 0; i <= 4; ++i)
        for (int j = 0; i + j <= 4; ++j)
            for (int k = 0; i + j + k <= 4; ++k) quartic_monomials.push_back({i, j, k});
    REQUIRE(quartic_monomials.size() == 35);
    const int n_unknowns = 105;

    std::vector<std::vector<double>> rows;
    std::vector<double> rhs;
    const auto faces = oracles::reference_faces();
    for (const auto& face : faces)
        for (int comp = 0; comp < 3; ++comp)
            for (int a = 0; a <= 2; ++a)
                for (int b = 0; a + b <= 2; ++b) {
                    std::vector<double> row(n_unknowns, 0.0);
                    for (int m = 0; m < 35; ++m) {
                        const auto& e = quartic_monomials[m];
                        const PolyQ mono = PolyQ::monomial(e[0], e[1], e[2]);
                        row[comp * 35 + m] =
                            to_double(oracles::exact_face_moment(mono, face, a, b));
                    }
                    rows.push_back(row);
                    rhs.push_back(0.0);
                }
    REQUIRE(rows.size() == 72);

    // Divergence coefficients: cubic part must vanish, lower part must
    // equal the target.
    const PolyQ target = bubble_divergence_target();
    std::vector<std::array<int, 3>> cubic_monomials;
    for (int i = 0; i <= 3; ++i)
        for (int j = 0; i + j <= 3; ++j)
            for (int k = 0; i + j + k <= 3; ++k) cubic_monomials.push_back({i, j, k});
    for (const auto& e : cubic_monomials) {
        std::vector<double> row(n_unknowns, 0.0);
        for (int comp = 0; comp < 3; ++comp)
            for (int m = 0; m < 35; ++m) {
                auto d = quartic_monomials[m];
                if (d[comp] == 0) continue;
                const int factor = d[comp];
                --d[comp];
                if (d == e) row[comp * 35 + m] += factor;
            }
        rows.push_back(row);
        rhs.push_back(to_double(target.coefficient(e[0], e[1], e[2])));
    }
    REQUIRE(rows.size() == 92);

    Eigen::MatrixXd M(rows.size(), n_unknowns);
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (int c = 0; c < n_unknowns; ++c) M(static_cast<int>(r), c) = rows[r][c];
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
    const auto& sigma = svd.singularValues();
    int rank = 0;
    for (int i = 0; i < sigma.size(); ++i)
        if (sigma(i) > 1e-10 * sigma(0)) ++rank;
    CHECK(rank == 91);
    CHECK(n_unknowns - rank == 14);

    // The published bubble satisfies the affine system.
    Eigen::VectorXd coefs(n_unknowns);
    for (int comp = 0; comp < 3; ++comp)
        for (int m = 0; m < 35; ++m) {
            const auto& e = quartic_monomials[m];
            coefs(comp * 35 + m) =
                to_double(reference_bubble().component[comp].coefficient(e[0], e[1], e[2]));
        }
    Eigen::VectorXd b(rows.size());
    for (std::size_t r = 0; r < rhs.size(); ++r) b(static_cast<int>(r)) = rhs[r];
    CHECK((M * coefs - b).cwiseAbs().maxCoeff() <= 1e-12);
}
