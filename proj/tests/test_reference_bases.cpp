#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "p3nc/lagrange_p3.hpp"
#include "p3nc/pressure_basis.hpp"

using namespace p3nc;

TEST_CASE("cubic Lagrange basis is nodal") {
    const auto& lag = LagrangeP3::instance();
    for (int i = 0; i < LagrangeP3::kNodes; ++i) {
        const auto vals = lag.eval(lag.nodes()[i]);
        for (int j = 0; j < LagrangeP3::kNodes; ++j)
            CHECK(vals[j] == Catch::Approx(i == j ? 1.0 : 0.0).margin(1e-13));
    }
}

TEST_CASE("partition of unity and gradient sum") {
    const auto& lag = LagrangeP3::instance();
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> uni(0.0, 0.33);
    for (int s = 0; s < 25; ++s) {
        const Vec3 p{uni(rng), uni(rng), uni(rng)};
        const auto vals = lag.eval(p);
        double sum = 0.0;
        for (double v : vals) sum += v;
        CHECK(sum == Catch::Approx(1.0).margin(1e-13));
        const auto grads = lag.eval_grad(p);
        Vec3 gsum{0, 0, 0};
        for (const Vec3& g : grads) gsum += g;
        CHECK(norm(gsum) <= 1e-12);
    }
}

TEST_CASE("Lagrange gradients agree with central differences") {
    const auto& lag = LagrangeP3::instance();
    const Vec3 p{0.21, 0.13, 0.32};
    const double h = 1e-6;
    const auto grads = lag.eval_grad(p);
    for (int axis = 0; axis < 3; ++axis) {
        Vec3 lo = p, hi = p;
        lo[axis] -= h;
        hi[axis] += h;
        const auto vlo = lag.eval(lo);
        const auto vhi = lag.eval(hi);
        for (int n = 0; n < LagrangeP3::kNodes; ++n)
            CHECK(grads[n][axis] ==
                  Catch::Approx((vhi[n] - vlo[n]) / (2 * h)).epsilon(1e-7).margin(1e-7));
    }
}

TEST_CASE("node barycentrics are consistent with node positions") {
    const auto& lag = LagrangeP3::instance();
    const std::array<Vec3, 4> verts = {Vec3{0, 0, 0}, Vec3{1, 0, 0}, Vec3{0, 1, 0},
                                       Vec3{0, 0, 1}};
    for (int n = 0; n < LagrangeP3::kNodes; ++n) {
        Vec3 pos{0, 0, 0};
        Rational wsum = 0;
        for (int k = 0; k < 4; ++k) {
            pos += to_double(lag.node_barycentrics()[n][k]) * verts[k];
            wsum += lag.node_barycentrics()[n][k];
        }
        CHECK(wsum == 1);
        CHECK(norm(pos - lag.nodes()[n]) <= 1e-15);
    }
}

TEST_CASE("modal P2 basis spans 10 dimensions with SPD mass") {
    const auto& modal = ModalP2::instance();
    // mass * inverse == identity
    const auto& Mi = modal.reference_mass_inverse();
    for (int i = 0; i < ModalP2::kDim; ++i)
        for (int j = 0; j < ModalP2::kDim; ++j) {
            double s = 0.0;
            for (int k = 0; k < ModalP2::kDim; ++k)
                s += to_double(modal.reference_mass()[i][k]) * Mi[k][j];
            CHECK(s == Catch::Approx(i == j ? 1.0 : 0.0).margin(1e-12));
        }
    // eval matches the exponent table
    const Vec3 p{0.2, 0.3, 0.4};
    const auto vals = modal.eval(p);
    for (int a = 0; a < ModalP2::kDim; ++a) {
        const auto& e = ModalP2::kExponents[a];
        double v = 1.0;
        for (int c = 0; c < e[0]; ++c) v *= p.x;
        for (int c = 0; c < e[1]; ++c) v *= p.y;
        for (int c = 0; c < e[2]; ++c) v *= p.z;
        CHECK(vals[a] == Catch::Approx(v).margin(1e-15));
    }
    CHECK(modal.reference_integrals()[0] == Rational(1, 6));
}
