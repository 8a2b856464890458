#include <catch2/catch_amalgamated.hpp>

#include "p3nc/polynomial.hpp"

using namespace p3nc;

TEST_CASE("rational factorial and simplex integrals") {
    CHECK(rational_factorial(0) == 1);
    CHECK(rational_factorial(5) == 120);
    // int_T 1 = 1/6, int_T x = 1/24
    CHECK(tet_monomial_integral(0, 0, 0) == Rational(1, 6));
    CHECK(tet_monomial_integral(1, 0, 0) == Rational(1, 24));
    CHECK(tet_monomial_integral(2, 2, 2) ==
          Rational(2, 1) * Rational(2, 1) * Rational(2, 1) / rational_factorial(9));
    // int_tri 1 = 1/2, int_tri s = 1/6, int_tri s t = 1/24
    CHECK(tri_monomial_integral(0, 0) == Rational(1, 2));
    CHECK(tri_monomial_integral(1, 0) == Rational(1, 6));
    CHECK(tri_monomial_integral(1, 1) == Rational(1, 24));
}

TEST_CASE("polynomial arithmetic and cancellation") {
    PolyQ p = PolyQ::monomial(2, 0, 0, Rational(3, 2));
    p.add_term({0, 1, 0}, Rational(1));
    PolyQ q = PolyQ::monomial(2, 0, 0, Rational(-3, 2));
    const PolyQ sum = p + q;
    CHECK(sum.coefficient(2, 0, 0) == 0);
    CHECK(sum.coefficient(0, 1, 0) == 1);
    CHECK(sum.total_degree() == 1);
    CHECK((p - p).is_zero());

    const PolyQ prod = PolyQ::monomial(1, 0, 0) * PolyQ::monomial(0, 1, 1, Rational(2));
    CHECK(prod.coefficient(1, 1, 1) == 2);
    CHECK(prod.total_degree() == 3);
}

TEST_CASE("derivative and evaluation agree with finite differences") {
    PolyQ p = PolyQ::monomial(3, 1, 0, Rational(2));
    p.add_term({0, 2, 1}, Rational(-5, 3));
    const PolyD pd = to_double(p);
    const PolyD dx = to_double(p.derivative(0));
    const Vec3 at{0.3, 0.7, 0.2};
    const double h = 1e-6;
    const double fd = (pd.eval({at.x + h, at.y, at.z}) - pd.eval({at.x - h, at.y, at.z})) / (2 * h);
    CHECK(dx.eval(at) == Catch::Approx(fd).epsilon(1e-8));
}

TEST_CASE("exact integral over reference tet") {
    // int (x^2 y) = 2!*1!/(6)! = 2/720
    PolyQ p = PolyQ::monomial(2, 1, 0);
    CHECK(integrate_reference_tet(p) == Rational(2, 720));
}

TEST_CASE("affine composition") {
    // p(x,y,z) = x^2 + y, substitute x -> 2x + 1, y -> z, z -> x
    PolyD p;
    p.add_term({2, 0, 0}, 1.0);
    p.add_term({0, 1, 0}, 1.0);
    Mat3 A;
    A(0, 0) = 2.0;
    A(1, 2) = 1.0;
    A(2, 0) = 1.0;
    const Vec3 t{1.0, 0.0, 0.0};
    const PolyD q = compose_affine(p, A, t);
    for (const Vec3 x : {Vec3{0.1, 0.4, -0.3}, Vec3{1.0, -2.0, 0.5}}) {
        const Vec3 mapped = A * x + t;
        CHECK(q.eval(x) == Catch::Approx(p.eval(mapped)).margin(1e-14));
    }
}
