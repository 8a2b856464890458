#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace p3nc {

// Exact rational scalar used for reference-cell polynomial data. All
// construction-time identities (bubble divergence, basis coefficients,
// closed-form simplex integrals) are carried out in this type; floating
// point enters only at evaluation.
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& r) { return r.template convert_to<double>(); }

inline Rational rational_factorial(int n) {
    Rational r = 1;
    for (int k = 2; k <= n; ++k) r *= k;
    return r;
}

// int_{unit tet} x^i y^j z^k dV = i! j! k! / (i+j+k+3)!
inline Rational tet_monomial_integral(int i, int j, int k) {
    return rational_factorial(i) * rational_factorial(j) * rational_factorial(k)
         / rational_factorial(i + j + k + 3);
}

// int_{unit triangle} s^a t^b dA = a! b! / (a+b+2)!
inline Rational tri_monomial_integral(int a, int b) {
    return rational_factorial(a) * rational_factorial(b) / rational_factorial(a + b + 2);
}

}  // namespace p3nc
