#pragma once

#include <array>
#include <map>
#include <vector>

#include "geometry.hpp"
#include "rational.hpp"

namespace p3nc {

/// Sparse trivariate polynomial, keyed by monomial exponent triples.
/// Coef is Rational for exact reference-cell data or double for
/// physical-coordinate polynomials.
template <typename Coef>
class Polynomial3 {
public:
    using Exponents = std::array<int, 3>;

    Polynomial3() = default;

    static Polynomial3 constant(Coef c) {
        Polynomial3 p;
        p.add_term({0, 0, 0}, c);
        return p;
    }

    static Polynomial3 monomial(int i, int j, int k, Coef c = Coef(1)) {
        Polynomial3 p;
        p.add_term({i, j, k}, c);
        return p;
    }

    void add_term(const Exponents& e, const Coef& c) {
        auto it = terms_.find(e);
        if (it == terms_.end()) {
            if (!(c == Coef(0))) terms_.emplace(e, c);
        } else {
            it->second += c;
            if (it->second == Coef(0)) terms_.erase(it);
        }
    }

    Coef coefficient(int i, int j, int k) const {
        auto it = terms_.find(Exponents{i, j, k});
        return it == terms_.end() ? Coef(0) : it->second;
    }

    bool is_zero() const { return terms_.empty(); }

    int total_degree() const {
        int d = 0;
        for (const auto& [e, c] : terms_) d = std::max(d, e[0] + e[1] + e[2]);
        return d;
    }

    const std::map<Exponents, Coef>& terms() const { return terms_; }

    Polynomial3 operator+(const Polynomial3& o) const {
        Polynomial3 r = *this;
        for (const auto& [e, c] : o.terms_) r.add_term(e, c);
        return r;
    }

    Polynomial3 operator-(const Polynomial3& o) const {
        Polynomial3 r = *this;
        for (const auto& [e, c] : o.terms_) r.add_term(e, -c);
        return r;
    }

    Polynomial3 operator*(const Polynomial3& o) const {
        Polynomial3 r;
        for (const auto& [e1, c1] : terms_)
            for (const auto& [e2, c2] : o.terms_)
                r.add_term({e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2]}, c1 * c2);
        return r;
    }

    Polynomial3 operator*(const Coef& s) const {
        Polynomial3 r;
        if (s == Coef(0)) return r;
        for (const auto& [e, c] : terms_) r.terms_.emplace(e, c * s);
        return r;
    }

    Polynomial3 derivative(int axis) const {
        Polynomial3 r;
        for (const auto& [e, c] : terms_) {
            if (e[axis] == 0) continue;
            Exponents d = e;
            --d[axis];
            r.add_term(d, c * Coef(e[axis]));
        }
        return r;
    }

    double eval(const Vec3& p) const {
        double sum = 0.0;
        for (const auto& [e, c] : terms_)
            sum += coef_as_double(c) * ipow(p.x, e[0]) * ipow(p.y, e[1]) * ipow(p.z, e[2]);
        return sum;
    }

private:
    static double coef_as_double(const Rational& c) { return to_double(c); }
    static double coef_as_double(double c) { return c; }

    static double ipow(double b, int n) {
        double r = 1.0;
        for (int k = 0; k < n; ++k) r *= b;
        return r;
    }

    std::map<Exponents, Coef> terms_;
};

using PolyQ = Polynomial3<Rational>;
using PolyD = Polynomial3<double>;

inline PolyD to_double(const PolyQ& q) {
    PolyD d;
    for (const auto& [e, c] : q.terms()) d.add_term(e, to_double(c));
    return d;
}

/// Exact integral over the reference tetrahedron.
inline Rational integrate_reference_tet(const PolyQ& p) {
    Rational sum = 0;
    for (const auto& [e, c] : p.terms()) sum += c * tet_monomial_integral(e[0], e[1], e[2]);
    return sum;
}

/// Substitute x -> A x + t, i.e. return q with q(x) = p(A x + t).
inline PolyD compose_affine(const PolyD& p, const Mat3& A, const Vec3& t) {
    // Images of the coordinate functions under the substitution.
    std::array<PolyD, 3> lin;
    for (int i = 0; i < 3; ++i) {
        lin[i] = PolyD::constant(t[i]);
        lin[i].add_term({1, 0, 0}, A(i, 0));
        lin[i].add_term({0, 1, 0}, A(i, 1));
        lin[i].add_term({0, 0, 1}, A(i, 2));
    }
    PolyD result;
    for (const auto& [e, c] : p.terms()) {
        PolyD term = PolyD::constant(c);
        for (int axis = 0; axis < 3; ++axis)
            for (int k = 0; k < e[axis]; ++k) term = term * lin[axis];
        result = result + term;
    }
    return result;
}

}  // namespace p3nc
