#pragma once

#include <array>

#include "polynomial.hpp"

namespace p3nc {

/// Modal P2 basis on the reference tetrahedron: the 10 monomials
/// {1, x, y, z, x^2, xy, xz, y^2, yz, z^2}. Pressure on a physical
/// element is the composition of these with the inverse element map.
class ModalP2 {
public:
    static constexpr int kDim = 10;
    static constexpr std::array<std::array<int, 3>, kDim> kExponents = {
        {{0, 0, 0},
         {1, 0, 0},
         {0, 1, 0},
         {0, 0, 1},
         {2, 0, 0},
         {1, 1, 0},
         {1, 0, 1},
         {0, 2, 0},
         {0, 1, 1},
         {0, 0, 2}}};

    static const ModalP2& instance() {
        static const ModalP2 basis;
        return basis;
    }

    std::array<double, kDim> eval(const Vec3& p) const {
        const double x = p.x, y = p.y, z = p.z;
        return {1.0, x, y, z, x * x, x * y, x * z, y * y, y * z, z * z};
    }

    const std::array<PolyQ, kDim>& polynomials() const { return poly_; }

    /// Exact reference mass matrix M[a][b] = int m_a m_b over the unit tet.
    const std::array<std::array<Rational, kDim>, kDim>& reference_mass() const { return mass_; }

    /// Its exact inverse (computed by rational Gaussian elimination).
    const std::array<std::array<double, kDim>, kDim>& reference_mass_inverse() const {
        return mass_inv_;
    }

    /// Exact integrals int m_a over the unit tet.
    const std::array<Rational, kDim>& reference_integrals() const { return integrals_; }

private:
    ModalP2() {
        for (int a = 0; a < kDim; ++a) {
            const auto& e = kExponents[a];
            poly_[a] = PolyQ::monomial(e[0], e[1], e[2]);
            integrals_[a] = tet_monomial_integral(e[0], e[1], e[2]);
        }
        for (int a = 0; a < kDim; ++a)
            for (int b = 0; b < kDim; ++b) {
                const auto& ea = kExponents[a];
                const auto& eb = kExponents[b];
                mass_[a][b] = tet_monomial_integral(ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]);
            }
        // Rational Gauss-Jordan for the inverse.
        std::array<std::array<Rational, 2 * kDim>, kDim> aug;
        for (int i = 0; i < kDim; ++i) {
            for (int j = 0; j < kDim; ++j) aug[i][j] = mass_[i][j];
            for (int j = 0; j < kDim; ++j) aug[i][kDim + j] = Rational(i == j ? 1 : 0);
        }
        for (int col = 0; col < kDim; ++col) {
            int piv = col;
            while (piv < kDim && aug[piv][col] == 0) ++piv;
            std::swap(aug[piv], aug[col]);
            const Rational d = aug[col][col];
            for (int j = 0; j < 2 * kDim; ++j) aug[col][j] /= d;
            for (int i = 0; i < kDim; ++i) {
                if (i == col || aug[i][col] == 0) continue;
                const Rational s = aug[i][col];
                for (int j = 0; j < 2 * kDim; ++j) aug[i][j] -= s * aug[col][j];
            }
        }
        for (int i = 0; i < kDim; ++i)
            for (int j = 0; j < kDim; ++j) mass_inv_[i][j] = to_double(aug[i][kDim + j]);
    }

    std::array<PolyQ, kDim> poly_;
    std::array<std::array<Rational, kDim>, kDim> mass_;
    std::array<std::array<double, kDim>, kDim> mass_inv_;
    std::array<Rational, kDim> integrals_;
};

}  // namespace p3nc
