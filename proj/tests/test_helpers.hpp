#pragma once

#include <gtest/gtest.h>

#include "starprod/random.hpp"

namespace starprod::testing {

inline Poly mono(std::initializer_list<unsigned> e, Complex c = 1.0) { return Poly::monomial(MultiIndex(e), c); }

inline CVector vec(std::initializer_list<Complex> v) {
    CVector r(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (Complex c : v) r(i++) = c;
    return r;
}

inline CMatrix mat(std::size_t d, std::initializer_list<Complex> rowmajor) {
    CMatrix m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    auto it = rowmajor.begin();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = *it++;
    return m;
}

inline ::testing::AssertionResult PolyNear(const Poly& a, const Poly& b, double rel = 1e-10) {
    if (a.dim() != b.dim()) return ::testing::AssertionFailure() << "dimension " << a.dim() << " vs " << b.dim();
    const double r = relative_difference(a, b);
    if (r <= rel) return ::testing::AssertionSuccess();
    return ::testing::AssertionFailure() << "relative difference " << r << "\n  lhs: " << a << "\n  rhs: " << b;
}

inline ::testing::AssertionResult ComplexNear(Complex a, Complex b, double rel = 1e-10) {
    const double scale = std::max({1.0, std::abs(a), std::abs(b)});
    if (std::abs(a - b) <= rel * scale) return ::testing::AssertionSuccess();
    return ::testing::AssertionFailure() << a << " vs " << b;
}

} // namespace starprod::testing
