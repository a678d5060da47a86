#include "test_helpers.hpp"

#include "starprod/gelfand.hpp"

using namespace starprod;
using namespace starprod::testing;

namespace {

TEST(Jet, Examples) {
    const HermForm id = HermForm::identity(1);
    const Jet j = jet_of(mono({1}), id, vec({0}), 3);
    EXPECT_TRUE(ComplexNear(j.coeffs.coeff(MultiIndex({0})), 0.0));
    EXPECT_TRUE(ComplexNear(std::abs(j.coeffs.coeff(MultiIndex({1}))), 1.0));
    EXPECT_EQ(j.coeffs.size(), 1u);
    const Jet one = jet_of(Poly::one(2), HermForm::identity(2), vec({0.3, -1}), 4);
    EXPECT_EQ(one.coeffs, Poly::one(2));
}

TEST(Jet, DegreeZeroEntryIsEvaluation) {
    Rng rng(1);
    for (int s = 0; s < 30; ++s) {
        const std::size_t d = 1 + rng.below(3);
        const Poly x = random_poly(rng, d, 5);
        const CVector rho = random_rvector(rng, d);
        const Jet j = jet_of(x, random_hermform(rng, d), rho, x.max_degree());
        EXPECT_TRUE(ComplexNear(j.coeffs.coeff(MultiIndex(j.coeffs.dim())), evaluate(x, rho), 1e-9));
    }
}

// Central differences of the Gel'fand transform along real directions.
Complex fd_first(const Poly& x, const CVector& rho, std::size_t i, double h) {
    CVector a = rho, b = rho;
    a(static_cast<Eigen::Index>(i)) += h;
    b(static_cast<Eigen::Index>(i)) -= h;
    return (evaluate(x, a) - evaluate(x, b)) / (2.0 * h);
}

Complex fd_second(const Poly& x, const CVector& rho, std::size_t i, std::size_t j, double h) {
    CVector pp = rho, pm = rho, mp = rho, mm = rho;
    const auto ii = static_cast<Eigen::Index>(i), jj = static_cast<Eigen::Index>(j);
    pp(ii) += h, pp(jj) += h;
    pm(ii) += h, pm(jj) -= h;
    mp(ii) -= h, mp(jj) += h;
    mm(ii) -= h, mm(jj) -= h;
    return (evaluate(x, pp) - evaluate(x, pm) - evaluate(x, mp) + evaluate(x, mm)) / (4.0 * h * h);
}

TEST(Jet, FiniteDifferenceOracle) {
    Rng rng(2);
    for (int s = 0; s < 30; ++s) {
        const std::size_t d = 1 + rng.below(3);
        const HermForm a = random_hermform(rng, d);
        const Poly x = random_poly(rng, d, 5);
        const CVector rho = random_rvector(rng, d) * 0.5;
        const Jet j = jet_of(x, a, rho, 2);
        const CMatrix& bm = a.frame().coords;
        CVector grad(static_cast<Eigen::Index>(d));
        CMatrix hess(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
        for (std::size_t i = 0; i < d; ++i) {
            grad(static_cast<Eigen::Index>(i)) = fd_first(x, rho, i, 1e-5);
            for (std::size_t k = 0; k < d; ++k)
                hess(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = fd_second(x, rho, i, k, 1e-4);
        }
        // First jet entries are B grad; second ones are (B H B^T)_pq / 2.
        const CVector g1 = bm * grad;
        const CMatrix h2 = bm * hess * bm.transpose() / 2.0;
        const double scale = std::max({1.0, g1.cwiseAbs().maxCoeff(), h2.cwiseAbs().maxCoeff()});
        for (std::size_t p = 0; p < d; ++p) {
            const Complex got = j.coeffs.coeff(MultiIndex::unit(d, p));
            EXPECT_LE(std::abs(got - g1(static_cast<Eigen::Index>(p))), 1e-6 * scale);
            for (std::size_t q = p; q < d; ++q) {
                MultiIndex m = MultiIndex::unit(d, p);
                m.increment(q);
                EXPECT_LE(std::abs(j.coeffs.coeff(m) - h2(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q))), 1e-6 * scale);
            }
        }
    }
}

TEST(Jet, MixedDerivativesCommute) {
    Rng rng(3);
    for (int s = 0; s < 20; ++s) {
        const Poly x = random_poly(rng, 3, 5);
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t k = 0; k < 3; ++k) EXPECT_TRUE(PolyNear(partial(partial(x, i), k), partial(partial(x, k), i)));
    }
}

TEST(Reconstruct, Examples) {
    const HermForm a = HermForm::identity(2);
    const Poly x = mono({2, 1});
    EXPECT_TRUE(PolyNear(reconstruct(jet_of(x, a, vec({0, 0}), 3)), x));
    Jet j{vec({0, 0}), a, Poly::constant(2, 2.5), 0};
    EXPECT_TRUE(PolyNear(reconstruct(j), Poly::constant(2, 2.5)));
}

TEST(Reconstruct, RoundTrip) {
    Rng rng(4);
    for (int s = 0; s < 100; ++s) {
        const std::size_t d = 1 + rng.below(3);
        const HermForm a = random_hermform(rng, d);
        const Poly x = random_poly(rng, d, 5);
        const CVector zero = CVector::Zero(static_cast<Eigen::Index>(d));
        EXPECT_TRUE(PolyNear(reconstruct(jet_of(x, a, zero, x.max_degree())), x, 1e-9));
        const CVector rho = random_rvector(rng, d);
        EXPECT_TRUE(PolyNear(reconstruct(jet_of(x, a, rho, x.max_degree())), x, 1e-9));
    }
}

TEST(Reconstruct, DegenerateAlphaKeepsVisiblePart) {
    Rng rng(5);
    for (int s = 0; s < 30; ++s) {
        const std::size_t d = 2 + rng.below(2);
        const HermForm a = random_hermform(rng, d, 1 + rng.below(d - 1));
        const Poly x = random_poly(rng, d, 4);
        const CVector zero = CVector::Zero(static_cast<Eigen::Index>(d));
        const Jet j = jet_of(x, a, zero, x.max_degree());
        const Poly back = reconstruct(j);
        EXPECT_TRUE(PolyNear(jet_of(back, a, zero, x.max_degree()).coeffs, j.coeffs, 1e-9));
        // The recovered element is invisible along the kernel.
        EXPECT_NEAR(seminorm(back - x, a), 0.0, 1e-9 * std::max(1.0, seminorm(x, a)));
    }
}

TEST(PointwiseBracket, Examples) {
    const HermForm id = HermForm::identity(1);
    EXPECT_TRUE(ComplexNear(pointwise_bracket(mono({1}), mono({1}), id, vec({0})), 1.0));
    Rng rng(6);
    const Poly y = random_poly(rng, 2, 4);
    const CVector rho = random_rvector(rng, 2);
    EXPECT_TRUE(ComplexNear(pointwise_bracket(Poly::one(2), y, random_hermform(rng, 2), rho), evaluate(y, rho), 1e-9));
    const HermForm a = random_hermform(rng, 2, 1);
    const Poly x = random_poly(rng, 2, 4);
    EXPECT_TRUE(ComplexNear(pointwise_bracket(x, y, a, vec({0, 0})), extended_inner_product(x, y, a), 1e-9));
}

TEST(PointwiseBracket, ThreeWayAgreement) {
    Rng rng(7);
    for (int s = 0; s < 100; ++s) {
        const std::size_t d = 1 + rng.below(3);
        const HermForm a = random_hermform(rng, d, 1 + rng.below(d));
        const Poly x = random_poly(rng, d, 4), y = random_poly(rng, d, 4);
        const CVector rho = random_rvector(rng, d);
        const Complex jets = pointwise_bracket(x, y, a, rho);
        const Complex translated = extended_inner_product(translate(x, rho), translate(y, rho), a);
        const Complex starred = evaluate(star(involution(x), y, lambda_alpha(a)), rho);
        EXPECT_TRUE(ComplexNear(jets, translated, 1e-8));
        EXPECT_TRUE(ComplexNear(jets, starred, 1e-8));
    }
}

TEST(PointwiseBracket, FrameIndependent) {
    Rng rng(8);
    for (int s = 0; s < 30; ++s) {
        const std::size_t d = 1 + rng.below(3);
        const HermForm a = random_hermform(rng, d);
        const Poly x = random_poly(rng, d, 4), y = random_poly(rng, d, 4);
        const CVector rho = random_rvector(rng, d);
        Eigen::MatrixXd g(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
        for (Eigen::Index i = 0; i < g.size(); ++i) g(i) = rng.normal();
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
        const Eigen::MatrixXd o = qr.householderQ() * Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
        const CMatrix rotated = o.cast<Complex>() * a.frame().coords;
        const Complex other = orthonormal_pairing(substitute(translate(x, rho), rotated), substitute(translate(y, rho), rotated));
        EXPECT_TRUE(ComplexNear(pointwise_bracket(x, y, a, rho), other, 1e-9));
    }
}

TEST(DerivativeEstimates, Examples) {
    const HermForm id = HermForm::identity(1);
    const auto rows = derivative_estimate_rows(mono({3}), id, vec({1}));
    ASSERT_EQ(rows.size(), 6u);
    for (const auto& r : rows) EXPECT_LE(r.ratio(), 1.0) << r.label << " t=" << r.l_or_n;
    EXPECT_LE(rows[0].observed, rows[0].bound);
    EXPECT_THROW(derivative_estimate_rows(mono({3}), id, vec({2})), PreconditionError);
    EXPECT_THROW(derivative_estimate_rows(mono({0, 3}), HermForm(mat(2, {1, 0, 0, 0})), vec({0, 0.1})), PreconditionError);
}

TEST(DerivativeEstimates, SuitePasses) {
    VerifyConfig cfg;
    cfg.samples = 100;
    const Report r = verify_derivative_estimates(cfg);
    EXPECT_TRUE(r.passed()) << r.max_ratio();
}

} // namespace
