#include "test_helpers.hpp"

#include "starprod/verify.hpp"

using namespace starprod;
using namespace starprod::testing;

namespace {

const Complex I(0.0, 1.0);

BilForm scalar_form(Complex c) { return BilForm(mat(1, {c})); }

TEST(PLambda, Examples) {
    const Complex c(0.7, -1.2);
    const BilForm l = scalar_form(c);
    EXPECT_TRUE(PolyNear(p_lambda(pair(mono({1}), mono({1})), l), pair(mono({0}), mono({0})) * c));
    EXPECT_TRUE(p_lambda(pair(mono({0}), mono({3})), l).is_zero());
    EXPECT_TRUE(PolyNear(p_lambda(pair(mono({2}), mono({1})), l), pair(mono({1}), mono({0})) * (2.0 * c)));
}

TEST(PLambda, PairListAgreesWithPairPoly) {
    Rng rng(1);
    for (int s = 0; s < 20; ++s) {
        const BilForm l = random_bilform(rng, 2);
        std::vector<PairTensor> z{{random_poly(rng, 2, 3), random_poly(rng, 2, 3)}, {random_poly(rng, 2, 3), random_poly(rng, 2, 3)}};
        EXPECT_TRUE(PolyNear(to_pair_poly(p_lambda(z, l), 2), p_lambda(to_pair_poly(z, 2), l)));
    }
}

TEST(PLambda, ContractionsCommute) {
    Rng rng(2);
    for (int s = 0; s < 30; ++s) {
        const std::size_t d = 1 + rng.below(3);
        const BilForm l = random_bilform(rng, d), lp = random_bilform(rng, d);
        const Poly z = pair(random_poly(rng, d, 4), random_poly(rng, d, 4));
        EXPECT_TRUE(PolyNear(p_lambda(p_lambda(z, l), lp - l), p_lambda(p_lambda(z, lp - l), l), 1e-10));
    }
}

TEST(Star, CanonicalCommutationRelation) {
    const Complex c(0.0, 0.5);
    const BilForm l(mat(2, {0, c, -c, 0}));
    EXPECT_TRUE(PolyNear(commutator(mono({1, 0}), mono({0, 1}), l), Poly::constant(2, 2.0 * c)));
}

TEST(Star, Examples) {
    const Complex c(0.3, 2.0);
    EXPECT_TRUE(PolyNear(star(mono({1}), mono({1}), scalar_form(c)), mono({2}) + mono({0}, c)));
    Rng rng(3);
    for (int s = 0; s < 10; ++s) {
        const Poly x = random_poly(rng, 3, 5);
        const BilForm l = random_bilform(rng, 3);
        EXPECT_TRUE(PolyNear(star(x, Poly::one(3), l), x));
        EXPECT_TRUE(PolyNear(star(Poly::one(3), x, l), x));
        EXPECT_TRUE(PolyNear(star(x, x, BilForm::zero(3)), vee(x, x)));
    }
    EXPECT_THROW(star(mono({1}), mono({1, 0}), scalar_form(1.0)), DimensionMismatch);
}

TEST(Star, SecondOrderExample) {
    // e1^2 star e1^2 = E_(4) + 4c E_(2) + 2c^2 on d = 1.
    const Complex c(0.5, 0.25);
    EXPECT_TRUE(PolyNear(star(mono({2}), mono({2}), scalar_form(c)), mono({4}) + mono({2}, 4.0 * c) + mono({0}, 2.0 * c * c)));
}

TEST(Star, SmallHighDegreeTermsSurviveContraction) {
    // The (20, 20) pair coefficient is 1e-26 but contracts to 1e-26 * 20!.
    const Poly x = mono({0}) + mono({20}, 1e-13);
    const Poly p = star(x, x, scalar_form(1.0));
    EXPECT_TRUE(ComplexNear(p.coeff(MultiIndex({0})), 1.0 + 1e-26 * std::tgamma(21.0), 1e-14));
}

TEST(Star, Associative) {
    Rng rng(4);
    for (int s = 0; s < 60; ++s) {
        const std::size_t d = 1 + rng.below(3);
        const BilForm l = random_bilform(rng, d);
        const Poly x = random_poly(rng, d, 4), y = random_poly(rng, d, 4), z = random_poly(rng, d, 4);
        EXPECT_TRUE(PolyNear(star(star(x, y, l), z, l), star(x, star(y, z, l), l), 1e-9));
    }
}

TEST(Star, InvolutionLaw) {
    Rng rng(5);
    for (int s = 0; s < 60; ++s) {
        const std::size_t d = 1 + rng.below(3);
        const BilForm l = random_bilform(rng, d);
        const Poly x = random_poly(rng, d, 4), y = random_poly(rng, d, 4);
        EXPECT_TRUE(PolyNear(involution(star(x, y, l)), star(involution(y), involution(x), l.conjugate()), 1e-9));
    }
}

TEST(Star, ScalarExtractionGivesInnerProduct) {
    Rng rng(6);
    for (int s = 0; s < 60; ++s) {
        const std::size_t d = 1 + rng.below(3);
        const HermForm a = random_hermform(rng, d, 1 + rng.below(d));
        const Poly x = random_poly(rng, d, 5), y = random_poly(rng, d, 5);
        const Complex lhs = star(involution(x), y, lambda_alpha(a)).coeff(MultiIndex(d));
        EXPECT_TRUE(ComplexNear(lhs, extended_inner_product(x, y, a), 1e-9));
    }
}

TEST(Star, PolynomialInDeformationParameter) {
    Rng rng(7);
    for (int s = 0; s < 20; ++s) {
        const std::size_t d = 1 + rng.below(2);
        const BilForm l = random_bilform(rng, d);
        const Poly x = random_poly(rng, d, 4), y = random_poly(rng, d, 4);
        const unsigned n = std::min(x.max_degree(), y.max_degree()) + 1;
        std::vector<Complex> nodes;
        std::vector<Poly> values;
        for (unsigned i = 0; i < n; ++i) {
            nodes.push_back(Complex(i, 0.5 * i));
            values.push_back(star(x, y, l * nodes.back()));
        }
        const Complex z0 = rng.cnormal();
        PolyBuilder interp(d);
        for (unsigned i = 0; i < n; ++i) {
            Complex w = 1.0;
            for (unsigned j = 0; j < n; ++j)
                if (j != i) w *= (z0 - nodes[j]) / (nodes[i] - nodes[j]);
            interp.add(values[i], w);
        }
        EXPECT_TRUE(PolyNear(std::move(interp).build(), star(x, y, l * z0), 1e-8));
    }
}

TEST(Star, CoherentVectorsMultiplyExponentially) {
    // exp(v) star exp(w) = e^{Lambda(v, w)} exp(v + w), compared degreewise.
    Rng rng(8);
    const unsigned n = 8;
    for (int s = 0; s < 10; ++s) {
        const BilForm l = random_bilform(rng, 2);
        const CVector v = random_cvector(rng, 2) * 0.5, w = random_cvector(rng, 2) * 0.5;
        const Poly prod = truncate(star(exp_vee_truncated(v, n), exp_vee_truncated(w, n), l), n);
        const Poly closed = exp_vee_truncated(v + w, n) * std::exp(l(v, w));
        // Low degrees only see contractions of order <= n - degree, so the
        // first degrees already agree to rounding.
        EXPECT_TRUE(PolyNear(truncate(prod, 0), truncate(closed, 0), 1e-4));
        EXPECT_TRUE(ComplexNear(prod.coeff(MultiIndex(2)), closed.coeff(MultiIndex(2)), 1e-4));
    }
}

TEST(StarTruncated, ExactInputsHaveZeroBound) {
    Rng rng(9);
    const BilForm l = random_bilform(rng, 2);
    const HermForm g = admissible_scaling(rng, random_hermform(rng, 2), l);
    const Poly x = random_poly(rng, 2, 3), y = random_poly(rng, 2, 3);
    const auto r = star_truncated(x, y, l, g, 0.0, 0.0);
    EXPECT_EQ(r.error_bound, 0.0);
    EXPECT_TRUE(PolyNear(r.product, star(x, y, l)));
}

TEST(StarTruncated, RejectsInadmissibleGamma) {
    EXPECT_THROW(star_truncated(mono({1}), mono({1}), scalar_form(2.0), HermForm::identity(1), 0.0, 0.0), PreconditionError);
    EXPECT_THROW(star_truncated(mono({1}), mono({1}), scalar_form(0.5), HermForm::identity(1), 0.0, 0.0, 0.9), PreconditionError);
}

TEST(StarTruncated, BoundFormula) {
    const HermForm g = HermForm::identity(1);
    const Poly x = mono({1}) + mono({0}), y = mono({2});
    const double tx = 0.01, ty = 0.02;
    const double nx = seminorm_scaled(x, g, 8.0), ny = seminorm_scaled(y, g, 8.0);
    const auto r1 = star_truncated(x, y, scalar_form(0.5), g, tx, ty);
    EXPECT_NEAR(r1.error_bound, 4.0 * (tx * (ny + ty) + nx * ty), 1e-14);
    const double nx2 = seminorm_scaled(x, g, 16.0), ny2 = seminorm_scaled(y, g, 16.0);
    const auto r2 = star_truncated(x, y, scalar_form(0.5), g, tx, ty, 2.0);
    EXPECT_NEAR(r2.error_bound, 8.0 / 3.0 * (tx * (ny2 + ty) + nx2 * ty), 1e-13);
}

TEST(StarTruncated, CoherentTruncationsWithinBound) {
    const Complex c(0.3, 0.4);
    const BilForm l = scalar_form(c);
    const HermForm g = HermForm::identity(1);
    const unsigned n = 10, big = 80;
    const CVector v = vec({0.08}), w = vec({Complex(0, -0.07)});
    // ||exp(v) - exp_n(v)||^2_{8 gamma} = sum_{k > n} 8^k |v|^{2k} / k!
    auto tail = [&](const CVector& u) {
        double s = 0.0, term = 1.0;
        for (unsigned k = 1; k <= big; ++k) {
            term *= 8.0 * u.squaredNorm() / k;
            if (k > n) s += term;
        }
        return std::sqrt(s);
    };
    const auto r = star_truncated(exp_vee_truncated(v, n), exp_vee_truncated(w, n), l, g, tail(v), tail(w));
    const Poly exact = exp_vee_truncated(v + w, big) * std::exp(l(v, w));
    EXPECT_GT(r.error_bound, 0.0);
    EXPECT_LE(seminorm(r.product - exact, g), r.error_bound);
}

TEST(PairProjectiveNorm, Examples) {
    const HermForm id = HermForm::identity(1);
    EXPECT_NEAR(pair_projective_norm(p_lambda(pair(mono({1}), mono({1})), scalar_form(1.0)), id, id), 1.0, 1e-14);
    EXPECT_NEAR(pair_projective_norm(pair(mono({2}), mono({1})), id, id), std::sqrt(2.0), 1e-14);
    // Trace norm of identity on two orthonormal directions.
    const HermForm id2 = HermForm::identity(2);
    EXPECT_NEAR(pair_projective_norm(pair(mono({1, 0}), mono({1, 0})) + pair(mono({0, 1}), mono({0, 1})), id2, id2), 2.0, 1e-14);
}

TEST(PairProjectiveNorm, SimpleTensorsAreMultiplicative) {
    Rng rng(10);
    for (int s = 0; s < 30; ++s) {
        const std::size_t d = 1 + rng.below(3);
        const HermForm a = random_hermform(rng, d, 1 + rng.below(d)), b = random_hermform(rng, d);
        const Poly x = random_poly(rng, d, 3), y = random_poly(rng, d, 3);
        const double expected = seminorm(x, a) * seminorm(y, b);
        EXPECT_NEAR(pair_projective_norm(pair(x, y), a, b), expected, 1e-9 * std::max(1.0, expected));
    }
}

TEST(SumOfSquares, Examples) {
    Rng rng(11);
    const Poly x = random_poly(rng, 2, 4);
    const auto t0 = sum_of_squares_decomposition(x, BilForm(CMatrix::Identity(2, 2)), 0);
    ASSERT_EQ(t0.size(), 1u);
    EXPECT_EQ(t0[0], x);
    const auto e1 = sum_of_squares_decomposition(mono({1}), scalar_form(1.0), 1);
    ASSERT_EQ(e1.size(), 1u);
    EXPECT_TRUE(PolyNear(e1[0], mono({0})));
    const auto e11 = sum_of_squares_decomposition(mono({1, 1}), BilForm(CMatrix::Identity(2, 2)), 1);
    EXPECT_EQ(e11.size(), 2u);
    EXPECT_THROW(sum_of_squares_decomposition(mono({1, 1}), BilForm(mat(2, {1, 0, 0, -1})), 1), PreconditionError);
    EXPECT_THROW(sum_of_squares_decomposition(mono({1, 1}), BilForm(mat(2, {1, 1, 0, 1})), 1), PreconditionError);
}

TEST(SumOfSquares, ExpansionMatchesContraction) {
    Rng rng(12);
    for (int s = 0; s < 30; ++s) {
        const std::size_t d = 1 + rng.below(3);
        const BilForm l = lambda_alpha(random_hermform(rng, d, 1 + rng.below(d)));
        const Poly x = random_poly(rng, d, 4);
        const unsigned t = static_cast<unsigned>(rng.below(4));
        Poly z = pair(involution(x), x);
        for (unsigned i = 0; i < t; ++i) z = p_lambda(z, l);
        PolyBuilder sum(2 * d);
        for (const auto& xi : sum_of_squares_decomposition(x, l, t)) sum.add(pair(involution(xi), xi));
        EXPECT_TRUE(PolyNear(std::move(sum).build(), z, 1e-9));
    }
}

TEST(Perturbation, Examples) {
    const HermForm g = HermForm::identity(1);
    const Poly x = mono({2}) + mono({1}), y = mono({3});
    const ReportRow same = lambda_perturbation_check(x, y, scalar_form(0.5), scalar_form(0.5), g);
    EXPECT_EQ(same.observed, 0.0);
    EXPECT_EQ(same.ratio(), 0.0);
    const double eps = 1e-3;
    EXPECT_NEAR(perturbation_rho(g, BilForm::zero(1), scalar_form(eps)), 1.0 / eps, 1e-6);
    const ReportRow small = lambda_perturbation_check(x, y, BilForm::zero(1), scalar_form(eps), g);
    EXPECT_GT(small.observed, 0.0);
    EXPECT_LE(small.ratio(), 1.0);
    EXPECT_THROW(lambda_perturbation_check(x, y, BilForm::zero(1), scalar_form(3.0), g), PreconditionError);
}

TEST(VerifySuites, PLambdaZeroFormGivesZeroRatios) {
    const HermForm id = HermForm::identity(2);
    Rng rng(13);
    const Poly x = random_homogeneous(rng, 2, 3), y = random_homogeneous(rng, 2, 2);
    EXPECT_EQ(pair_projective_norm(p_lambda(pair(x, y), BilForm::zero(2)), id, id), 0.0);
}

TEST(VerifySuites, SmallRunsPass) {
    VerifyConfig cfg;
    cfg.samples = 60;
    cfg.seed = 7;
    for (const Report& r : {verify_plambda_bound(cfg), verify_product_chain_bound(cfg), verify_truncation_bound(cfg), verify_perturbation(cfg)}) {
        EXPECT_TRUE(r.passed()) << r.suite << " max ratio " << r.max_ratio();
        EXPECT_GE(r.checks, cfg.samples);
    }
}

TEST(VerifySuites, ToleranceZeroFails) {
    VerifyConfig cfg;
    cfg.samples = 20;
    cfg.tol = 0.0;
    const Report r = verify_plambda_bound(cfg);
    EXPECT_FALSE(r.passed());
    EXPECT_FALSE(r.witness.is_null());
    EXPECT_EQ(r.witness.at("suite"), "plambda");
}

TEST(BinomialInequality, ExactAndExhaustive) {
    EXPECT_EQ(static_cast<std::uint64_t>(binom_exact(10, 3)), 120u);
    EXPECT_EQ(static_cast<std::uint64_t>(binom_exact(3, 5)), 0u);
    EXPECT_EQ(static_cast<std::uint64_t>(binom_exact(64, 32)), 1832624140942590534ULL);
    const Report r = verify_binomis(8, 8);
    EXPECT_TRUE(r.passed());
    EXPECT_GT(r.checks, r.rows.size());
}

} // namespace
