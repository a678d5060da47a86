#pragma once

#include <cmath>

#include "starprod/random.hpp"
#include "starprod/report.hpp"
#include "starprod/starprod.hpp"

namespace starprod {

/// Symmetric derivative data of X at rho in an alpha-orthonormal frame.
///
/// `coeffs` lives in rank(alpha) variables; the entry at m (degree k) is
/// the k-th derivative of the Gel'fand transform along the frame directions
/// with multiplicity m, divided by k!.
struct Jet {
    CVector rho;
    HermForm alpha;
    Poly coeffs;
    unsigned maxdeg = 0;
};

inline double factorial_d(unsigned n) {
    double f = 1.0;
    for (unsigned i = 2; i <= n; ++i) f *= i;
    return f;
}

inline Jet jet_of(const Poly& x, const HermForm& alpha, const CVector& rho, unsigned maxdeg) {
    require_same_dim(x.dim(), alpha.dim(), "jet_of");
    const Poly t = truncate(frame_coordinates(translate(x, rho), alpha), maxdeg);
    PolyBuilder b(alpha.frame().rank);
    for (const auto& [m, c] : t.terms()) b.add(m, c * m.factorial_product() / factorial_d(m.degree()));
    return {rho, alpha, std::move(b).build(), maxdeg};
}

/// sum_k sum_{|m|=k} conj(J_X(m)) J_Y(m) (k!)^2 / m!.
inline Complex jet_bracket(const Jet& jx, const Jet& jy) {
    require_same_dim(jx.coeffs.dim(), jy.coeffs.dim(), "jet_bracket");
    Complex s{};
    for (const auto& [m, c] : jx.coeffs.terms()) {
        const Complex e = jy.coeffs.coeff(m);
        if (e == Complex{}) continue;
        const double kf = factorial_d(m.degree());
        s += std::conj(c) * e * kf * kf / m.factorial_product();
    }
    return s;
}

/// The pointwise bracket of X and Y at rho computed from their jets. The
/// jets are taken to the full degree, so nothing is truncated.
inline Complex pointwise_bracket(const Poly& x, const Poly& y, const HermForm& alpha, const CVector& rho) {
    const unsigned top = std::max(x.max_degree(), y.max_degree());
    return jet_bracket(jet_of(x, alpha, rho, top), jet_of(y, alpha, rho, top));
}

/// Inverse of jet_of. For degenerate alpha only the part of X visible to
/// alpha is recovered (X modulo the ideal generated by the kernel).
inline Poly reconstruct(const Jet& jet) {
    PolyBuilder b(jet.coeffs.dim());
    for (const auto& [m, c] : jet.coeffs.terms()) b.add(m, c * factorial_d(m.degree()) / m.factorial_product());
    const Poly frame_poly = std::move(b).build();
    Poly x = substitute(frame_poly, jet.alpha.frame().change.adjoint());
    if (jet.rho.size() > 0 && !jet.rho.isZero(0.0)) x = translate(x, -jet.rho);
    return x;
}

/// Operator norm of v -> rho(v) on the alpha unit ball, or +inf when rho
/// does not vanish on the kernel of alpha.
inline double functional_norm(const CVector& rho, const HermForm& alpha) {
    const CMatrix& k = alpha.frame().kernel;
    if (k.cols() > 0 && (k.transpose() * rho).cwiseAbs().maxCoeff() > kKernelCutoff * std::max(1.0, rho.norm())) return INFINITY;
    return (pseudo_inverse_sqrt(alpha).conjugate() * rho).norm();
}

/// ||D_rho^t X||_alpha <= sqrt(t!) ||X||_{2 alpha} and
/// ||tau*_rho X||_alpha <= 2/(sqrt 2 - 1) ||X||_{2 alpha} for |rho(v)| <= ||v||_alpha.
inline std::vector<ReportRow> derivative_estimate_rows(const Poly& x, const HermForm& alpha, const CVector& rho) {
    if (!(functional_norm(rho, alpha) <= 1.0 + kNormSlack))
        throw PreconditionError("verify_derivative_estimates: |rho(v)| <= ||v||_alpha fails");
    std::vector<ReportRow> rows;
    const double base = seminorm_scaled(x, alpha, 2.0);
    Poly dx = x;
    double tfact = 1.0;
    for (unsigned t = 0; t <= x.max_degree() + 1; ++t) {
        if (t > 0) {
            dx = directional_derivative(dx, rho);
            tfact *= t;
        }
        rows.push_back({0, x.max_degree(), t, seminorm(dx, alpha), std::sqrt(tfact) * base, "D^t"});
    }
    rows.push_back({0, x.max_degree(), 0, seminorm(translate(x, rho), alpha), 2.0 / (std::sqrt(2.0) - 1.0) * base, "tau"});
    return rows;
}

inline Report verify_derivative_estimates(const VerifyConfig& cfg) {
    Report rep{"derivatives", "||D_rho^t X||_alpha <= sqrt(t!) ||X||_{2 alpha}; ||tau*_rho X||_alpha <= 2/(sqrt2-1) ||X||_{2 alpha}", cfg.tol};
    std::vector<std::vector<ReportRow>> rows(cfg.samples);
    std::vector<Json> inputs(cfg.samples);
    parallel_for(cfg.samples, [&](std::size_t s) {
        Rng rng(sample_seed(cfg.seed, s));
        const std::size_t d = 1 + rng.below(cfg.dim);
        HermForm alpha;
        CVector rho = random_rvector(rng, d);
        if (d > 1 && rng.coin(0.25)) {
            // Real rank-deficient alpha, so a real rho can vanish on its kernel.
            const std::size_t r = 1 + rng.below(d - 1);
            Eigen::MatrixXd g(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(r));
            for (Eigen::Index j = 0; j < g.cols(); ++j)
                for (Eigen::Index i = 0; i < g.rows(); ++i) g(i, j) = rng.normal();
            alpha = HermForm((g * g.transpose()).cast<Complex>());
            rho = range_projector(alpha).real().cast<Complex>() * rho;
        } else {
            alpha = random_hermform(rng, d);
        }
        const double n = functional_norm(rho, alpha);
        if (n > 0) rho *= rng.uniform(0.05, 1.0) / n;
        const Poly x = random_poly(rng, d, cfg.maxdeg);
        rows[s] = derivative_estimate_rows(x, alpha, rho);
        for (auto& r : rows[s]) {
            r.sample_id = s;
            if (!(r.ratio() <= cfg.tol)) inputs[s] = {{"x", to_json(x)}, {"alpha", to_json(alpha.matrix())}, {"rho", to_json(rho)}};
        }
    });
    for (std::size_t s = 0; s < cfg.samples; ++s)
        for (auto& r : rows[s]) rep.add(std::move(r), inputs[s]);
    return rep;
}

} // namespace starprod
