#pragma once

#include <cmath>

#include "starprod/random.hpp"
#include "starprod/report.hpp"
#include "starprod/starprod.hpp"

namespace starprod {

inline void require_symmetric(const BilForm& b, const char* where) {
    if (!b.is_symmetric()) throw PreconditionError(std::string(where) + ": b is not symmetric");
}

/// Delta_b = 1/2 sum_ij b_ij partial_i partial_j; zero on degrees 0 and 1.
inline Poly laplace(const Poly& x, const BilForm& b) {
    require_same_dim(x.dim(), b.dim(), "laplace");
    require_symmetric(b, "laplace");
    const std::size_t d = x.dim();
    PolyBuilder out(d);
    for (const auto& [m, c] : x.terms()) {
        if (m.degree() < 2) continue;
        for (std::size_t i = 0; i < d; ++i) {
            if (m[i] == 0) continue;
            MultiIndex mi = m;
            mi.decrement(i);
            for (std::size_t j = 0; j < d; ++j) {
                const Complex bij = b.matrix()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
                if (mi[j] == 0 || bij == Complex{}) continue;
                MultiIndex mij = mi;
                mij.decrement(j);
                out.add(mij, 0.5 * c * bij * static_cast<double>(m[i]) * static_cast<double>(mi[j]));
            }
        }
    }
    return std::move(out).build();
}

inline Poly laplace_power(const Poly& x, const BilForm& b, unsigned t) {
    Poly r = x;
    for (unsigned s = 0; s < t && !r.is_zero(); ++s) r = laplace(r, b);
    return r;
}

/// e^{z Delta_b} X; the series stops after deg X / 2 steps.
inline Poly exp_laplace(const Poly& x, const BilForm& b, Complex z = 1.0) {
    require_symmetric(b, "exp_laplace");
    PolyBuilder out(x.dim());
    out.add(x);
    Poly term = x;
    for (unsigned t = 1; 2 * t <= x.max_degree(); ++t) {
        term = laplace(term, b) * (z / static_cast<double>(t));
        if (term.is_zero()) break;
        out.add(term);
    }
    return std::move(out).build();
}

/// Relative residual of e^{Delta_b}(X star_L Y) = e^{Delta_b}X star_{L+b} e^{Delta_b}Y.
inline double equivalence_residual(const Poly& x, const Poly& y, const BilForm& l, const BilForm& b) {
    require_symmetric(b, "verify_equivalence");
    const Poly lhs = exp_laplace(star(x, y, l), b);
    const Poly rhs = star(exp_laplace(x, b), exp_laplace(y, b), l + b);
    return relative_difference(lhs, rhs);
}

/// S^2 element on which |Delta_b X| / ||X||_alpha attains the
/// Hilbert-Schmidt value ||b||_HS / sqrt(2).
inline Poly hs_tight_witness(const BilForm& b, const HermForm& alpha) {
    const auto& f = alpha.frame();
    const CMatrix c = f.change.conjugate();
    const CMatrix bt = c * b.matrix() * c.transpose();
    const std::size_t d = alpha.dim();
    // f_p = sum_i conj(C_pi) e_i
    std::vector<Poly> fr;
    for (Eigen::Index p = 0; p < bt.rows(); ++p) fr.push_back(linear(CVector(f.change.row(p).conjugate().transpose())));
    PolyBuilder out(d);
    for (Eigen::Index p = 0; p < bt.rows(); ++p)
        for (Eigen::Index q = 0; q < bt.cols(); ++q) out.add(vee(fr[p], fr[q]), std::conj(bt(p, q)));
    return std::move(out).build();
}

/// ||Delta_b^t X||_alpha <= sqrt((2t)!) / (2r)^t ||X||_{2 r alpha}
inline Report verify_laplace_power_bound(const VerifyConfig& cfg) {
    Report rep{"laplace", "||Delta_b^t X||_alpha <= sqrt((2t)!)/(2r)^t ||X||_{2r alpha}", cfg.tol};
    std::vector<std::vector<ReportRow>> rows(cfg.samples);
    std::vector<Json> inputs(cfg.samples);
    static constexpr double kR[] = {1.0, 1.5, 2.0, 3.0};
    parallel_for(cfg.samples, [&](std::size_t s) {
        Rng rng(sample_seed(cfg.seed, s));
        const std::size_t d = 1 + rng.below(cfg.dim);
        const BilForm b = random_symmetric(rng, d);
        HermForm alpha = random_hermform(rng, d);
        const double h = hs_norm(b, alpha);
        if (h > 0) alpha = alpha.scaled(h * rng.uniform(1.0, 1.5));
        const double r = kR[rng.below(4)];
        const Poly x = random_poly(rng, d, cfg.maxdeg);
        const double base = seminorm_scaled(x, alpha, 2.0 * r);
        Poly dx = x;
        double fact2t = 1.0;
        for (unsigned t = 0; 2 * t <= cfg.maxdeg + 1; ++t) {
            if (t > 0) {
                dx = laplace(dx, b);
                fact2t *= (2.0 * t - 1) * (2.0 * t);
            }
            ReportRow row{s, static_cast<unsigned>(d), t, seminorm(dx, alpha), std::sqrt(fact2t) / std::pow(2.0 * r, t) * base,
                          "r=" + format_double(r)};
            if (!(row.ratio() <= cfg.tol))
                inputs[s] = {{"x", to_json(x)}, {"b", to_json(b.matrix())}, {"alpha", to_json(alpha.matrix())}, {"r", r}, {"t", t}};
            rows[s].push_back(std::move(row));
        }
    });
    for (std::size_t s = 0; s < cfg.samples; ++s)
        for (auto& row : rows[s]) rep.add(std::move(row), inputs[s]);
    return rep;
}

/// Residual of the equivalence identity on random (X, Y, Lambda, b); the
/// bound column is the identity tolerance 1e-10.
inline Report verify_equivalence(const VerifyConfig& cfg) {
    Report rep{"equivalence", "e^{Delta_b}(X star_L Y) = e^{Delta_b}X star_{L+b} e^{Delta_b}Y (relative residual <= 1e-10)", cfg.tol};
    std::vector<ReportRow> rows(cfg.samples);
    std::vector<Json> inputs(cfg.samples);
    parallel_for(cfg.samples, [&](std::size_t s) {
        Rng rng(sample_seed(cfg.seed, s));
        const std::size_t d = 1 + rng.below(cfg.dim);
        const Poly x = random_poly(rng, d, cfg.maxdeg), y = random_poly(rng, d, cfg.maxdeg);
        const BilForm l = random_bilform(rng, d), b = random_symmetric(rng, d);
        rows[s] = {s, x.max_degree(), y.max_degree(), equivalence_residual(x, y, l, b), 1e-10, "residual"};
        if (!(rows[s].ratio() <= cfg.tol))
            inputs[s] = {{"x", to_json(x)}, {"y", to_json(y)}, {"lambda", to_json(l.matrix())}, {"b", to_json(b.matrix())}};
    });
    for (std::size_t s = 0; s < cfg.samples; ++s) rep.add(std::move(rows[s]), inputs[s]);
    return rep;
}

} // namespace starprod
