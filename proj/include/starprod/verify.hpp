#pragma once

#include <cmath>
#include <string>

#include "starprod/random.hpp"
#include "starprod/report.hpp"
#include "starprod/starprod.hpp"

namespace starprod {

namespace detail {

/// Random Lambda together with alpha, beta in P_{V,Lambda}. One sample in
/// four uses rank-deficient forms sharing a range, with Lambda compressed
/// to that range so that it vanishes on the common kernel.
struct AdmissibleTriple {
    BilForm l;
    HermForm alpha, beta;
};

inline AdmissibleTriple admissible_triple(Rng& rng, std::size_t d) {
    BilForm l = random_bilform(rng, d);
    if (d > 1 && rng.coin(0.25)) {
        const std::size_t r = 1 + rng.below(d - 1);
        const CMatrix g = random_cmatrix(rng, d, r);
        const HermForm base(g * g.adjoint());
        const CMatrix q = range_projector(base);
        l = BilForm(q.transpose() * l.matrix() * q);
        const CMatrix h = random_cmatrix(rng, r, r);
        const HermForm other(g * (h * h.adjoint() + 0.1 * CMatrix::Identity(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r))) * g.adjoint());
        return {l, admissible_scaling(rng, base, l), admissible_scaling(rng, other, l)};
    }
    return {l, admissible_scaling(rng, random_hermform(rng, d), l), admissible_scaling(rng, random_hermform(rng, d), l)};
}

inline double factorial(unsigned n) {
    double f = 1.0;
    for (unsigned i = 2; i <= n; ++i) f *= i;
    return f;
}

} // namespace detail

/// ||P_Lambda(X (x) Y)||_{alpha (x)_pi beta} <= sqrt(k l) ||X||_alpha ||Y||_beta
inline Report verify_plambda_bound(const VerifyConfig& cfg) {
    Report rep{"plambda", "||P_Lambda(X (x) Y)||_{alpha (x)pi beta} <= sqrt(k l) ||X||_alpha ||Y||_beta", cfg.tol};
    std::vector<ReportRow> rows(cfg.samples);
    std::vector<Json> inputs(cfg.samples);
    parallel_for(cfg.samples, [&](std::size_t s) {
        Rng rng(sample_seed(cfg.seed, s));
        const std::size_t d = 1 + rng.below(cfg.dim);
        const unsigned k = rng.between(1, cfg.maxdeg), l = rng.between(1, cfg.maxdeg);
        const Poly x = random_homogeneous(rng, d, k), y = random_homogeneous(rng, d, l);
        const auto tr = detail::admissible_triple(rng, d);
        const double observed = pair_projective_norm(p_lambda(pair(x, y), tr.l), tr.alpha, tr.beta);
        const double bound = std::sqrt(double(k) * l) * seminorm(x, tr.alpha) * seminorm(y, tr.beta);
        rows[s] = {s, k, l, observed, bound, "d=" + std::to_string(d)};
        if (!(rows[s].ratio() <= cfg.tol))
            inputs[s] = {{"x", to_json(x)},
                         {"y", to_json(y)},
                         {"lambda", to_json(tr.l.matrix())},
                         {"alpha", to_json(tr.alpha.matrix())},
                         {"beta", to_json(tr.beta.matrix())}};
    });
    for (std::size_t s = 0; s < cfg.samples; ++s) rep.add(std::move(rows[s]), inputs[s]);
    return rep;
}

/// Bound on X_1 star ... star X_n for X_i of degree <= k, both for the whole
/// product ((2e^3)^{kn}) and per homogeneous component ((2e^2)^{kn}).
/// Degrees are capped so that kn stays at desk scale.
inline Report verify_product_chain_bound(const VerifyConfig& cfg) {
    Report rep{"chain", "||X_1 star ... star X_n||_alpha <= ((kn)!/(k!)^n)^{1/2} (2e^3)^{kn} prod ||X_i||_alpha; components with (2e^2)^{kn}",
               cfg.tol};
    std::vector<std::vector<ReportRow>> rows(cfg.samples);
    std::vector<Json> inputs(cfg.samples);
    const unsigned kmax = std::max(1u, std::min(cfg.maxdeg, 3u));
    parallel_for(cfg.samples, [&](std::size_t s) {
        Rng rng(sample_seed(cfg.seed, s));
        const std::size_t d = 1 + rng.below(std::min<std::size_t>(cfg.dim, 2));
        const unsigned k = rng.between(1, kmax);
        const unsigned n = rng.between(1, std::max(1u, 12u / k));
        const auto tr = detail::admissible_triple(rng, d);
        Poly prod = Poly::one(d);
        double norms = 1.0;
        Json xs = Json::array();
        for (unsigned i = 0; i < n; ++i) {
            const Poly xi = random_poly(rng, d, k);
            norms *= seminorm(xi, tr.alpha);
            prod = star(prod, xi, tr.l);
            xs.push_back(to_json(xi));
        }
        const double kn = double(k) * n;
        const double comb = std::sqrt(detail::factorial(k * n) / std::pow(detail::factorial(k), n));
        const double full_bound = comb * std::pow(2.0 * std::exp(3.0), kn) * norms;
        const double comp_bound = comb * std::pow(2.0 * std::exp(2.0), kn) * norms;
        rows[s].push_back({s, k, n, seminorm(prod, tr.alpha), full_bound, "full"});
        const auto comps = degree_norms_squared(prod, tr.alpha);
        double worst = 0.0;
        for (double c : comps) worst = std::max(worst, std::sqrt(c));
        rows[s].push_back({s, k, n, worst, comp_bound, "component"});
        for (const auto& r : rows[s])
            if (!(r.ratio() <= cfg.tol))
                inputs[s] = {{"factors", xs}, {"lambda", to_json(tr.l.matrix())}, {"alpha", to_json(tr.alpha.matrix())}};
    });
    for (std::size_t s = 0; s < cfg.samples; ++s)
        for (auto& r : rows[s]) rep.add(std::move(r), inputs[s]);
    return rep;
}

/// sum_t ||mu(P_{z Lambda}^t Z)||_gamma / t! <= 4R/(2R-1) ||Z||_{8R gamma (x)pi 8R gamma}
/// for gamma in P_{V,Lambda}, |z| <= R, R > 1/2. The observed column is the
/// middle term, which dominates ||mu_star(Z)||_gamma.
inline Report verify_truncation_bound(const VerifyConfig& cfg) {
    Report rep{"truncation", "sum_t ||mu(P_{z Lambda}^t Z)||_gamma / t! <= 4R/(2R-1) ||Z||_{8R gamma (x)pi 8R gamma}", cfg.tol};
    std::vector<ReportRow> rows(cfg.samples);
    std::vector<Json> inputs(cfg.samples);
    parallel_for(cfg.samples, [&](std::size_t s) {
        Rng rng(sample_seed(cfg.seed, s));
        const std::size_t d = 1 + rng.below(cfg.dim);
        const auto tr = detail::admissible_triple(rng, d);
        const double r = rng.uniform(0.55, 3.0);
        const Complex z = std::polar(r * std::sqrt(rng.uniform()), rng.uniform(0.0, 2.0 * M_PI));
        const BilForm zl = tr.l * z;
        Poly zt = pair(random_poly(rng, d, cfg.maxdeg), random_poly(rng, d, cfg.maxdeg));
        if (rng.coin()) zt += pair(random_poly(rng, d, cfg.maxdeg), random_poly(rng, d, cfg.maxdeg));
        double observed = 0.0, inv_fact = 1.0;
        Poly cur = zt;
        for (unsigned t = 0; !cur.is_zero(); ++t) {
            if (t > 0) {
                cur = p_lambda(cur, zl);
                inv_fact /= t;
            }
            observed += inv_fact * seminorm(mu(cur), tr.alpha);
        }
        const HermForm g8 = tr.alpha.scaled(8.0 * r);
        const double bound = 4.0 * r / (2.0 * r - 1.0) * pair_projective_norm(zt, g8, g8);
        rows[s] = {s, zt.max_degree(), static_cast<unsigned>(d), observed, bound, "R=" + format_double(r)};
        if (!(rows[s].ratio() <= cfg.tol))
            inputs[s] = {{"z_pair", to_json(zt)},
                         {"lambda", to_json(tr.l.matrix())},
                         {"gamma", to_json(tr.alpha.matrix())},
                         {"z", {z.real(), z.imag()}},
                         {"R", r}};
    });
    for (std::size_t s = 0; s < cfg.samples; ++s) rep.add(std::move(rows[s]), inputs[s]);
    return rep;
}

/// Largest rho with gamma in P_{V, rho (L' - L)}: rho = 1 / ||L' - L||_gamma.
inline double perturbation_rho(const HermForm& gamma, const BilForm& l, const BilForm& lp) {
    const double n = lambda_norm(gamma, lp - l);
    return n == 0.0 ? INFINITY : 1.0 / n;
}

/// One instance of ||X star_{L'} Y - X star_L Y||_gamma <= 8/(2 rho - 1) ||X||_{32 gamma} ||Y||_{32 gamma}.
inline ReportRow lambda_perturbation_check(const Poly& x, const Poly& y, const BilForm& l, const BilForm& lp,
                                           const HermForm& gamma) {
    if (!in_PVLambda(gamma, l)) throw PreconditionError("lambda_perturbation_check: gamma is not in P_{V,Lambda}");
    const double rho = perturbation_rho(gamma, l, lp);
    if (!(rho > 0.5)) throw PreconditionError("lambda_perturbation_check: no admissible rho > 1/2");
    const double observed = seminorm(star(x, y, lp) - star(x, y, l), gamma);
    const double bound = std::isinf(rho) ? 0.0
                                         : 8.0 / (2.0 * rho - 1.0) * seminorm_scaled(x, gamma, 32.0) * seminorm_scaled(y, gamma, 32.0);
    return {0, x.max_degree(), y.max_degree(), observed, bound, "rho=" + format_double(rho)};
}

inline Report verify_perturbation(const VerifyConfig& cfg) {
    Report rep{"perturbation", "||X star_{L'} Y - X star_L Y||_gamma <= 8/(2 rho - 1) ||X||_{32 gamma} ||Y||_{32 gamma}", cfg.tol};
    std::vector<ReportRow> rows(cfg.samples);
    std::vector<Json> inputs(cfg.samples);
    parallel_for(cfg.samples, [&](std::size_t s) {
        Rng rng(sample_seed(cfg.seed, s));
        const std::size_t d = 1 + rng.below(cfg.dim);
        const auto tr = detail::admissible_triple(rng, d);
        // Perturb inside the admissible range so that rho > 1/2 is available.
        const CMatrix q = range_projector(tr.alpha);
        BilForm delta(q.transpose() * random_cmatrix(rng, d, d) * q);
        const double dn = lambda_norm(tr.alpha, delta);
        if (dn > 0) delta = delta * Complex(rng.uniform(0.01, 1.9) / dn);
        const BilForm lp = tr.l + delta;
        const Poly x = random_poly(rng, d, cfg.maxdeg), y = random_poly(rng, d, cfg.maxdeg);
        rows[s] = lambda_perturbation_check(x, y, tr.l, lp, tr.alpha);
        rows[s].sample_id = s;
        if (!(rows[s].ratio() <= cfg.tol))
            inputs[s] = {{"x", to_json(x)},
                         {"y", to_json(y)},
                         {"lambda", to_json(tr.l.matrix())},
                         {"lambda_prime", to_json(lp.matrix())},
                         {"gamma", to_json(tr.alpha.matrix())}};
    });
    for (std::size_t s = 0; s < cfg.samples; ++s) rep.add(std::move(rows[s]), inputs[s]);
    return rep;
}

using u128 = unsigned __int128;

inline u128 binom_exact(unsigned n, unsigned k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    u128 r = 1;
    for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

/// binom(m,l) binom(m-l+t,t) <= binom(l+t,t) binom(k(n+1),k) over
/// m <= kn, t <= k, l <= min(m, k-t), in exact integer arithmetic. One row
/// per (k, n) holding the worst case; `checks` counts every tuple.
inline Report verify_binomis(unsigned kmax = 8, unsigned nmax = 8, double tol = kDefaultTol) {
    Report rep{"binomis", "binom(m,l) binom(m-l+t,t) <= binom(l+t,t) binom(k(n+1),k)", tol};
    std::uint64_t total = 0;
    for (unsigned k = 0; k <= kmax; ++k)
        for (unsigned n = 0; n <= nmax; ++n) {
            double worst = -1.0;
            u128 wl = 0, wr = 1;
            bool exact_ok = true;
            for (unsigned m = 0; m <= k * n; ++m)
                for (unsigned t = 0; t <= k; ++t)
                    for (unsigned l = 0; l <= std::min(m, k - t); ++l) {
                        const u128 lhs = binom_exact(m, l) * binom_exact(m - l + t, t);
                        const u128 rhs = binom_exact(l + t, t) * binom_exact(k * (n + 1), k);
                        ++total;
                        exact_ok = exact_ok && lhs <= rhs;
                        const double q = static_cast<double>(lhs) / static_cast<double>(rhs);
                        if (q > worst) {
                            worst = q;
                            wl = lhs;
                            wr = rhs;
                        }
                    }
            ReportRow row{k * 100 + n, k, n, static_cast<double>(wl), static_cast<double>(wr), exact_ok ? "exact" : "violated"};
            if (!exact_ok) row.observed = std::max(row.observed, std::nextafter(row.bound * tol, INFINITY));
            rep.rows.push_back(row);
        }
    rep.checks = total;
    return rep;
}

} // namespace starprod
