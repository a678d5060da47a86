#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "starprod/equivalence.hpp"
#include "starprod/gelfand.hpp"

namespace starprod {

/// The Gaussian functional omega(X) = delta_rho(e^{z Delta_b} X).
struct StateDesc {
    CVector rho;
    BilForm b;
    double z = 1.0;

    static StateDesc vacuum(std::size_t d) { return {CVector::Zero(static_cast<Eigen::Index>(d)), BilForm::zero(d), 1.0}; }
};

inline Complex apply_state(const StateDesc& s, const Poly& x) {
    require_same_dim(static_cast<std::size_t>(s.rho.size()), x.dim(), "apply_state");
    if (s.z == 0.0 || s.b.matrix().isZero(0.0)) return evaluate(x, s.rho);
    return evaluate(exp_laplace(x, s.b, s.z), s.rho);
}

/// Monomials of degree <= n ordered by (degree, lex).
inline std::vector<MultiIndex> monomials_up_to(std::size_t d, unsigned n) {
    std::vector<MultiIndex> out;
    for (unsigned k = 0; k <= n; ++k) for_each_multi_index(d, k, [&](const MultiIndex& m) { out.push_back(m); });
    return out;
}

/// G_mn = omega(E_m* star_L E_n) over monomials of degree <= n.
inline CMatrix gram_matrix(const StateDesc& s, const BilForm& l, unsigned n) {
    const std::size_t d = l.dim();
    const auto basis = monomials_up_to(d, n);
    const auto sz = static_cast<Eigen::Index>(basis.size());
    CMatrix g(sz, sz);
    std::vector<Poly> mons;
    for (const auto& m : basis) mons.push_back(Poly::monomial(m));
    parallel_for(basis.size(), [&](std::size_t i) {
        const Poly left = involution(mons[i]);
        for (std::size_t j = 0; j < basis.size(); ++j)
            g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = apply_state(s, star(left, mons[j], l));
    });
    return g;
}

struct PositivityResult {
    bool positive = false;
    double min_eigenvalue = 0.0;
    CMatrix gram;
};

/// PSD test of the Gram matrix: min eigenvalue >= -1e-9 ||G||.
inline PositivityResult positivity_check(const StateDesc& s, const BilForm& l, unsigned n) {
    PositivityResult r;
    r.gram = gram_matrix(s, l, n);
    const CMatrix h = (r.gram + r.gram.adjoint()) / 2.0;
    const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<CMatrix>(h, Eigen::EigenvaluesOnly).eigenvalues();
    r.min_eigenvalue = ev.minCoeff();
    const double scale = std::max(ev.cwiseAbs().maxCoeff(), 1e-300);
    r.positive = r.min_eigenvalue >= -1e-9 * scale;
    return r;
}

/// Relative eigenvalue cutoff defining the null space of omega.
inline constexpr double kGnsCutoff = 1e-10;

/// Truncated GNS data. Columns of `basis` are coefficient vectors over
/// `monomials`, orthonormal for the Gram form; they are added degree by
/// degree so that the first `dims_by_degree[j]` columns span the image of
/// the elements of degree <= j.
struct GnsRep {
    StateDesc state;
    BilForm lambda;
    unsigned cutoff = 0;
    std::vector<MultiIndex> monomials;
    CMatrix gram;
    CMatrix basis;
    std::vector<std::size_t> dims_by_degree;
    double min_eigenvalue = 0.0;

    std::size_t dimension() const { return static_cast<std::size_t>(basis.cols()); }

    /// Element of S(V) represented by basis column a.
    Poly vector(std::size_t a) const {
        PolyBuilder b(lambda.dim());
        for (std::size_t i = 0; i < monomials.size(); ++i)
            b.add(monomials[i], basis(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(a)));
        return std::move(b).build();
    }
};

inline GnsRep gns_build(const StateDesc& s, const BilForm& l, unsigned n) {
    const auto pos = positivity_check(s, l, n);
    if (!pos.positive) throw PositivityError("gns_build: state is not positive at this cutoff", pos.min_eigenvalue);
    GnsRep rep{s, l, n, monomials_up_to(l.dim(), n), pos.gram, {}, {}, pos.min_eigenvalue};
    const CMatrix g = (pos.gram + pos.gram.adjoint()) / 2.0;
    const auto total = static_cast<Eigen::Index>(rep.monomials.size());
    const double gmax = std::max(Eigen::SelfAdjointEigenSolver<CMatrix>(g, Eigen::EigenvaluesOnly).eigenvalues().cwiseAbs().maxCoeff(), 1e-300);
    CMatrix basis(total, 0);
    Eigen::Index first = 0;
    for (unsigned k = 0; k <= n; ++k) {
        const auto count = static_cast<Eigen::Index>(count_monomials(l.dim(), k));
        CMatrix cand = CMatrix::Zero(total, count);
        cand.middleRows(first, count).setIdentity();
        first += count;
        if (basis.cols() > 0) cand -= basis * (basis.adjoint() * g * cand);
        const CMatrix rg = cand.adjoint() * g * cand;
        Eigen::SelfAdjointEigenSolver<CMatrix> es((rg + rg.adjoint()) / 2.0);
        std::vector<CVector> added;
        for (Eigen::Index q = es.eigenvalues().size() - 1; q >= 0; --q) {
            const double lam = es.eigenvalues()(q);
            if (lam <= kGnsCutoff * gmax) continue;
            CVector v = cand * es.eigenvectors().col(q) / std::sqrt(lam);
            Eigen::Index big;
            v.cwiseAbs().maxCoeff(&big);
            v *= std::abs(v(big)) / v(big);
            added.push_back(v);
        }
        const Eigen::Index old = basis.cols();
        basis.conservativeResize(total, old + static_cast<Eigen::Index>(added.size()));
        for (std::size_t a = 0; a < added.size(); ++a) basis.col(old + static_cast<Eigen::Index>(a)) = added[a];
        rep.dims_by_degree.push_back(static_cast<std::size_t>(basis.cols()));
    }
    rep.basis = std::move(basis);
    return rep;
}

/// Matrix of pi(X) on the span of the basis vectors of degree <= N - deg X,
/// M_ab = omega(u_a* star X star u_b); on that block it is exact.
inline CMatrix gns_matrix(const GnsRep& rep, const Poly& x) {
    if (x.max_degree() > rep.cutoff) throw PreconditionError("gns_matrix: element degree exceeds the cutoff");
    const std::size_t dim = rep.dims_by_degree[rep.cutoff - x.max_degree()];
    std::vector<Poly> vecs;
    for (std::size_t a = 0; a < dim; ++a) vecs.push_back(rep.vector(a));
    CMatrix m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    parallel_for(dim, [&](std::size_t b) {
        const Poly xb = star(x, vecs[b], rep.lambda);
        for (std::size_t a = 0; a < dim; ++a)
            m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
                apply_state(rep.state, star(involution(vecs[a]), xb, rep.lambda));
    });
    return m;
}

/// Truncated star exponential of a vector compared with its closed form.
struct StarExponential {
    Poly truncated;
    double closed_form_residual = 0.0;
    unsigned terms_used = 0;
    double last_term_norm = 0.0;
};

/// sum_n v^{star n} / n! truncated to degree <= N. The powers are exact;
/// summation runs until n > N and the degree <= N part of the next term is
/// negligible. The residual is the identity-form seminorm of the difference
/// with e^{Lambda(v,v)/2} exp_v(v) truncated to degree N.
inline StarExponential star_exponential_vector(const CVector& v, const BilForm& l, unsigned n, unsigned nmax = 400) {
    const std::size_t d = l.dim();
    require_same_dim(static_cast<std::size_t>(v.size()), d, "star_exponential_vector");
    const Poly lin = linear(v);
    const HermForm id = HermForm::identity(d);
    Poly term = Poly::one(d);
    PolyBuilder sum(d);
    sum.add(term);
    StarExponential out;
    unsigned k = 1;
    for (; k <= nmax; ++k) {
        term = star(term, lin, l) * Complex(1.0 / k);
        const Poly low = truncate(term, n);
        sum.add(low);
        out.last_term_norm = seminorm(low, id);
        if (k > n && out.last_term_norm <= 1e-17) break;
        if (term.is_zero()) break;
    }
    out.terms_used = std::min(k, nmax);
    out.truncated = std::move(sum).build();
    const Complex lvv = l(v, v);
    const Poly closed = exp_vee_truncated(v, n) * std::exp(0.5 * lvv);
    out.closed_form_residual = seminorm(out.truncated - closed, id);
    return out;
}

/// Degree <= N part of exp(v) star exp(w) (factors truncated at degree m)
/// against e^{Lambda(v,w)} exp_v(v + w); returns the identity-form residual.
inline double star_exponential_product_residual(const CVector& v, const CVector& w, const BilForm& l, unsigned n,
                                                unsigned m) {
    const std::size_t d = l.dim();
    const Poly lhs = truncate(star(exp_vee_truncated(v, m), exp_vee_truncated(w, m), l), n);
    const Poly rhs = exp_vee_truncated(v + w, n) * std::exp(l(v, w));
    return seminorm(lhs - rhs, HermForm::identity(d));
}

struct DivergenceRow {
    unsigned n = 0;
    double inner = 0.0;
    double ratio = 0.0;
};

/// <X^{v n}, X^{v n}>_omega / (n!)^2 for a homogeneous quadratic X. Each
/// normalised term being >= 1 means the exponential series of X has no
/// summable majorant in any of these seminorms.
inline std::vector<DivergenceRow> quadratic_divergence_witness(const Poly& x, const HermForm& omega, unsigned nmax) {
    if (!x.is_zero() && !x.is_homogeneous(2)) throw PreconditionError("quadratic_divergence_witness: X must be homogeneous of degree 2");
    if (x.is_zero()) throw PreconditionError("quadratic_divergence_witness: X must be homogeneous of degree 2");
    std::vector<DivergenceRow> rows;
    Poly p = Poly::one(x.dim());
    double nf = 1.0;
    for (unsigned n = 0; n <= nmax; ++n) {
        if (n > 0) {
            p = vee(p, x);
            nf *= n;
        }
        const double ip = extended_inner_product(p, p, omega).real();
        rows.push_back({n, ip, ip / (nf * nf)});
    }
    return rows;
}

struct SeriesRow {
    unsigned n = 0;
    double term = 0.0;
    double ratio = 0.0;
};

struct AnalyticSeries {
    double eps = 0.0;
    std::vector<SeriesRow> rows;
    /// First n from which every consecutive ratio is <= 1/sqrt 2; -1 if none.
    int threshold = -1;
};

/// Default step eps = 1 / (8 e^6 ||X||_alpha^2).
inline double default_series_eps(const Poly& x, const HermForm& alpha) {
    const double n = seminorm(x, alpha);
    return n == 0.0 ? 1.0 : 1.0 / (8.0 * std::exp(6.0) * n * n);
}

/// Terms eps^n omega((X^{star n} star Y)* star (X^{star n} star Y))^{1/2} / n!
/// for n <= nmax, with exact star powers.
inline AnalyticSeries analytic_vector_series(const GnsRep& rep, const Poly& x, const Poly& y, double eps, unsigned nmax) {
    if (x.max_degree() > 2)
        throw PreconditionError(
            "analytic_vector_series: elements of degree > 2 are outside the analytic-vector estimate; the degree-2 boundary is "
            "illustrated by quadratic_divergence_witness");
    AnalyticSeries out{eps, {}, -1};
    Poly cur = y;
    double scale = 1.0;
    for (unsigned n = 0; n <= nmax; ++n) {
        if (n > 0) {
            cur = star(x, cur, rep.lambda);
            scale *= eps / n;
        }
        const double w = std::max(0.0, apply_state(rep.state, star(involution(cur), cur, rep.lambda)).real());
        SeriesRow row{n, scale * std::sqrt(w), 0.0};
        if (n > 0) row.ratio = out.rows.back().term == 0.0 ? 0.0 : row.term / out.rows.back().term;
        out.rows.push_back(row);
    }
    const double lim = M_SQRT1_2;
    int thr = static_cast<int>(nmax);
    for (int n = static_cast<int>(nmax); n >= 1; --n) {
        if (out.rows[static_cast<std::size_t>(n)].ratio <= lim) thr = n - 1;
        else break;
    }
    out.threshold = nmax == 0 ? 0 : (thr == static_cast<int>(nmax) ? -1 : thr);
    return out;
}

} // namespace starprod
