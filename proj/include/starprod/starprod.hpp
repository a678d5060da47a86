#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "starprod/forms.hpp"

namespace starprod {

/// X (x)_pi Y.
struct PairTensor {
    Poly left;
    Poly right;
};

/// Sums of pair tensors over V are stored as polynomials in 2d variables:
/// E_m (x) E_n is the monomial with exponent (m, n).
inline Poly pair(const Poly& x, const Poly& y, bool prune = true) {
    require_same_dim(x.dim(), y.dim(), "pair");
    PolyBuilder out(2 * x.dim());
    for (const auto& [m, a] : x.terms())
        for (const auto& [n, b] : y.terms()) out.add(m.concat(n), a * b);
    return prune ? std::move(out).build() : std::move(out).build_unpruned();
}

inline Poly to_pair_poly(const std::vector<PairTensor>& z, std::size_t dim) {
    PolyBuilder out(2 * dim);
    for (const auto& p : z) out.add(pair(p.left, p.right));
    return std::move(out).build();
}

/// Splits a pair polynomial into monomial pair tensors.
inline std::vector<PairTensor> from_pair_poly(const Poly& z) {
    const std::size_t d = z.dim() / 2;
    std::vector<PairTensor> out;
    for (const auto& [mn, c] : z.terms())
        out.push_back({Poly::monomial(mn.slice(0, d), c), Poly::monomial(mn.slice(d, d))});
    return out;
}

/// mu_v: E_m (x) E_n -> E_{m+n}.
inline Poly mu(const Poly& z) {
    const std::size_t d = z.dim() / 2;
    PolyBuilder out(d);
    for (const auto& [mn, c] : z.terms()) out.add(mn.slice(0, d) + mn.slice(d, d), c);
    return std::move(out).build();
}

/// P_Lambda = sum_ij L_ij partial_i (x) partial_j on a pair polynomial.
inline Poly p_lambda(const Poly& z, const BilForm& l, bool prune = true) {
    const std::size_t d = l.dim();
    require_same_dim(z.dim(), 2 * d, "p_lambda");
    PolyBuilder out(z.dim());
    for (const auto& [mn, c] : z.terms())
        for (std::size_t i = 0; i < d; ++i) {
            if (mn[i] == 0) continue;
            for (std::size_t j = 0; j < d; ++j) {
                const Complex lij = l.matrix()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
                if (mn[d + j] == 0 || lij == Complex{}) continue;
                MultiIndex r = mn;
                r.decrement(i);
                r.decrement(d + j);
                out.add(r, c * lij * static_cast<double>(mn[i]) * static_cast<double>(mn[d + j]));
            }
        }
    return prune ? std::move(out).build() : std::move(out).build_unpruned();
}

inline std::vector<PairTensor> p_lambda(const std::vector<PairTensor>& z, const BilForm& l) {
    return from_pair_poly(p_lambda(to_pair_poly(z, l.dim()), l));
}

/// X star_Lambda Y = sum_t mu((P_Lambda)^t (X (x) Y)) / t!.
/// The pair tensors are not pruned: contraction multiplies small high-degree
/// coefficients by large factors. Only the result is pruned.
inline Poly star(const Poly& x, const Poly& y, const BilForm& l) {
    require_same_dim(x.dim(), y.dim(), "star");
    require_same_dim(x.dim(), l.dim(), "star");
    const unsigned top = std::min(x.max_degree(), y.max_degree());
    const std::size_t d = x.dim();
    Poly z = pair(x, y, false);
    PolyBuilder out(d);
    double inv_fact = 1.0;
    for (unsigned t = 0; t <= top && !z.is_zero(); ++t) {
        if (t > 0) {
            z = p_lambda(z, l, false);
            inv_fact /= t;
        }
        for (const auto& [mn, c] : z.terms()) out.add(mn.slice(0, d) + mn.slice(d, d), c * inv_fact);
    }
    return std::move(out).build();
}

inline Poly star_power(const Poly& x, unsigned n, const BilForm& l) {
    Poly r = Poly::one(x.dim());
    for (unsigned i = 0; i < n; ++i) r = star(r, x, l);
    return r;
}

inline Poly commutator(const Poly& x, const Poly& y, const BilForm& l) { return star(x, y, l) - star(y, x, l); }

/// Projective seminorm of a pair polynomial for Hilbert seminorms alpha on
/// the left and beta on the right. Both factors are Hilbert spaces, so the
/// projective norm is the trace norm of the coefficient matrix written in
/// orthonormal bases.
inline double pair_projective_norm(const Poly& z, const HermForm& alpha, const HermForm& beta) {
    const std::size_t d = alpha.dim();
    require_same_dim(z.dim(), 2 * d, "pair_projective_norm");
    require_same_dim(beta.dim(), d, "pair_projective_norm");
    const auto& ba = alpha.frame().coords;
    const auto& bb = beta.frame().coords;
    const std::size_t ra = alpha.frame().rank;
    CMatrix blk = CMatrix::Zero(ba.rows() + bb.rows(), 2 * static_cast<Eigen::Index>(d));
    blk.topLeftCorner(ba.rows(), static_cast<Eigen::Index>(d)) = ba;
    blk.bottomRightCorner(bb.rows(), static_cast<Eigen::Index>(d)) = bb;
    const Poly zc = substitute(z, blk);
    if (zc.is_zero()) return 0.0;
    std::map<MultiIndex, Eigen::Index> rows, cols;
    for (const auto& [mn, c] : zc.terms()) {
        rows.emplace(mn.slice(0, ra), 0);
        cols.emplace(mn.slice(ra, mn.size() - ra), 0);
    }
    Eigen::Index i = 0;
    for (auto& [_, v] : rows) v = i++;
    i = 0;
    for (auto& [_, v] : cols) v = i++;
    CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
    for (const auto& [mn, c] : zc.terms()) {
        const MultiIndex a = mn.slice(0, ra), b = mn.slice(ra, mn.size() - ra);
        m(rows[a], cols[b]) = c * std::sqrt(a.factorial_product() * b.factorial_product());
    }
    return Eigen::BDCSVD<CMatrix>(m).singularValues().sum();
}

/// Result of a product of truncated completion elements.
struct TruncatedProduct {
    Poly product;
    double error_bound = 0.0;
};

/// X star Y together with a bound, in the gamma seminorm, on the distance
/// to the product of the untruncated elements. tail_x and tail_y are the
/// 8R gamma seminorms of the discarded tails; R >= 1 scales the bound as
/// 4R / (2R - 1).
inline TruncatedProduct star_truncated(const Poly& x, const Poly& y, const BilForm& l, const HermForm& gamma,
                                       double tail_x, double tail_y, double r = 1.0) {
    if (!in_PVLambda(gamma, l)) throw PreconditionError("star_truncated: gamma is not in P_{V,Lambda}");
    if (r < 1.0) throw PreconditionError("star_truncated: R must be at least 1");
    if (tail_x < 0 || tail_y < 0) throw std::invalid_argument("star_truncated: negative tail seminorm");
    TruncatedProduct out{star(x, y, l), 0.0};
    if (tail_x == 0.0 && tail_y == 0.0) return out;
    const double c = 4.0 * r / (2.0 * r - 1.0);
    const double nx = seminorm_scaled(x, gamma, 8.0 * r);
    const double ny = seminorm_scaled(y, gamma, 8.0 * r);
    // X_full Y_full - X Y = tail_X Y_full + X tail_Y
    out.error_bound = c * (tail_x * (ny + tail_y) + nx * tail_y);
    return out;
}

/// Hermitian square root of a PSD Hermitian matrix.
inline CMatrix psd_sqrt(const CMatrix& l, double tol = 1e-10) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es((l + l.adjoint()) / 2.0);
    const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    if (es.eigenvalues().size() > 0 && es.eigenvalues().minCoeff() < -tol * scale)
        throw PreconditionError("matrix is not positive semidefinite");
    const Eigen::VectorXd s = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * s.asDiagonal() * es.eigenvectors().adjoint();
}

/// X_1, ..., X_n with (P_Lambda)^t (X* (x) X) = sum_i X_i* (x) X_i, for
/// Hermitian Lambda with Lambda(bar v, v) >= 0.
inline std::vector<Poly> sum_of_squares_decomposition(const Poly& x, const BilForm& l, unsigned t) {
    require_same_dim(x.dim(), l.dim(), "sum_of_squares_decomposition");
    if (!l.is_hermitian()) throw PreconditionError("sum_of_squares_decomposition: Lambda is not Hermitian");
    const CMatrix r = psd_sqrt(l.matrix());
    std::vector<Poly> cur{x};
    for (unsigned s = 0; s < t; ++s) {
        std::vector<Poly> next;
        for (const auto& y : cur) {
            std::vector<Poly> parts;
            for (std::size_t j = 0; j < x.dim(); ++j) parts.push_back(partial(y, j));
            for (Eigen::Index p = 0; p < r.rows(); ++p) {
                PolyBuilder b(x.dim());
                for (std::size_t j = 0; j < x.dim(); ++j) b.add(parts[j], r(p, static_cast<Eigen::Index>(j)));
                Poly xp = std::move(b).build();
                if (!xp.is_zero()) next.push_back(std::move(xp));
            }
        }
        cur = std::move(next);
    }
    return cur;
}

} // namespace starprod
