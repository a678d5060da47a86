#pragma once

#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "starprod/polyalg.hpp"

namespace starprod {

/// Relative eigenvalue cutoff separating the kernel of a PSD form.
inline constexpr double kKernelCutoff = 1e-12;
/// Slack allowed when a norm is compared against 1.
inline constexpr double kNormSlack = 1e-10;

/// Data of an alpha-orthonormal frame.
///
/// With A = U diag(lambda) U^dagger restricted to the eigenvalues above the
/// cutoff, `change` is C = diag(lambda)^{-1/2} U^dagger, so C A C^dagger = 1
/// and the frame vectors are f_p = sum_i conj(C_pi) e_i. `coords` is
/// B = diag(lambda)^{1/2} U^dagger: a vector x has frame coordinates B x and
/// B^dagger B = A, B C^dagger = 1.
struct OrthoFrame {
    std::size_t rank = 0;
    CMatrix change;
    CMatrix coords;
    CMatrix kernel;
    Eigen::VectorXd eigenvalues;
};

/// Thrown by form constructors on non-Hermitian or indefinite input.
class FormError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

namespace detail {

inline double hermitian_defect(const CMatrix& a) {
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    return (a - a.adjoint()).cwiseAbs().maxCoeff() / scale;
}

inline OrthoFrame make_frame(const CMatrix& a) {
    const Eigen::Index d = a.rows();
    OrthoFrame f;
    if (d == 0) return f;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(a);
    f.eigenvalues = es.eigenvalues();
    const double lmax = std::max(0.0, f.eigenvalues.maxCoeff());
    const double cut = kKernelCutoff * lmax;
    std::vector<Eigen::Index> keep, drop;
    for (Eigen::Index i = d - 1; i >= 0; --i) (lmax > 0 && f.eigenvalues(i) > cut ? keep : drop).push_back(i);
    f.rank = keep.size();
    f.change.resize(static_cast<Eigen::Index>(f.rank), d);
    f.coords.resize(static_cast<Eigen::Index>(f.rank), d);
    for (std::size_t p = 0; p < keep.size(); ++p) {
        const double l = f.eigenvalues(keep[p]);
        const auto u = es.eigenvectors().col(keep[p]);
        f.change.row(static_cast<Eigen::Index>(p)) = u.adjoint() / std::sqrt(l);
        f.coords.row(static_cast<Eigen::Index>(p)) = u.adjoint() * std::sqrt(l);
    }
    f.kernel.resize(d, static_cast<Eigen::Index>(drop.size()));
    for (std::size_t q = 0; q < drop.size(); ++q) f.kernel.col(static_cast<Eigen::Index>(q)) = es.eigenvectors().col(drop[q]);
    return f;
}

} // namespace detail

/// Positive semidefinite Hermitian form, A_ij = <e_i, e_j>_alpha
/// (antilinear in the first slot). The frame is computed once on
/// construction, so instances are immutable and thread-safe.
class HermForm {
public:
    HermForm() = default;

    explicit HermForm(CMatrix a) : a_(std::move(a)) {
        if (a_.rows() != a_.cols()) throw FormError("HermForm: matrix is not square");
        if (detail::hermitian_defect(a_) > 1e-12) throw FormError("HermForm: matrix is not Hermitian");
        a_ = (a_ + a_.adjoint()) / 2.0;
        frame_ = detail::make_frame(a_);
        if (a_.rows() > 0) {
            const double lmin = frame_.eigenvalues.minCoeff();
            const double lmax = std::max(1e-300, frame_.eigenvalues.cwiseAbs().maxCoeff());
            if (lmin < -kKernelCutoff * lmax) {
                std::ostringstream os;
                os << "HermForm: matrix is not positive semidefinite (eigenvalue " << lmin << ")";
                throw FormError(os.str());
            }
        }
    }

    static HermForm identity(std::size_t d) { return HermForm(CMatrix::Identity(d, d)); }

    std::size_t dim() const noexcept { return static_cast<std::size_t>(a_.rows()); }
    const CMatrix& matrix() const noexcept { return a_; }
    const OrthoFrame& frame() const noexcept { return frame_; }

    /// <v, w>_alpha for coordinate vectors.
    Complex operator()(const CVector& v, const CVector& w) const { return v.dot(a_ * w); }

    HermForm scaled(double p) const {
        if (p < 0) throw FormError("HermForm: negative scale");
        return HermForm(a_ * p);
    }

    HermForm operator+(const HermForm& o) const {
        require_same_dim(dim(), o.dim(), "HermForm sum");
        return HermForm(a_ + o.a_);
    }

private:
    CMatrix a_;
    OrthoFrame frame_;
};

/// Bilinear form on V, L_ij = Lambda(e_i, e_j).
class BilForm {
public:
    BilForm() = default;
    explicit BilForm(CMatrix l) : l_(std::move(l)) {
        if (l_.rows() != l_.cols()) throw FormError("BilForm: matrix is not square");
    }

    static BilForm zero(std::size_t d) { return BilForm(CMatrix::Zero(d, d)); }

    std::size_t dim() const noexcept { return static_cast<std::size_t>(l_.rows()); }
    const CMatrix& matrix() const noexcept { return l_; }

    Complex operator()(const CVector& v, const CVector& w) const { return (v.transpose() * l_ * w)(0, 0); }

    BilForm operator+(const BilForm& o) const { return BilForm(l_ + o.l_); }
    BilForm operator-(const BilForm& o) const { return BilForm(l_ - o.l_); }
    BilForm operator*(Complex s) const { return BilForm(l_ * s); }

    /// Lambda*(v, w) = conj(Lambda(bar w, bar v)).
    BilForm conjugate(const std::optional<CMatrix>& conj_basis = std::nullopt) const {
        if (!conj_basis) return BilForm(l_.adjoint());
        const CMatrix& j = *conj_basis;
        return BilForm((j.transpose() * l_.transpose() * j).conjugate());
    }

    bool is_symmetric(double tol = 1e-12) const {
        return (l_ - l_.transpose()).cwiseAbs().maxCoeff() <= tol * std::max(1.0, l_.cwiseAbs().maxCoeff());
    }

    bool is_hermitian(double tol = 1e-12) const {
        return (l_ - l_.adjoint()).cwiseAbs().maxCoeff() <= tol * std::max(1.0, l_.cwiseAbs().maxCoeff());
    }

private:
    CMatrix l_;
};

/// Lambda_alpha(v, w) = <bar v, w>_alpha.
inline BilForm lambda_alpha(const HermForm& alpha, const std::optional<CMatrix>& conj_basis = std::nullopt) {
    if (!conj_basis) return BilForm(alpha.matrix());
    return BilForm(conj_basis->adjoint() * alpha.matrix());
}

inline OrthoFrame orthonormalize(const HermForm& alpha) { return alpha.frame(); }

/// X expressed in the alpha-orthonormal frame coordinates.
inline Poly frame_coordinates(const Poly& x, const HermForm& alpha) {
    require_same_dim(x.dim(), alpha.dim(), "frame_coordinates");
    return substitute(x, alpha.frame().coords);
}

/// Fock pairing of polynomials given in orthonormal coordinates.
inline Complex orthonormal_pairing(const Poly& x, const Poly& y) {
    Complex s{};
    auto it = x.terms().begin();
    auto jt = y.terms().begin();
    while (it != x.terms().end() && jt != y.terms().end()) {
        if (it->first < jt->first) ++it;
        else if (jt->first < it->first) ++jt;
        else {
            s += std::conj(it->second) * jt->second * it->first.factorial_product();
            ++it;
            ++jt;
        }
    }
    return s;
}

/// <X, Y>_alpha extended to S(V) with the k! weighting.
inline Complex extended_inner_product(const Poly& x, const Poly& y, const HermForm& alpha) {
    require_same_dim(x.dim(), y.dim(), "extended_inner_product");
    return orthonormal_pairing(frame_coordinates(x, alpha), frame_coordinates(y, alpha));
}

/// Squared seminorm of each homogeneous component, indexed by degree.
inline std::vector<double> degree_norms_squared(const Poly& x, const HermForm& alpha) {
    const Poly xp = frame_coordinates(x, alpha);
    std::vector<double> out(x.max_degree() + 1, 0.0);
    for (const auto& [m, c] : xp.terms()) out[m.degree()] += std::norm(c) * m.factorial_product();
    return out;
}

inline double seminorm(const Poly& x, const HermForm& alpha) {
    double s = 0.0;
    for (double v : degree_norms_squared(x, alpha)) s += v;
    return std::sqrt(s);
}

/// ||X||_{p alpha}, using that the degree-k part scales by p^{k/2}.
inline double seminorm_scaled(const Poly& x, const HermForm& alpha, double p) {
    double s = 0.0, w = 1.0;
    for (double v : degree_norms_squared(x, alpha)) {
        s += w * v;
        w *= p;
    }
    return std::sqrt(s);
}

/// Permanent of a square matrix by Ryser's formula.
inline Complex permanent(const CMatrix& g) {
    const Eigen::Index n = g.rows();
    if (n == 0) return 1.0;
    if (n > 20) throw std::length_error("permanent: matrix too large");
    Complex total{};
    for (unsigned long s = 1; s < (1ul << n); ++s) {
        Complex prod = 1.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            Complex row{};
            for (Eigen::Index j = 0; j < n; ++j)
                if (s >> j & 1ul) row += g(i, j);
            prod *= row;
        }
        const int bits = __builtin_popcountl(s);
        total += ((n - bits) % 2 == 0 ? 1.0 : -1.0) * prod;
    }
    return total;
}

/// <E_m, E_n>_alpha as the permanent of the Gram matrix of the sorted
/// index expansions. Independent of the frame path.
inline Complex inner_product_permanent_oracle(const MultiIndex& m, const MultiIndex& n, const HermForm& alpha) {
    if (m.degree() != n.degree()) return 0.0;
    if (m.degree() > 8) throw std::length_error("permanent oracle limited to degree 8");
    const auto is = index_sequence(m), js = index_sequence(n);
    const Eigen::Index k = static_cast<Eigen::Index>(is.size());
    CMatrix g(k, k);
    for (Eigen::Index p = 0; p < k; ++p)
        for (Eigen::Index q = 0; q < k; ++q)
            g(p, q) = alpha.matrix()(static_cast<Eigen::Index>(is[p]), static_cast<Eigen::Index>(js[q]));
    return permanent(g);
}

/// Inner product of raw tensors: k! prod_m <x_m, y_m>_alpha on simple
/// tensors of equal degree, zero across degrees.
inline Complex raw_inner_product(const RawTensor& x, const RawTensor& y, const HermForm& alpha) {
    Complex s{};
    for (const auto& a : x.summands)
        for (const auto& b : y.summands) {
            if (a.factors.size() != b.factors.size()) continue;
            Complex p = std::conj(a.coeff) * b.coeff;
            for (std::size_t i = 0; i < a.factors.size(); ++i) {
                p *= alpha(a.factors[i], b.factors[i]) * static_cast<double>(i + 1);
            }
            s += p;
        }
    return s;
}

inline double raw_seminorm(const RawTensor& x, const HermForm& alpha) {
    return std::sqrt(std::max(0.0, raw_inner_product(x, x, alpha).real()));
}

/// Upper bound of the projective seminorm from the monomial decomposition.
inline double projective_seminorm_upper(const Poly& x, const HermForm& alpha) {
    std::vector<double> basis_norm(x.dim());
    for (std::size_t j = 0; j < x.dim(); ++j)
        basis_norm[j] = std::sqrt(std::max(0.0, alpha.matrix()(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)).real()));
    double s = 0.0;
    for (const auto& [m, c] : x.terms()) {
        double p = std::abs(c);
        double fact = 1.0;
        for (unsigned f = 2; f <= m.degree(); ++f) fact *= f;
        p *= std::sqrt(fact);
        for (std::size_t j = 0; j < x.dim(); ++j) p *= std::pow(basis_norm[j], m[j]);
        s += p;
    }
    return s;
}

/// Hermitian pseudo-inverse square root A^{+1/2} of gamma.
inline CMatrix pseudo_inverse_sqrt(const HermForm& gamma) {
    const auto& f = gamma.frame();
    CMatrix p = CMatrix::Zero(gamma.dim(), gamma.dim());
    for (Eigen::Index q = 0; q < static_cast<Eigen::Index>(f.rank); ++q) {
        // Row q of C is u^dagger / sqrt(lambda).
        const CVector u = f.change.row(q).adjoint();
        p += u * u.adjoint() / u.norm();
    }
    return p;
}

/// Largest |Lambda(v, w)| on the gamma unit ball, or +inf when Lambda does
/// not vanish on the kernel of gamma.
inline double lambda_norm(const HermForm& gamma, const BilForm& l) {
    require_same_dim(gamma.dim(), l.dim(), "lambda_norm");
    const CMatrix& k = gamma.frame().kernel;
    const double tol = kKernelCutoff * std::max(1.0, l.matrix().norm());
    if (k.cols() > 0) {
        if ((k.transpose() * l.matrix()).cwiseAbs().maxCoeff() > tol) return INFINITY;
        if ((l.matrix() * k).cwiseAbs().maxCoeff() > tol) return INFINITY;
    }
    const CMatrix p = pseudo_inverse_sqrt(gamma);
    const CMatrix m = p.conjugate() * l.matrix() * p;
    if (m.size() == 0) return 0.0;
    return Eigen::JacobiSVD<CMatrix>(m).singularValues()(0);
}

/// Membership of gamma in P_{V,Lambda}: |Lambda(v, w)| <= ||v||_gamma ||w||_gamma.
inline bool in_PVLambda(const HermForm& gamma, const BilForm& l) { return lambda_norm(gamma, l) <= 1.0 + kNormSlack; }

/// Frobenius norm of a symmetric b in an alpha-orthonormal frame, or +inf
/// when b does not vanish on the kernel of alpha.
inline double hs_norm(const BilForm& b, const HermForm& alpha) {
    require_same_dim(b.dim(), alpha.dim(), "hs_norm");
    if (!b.is_symmetric()) throw PreconditionError("hilbert_schmidt_check: b is not symmetric");
    const auto& f = alpha.frame();
    const double tol = kKernelCutoff * std::max(1.0, b.matrix().norm());
    if (f.kernel.cols() > 0 && (b.matrix() * f.kernel).cwiseAbs().maxCoeff() > tol) return INFINITY;
    const CMatrix c = f.change.conjugate();
    return (c * b.matrix() * c.transpose()).norm();
}

inline bool hilbert_schmidt_check(const BilForm& b, const HermForm& alpha) { return hs_norm(b, alpha) <= 1.0 + kNormSlack; }

} // namespace starprod
