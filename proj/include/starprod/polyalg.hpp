#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "starprod/poly.hpp"

namespace starprod {

using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

inline CVector to_vector(std::span<const Complex> v) {
    CVector r(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) r(static_cast<Eigen::Index>(i)) = v[i];
    return r;
}

inline Poly linear(const CVector& v) {
    return Poly::linear(std::span<const Complex>(v.data(), static_cast<std::size_t>(v.size())));
}

/// Undeformed symmetric product X v Y.
inline Poly vee(const Poly& x, const Poly& y) {
    require_same_dim(x.dim(), y.dim(), "vee");
    PolyBuilder out(x.dim());
    for (const auto& [m, a] : x.terms())
        for (const auto& [n, b] : y.terms()) out.add(m + n, a * b);
    return std::move(out).build();
}

/// X^{v n}; n = 0 gives the unit.
inline Poly vee_power(const Poly& x, unsigned n) {
    Poly r = Poly::one(x.dim());
    for (unsigned i = 0; i < n; ++i) r = vee(r, x);
    return r;
}

inline Poly component_of_degree(const Poly& x, unsigned k) {
    Poly::Terms t;
    for (const auto& [m, c] : x.terms())
        if (m.degree() == k) t.emplace_hint(t.end(), m, c);
    return Poly(x.dim(), std::move(t));
}

/// Sum of the components of degree <= n.
inline Poly truncate(const Poly& x, unsigned n) {
    Poly::Terms t;
    for (const auto& [m, c] : x.terms())
        if (m.degree() <= n) t.emplace_hint(t.end(), m, c);
    return Poly(x.dim(), std::move(t));
}

/// Element of the (unsymmetrised) tensor algebra as a finite sum of
/// coefficient times simple tensor x_1 (x) ... (x) x_k.
struct RawTensor {
    struct Summand {
        Complex coeff;
        std::vector<CVector> factors;
    };

    std::size_t dim = 0;
    std::vector<Summand> summands;

    void add(Complex c, std::vector<CVector> factors) {
        for (const auto& f : factors)
            if (static_cast<std::size_t>(f.size()) != dim) throw DimensionMismatch(f.size(), dim, "RawTensor");
        summands.push_back({c, std::move(factors)});
    }
};

/// Tensor product of raw tensors (concatenation of factor sequences).
inline RawTensor tensor(const RawTensor& a, const RawTensor& b) {
    require_same_dim(a.dim, b.dim, "tensor");
    RawTensor r{a.dim, {}};
    for (const auto& s : a.summands)
        for (const auto& t : b.summands) {
            auto f = s.factors;
            f.insert(f.end(), t.factors.begin(), t.factors.end());
            r.summands.push_back({s.coeff * t.coeff, std::move(f)});
        }
    return r;
}

inline Poly symmetrize(const RawTensor& t) {
    PolyBuilder out(t.dim);
    for (const auto& s : t.summands) {
        Poly p = Poly::constant(t.dim, s.coeff);
        for (const auto& f : s.factors) p = vee(p, linear(f));
        out.add(p);
    }
    return std::move(out).build();
}

/// Sorted index expansion i_1 <= ... <= i_k of a multi-index.
inline std::vector<std::size_t> index_sequence(const MultiIndex& m) {
    std::vector<std::size_t> seq;
    seq.reserve(m.degree());
    for (std::size_t i = 0; i < m.size(); ++i)
        for (unsigned r = 0; r < m[i]; ++r) seq.push_back(i);
    return seq;
}

/// The symmetric tensor E_m written out in T(V): the average over the
/// distinct orderings of its index sequence.
inline RawTensor to_raw(const Poly& x) {
    RawTensor r{x.dim(), {}};
    for (const auto& [m, c] : x.terms()) {
        auto seq = index_sequence(m);
        std::vector<std::vector<std::size_t>> orders;
        do orders.push_back(seq);
        while (std::next_permutation(seq.begin(), seq.end()));
        const double w = 1.0 / static_cast<double>(orders.size());
        for (const auto& o : orders) {
            std::vector<CVector> f;
            for (std::size_t i : o) f.push_back(CVector::Unit(static_cast<Eigen::Index>(x.dim()), static_cast<Eigen::Index>(i)));
            r.summands.push_back({c * w, std::move(f)});
        }
    }
    return r;
}

/// Image of X under e_i -> sum_j M(j, i) f_j, extended as a v-homomorphism.
/// M has d columns; the result lives in M.rows() variables.
inline Poly substitute(const Poly& x, const CMatrix& m) {
    if (static_cast<std::size_t>(m.cols()) != x.dim()) throw DimensionMismatch(m.cols(), x.dim(), "substitute");
    const std::size_t target = static_cast<std::size_t>(m.rows());
    std::vector<std::vector<Poly>> powers(x.dim());
    for (std::size_t i = 0; i < x.dim(); ++i) powers[i].push_back(Poly::one(target));
    auto power = [&](std::size_t i, unsigned e) -> const Poly& {
        auto& p = powers[i];
        while (p.size() <= e) p.push_back(vee(p.back(), linear(m.col(static_cast<Eigen::Index>(i)))));
        return p[e];
    };
    PolyBuilder out(target);
    for (const auto& [mi, c] : x.terms()) {
        Poly term = Poly::constant(target, c);
        for (std::size_t i = 0; i < x.dim(); ++i)
            if (mi[i] > 0) term = vee(term, power(i, mi[i]));
        out.add(term);
    }
    return std::move(out).build();
}

/// X*: conjugate coefficients and apply the basis involution
/// e_i -> sum_j J(j, i) e_j (identity when omitted).
inline Poly involution(const Poly& x, const std::optional<CMatrix>& conj_basis = std::nullopt) {
    Poly::Terms t;
    for (const auto& [m, c] : x.terms()) t.emplace_hint(t.end(), m, std::conj(c));
    Poly r(x.dim(), std::move(t));
    if (!conj_basis) return r;
    return substitute(r, *conj_basis);
}

/// Partial derivative along e_i: E_m -> m_i E_{m - delta_i}.
inline Poly partial(const Poly& x, std::size_t i) {
    PolyBuilder out(x.dim());
    for (const auto& [m, c] : x.terms()) {
        if (m[i] == 0) continue;
        MultiIndex n = m;
        n.decrement(i);
        out.add(n, c * static_cast<double>(m[i]));
    }
    return std::move(out).build();
}

/// D_rho = sum_i rho(e_i) partial_i.
inline Poly directional_derivative(const Poly& x, const CVector& rho) {
    require_same_dim(static_cast<std::size_t>(rho.size()), x.dim(), "directional_derivative");
    PolyBuilder out(x.dim());
    for (const auto& [m, c] : x.terms())
        for (std::size_t i = 0; i < x.dim(); ++i) {
            const Complex r = rho(static_cast<Eigen::Index>(i));
            if (m[i] == 0 || r == Complex{}) continue;
            MultiIndex n = m;
            n.decrement(i);
            out.add(n, c * r * static_cast<double>(m[i]));
        }
    return std::move(out).build();
}

/// tau*_rho = sum_t D_rho^t / t!, which terminates at the top degree.
inline Poly translate(const Poly& x, const CVector& rho) {
    Poly sum = x;
    Poly term = x;
    for (unsigned t = 1; t <= x.max_degree(); ++t) {
        term = directional_derivative(term, rho) * Complex(1.0 / t);
        if (term.is_zero()) break;
        sum += term;
    }
    return sum;
}

/// delta_rho(X) = <tau*_rho X>_0, i.e. X as a polynomial function at rho.
inline Complex evaluate(const Poly& x, const CVector& rho) {
    require_same_dim(static_cast<std::size_t>(rho.size()), x.dim(), "evaluate");
    Complex s{};
    for (const auto& [m, c] : x.terms()) {
        Complex p = c;
        for (std::size_t i = 0; i < x.dim(); ++i)
            for (unsigned e = 0; e < m[i]; ++e) p *= rho(static_cast<Eigen::Index>(i));
        s += p;
    }
    return s;
}

/// Coherent vector truncated at degree n: sum_{k<=n} v^{v k} / k!, i.e.
/// sum_{|m|<=n} v^m / m! E_m. Coefficients are exact, not pruned: the tail
/// is tiny but star contraction scales it back up.
inline Poly exp_vee_truncated(const CVector& v, unsigned n) {
    const std::size_t d = static_cast<std::size_t>(v.size());
    PolyBuilder out(d);
    for (unsigned k = 0; k <= n; ++k)
        for_each_multi_index(d, k, [&](const MultiIndex& m) {
            Complex c = 1.0;
            for (std::size_t i = 0; i < d; ++i)
                for (unsigned e = 1; e <= m[i]; ++e) c *= v(static_cast<Eigen::Index>(i)) / static_cast<double>(e);
            out.add(m, c);
        });
    return std::move(out).build_unpruned();
}

} // namespace starprod
