#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <ostream>
#include <span>
#include <vector>

#include "starprod/errors.hpp"
#include "starprod/multi_index.hpp"

namespace starprod {

using Complex = std::complex<double>;

/// Relative magnitude below which coefficients are dropped after every
/// arithmetic operation (relative to the largest coefficient).
inline constexpr double kPruneRelative = 1e-14;

/// Element of the symmetric algebra S(C^d) in the monomial basis E_m.
///
/// E_m is the symmetrised tensor e_1^{m_1} v ... v e_d^{m_d}, so that
/// E_m v E_n = E_{m+n}. Values are immutable; all operations return new
/// polynomials. Terms are kept ordered by (degree, lex exponents).
class Poly {
public:
    using Terms = std::map<MultiIndex, Complex>;

    Poly() = default;

    explicit Poly(std::size_t dim) : dim_(dim) { check_capacity(); }

    Poly(std::size_t dim, Terms terms) : dim_(dim), terms_(std::move(terms)) {
        check_capacity();
        for (const auto& [m, c] : terms_) require_same_dim(m.size(), dim_, "Poly");
        normalize();
    }

    struct ExactTag {};

    Poly(std::size_t dim, Terms terms, ExactTag) : dim_(dim), terms_(std::move(terms)) {
        check_capacity();
        for (const auto& [m, c] : terms_) require_same_dim(m.size(), dim_, "Poly");
        std::erase_if(terms_, [](const auto& t) { return t.second == Complex{}; });
    }

    static Poly constant(std::size_t dim, Complex c) {
        Terms t;
        t[MultiIndex(dim)] = c;
        return Poly(dim, std::move(t));
    }

    static Poly one(std::size_t dim) { return constant(dim, 1.0); }

    static Poly monomial(const MultiIndex& m, Complex c = 1.0) {
        Terms t;
        t[m] = c;
        return Poly(m.size(), std::move(t));
    }

    /// The degree-one element sum_i v_i e_i.
    static Poly linear(std::span<const Complex> v) {
        Terms t;
        for (std::size_t i = 0; i < v.size(); ++i)
            if (v[i] != Complex{}) t[MultiIndex::unit(v.size(), i)] = v[i];
        return Poly(v.size(), std::move(t));
    }

    std::size_t dim() const noexcept { return dim_; }
    const Terms& terms() const noexcept { return terms_; }
    std::size_t size() const noexcept { return terms_.size(); }
    bool is_zero() const noexcept { return terms_.empty(); }

    Complex coeff(const MultiIndex& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? Complex{} : it->second;
    }

    /// Largest degree carrying a coefficient; 0 for the zero polynomial.
    unsigned max_degree() const noexcept { return terms_.empty() ? 0 : terms_.rbegin()->first.degree(); }

    bool is_homogeneous(unsigned k) const noexcept {
        return std::all_of(terms_.begin(), terms_.end(), [k](const auto& t) { return t.first.degree() == k; });
    }

    double max_abs() const noexcept {
        double m = 0.0;
        for (const auto& [_, c] : terms_) m = std::max(m, std::abs(c));
        return m;
    }

    Poly operator+(const Poly& o) const { return combine(o, 1.0); }
    Poly operator-(const Poly& o) const { return combine(o, -1.0); }
    Poly operator-() const { return *this * Complex(-1.0); }

    Poly operator*(Complex s) const {
        Terms t;
        if (s != Complex{})
            for (const auto& [m, c] : terms_) t.emplace_hint(t.end(), m, c * s);
        return Poly(dim_, std::move(t));
    }

    friend Poly operator*(Complex s, const Poly& p) { return p * s; }

    Poly& operator+=(const Poly& o) { return *this = *this + o; }
    Poly& operator-=(const Poly& o) { return *this = *this - o; }

    /// Exact equality of the normalised term maps.
    bool operator==(const Poly& o) const { return dim_ == o.dim_ && terms_ == o.terms_; }

private:
    void check_capacity() const {
        if (dim_ > MultiIndex::kMaxDim) throw std::length_error("Poly dimension exceeds multi-index capacity");
    }

    Poly combine(const Poly& o, double sign) const {
        require_same_dim(dim_, o.dim_, "Poly addition");
        Terms t = terms_;
        for (const auto& [m, c] : o.terms_) t[m] += sign * c;
        return Poly(dim_, std::move(t));
    }

    void normalize() {
        const double cut = kPruneRelative * max_abs();
        std::erase_if(terms_, [cut](const auto& t) {
            const double a = std::abs(t.second);
            return a == 0.0 || a < cut;
        });
    }

    std::size_t dim_ = 0;
    Terms terms_;
};

/// Accumulates terms of a polynomial under construction.
class PolyBuilder {
public:
    explicit PolyBuilder(std::size_t dim) : dim_(dim) {}

    void add(const MultiIndex& m, Complex c) {
        if (c != Complex{}) terms_[m] += c;
    }

    void add(const Poly& p, Complex scale = 1.0) {
        require_same_dim(dim_, p.dim(), "PolyBuilder");
        for (const auto& [m, c] : p.terms()) add(m, c * scale);
    }

    Poly build() && { return Poly(dim_, std::move(terms_)); }

    /// Drops exact zeros only. For intermediates whose small coefficients
    /// are later multiplied by large factors.
    Poly build_unpruned() && { return Poly(dim_, std::move(terms_), Poly::ExactTag{}); }

private:
    std::size_t dim_;
    Poly::Terms terms_;
};

/// max_m |a_m - b_m| / max(max_m |a_m|, max_m |b_m|); 0 when both vanish.
inline double relative_difference(const Poly& a, const Poly& b) {
    const Poly d = a - b;
    const double scale = std::max(a.max_abs(), b.max_abs());
    if (scale == 0.0) return 0.0;
    return d.max_abs() / scale;
}

inline bool approx_equal(const Poly& a, const Poly& b, double rel = 1e-10) {
    return a.dim() == b.dim() && relative_difference(a, b) <= rel;
}

inline std::ostream& operator<<(std::ostream& os, const Poly& p) {
    if (p.is_zero()) return os << "0";
    bool first = true;
    for (const auto& [m, c] : p.terms()) {
        if (!first) os << " + ";
        first = false;
        os << "(" << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i)E" << m;
    }
    return os;
}

} // namespace starprod
