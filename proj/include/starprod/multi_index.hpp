#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>

namespace starprod {

/// Exponent vector m of a monomial E_m in the symmetric algebra over C^d.
///
/// Storage is inline (no heap allocation) with a fixed capacity, which is
/// large enough for pair tensors over d <= 16 (those live in 2d variables).
/// Total ordering is (degree, lexicographic exponents), which is the
/// iteration order of every polynomial in this library.
class MultiIndex {
public:
    static constexpr std::size_t kMaxDim = 32;
    using value_type = std::uint16_t;

    MultiIndex() = default;

    explicit MultiIndex(std::size_t dim) : dim_(check_dim(dim)) {}

    MultiIndex(std::initializer_list<unsigned> exps) : dim_(check_dim(exps.size())) {
        std::size_t i = 0;
        for (unsigned e : exps) set(i++, e);
    }

    template <typename Int>
    static MultiIndex from_span(std::span<const Int> exps) {
        MultiIndex m(exps.size());
        for (std::size_t i = 0; i < exps.size(); ++i) {
            if (exps[i] < 0) throw std::invalid_argument("negative exponent in multi-index");
            m.set(i, static_cast<unsigned>(exps[i]));
        }
        return m;
    }

    /// Unit multi-index delta_i.
    static MultiIndex unit(std::size_t dim, std::size_t i) {
        MultiIndex m(dim);
        m.set(i, 1);
        return m;
    }

    std::size_t size() const noexcept { return dim_; }
    unsigned degree() const noexcept { return degree_; }

    unsigned operator[](std::size_t i) const noexcept { return exps_[i]; }

    void set(std::size_t i, unsigned value) {
        if (i >= dim_) throw std::out_of_range("multi-index slot out of range");
        if (value > 0xFFFFu) throw std::overflow_error("multi-index exponent exceeds 65535");
        degree_ = degree_ - exps_[i] + value;
        exps_[i] = static_cast<value_type>(value);
    }

    void increment(std::size_t i, unsigned by = 1) { set(i, exps_[i] + by); }

    void decrement(std::size_t i, unsigned by = 1) {
        if (exps_[i] < by) throw std::underflow_error("multi-index exponent below zero");
        set(i, exps_[i] - by);
    }

    MultiIndex operator+(const MultiIndex& other) const {
        require_same_dim(other);
        MultiIndex r(*this);
        for (std::size_t i = 0; i < dim_; ++i) r.set(i, exps_[i] + other.exps_[i]);
        return r;
    }

    /// Concatenation (m, n) used for pair tensors E_m (x) E_n.
    MultiIndex concat(const MultiIndex& other) const {
        MultiIndex r(dim_ + other.dim_);
        for (std::size_t i = 0; i < dim_; ++i) r.set(i, exps_[i]);
        for (std::size_t i = 0; i < other.dim_; ++i) r.set(dim_ + i, other.exps_[i]);
        return r;
    }

    /// Sub-range [first, first + count) as a multi-index of its own.
    MultiIndex slice(std::size_t first, std::size_t count) const {
        if (first + count > dim_) throw std::out_of_range("multi-index slice out of range");
        MultiIndex r(count);
        for (std::size_t i = 0; i < count; ++i) r.set(i, exps_[first + i]);
        return r;
    }

    /// prod_j m_j!
    double factorial_product() const noexcept {
        double p = 1.0;
        for (std::size_t i = 0; i < dim_; ++i)
            for (unsigned f = 2; f <= exps_[i]; ++f) p *= f;
        return p;
    }

    bool operator==(const MultiIndex& other) const noexcept {
        return dim_ == other.dim_ && degree_ == other.degree_ &&
               std::equal(exps_.begin(), exps_.begin() + dim_, other.exps_.begin());
    }

    /// (degree, lexicographic) order. Multi-indices of different length
    /// order by length first so that mixed containers stay well-defined.
    bool operator<(const MultiIndex& other) const noexcept {
        if (dim_ != other.dim_) return dim_ < other.dim_;
        if (degree_ != other.degree_) return degree_ < other.degree_;
        return std::lexicographical_compare(exps_.begin(), exps_.begin() + dim_, other.exps_.begin(),
                                            other.exps_.begin() + dim_);
    }

    std::size_t hash() const noexcept {
        std::size_t h = dim_ * 0x9E3779B97F4A7C15ull;
        for (std::size_t i = 0; i < dim_; ++i) h = (h ^ exps_[i]) * 0x100000001B3ull + (h >> 29);
        return h;
    }

    std::string to_string() const {
        std::string s = "(";
        for (std::size_t i = 0; i < dim_; ++i) {
            if (i) s += ",";
            s += std::to_string(exps_[i]);
        }
        return s + ")";
    }

    void require_same_dim(const MultiIndex& other) const {
        if (dim_ != other.dim_) throw std::invalid_argument("multi-index dimension mismatch");
    }

private:
    static std::uint8_t check_dim(std::size_t dim) {
        if (dim > kMaxDim)
            throw std::length_error("multi-index dimension " + std::to_string(dim) + " exceeds capacity " +
                                    std::to_string(kMaxDim));
        return static_cast<std::uint8_t>(dim);
    }

    std::uint8_t dim_ = 0;
    unsigned degree_ = 0;
    std::array<value_type, kMaxDim> exps_{};
};

inline std::ostream& operator<<(std::ostream& os, const MultiIndex& m) { return os << m.to_string(); }

/// Calls f(m) for every multi-index of length dim and total degree k, in
/// increasing lexicographic order.
template <typename F>
void for_each_multi_index(std::size_t dim, unsigned k, F&& f) {
    MultiIndex m(dim);
    if (dim == 0) {
        if (k == 0) f(m);
        return;
    }
    // Recursive fill: slot i receives values in increasing order so the
    // emitted sequence is lexicographically increasing.
    std::function<void(std::size_t, unsigned)> rec = [&](std::size_t i, unsigned remaining) {
        if (i + 1 == dim) {
            m.set(i, remaining);
            f(static_cast<const MultiIndex&>(m));
            return;
        }
        for (unsigned v = 0; v <= remaining; ++v) {
            m.set(i, v);
            rec(i + 1, remaining - v);
        }
        m.set(i, 0);
    };
    rec(0, k);
}

/// Number of monomials of degree k in d variables, binom(k + d - 1, d - 1).
inline std::size_t count_monomials(std::size_t dim, unsigned k) {
    if (dim == 0) return k == 0 ? 1 : 0;
    double c = 1.0;
    for (std::size_t j = 1; j < dim; ++j) c = c * static_cast<double>(k + j) / static_cast<double>(j);
    return static_cast<std::size_t>(c + 0.5);
}

} // namespace starprod

template <>
struct std::hash<starprod::MultiIndex> {
    std::size_t operator()(const starprod::MultiIndex& m) const noexcept { return m.hash(); }
};
