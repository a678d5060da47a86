#pragma once

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <random>
#include <thread>
#include <vector>

#include "starprod/forms.hpp"

namespace starprod {

/// SplitMix64 finaliser; used to derive independent per-sample seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

inline std::uint64_t sample_seed(std::uint64_t seed, std::uint64_t sample_id) {
    return splitmix64(splitmix64(seed) ^ (sample_id * 0xD1B54A32D192ED03ull));
}

/// Portable generator: only raw mt19937_64 output is used, so sequences
/// do not depend on the standard library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t bits() { return eng_(); }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        return static_cast<std::uint64_t>((static_cast<unsigned __int128>(eng_()) * n) >> 64);
    }

    /// Uniform integer in [lo, hi].
    unsigned between(unsigned lo, unsigned hi) { return lo + static_cast<unsigned>(below(hi - lo + 1)); }

    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * M_PI * u2);
        has_spare_ = true;
        return r * std::cos(2.0 * M_PI * u2);
    }

    /// Standard complex normal, E|z|^2 = 1.
    Complex cnormal() {
        const double a = normal(), b = normal();
        return {a * M_SQRT1_2, b * M_SQRT1_2};
    }

    bool coin(double p = 0.5) { return uniform() < p; }

private:
    std::mt19937_64 eng_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// Options of the random polynomial sampler.
///
/// The number of terms is 1 + Geometric(1/2), capped at max_terms. Each term
/// gets a degree k (fixed when `degree` is set, otherwise drawn from
/// [0, maxdeg] with weight 2^{-k}), k exponent units dropped into uniformly
/// random slots, and a standard complex normal coefficient.
struct PolySampler {
    std::size_t dim = 2;
    unsigned maxdeg = 4;
    int degree = -1;
    unsigned max_terms = 6;
    bool real_coefficients = false;
};

inline unsigned sample_degree(Rng& rng, unsigned maxdeg) {
    double total = 0.0;
    for (unsigned k = 0; k <= maxdeg; ++k) total += std::ldexp(1.0, -static_cast<int>(k));
    double u = rng.uniform() * total;
    for (unsigned k = 0; k <= maxdeg; ++k) {
        u -= std::ldexp(1.0, -static_cast<int>(k));
        if (u < 0) return k;
    }
    return maxdeg;
}

inline Poly random_poly(Rng& rng, const PolySampler& s) {
    unsigned n = 1;
    while (n < s.max_terms && rng.coin()) ++n;
    PolyBuilder b(s.dim);
    for (unsigned t = 0; t < n; ++t) {
        const unsigned k = s.degree >= 0 ? static_cast<unsigned>(s.degree) : sample_degree(rng, s.maxdeg);
        MultiIndex m(s.dim);
        for (unsigned u = 0; u < k; ++u) m.increment(rng.below(s.dim));
        b.add(m, s.real_coefficients ? Complex(rng.normal()) : rng.cnormal());
    }
    Poly p = std::move(b).build();
    if (p.is_zero()) return Poly::one(s.dim);
    return p;
}

inline Poly random_poly(Rng& rng, std::size_t dim, unsigned maxdeg) { return random_poly(rng, PolySampler{dim, maxdeg}); }

inline Poly random_homogeneous(Rng& rng, std::size_t dim, unsigned k) {
    return random_poly(rng, PolySampler{dim, k, static_cast<int>(k)});
}

inline CVector random_cvector(Rng& rng, std::size_t d) {
    CVector v(static_cast<Eigen::Index>(d));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = rng.cnormal();
    return v;
}

inline CVector random_rvector(Rng& rng, std::size_t d) {
    CVector v(static_cast<Eigen::Index>(d));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = rng.normal();
    return v;
}

inline CMatrix random_cmatrix(Rng& rng, std::size_t rows, std::size_t cols) {
    CMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = rng.cnormal();
    return m;
}

/// G G^dagger for a d x rank complex Gaussian G plus a small multiple of
/// the identity when full rank, so that the form is well conditioned.
inline HermForm random_hermform(Rng& rng, std::size_t d, std::size_t rank) {
    const CMatrix g = random_cmatrix(rng, d, rank);
    CMatrix a = g * g.adjoint();
    if (rank >= d) a += 0.1 * CMatrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    return HermForm(a);
}

inline HermForm random_hermform(Rng& rng, std::size_t d) { return random_hermform(rng, d, d); }

inline BilForm random_bilform(Rng& rng, std::size_t d) { return BilForm(random_cmatrix(rng, d, d)); }

inline BilForm random_symmetric(Rng& rng, std::size_t d) {
    const CMatrix m = random_cmatrix(rng, d, d);
    return BilForm((m + m.transpose()) / 2.0);
}

/// Orthogonal projector onto the range of alpha.
inline CMatrix range_projector(const HermForm& alpha) {
    const auto& f = alpha.frame();
    CMatrix p = CMatrix::Zero(static_cast<Eigen::Index>(alpha.dim()), static_cast<Eigen::Index>(alpha.dim()));
    for (Eigen::Index q = 0; q < static_cast<Eigen::Index>(f.rank); ++q) {
        const CVector u = f.coords.row(q).adjoint().normalized();
        p += u * u.adjoint();
    }
    return p;
}

/// Rescales gamma by a factor in [1, 2) times the least admissible one so
/// that gamma lies in P_{V,Lambda}.
inline HermForm admissible_scaling(Rng& rng, const HermForm& gamma, const BilForm& l) {
    const double n = lambda_norm(gamma, l);
    if (!std::isfinite(n)) throw PreconditionError("Lambda does not vanish on the kernel of gamma");
    if (n == 0.0) return gamma;
    return gamma.scaled(n * rng.uniform(1.0, 2.0));
}

/// Number of worker threads: STARPROD_THREADS if set, else the hardware count.
inline unsigned worker_threads() {
    if (const char* env = std::getenv("STARPROD_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs f(i) for i in [0, n) on up to worker_threads() threads. f must only
/// write to per-index state; results are therefore order independent.
template <typename F>
void parallel_for(std::size_t n, F&& f) {
    const unsigned w = static_cast<unsigned>(std::min<std::size_t>(worker_threads(), n));
    if (w <= 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(w);
    for (unsigned t = 0; t < w; ++t)
        pool.emplace_back([&, t] {
            try {
                for (std::size_t i = t; i < n; i += w) f(i);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

} // namespace starprod
