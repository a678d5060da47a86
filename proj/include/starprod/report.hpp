#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "starprod/io.hpp"

namespace starprod {

/// Default acceptance threshold on observed / bound.
inline constexpr double kDefaultTol = 1.0 + 1e-9;

struct ReportRow {
    std::uint64_t sample_id = 0;
    unsigned k = 0;
    unsigned l_or_n = 0;
    double observed = 0.0;
    double bound = 0.0;
    std::string label;

    /// observed / bound, with 0/0 read as 0 and x/0 as +inf.
    double ratio() const {
        if (observed == 0.0) return 0.0;
        if (bound == 0.0) return INFINITY;
        return observed / bound;
    }
};

/// Outcome of one verification suite. A row passes when its ratio is at
/// most `tol`; tol = 0 therefore fails any suite with a nonzero observation.
struct Report {
    Report() = default;
    Report(std::string suite_name, std::string inequality_text, double tolerance)
        : suite(std::move(suite_name)), inequality(std::move(inequality_text)), tol(tolerance) {}

    std::string suite;
    std::string inequality;
    double tol = kDefaultTol;
    std::vector<ReportRow> rows;
    std::uint64_t checks = 0;
    Json witness;

    void add(ReportRow r, const Json& inputs = {}) {
        if (!(r.ratio() <= tol) && witness.is_null()) {
            witness = inputs;
            witness["sample_id"] = r.sample_id;
            witness["observed"] = r.observed;
            witness["bound"] = r.bound;
            witness["suite"] = suite;
        }
        rows.push_back(std::move(r));
        ++checks;
    }

    std::size_t violations() const {
        std::size_t v = 0;
        for (const auto& r : rows) v += !(r.ratio() <= tol);
        return v;
    }

    bool passed() const { return !rows.empty() && violations() == 0; }

    double max_ratio() const {
        double m = 0.0;
        for (const auto& r : rows) m = std::max(m, r.ratio());
        return m;
    }
};

inline std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

/// CSV text: a comment line naming the inequality, then one row per check.
inline std::string to_csv(const Report& r) {
    std::string s = "# " + r.suite + ": " + r.inequality + "\n";
    s += "sample_id,k,l_or_n,observed,bound,ratio,case\n";
    for (const auto& row : r.rows) {
        s += std::to_string(row.sample_id) + "," + std::to_string(row.k) + "," + std::to_string(row.l_or_n) + "," +
             format_double(row.observed) + "," + format_double(row.bound) + "," + format_double(row.ratio()) + "," +
             row.label + "\n";
    }
    return s;
}

/// Shared settings of the sampling verifiers.
struct VerifyConfig {
    std::size_t dim = 3;
    unsigned maxdeg = 5;
    std::size_t samples = 500;
    std::uint64_t seed = 42;
    double tol = kDefaultTol;
};

} // namespace starprod
