#pragma once

#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "starprod/forms.hpp"

namespace starprod {

using Json = nlohmann::json;

/// Malformed or semantically invalid input; carries a location when known.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline Json to_json(const Poly& p) {
    Json terms = Json::array();
    for (const auto& [m, c] : p.terms()) {
        std::vector<unsigned> e(m.size());
        for (std::size_t i = 0; i < m.size(); ++i) e[i] = m[i];
        terms.push_back({{"exp", e}, {"re", c.real()}, {"im", c.imag()}});
    }
    return {{"dim", p.dim()}, {"terms", terms}};
}

inline Poly poly_from_json(const Json& j) {
    try {
        const std::size_t d = j.at("dim").get<std::size_t>();
        if (d == 0) throw InputError("poly: dim must be positive");
        Poly::Terms t;
        std::set<std::vector<long>> seen;
        for (const auto& term : j.at("terms")) {
            const auto e = term.at("exp").get<std::vector<long>>();
            if (e.size() != d) throw InputError("poly: exponent array length differs from dim");
            if (!seen.insert(e).second) throw InputError("poly: duplicate exponent array");
            const double re = term.value("re", 0.0), im = term.value("im", 0.0);
            t[MultiIndex::from_span<long>(e)] = Complex(re, im);
        }
        return Poly(d, std::move(t));
    } catch (const Json::exception& e) {
        throw InputError(std::string("poly: ") + e.what());
    }
}

inline Json to_json(const CMatrix& m) {
    Json re = Json::array(), im = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json r = Json::array(), s = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            r.push_back(m(i, j).real());
            s.push_back(m(i, j).imag());
        }
        re.push_back(r);
        im.push_back(s);
    }
    return {{"dim", m.rows()}, {"re", re}, {"im", im}};
}

inline CMatrix matrix_from_json(const Json& j) {
    try {
        const auto d = static_cast<Eigen::Index>(j.at("dim").get<std::size_t>());
        CMatrix m = CMatrix::Zero(d, d);
        auto fill = [&](const char* key, bool imag) {
            if (!j.contains(key)) return;
            const auto rows = j.at(key).get<std::vector<std::vector<double>>>();
            if (static_cast<Eigen::Index>(rows.size()) != d) throw InputError(std::string("matrix: '") + key + "' has wrong row count");
            for (Eigen::Index r = 0; r < d; ++r) {
                if (static_cast<Eigen::Index>(rows[r].size()) != d)
                    throw InputError(std::string("matrix: '") + key + "' has wrong column count");
                for (Eigen::Index c = 0; c < d; ++c) m(r, c) += imag ? Complex(0, rows[r][c]) : Complex(rows[r][c]);
            }
        };
        fill("re", false);
        fill("im", true);
        return m;
    } catch (const Json::exception& e) {
        throw InputError(std::string("matrix: ") + e.what());
    }
}

inline HermForm hermform_from_json(const Json& j) {
    try {
        return HermForm(matrix_from_json(j));
    } catch (const FormError& e) {
        throw InputError(e.what());
    }
}

inline BilForm bilform_from_json(const Json& j) { return BilForm(matrix_from_json(j)); }

inline Json to_json(const CVector& v) {
    Json re = Json::array(), im = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        re.push_back(v(i).real());
        im.push_back(v(i).imag());
    }
    return {{"re", re}, {"im", im}};
}

inline CVector vector_from_json(const Json& j) {
    if (j.is_array()) {
        const auto v = j.get<std::vector<double>>();
        CVector r(static_cast<Eigen::Index>(v.size()));
        for (std::size_t i = 0; i < v.size(); ++i) r(static_cast<Eigen::Index>(i)) = v[i];
        return r;
    }
    const auto re = j.at("re").get<std::vector<double>>();
    const auto im = j.contains("im") ? j.at("im").get<std::vector<double>>() : std::vector<double>(re.size(), 0.0);
    if (im.size() != re.size()) throw InputError("vector: re/im length mismatch");
    CVector r(static_cast<Eigen::Index>(re.size()));
    for (std::size_t i = 0; i < re.size(); ++i) r(static_cast<Eigen::Index>(i)) = Complex(re[i], im[i]);
    return r;
}

/// Parses text, turning syntax errors into "line L, column C" messages.
inline Json parse_json_text(const std::string& text, const std::string& source) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        std::size_t line = 1, col = 1;
        const std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        for (std::size_t i = 0; i < stop; ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        std::ostringstream os;
        os << source << ": malformed JSON at line " << line << ", column " << col;
        throw InputError(os.str());
    }
}

inline Json read_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError(path + ": cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_json_text(ss.str(), path);
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError(path + ": cannot write file");
    out << text;
}

} // namespace starprod
