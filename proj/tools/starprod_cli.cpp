// Command-line front end: products, verification suites and GNS data.

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "starprod/equivalence.hpp"
#include "starprod/gelfand.hpp"
#include "starprod/io.hpp"
#include "starprod/states.hpp"
#include "starprod/verify.hpp"

using namespace starprod;

namespace {

enum ExitCode { kPass = 0, kVerifyFail = 1, kInputError = 2, kPositivityFail = 3 };

void emit(const std::string& text, const std::string& out) {
    if (out.empty() || out == "-") std::cout << text;
    else write_text_file(out, text);
}

StateDesc state_from_json(const Json& j, std::size_t d) {
    StateDesc s = StateDesc::vacuum(d);
    if (j.contains("rho")) s.rho = vector_from_json(j.at("rho"));
    if (j.contains("b")) s.b = bilform_from_json(j.at("b"));
    if (j.contains("z")) s.z = j.at("z").get<double>();
    if (static_cast<std::size_t>(s.rho.size()) != d || s.b.dim() != d) throw InputError("state: dimension differs from Lambda");
    if (!s.b.is_symmetric()) throw InputError("state: b is not symmetric");
    return s;
}

Json gns_to_json(const GnsRep& rep) {
    Json mons = Json::array();
    for (const auto& m : rep.monomials) {
        std::vector<unsigned> e(m.size());
        for (std::size_t i = 0; i < m.size(); ++i) e[i] = m[i];
        mons.push_back(e);
    }
    Json basis = Json::array();
    for (Eigen::Index a = 0; a < rep.basis.cols(); ++a) basis.push_back(to_json(CVector(rep.basis.col(a))));
    return {{"cutoff", rep.cutoff},
            {"gns_cutoff_relative", kGnsCutoff},
            {"dimension", rep.dimension()},
            {"dims_by_degree", rep.dims_by_degree},
            {"min_eigenvalue", rep.min_eigenvalue},
            {"monomials", mons},
            {"gram", to_json(rep.gram)},
            {"basis", basis}};
}

struct VerifyOptions {
    std::string suite;
    VerifyConfig cfg;
    std::string out;
};

int run_verify(const VerifyOptions& o) {
    Report rep;
    if (o.suite == "plambda") rep = verify_plambda_bound(o.cfg);
    else if (o.suite == "chain") rep = verify_product_chain_bound(o.cfg);
    else if (o.suite == "equivalence") rep = verify_equivalence(o.cfg);
    else if (o.suite == "laplace") rep = verify_laplace_power_bound(o.cfg);
    else if (o.suite == "derivatives") rep = verify_derivative_estimates(o.cfg);
    else if (o.suite == "perturbation") rep = verify_perturbation(o.cfg);
    else if (o.suite == "truncation") rep = verify_truncation_bound(o.cfg);
    else if (o.suite == "binomis") rep = verify_binomis(8, 8, o.cfg.tol);
    else throw InputError("unknown suite '" + o.suite + "'");
    emit(to_csv(rep), o.out);
    std::cerr << rep.suite << ": " << rep.checks << " checks, " << rep.violations() << " violations, max ratio "
              << format_double(rep.max_ratio()) << "\n";
    if (rep.passed()) return kPass;
    const std::string wpath = (o.out.empty() || o.out == "-") ? "witness.json" : o.out + ".witness.json";
    Json w = rep.witness.is_null() ? Json{{"suite", rep.suite}} : rep.witness;
    write_text_file(wpath, w.dump(2) + "\n");
    std::cerr << "witness written to " << wpath << "\n";
    return kVerifyFail;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exponential star products on the symmetric algebra: products, estimate checks, GNS data"};
    app.require_subcommand(1);

    std::string x_path, y_path, lambda_path, out;
    bool commutator_flag = false;
    auto* mult = app.add_subcommand("multiply", "Product of two polynomials (v when --lambda is omitted)");
    mult->add_option("X", x_path, "Left factor (poly JSON)")->required();
    mult->add_option("Y", y_path, "Right factor (poly JSON)")->required();
    mult->add_option("--lambda", lambda_path, "Bilinear form (matrix JSON)");
    mult->add_flag("--commutator", commutator_flag, "Output X*Y - Y*X instead");
    mult->add_option("--out", out, "Output path (default stdout)");

    VerifyOptions vo;
    auto* ver = app.add_subcommand("verify", "Run a verification suite and print its CSV report");
    ver->add_option("--suite", vo.suite, "plambda|chain|equivalence|laplace|derivatives|perturbation|truncation|binomis")->required();
    ver->add_option("--dim", vo.cfg.dim, "Largest ambient dimension")->check(CLI::Range(1, 8));
    ver->add_option("--maxdeg", vo.cfg.maxdeg, "Largest sampled degree")->check(CLI::Range(1, 12));
    ver->add_option("--samples", vo.cfg.samples, "Number of samples");
    ver->add_option("--seed", vo.cfg.seed, "Seed");
    ver->add_option("--tol", vo.cfg.tol, "Pass iff observed/bound <= tol");
    ver->add_option("--out", vo.out, "CSV output path (default stdout)");

    std::string state_path, alpha_path, series_path;
    unsigned n_cut = 4, nmax = 12;
    double eps = 0.0;
    auto* gns = app.add_subcommand("gns", "Truncated GNS representation of a Gaussian state");
    gns->add_option("--state", state_path, "State JSON {rho, b, z}");
    gns->add_option("--lambda", lambda_path, "Bilinear form (matrix JSON)")->required();
    gns->add_option("-N,--cutoff", n_cut, "Degree cutoff N");
    gns->add_option("--alpha", alpha_path, "Hermitian form used for the default series step");
    gns->add_option("--series", series_path, "Element X (poly JSON) for the analytic-vector series");
    gns->add_option("--eps", eps, "Series step (default 1/(8 e^6 ||X||^2))");
    gns->add_option("--nmax", nmax, "Series length");
    gns->add_option("--out", out, "GNS JSON output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kInputError;
    }

    try {
        if (*mult) {
            const Poly x = poly_from_json(read_json_file(x_path));
            const Poly y = poly_from_json(read_json_file(y_path));
            if (x.dim() != y.dim()) throw InputError("multiply: factors have different dimensions");
            const BilForm l = lambda_path.empty() ? BilForm::zero(x.dim()) : bilform_from_json(read_json_file(lambda_path));
            if (l.dim() != x.dim()) throw InputError("multiply: Lambda has the wrong dimension");
            const Poly r = commutator_flag ? commutator(x, y, l) : star(x, y, l);
            emit(to_json(r).dump(2) + "\n", out);
            return kPass;
        }
        if (*ver) return run_verify(vo);
        if (*gns) {
            const BilForm l = bilform_from_json(read_json_file(lambda_path));
            const StateDesc s = state_path.empty() ? StateDesc::vacuum(l.dim()) : state_from_json(read_json_file(state_path), l.dim());
            GnsRep rep;
            try {
                rep = gns_build(s, l, n_cut);
            } catch (const PositivityError& e) {
                std::cerr << e.what() << "; min eigenvalue " << format_double(e.min_eigenvalue()) << "\n";
                return kPositivityFail;
            }
            emit(gns_to_json(rep).dump(2) + "\n", out);
            if (!series_path.empty()) {
                const Poly x = poly_from_json(read_json_file(series_path));
                const HermForm alpha = alpha_path.empty() ? HermForm::identity(l.dim()) : hermform_from_json(read_json_file(alpha_path));
                const double e = eps > 0 ? eps : default_series_eps(x, alpha);
                const auto series = analytic_vector_series(rep, x, Poly::one(l.dim()), e, nmax);
                std::string csv = "# analytic vector series, eps = " + format_double(e) + ", threshold = " +
                                  std::to_string(series.threshold) + "\nn,term,ratio\n";
                for (const auto& r : series.rows)
                    csv += std::to_string(r.n) + "," + format_double(r.term) + "," + format_double(r.ratio) + "\n";
                const std::string spath = (out.empty() || out == "-") ? "" : out + ".series.csv";
                if (spath.empty()) std::cerr << csv;
                else write_text_file(spath, csv);
            }
            return kPass;
        }
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    }
    return kPass;
}
