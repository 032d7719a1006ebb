#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include "optiprecond/bench.hpp"
#include "optiprecond/heuristics.hpp"
#include "optiprecond/io.hpp"
#include "optiprecond/optimal.hpp"
#include "optiprecond/subgradient.hpp"

#ifndef OPTIPRECOND_VERSION
#define OPTIPRECOND_VERSION "0.0.0"
#endif

using namespace optiprecond;

namespace {

enum Exit { ok = 0, input_error = 2, solver_error = 3, internal_error = 4 };

struct Flags {
    std::string input, method = "optimal-right", side = "right", solver = "auto";
    std::optional<double> epsilon, cap;
    std::uint64_t seed = 0;
    std::string ratios = "0.01,0.02,0.05,0.1,1.0";
    std::string sizes = "400,4000,40000";
    int trials = 50;
    int dims = 5;
    double tol = 1e-6;
    std::string out, format = "json", emit_scaling, apply;
    int iters = 5000;
};

ReportFormat report_format(const Flags& f) {
    if (f.format == "json") return ReportFormat::json;
    if (f.format == "csv") return ReportFormat::csv;
    throw InputError("--format must be json or csv");
}

std::string stem(const std::string& path) {
    return std::filesystem::path(path).stem().string();
}

// Sibling file holding the left half of a two-sided scaling.
std::string left_path(const std::string& path) {
    std::filesystem::path p(path);
    return (p.parent_path() / (p.stem().string() + ".left" + p.extension().string())).string();
}

std::vector<double> parse_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::logic_error&) {
            throw InputError("bad number in list: '" + tok + "'");
        }
    }
    if (out.empty()) throw InputError("empty list");
    return out;
}

RectMatrix load(const Flags& f) {
    if (f.input.empty()) throw InputError("--input is required");
    return read_matrix(f.input);
}

// A with at least as many rows as columns.
RectMatrix oriented(const RectMatrix& a) {
    return a.rows() >= a.cols() ? a : RectMatrix(a.transpose());
}

MatrixXd gram_of(const RectMatrix& a, const Flags& f, SolveReport& rep) {
    MatrixXd m = gram_matrix(a);
    if (f.cap) {
        GramSpec g = regularize_cap(m, *f.cap);
        rep.extra["epsilon"] = g.epsilon;
        rep.extra["kappa_cap"] = g.kappa_cap;
        m = g.gram;
    }
    if (!is_positive_definite(m)) throw InputError("Gram matrix is not positive definite");
    return m;
}

Method solver_method(const std::string& s) {
    if (s == "auto") return Method::automatic;
    if (s == "pr" || s == "pr-exact") return Method::potential_reduction;
    if (s == "dsdp") return Method::dsdp;
    if (s == "bisection") return Method::bisection;
    throw InputError("--solver must be auto, pr, pr-exact, dsdp or bisection");
}

void emit(const std::vector<SolveReport>& reps, const Flags& f) {
    write_report(reps, report_format(f), f.out);
}

void emit_table(const nlohmann::json& rows, const std::vector<std::string>& cols, const Flags& f) {
    std::string text;
    if (report_format(f) == ReportFormat::json) {
        text = rows.dump(2) + "\n";
    } else {
        for (std::size_t i = 0; i < cols.size(); ++i) text += (i ? "," : "") + cols[i];
        text += "\n";
        for (const auto& r : rows) {
            for (std::size_t i = 0; i < cols.size(); ++i) {
                const auto& v = r.at(cols[i]);
                text += i ? "," : "";
                if (v.is_number_float()) text += format_double(v.get<double>());
                else if (v.is_null()) text += "";
                else text += v.dump();
            }
            text += "\n";
        }
    }
    if (f.out.empty() || f.out == "-") std::cout << text;
    else write_text_atomic(f.out, text);
}

int cmd_cond(const Flags& f) {
    try {
        RectMatrix a = load(f);
        SolveReport rep;
        rep.matrix = stem(f.input);
        rep.method = "cond";
        rep.extra["rows"] = a.rows();
        rep.extra["cols"] = a.cols();
        MatrixXd m = gram_of(a, f, rep);
        rep.kappa_before = condition_number(m);
        if (!f.apply.empty()) {
            rep.method = "cond-apply";
            VectorXd d = read_scaling(f.apply);
            if (f.side == "right") {
                if (d.size() != m.rows()) throw InputError("scaling length does not match the Gram order");
                rep.kappa_after = condition_number<double>(congruence<double>(m, d));
            } else {
                RectMatrix ao = oriented(a);
                DiagScaling s{d, Side::left, {}};
                if (f.side == "two") s = {d, Side::two_sided, read_scaling(left_path(f.apply))};
                else if (f.side != "left") throw InputError("--side must be left, right or two");
                const VectorXd& dl = s.side == Side::left ? s.values : s.left_values;
                if (dl.size() != ao.rows() || (s.side == Side::two_sided && d.size() != ao.cols()))
                    throw InputError("scaling length does not match the matrix");
                rep.kappa_after = condition_number<double>(scaled_gram(ao, s));
            }
            rep.extra["side"] = f.side;
        }
        emit({rep}, f);
        return ok;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return input_error;
    }
}

int cmd_precond(const Flags& f) {
    RectMatrix a;
    MatrixXd m;
    SolveReport base;
    try {
        a = load(f);
        m = gram_of(a, f, base);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return input_error;
    }
    std::string method = f.method;
    if (method == "optimal") method = "optimal-" + std::string(f.side == "two" ? "two-sided" : f.side);

    OptimalRequest req;
    req.name = stem(f.input);
    if (f.epsilon) req.epsilon = *f.epsilon;
    try {
        req.method = solver_method(f.solver);
        if (f.solver == "pr-exact") req.pr_mode = PRMode::exact;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return input_error;
    }

    Solution sol;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        const double before = condition_number(m);
        auto right_report = [&](const DiagScaling& s, const std::string& name, long iters) {
            sol.scaling = s;
            sol.report.method = name;
            sol.report.kappa_before = before;
            sol.report.kappa_after = condition_number<double>(congruence<double>(m, s.values));
            sol.report.iterations = iters;
        };
        if (method == "jacobi") {
            right_report(jacobi_scaling(m), method, 1);
        } else if (method == "colnorm") {
            right_report(column_norm_scaling(oriented(a)), method, 1);
        } else if (method == "ruiz") {
            RuizResult r = ruiz_equilibrate(m);
            right_report(r.scaling, method, r.iterations);
        } else if (method == "subgrad") {
            SubgradConfig cfg;
            cfg.max_iters = f.iters;
            sol = projected_subgradient_solve(m, cfg);
        } else if (method == "optimal-right") {
            sol = optimal_right(m, req);
        } else if (method == "optimal-left") {
            if (f.cap) throw InputError("--cap applies to right scalings only");
            sol = optimal_left(oriented(a), req);
        } else if (method == "optimal-two-sided") {
            if (f.cap) throw InputError("--cap applies to right scalings only");
            sol = req.method == Method::bisection ? bisect_two_sided(oriented(a), req)
                                                  : alternate_two_sided(oriented(a), req);
        } else {
            throw InputError("unknown method '" + method + "'");
        }
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return input_error;
    } catch (const Error& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return solver_error;
    }
    SolveReport rep = sol.report;
    rep.matrix = stem(f.input);
    if (rep.wall_time_seconds == 0.0)
        rep.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    for (auto& [k, v] : base.extra.items()) rep.extra[k] = v;
    rep.extra["side"] = to_string(sol.scaling.side);
    if (!f.emit_scaling.empty()) {
        write_scaling(f.emit_scaling, sol.scaling.values);
        if (sol.scaling.side == Side::two_sided) write_scaling(left_path(f.emit_scaling), sol.scaling.left_values);
    }
    emit({rep}, f);
    return ok;
}

int cmd_pcg_bench(const Flags& f) {
    MatrixXd m;
    SolveReport base;
    try {
        m = gram_of(load(f), f, base);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return input_error;
    }
    try {
        OptimalRequest req;
        std::vector<NamedScaling> scalings{{"jacobi", jacobi_scaling(m)},
                                           {"ruiz", ruiz_equilibrate(m).scaling},
                                           {"optimal", optimal_right(m, req).scaling}};
        emit(pcg_compare(m, scalings, f.tol, f.seed, stem(f.input)), f);
    } catch (const Error& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return solver_error;
    }
    return ok;
}

int cmd_sample_sweep(const Flags& f) {
    RectMatrix a;
    std::vector<double> ratios;
    try {
        a = oriented(load(f));
        ratios = parse_list(f.ratios);
        for (double r : ratios)
            if (!(r > 0.0 && r <= 1.0)) throw InputError("ratios must lie in (0, 1]");
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return input_error;
    }
    try {
        auto pts = sampling_sweep(a, ratios, f.seed);
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& p : pts)
            rows.push_back({{"ratio", p.ratio},
                            {"rows", p.rows},
                            {"gram_gap", p.gram_gap},
                            {"gram_gap_normalization", "m/rows"},
                            {"kappa_preconditioned",
                             p.rank_deficient ? nlohmann::json(nullptr) : nlohmann::json(p.kappa_preconditioned)},
                            {"rank_deficient", p.rank_deficient}});
        emit_table(rows, {"ratio", "rows", "gram_gap", "kappa_preconditioned", "rank_deficient"}, f);
    } catch (const Error& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return solver_error;
    }
    return ok;
}

int cmd_concentration(const Flags& f) {
    MatrixXd sigma;
    std::vector<long> sizes;
    try {
        if (f.input.empty()) {
            if (f.dims < 1) throw InputError("--dims must be positive");
            sigma = VectorXd::LinSpaced(f.dims, 1.0, double(f.dims)).asDiagonal();
        } else {
            sigma = load(f);
        }
        if (sigma.rows() != sigma.cols()) throw InputError("covariance must be square");
        for (double s : parse_list(f.sizes)) {
            if (!(s > double(sigma.rows())) || s != std::floor(s))
                throw InputError("sample sizes must be integers larger than the dimension");
            sizes.push_back(static_cast<long>(s));
        }
        if (f.trials < 1) throw InputError("--trials must be positive");
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return input_error;
    }
    try {
        auto table = concentration_experiment(symmetrize(sigma), sizes, f.trials, f.seed);
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& r : table)
            rows.push_back({{"n", r.n}, {"mean_gap", r.mean_gap}, {"sqrt_p_over_n", r.sqrt_p_over_n}, {"trials", r.trials}});
        emit_table(rows, {"n", "mean_gap", "sqrt_p_over_n", "trials"}, f);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return input_error;
    } catch (const Error& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return solver_error;
    }
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Optimal and heuristic diagonal preconditioners"};
    app.require_subcommand(1);
    Flags f;
    app.add_option("--input", f.input, "Matrix Market (.mtx) or dense CSV file; for concentration, the covariance");
    app.add_option("--method", f.method, "jacobi, colnorm, ruiz, optimal-right, optimal-left, optimal-two-sided, subgrad");
    app.add_option("--side", f.side, "left, right or two")->check(CLI::IsMember({"left", "right", "two"}));
    app.add_option("--solver", f.solver, "auto, pr, pr-exact, dsdp or bisection");
    app.add_option("--epsilon", f.epsilon, "kappa tolerance for bisection");
    app.add_option("--cap", f.cap, "regularize the Gram matrix so its condition number is at most this");
    app.add_option("--seed", f.seed, "random seed");
    app.add_option("--ratios", f.ratios, "comma separated sampling ratios");
    app.add_option("--sizes", f.sizes, "comma separated sample sizes for concentration");
    app.add_option("--dims", f.dims, "dimension p of the default covariance diag(1..p) for concentration");
    app.add_option("--trials", f.trials, "trials per sample size");
    app.add_option("--iters", f.iters, "iterations for subgrad");
    app.add_option("--tol", f.tol, "relative residual tolerance for PCG");
    app.add_option("--out", f.out, "output path, stdout when absent");
    app.add_option("--format", f.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--emit-scaling", f.emit_scaling, "write the scaling as a one-column CSV");
    app.add_option("--apply", f.apply, "scaling file to apply before measuring (cond)");

    int code = ok;
    auto sub = [&](const char* name, const char* help, int (*fn)(const Flags&)) {
        app.add_subcommand(name, help)->fallthrough()->callback([&, fn] { code = fn(f); });
    };
    sub("cond", "condition number of the Gram matrix", cmd_cond);
    sub("precond", "compute a diagonal scaling", cmd_precond);
    sub("pcg-bench", "PCG iteration counts for none, jacobi, ruiz and optimal", cmd_pcg_bench);
    sub("sample-sweep", "optimal scaling from row samples", cmd_sample_sweep);
    sub("concentration", "condition number concentration experiment", cmd_concentration);
    app.add_subcommand("version", "print the version")->callback([] {
        std::cout << "optiprecond " << OPTIPRECOND_VERSION << "\n";
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return input_error;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return internal_error;
    }
    return code;
}
