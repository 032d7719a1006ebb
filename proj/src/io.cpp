#include "optiprecond/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>

namespace optiprecond {

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

double parse_number(const std::string& tok, long line) {
    double v = 0.0;
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
        throw ParseError("not a number: '" + tok + "'", line);
    if (!std::isfinite(v)) throw ParseError("non-finite value", line);
    return v;
}

long parse_index(const std::string& tok, long line) {
    long v = 0;
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
        throw ParseError("not an integer: '" + tok + "'", line);
    return v;
}

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream ss(s);
    std::vector<std::string> out;
    std::string t;
    while (ss >> t) out.push_back(t);
    return out;
}

bool blank(const std::string& s) {
    return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

}  // namespace

RectMatrix parse_matrix_market(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    long line_no = 0;

    if (!std::getline(in, line)) throw ParseError("empty file", 1);
    ++line_no;
    auto head = split_ws(lower(line));
    if (head.size() != 5 || head[0] != "%%matrixmarket" || head[1] != "matrix")
        throw ParseError("malformed header", line_no);
    const std::string& layout = head[2];
    const std::string& field = head[3];
    const std::string& symmetry = head[4];
    if (layout != "coordinate" && layout != "array")
        throw ParseError("unknown layout '" + layout + "'", line_no);
    if (field != "real")
        throw ParseError("unsupported field '" + field + "', only real is accepted", line_no);
    if (symmetry != "general" && symmetry != "symmetric")
        throw ParseError("unsupported symmetry '" + symmetry + "'", line_no);
    const bool sym = symmetry == "symmetric";

    auto next_data = [&](std::vector<std::string>& toks) {
        while (std::getline(in, line)) {
            ++line_no;
            if (blank(line) || line[line.find_first_not_of(" \t")] == '%') continue;
            toks = split_ws(line);
            return true;
        }
        return false;
    };

    std::vector<std::string> toks;
    if (!next_data(toks)) throw ParseError("missing size line", line_no + 1);
    if (layout == "coordinate") {
        if (toks.size() != 3) throw ParseError("size line needs rows cols nnz", line_no);
        long m = parse_index(toks[0], line_no), n = parse_index(toks[1], line_no);
        long nnz = parse_index(toks[2], line_no);
        if (m < 1 || n < 1 || nnz < 0) throw ParseError("invalid dimensions", line_no);
        if (sym && m != n) throw ParseError("symmetric matrix must be square", line_no);
        RectMatrix a = RectMatrix::Zero(m, n);
        for (long k = 0; k < nnz; ++k) {
            if (!next_data(toks)) throw ParseError("expected " + std::to_string(nnz) + " entries", line_no + 1);
            if (toks.size() != 3) throw ParseError("entry needs row col value", line_no);
            long i = parse_index(toks[0], line_no), j = parse_index(toks[1], line_no);
            double v = parse_number(toks[2], line_no);
            if (i < 1 || i > m || j < 1 || j > n) throw ParseError("index out of bounds", line_no);
            if (sym && j > i) throw ParseError("symmetric entry above the diagonal", line_no);
            a(i - 1, j - 1) += v;
            if (sym && i != j) a(j - 1, i - 1) += v;
        }
        if (next_data(toks)) throw ParseError("trailing data after entries", line_no);
        return a;
    }

    if (toks.size() != 2) throw ParseError("size line needs rows cols", line_no);
    long m = parse_index(toks[0], line_no), n = parse_index(toks[1], line_no);
    if (m < 1 || n < 1) throw ParseError("invalid dimensions", line_no);
    if (sym && m != n) throw ParseError("symmetric matrix must be square", line_no);
    RectMatrix a = RectMatrix::Zero(m, n);
    // Column-major; symmetric files store the lower triangle only.
    for (long j = 0; j < n; ++j) {
        for (long i = sym ? j : 0; i < m; ++i) {
            if (!next_data(toks)) throw ParseError("too few values", line_no + 1);
            if (toks.size() != 1) throw ParseError("one value per line expected", line_no);
            double v = parse_number(toks[0], line_no);
            a(i, j) = v;
            if (sym) a(j, i) = v;
        }
    }
    if (next_data(toks)) throw ParseError("trailing data after values", line_no);
    return a;
}

RectMatrix read_matrix_market(const std::string& path) {
    try {
        return parse_matrix_market(slurp(path));
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.detail, e.line);
    }
}

RectMatrix read_csv_matrix(const std::string& path) {
    std::istringstream in(slurp(path));
    std::string line;
    long line_no = 0;
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        ++line_no;
        if (blank(line) || line[line.find_first_not_of(" \t")] == '#') continue;
        std::vector<double> row;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) {
            auto t = split_ws(cell);
            if (t.size() != 1) throw ParseError(path + ": empty or malformed cell", line_no);
            row.push_back(parse_number(t[0], line_no));
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw ParseError(path + ": ragged row", line_no);
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw InputError(path + ": no data");
    RectMatrix a(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j) a(i, j) = rows[i][j];
    return a;
}

RectMatrix read_matrix(const std::string& path) {
    if (lower(std::filesystem::path(path).extension().string()) == ".mtx")
        return read_matrix_market(path);
    return read_csv_matrix(path);
}

MatrixXd gram_matrix(const RectMatrix& a) {
    MatrixXd g = a.rows() >= a.cols() ? MatrixXd(a.transpose() * a) : MatrixXd(a * a.transpose());
    return symmetrize(g);
}

GramSpec regularize_cap(const MatrixXd& m, double kappa_cap) {
    if (!(kappa_cap > 1.0)) throw InputError("regularize_cap: cap must exceed 1");
    VectorXd w = sym_eigenvalues(m);
    const double lo = w(0), hi = w(w.size() - 1);
    if (!(hi > 0.0)) throw InputError("regularize_cap: largest eigenvalue is not positive");
    GramSpec out;
    out.kappa_cap = kappa_cap;
    out.gram = m;
    // Solve hi + eps = cap * (lo + eps); already-capped matrices get nothing.
    if (hi > kappa_cap * lo * (1.0 + 1e-12)) {
        out.epsilon = std::max(0.0, (hi - kappa_cap * lo) / (kappa_cap - 1.0));
        out.gram.diagonal().array() += out.epsilon;
    }
    return out;
}

RectMatrix sample_rows(const RectMatrix& a, long count, std::uint64_t seed) {
    if (count < 1 || count > a.rows())
        throw InputError("sample_rows: count must lie in [1, " + std::to_string(a.rows()) + "]");
    std::vector<long> all(a.rows()), pick;
    std::iota(all.begin(), all.end(), 0L);
    std::mt19937_64 rng(seed);
    std::sample(all.begin(), all.end(), std::back_inserter(pick), count, rng);
    RectMatrix out(count, a.cols());
    for (long i = 0; i < count; ++i) out.row(i) = a.row(pick[i]);
    return out;
}

std::string format_double(double x) {
    if (std::isnan(x)) return "";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

namespace {

nlohmann::json number_or_null(double x) {
    return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr);
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

std::string format_report(const std::vector<SolveReport>& reports, ReportFormat format) {
    if (format == ReportFormat::json) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& r : reports) {
            nlohmann::json o = nlohmann::json::object();
            o["matrix"] = r.matrix;
            o["method"] = r.method;
            o["kappa_before"] = number_or_null(r.kappa_before);
            o["kappa_after"] = number_or_null(r.kappa_after);
            o["iterations"] = r.iterations;
            o["wall_time_seconds"] = r.wall_time_seconds;
            o["extra"] = r.extra;
            arr.push_back(std::move(o));
        }
        return arr.dump(2) + "\n";
    }
    std::string out = "matrix,method,kappa_before,kappa_after,iterations,wall_time_seconds,extra\n";
    for (const auto& r : reports) {
        out += csv_quote(r.matrix) + "," + csv_quote(r.method) + "," + format_double(r.kappa_before) +
               "," + format_double(r.kappa_after) + "," + std::to_string(r.iterations) + "," +
               format_double(r.wall_time_seconds) + "," + csv_quote(r.extra.dump()) + "\n";
    }
    return out;
}

void write_text_atomic(const std::string& path, const std::string& text) {
    namespace fs = std::filesystem;
    fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp" + std::to_string(std::random_device{}());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw InputError("cannot write " + tmp.string());
        out << text;
        out.flush();
        if (!out) throw InputError("write failed for " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw InputError("cannot move report into place at " + path + ": " + ec.message());
    }
}

void write_report(const std::vector<SolveReport>& reports, ReportFormat format,
                  const std::string& path) {
    std::string text = format_report(reports, format);
    if (path.empty() || path == "-") {
        std::cout << text;
        std::cout.flush();
        return;
    }
    write_text_atomic(path, text);
}

std::vector<SolveReport> parse_report_json(const std::string& text) {
    std::vector<SolveReport> out;
    auto arr = nlohmann::json::parse(text);
    for (const auto& o : arr) {
        SolveReport r;
        r.matrix = o.at("matrix").get<std::string>();
        r.method = o.at("method").get<std::string>();
        if (!o.at("kappa_before").is_null()) r.kappa_before = o.at("kappa_before").get<double>();
        if (!o.at("kappa_after").is_null()) r.kappa_after = o.at("kappa_after").get<double>();
        r.iterations = o.at("iterations").get<long>();
        r.wall_time_seconds = o.at("wall_time_seconds").get<double>();
        r.extra = o.at("extra");
        out.push_back(std::move(r));
    }
    return out;
}

VectorXd read_scaling(const std::string& path) {
    RectMatrix a = read_csv_matrix(path);
    if (a.cols() != 1) throw InputError(path + ": scaling file must have one column");
    VectorXd d = a.col(0);
    if (!(d.array() > 0.0).all()) throw InputError(path + ": scaling entries must be positive");
    return d;
}

void write_scaling(const std::string& path, const VectorXd& values) {
    std::string text;
    for (Eigen::Index i = 0; i < values.size(); ++i) text += format_double(values(i)) + "\n";
    write_text_atomic(path, text);
}

}  // namespace optiprecond
