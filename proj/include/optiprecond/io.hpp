#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "types.hpp"

namespace optiprecond {

struct GramSpec {
    MatrixXd gram;
    double epsilon = 0.0;
    double kappa_cap = 0.0;
};

enum class ReportFormat { json, csv };

RectMatrix read_matrix_market(const std::string& path);
RectMatrix parse_matrix_market(const std::string& text);
RectMatrix read_csv_matrix(const std::string& path);
// Dispatches on the extension: .mtx is Matrix Market, anything else dense CSV.
RectMatrix read_matrix(const std::string& path);

// A^T A when rows >= cols, otherwise A A^T.
MatrixXd gram_matrix(const RectMatrix& a);

GramSpec regularize_cap(const MatrixXd& m, double kappa_cap);

// Rows chosen uniformly without replacement, kept in their original order.
RectMatrix sample_rows(const RectMatrix& a, long count, std::uint64_t seed);

std::string format_report(const std::vector<SolveReport>& reports, ReportFormat format);
// An empty path or "-" writes to stdout; files are replaced atomically.
void write_report(const std::vector<SolveReport>& reports, ReportFormat format,
                  const std::string& path);
void write_text_atomic(const std::string& path, const std::string& text);

std::vector<SolveReport> parse_report_json(const std::string& text);

VectorXd read_scaling(const std::string& path);
void write_scaling(const std::string& path, const VectorXd& values);

// Shortest decimal that parses back to the same double.
std::string format_double(double x);

}  // namespace optiprecond
