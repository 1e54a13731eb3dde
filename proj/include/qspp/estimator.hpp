#pragma once

/**
 * @file
 * Fault-tolerant cost arithmetic: amplitude-estimation query counts, run
 * totals, the T-gate rate needed to match a classical run time, and
 * per-resource comparisons between encoding methods.
 */

#include "qspp/resources.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace qspp::est {

/// Cost of one application of the amplification iterate Q.
struct MethodRow {
    std::string label;
    circ::ResourceCount per_q;
    std::string source = "published"; ///< "published" or "computed"
};

struct AdvantageReport {
    std::string label;
    std::string source;
    double epsilon = 0.0;
    double alpha = 0.0;
    std::int64_t n_queries = 0;
    circ::ResourceCount per_q;
    double total_t_depth = 0.0;
    double total_t_count = 0.0;
    int logical_qubits = 0;
    double classical_time_s = 1.0;
    double clock_rate_hz = 0.0; ///< total T-depth / classical time
};

/// Per-resource ratios baseline / candidate (> 1 means the candidate is cheaper).
struct Improvement {
    std::string baseline;
    std::string candidate;
    double t_depth = 0.0;
    double t_count = 0.0;
    double logical_qubits = 0.0;
};

/**
 * @brief Worst-case query bound of iterative amplitude estimation,
 *        floor((1.4 / eps) ln((2 / alpha) log2(pi / (4 eps)))).
 *
 * Returns 1 when the logarithm's argument does not exceed one.
 *
 * @throws DomainError unless 0 < eps < 1 and 0 < alpha < 1.
 */
[[nodiscard]] std::int64_t iqae_query_count(double epsilon, double alpha);

/// Totals for a fixed query count. @throws InvalidArgument for bad inputs.
[[nodiscard]] AdvantageReport advantage_report(const MethodRow &row, std::int64_t n_queries,
                                               double classical_time_s = 1.0);

/// Totals with the query count of iqae_query_count(epsilon, alpha).
[[nodiscard]] AdvantageReport advantage_report(const MethodRow &row, double epsilon, double alpha,
                                               double classical_time_s = 1.0);

/**
 * @brief Ratios of the baseline row to every row (the baseline included).
 *
 * @throws InvalidArgument with fewer than two rows, an unknown baseline or
 *         a zero entry in a candidate row.
 */
[[nodiscard]] std::vector<Improvement> compare_methods(const std::vector<MethodRow> &rows,
                                                       const std::string &baseline);

/// eps_total / (d n). @throws InvalidArgument for non-positive inputs.
[[nodiscard]] double rotation_budget(double epsilon_total, int degree, int n);

/// Published per-Q costs of the arithmetic, U_sin and U_sqrt encodings.
[[nodiscard]] std::vector<MethodRow> published_rows();

/// Compact magnitude: 7800 -> "7.8k", 6600000 -> "6.6M".
[[nodiscard]] std::string humanize(double v);

/// Markdown table of per-Q costs, totals, rates and improvement factors.
[[nodiscard]] std::string markdown_report(const std::vector<AdvantageReport> &reports,
                                          const std::vector<Improvement> &improvements);

} // namespace qspp::est
