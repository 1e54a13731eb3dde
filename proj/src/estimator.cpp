#include "qspp/estimator.hpp"

#include "qspp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>

namespace qspp::est {

std::int64_t iqae_query_count(double epsilon, double alpha) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("iqae_query_count: epsilon must lie in (0, 1)");
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("iqae_query_count: alpha must lie in (0, 1)");
    const double inner = (2.0 / alpha) * std::log2(std::numbers::pi / (4.0 * epsilon));
    if (inner <= 1.0) return 1;
    const double n = (1.4 / epsilon) * std::log(inner);
    return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(n)));
}

AdvantageReport advantage_report(const MethodRow &row, std::int64_t n_queries,
                                  double classical_time_s) {
    if (n_queries < 1) throw InvalidArgument("advantage_report: need at least one query");
    if (!(classical_time_s > 0.0)) throw InvalidArgument("advantage_report: classical time must be positive");
    if (row.per_q.t_depth < 0 || row.per_q.t_count < 0 || row.per_q.logical_qubits < 0)
        throw InvalidArgument("advantage_report: negative resource entry");
    AdvantageReport r;
    r.label = row.label;
    r.source = row.source;
    r.n_queries = n_queries;
    r.per_q = row.per_q;
    r.total_t_depth = static_cast<double>(row.per_q.t_depth) * static_cast<double>(n_queries);
    r.total_t_count = static_cast<double>(row.per_q.t_count) * static_cast<double>(n_queries);
    r.logical_qubits = row.per_q.logical_qubits;
    r.classical_time_s = classical_time_s;
    r.clock_rate_hz = r.total_t_depth / classical_time_s;
    return r;
}

AdvantageReport advantage_report(const MethodRow &row, double epsilon, double alpha,
                                  double classical_time_s) {
    auto r = advantage_report(row, iqae_query_count(epsilon, alpha), classical_time_s);
    r.epsilon = epsilon;
    r.alpha = alpha;
    return r;
}

std::vector<Improvement> compare_methods(const std::vector<MethodRow> &rows,
                                         const std::string &baseline) {
    if (rows.size() < 2) throw InvalidArgument("compare_methods: need at least two rows");
    const auto base = std::find_if(rows.begin(), rows.end(),
                                   [&](const MethodRow &r) { return r.label == baseline; });
    if (base == rows.end()) throw InvalidArgument("compare_methods: unknown baseline '" + baseline + "'");
    const auto ratio = [](double b, double c, const std::string &label) {
        if (c == 0.0) throw InvalidArgument("compare_methods: zero entry in row '" + label + "'");
        return b / c;
    };
    std::vector<Improvement> out;
    for (const auto &r : rows) {
        Improvement imp;
        imp.baseline = base->label;
        imp.candidate = r.label;
        imp.t_depth = ratio(static_cast<double>(base->per_q.t_depth), static_cast<double>(r.per_q.t_depth), r.label);
        imp.t_count = ratio(static_cast<double>(base->per_q.t_count), static_cast<double>(r.per_q.t_count), r.label);
        imp.logical_qubits = ratio(base->per_q.logical_qubits, r.per_q.logical_qubits, r.label);
        out.push_back(imp);
    }
    return out;
}

double rotation_budget(double epsilon_total, int degree, int n) {
    if (!(epsilon_total > 0.0) || degree < 1 || n < 1)
        throw InvalidArgument("rotation_budget: inputs must be positive");
    return epsilon_total / (static_cast<double>(degree) * static_cast<double>(n));
}

std::vector<MethodRow> published_rows() {
    return {
        {"Arithmetic", {6'600'000, 36'000, 19'200}, "published"},
        {"QSP-U_sin", {605'000, 75'000, 4'700}, "published"},
        {"QSP-U_sqrt", {414'000, 7'800, 4'700}, "published"},
    };
}

std::string humanize(double v) {
    const double a = std::abs(v);
    const char *suffix = "";
    double scaled = v;
    if (a >= 1e9) scaled = v / 1e9, suffix = "G";
    else if (a >= 1e6) scaled = v / 1e6, suffix = "M";
    else if (a >= 1e3) scaled = v / 1e3, suffix = "k";
    std::ostringstream os;
    if (std::abs(scaled) >= 100.0 || scaled == std::round(scaled))
        os << std::fixed << std::setprecision(0) << scaled;
    else
        os << std::setprecision(3) << scaled;
    os << suffix;
    return os.str();
}

std::string markdown_report(const std::vector<AdvantageReport> &reports,
                            const std::vector<Improvement> &improvements) {
    std::ostringstream os;
    os << "| Method | Source | T-depth / Q | T-count / Q | Logical qubits | Queries | "
          "Total T-depth | Total T-count | T rate |\n";
    os << "|---|---|---|---|---|---|---|---|---|\n";
    for (const auto &r : reports) {
        std::ostringstream total_depth, total_count, rate;
        total_depth << std::setprecision(3) << r.total_t_depth;
        total_count << std::setprecision(3) << r.total_t_count;
        rate << std::fixed << std::setprecision(1) << r.clock_rate_hz / 1e6 << " MHz";
        os << "| " << r.label << " | " << r.source << " | "
           << humanize(static_cast<double>(r.per_q.t_depth)) << " | "
           << humanize(static_cast<double>(r.per_q.t_count)) << " | "
           << humanize(r.logical_qubits) << " | " << r.n_queries << " | " << total_depth.str()
           << " | " << total_count.str() << " | " << rate.str() << " |\n";
    }
    if (!improvements.empty()) {
        os << "\n| Baseline | Candidate | T-depth | T-count | Logical qubits |\n";
        os << "|---|---|---|---|---|\n";
        for (const auto &i : improvements) {
            if (i.candidate == i.baseline) continue;
            os << std::fixed << std::setprecision(2) << "| " << i.baseline << " | " << i.candidate
               << " | " << i.t_depth << "x | " << i.t_count << "x | " << i.logical_qubits << "x |\n";
        }
    }
    return os.str();
}

} // namespace qspp::est
