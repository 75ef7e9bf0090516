#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qmspec/hierarchy.hpp"

namespace qmspec {

enum class Method { Hierarchy, Qes, Edp, Oracle, Compare, Table1, Table2, Sweep };
enum class OutputFormat { Csv, Json };

/// Fully resolved run description; serializes to a single JSON document so a
/// run can be reproduced from file.
struct RunConfig {
    Method method = Method::Hierarchy;

    std::optional<double> mu, sigma, eta;
    std::vector<int> levels{0};
    std::vector<int> orders{4, 8, 12};
    int n_max = 20;
    ClosureMode closure = ClosureMode::JnZero;
    std::optional<double> scan_lo, scan_hi;
    std::optional<int> samples;

    OutputFormat format = OutputFormat::Csv;
    std::string out;  ///< empty: write the report to stdout
    int jobs = 1;

    // energy-dependent potentials
    std::optional<std::string> family;
    std::optional<double> w, lambda, gamma;
    std::optional<int> n, l;
    bool allow_noncoherent = false;

    // quasi-exactly solvable sextic
    std::optional<double> a, b, s;
    std::optional<int> M;
    std::optional<int> level;

    /// Throws validation_error naming the missing or conflicting field.
    void validate() const;

    nlohmann::json to_json() const;
    static RunConfig from_json(const nlohmann::json& j);
};

/// One report line; missing cells render as "n/a".
struct ReportRow {
    std::string method;
    std::optional<double> mu, sigma, eta, gamma, w, lambda, s, b;
    std::optional<int> M, n, l, N;
    std::optional<double> energy, oracle, abs_dev, rel_dev, residual;
    double seconds = 0.0;
};

struct RunReport {
    std::vector<ReportRow> rows;
    std::vector<std::string> notes;  ///< pass/fail and summary lines
    int exit_code = 0;
};

/// Compute the rows for a validated config (no I/O).
RunReport execute(const RunConfig& cfg);

/// Fixed-schema CSV (method,mu,sigma,eta,gamma,w,lambda,s,b,M,n,l,N,energy,
/// oracle,abs_dev,rel_dev,residual,seconds), header always present.
std::string to_csv(const std::vector<ReportRow>& rows);

nlohmann::json report_json(const RunConfig& cfg, const RunReport& report);

/// Execute, write the report artifact, print notes.  Returns the exit code:
/// 0 ok, 2 validation error, 3 numerical failure.
int run(const RunConfig& cfg);

/// Full command-line entry point (subcommands + flags + config files).
int run_cli(int argc, const char* const* argv);

}  // namespace qmspec
