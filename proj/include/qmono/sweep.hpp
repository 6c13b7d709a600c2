#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qmono/grid.hpp"

namespace qmono {

/// Which verification a sweep runs.
enum class SweepTheorem { Thm1, Converse, Strict, Decreasing1, Decreasing2, Corollary, Tool, Mvt };

/// CLI names: thm1, converse, strict, dec1, dec2, corollary, tool, mvt.
std::string_view cli_name(SweepTheorem t);
SweepTheorem parse_sweep_theorem(std::string_view name);
std::vector<SweepTheorem> all_sweep_theorems();

struct SweepConfig {
    std::vector<double> q_values{0.3, 0.5, 0.9};
    std::vector<double> alpha_values{0.25, 0.5, 0.75, 1.0};
    /// Points in [n_min, n0]; n_min = 0 and n0 = size - 1.
    std::vector<int> window_sizes{3, 5, 8};
    int samples_per_cell = 20;
    std::uint64_t seed = 42;
    double sign_tol = 1e-11;
    double residual_tol = 1e-9;

    /// Throws ConfigError naming the first offending field.
    void validate() const;

    /// Fields as in the struct; "tolerance": {"sign": .., "residual": ..} is optional.
    /// Unknown keys are rejected.
    static SweepConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

struct SweepRow {
    std::string theorem_id;
    double q;
    double alpha;
    int n0;
    int window;
    std::uint64_t seed;
    bool hypotheses_hold;
    bool conclusion_holds;
    double worst_margin;
    std::optional<int> witness_exponent;
    std::optional<double> residual;
    std::optional<int> n_b;
    std::optional<double> min_ratio;
    std::optional<double> quotient;
    std::optional<double> max_ratio;
    /// Hypotheses hold and the conclusion (or a required identity) fails.
    bool failure = false;
    /// Everything needed to replay the sample.
    nlohmann::json replay;
};

struct TheoremSummary {
    int samples = 0;
    int non_vacuous = 0;
    int failures = 0;
    double worst_conclusion_margin = std::numeric_limits<double>::infinity();
    double max_residual = 0.0;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::map<std::string, TheoremSummary> summary;

    int failures() const;
    nlohmann::json summary_json(const SweepConfig& cfg) const;
};

/// Runs the selected verifications over q × alpha × window × sample. Rows come
/// out in loop order (theorem, q, alpha, window, sample), so a fixed config
/// gives identical output. Tool and Mvt skip alpha = 1.
SweepResult run_sweep(const SweepConfig& cfg, const std::vector<SweepTheorem>& theorems);

/// Shortest representation that round-trips to the same double.
std::string format_double(double x);

/// RFC-4180 CSV with LF line endings and a header row.
std::string to_csv(const std::vector<SweepRow>& rows);

/// Writes report.csv, summary.json and one counterexample_<k>.json per failing row.
void write_reports(const SweepResult& result, const SweepConfig& cfg, const std::filesystem::path& dir);

nlohmann::json to_json(const GridFunction& f);
/// {"n_lo": int, "values": [...]}.
GridFunction grid_function_from_json(const nlohmann::json& j);

}  // namespace qmono
