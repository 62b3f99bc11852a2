#pragma once

#include "cl/eval/nested_cv.hpp"
#include "cl/eval/stats.hpp"

#include <string>
#include <vector>

#include <json.hpp>

namespace cl::eval {

// Identifies what a report was computed on; copied into the JSON.
struct ReportContext {
    std::string metric;
    std::string setting;
    std::string task;
    double epsilon = 0;  // RC only
    std::string feature_table;
};

nlohmann::ordered_json report_json(const EvaluationReport& r, const ReportContext& ctx);

struct Comparison {
    double wf1_ac = 0, wf1_rc = 0;
    double ri_ac = 0, ri_rc = 0, delta = 0;
    MannWhitney test;  // A = AC fold RIs, B = RC fold RIs, H1: RC greater
    std::size_t n_ac = 0, n_rc = 0;
};

// InvalidArgument when either report has no successful configuration.
Comparison compare(const EvaluationReport& ac, const EvaluationReport& rc);

nlohmann::ordered_json comparison_json(const Comparison& c, const ReportContext& ac, const ReportContext& rc,
                                       learn::Family family);

enum class TableFormat { Text, Csv };

// Rows per (task, setting, epsilon, metric); columns baseline, then wF1
// and RI per family. SchemaError on a malformed report.
std::string render_table(const std::vector<nlohmann::json>& reports, TableFormat format = TableFormat::Text);

// Rows per (metric, epsilon); columns RI_AC, RI_RC, delta RI per family.
std::string render_delta_table(const std::vector<nlohmann::json>& comparisons, TableFormat format = TableFormat::Text);

}  // namespace cl::eval
