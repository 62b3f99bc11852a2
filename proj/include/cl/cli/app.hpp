#pragma once

#include "cl/cli/config.hpp"
#include "cl/common/error.hpp"
#include "cl/extract/features.hpp"
#include "cl/learn/pipeline.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace cl::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitInternal = 1,
    kExitInput = 2,
    kExitAllFailed = 3,
    kExitModelMismatch = 4,
};

// The model cannot answer this question (wrong task, setting or catalog).
class ModelMismatch : public Error {
public:
    using Error::Error;
};

// Entry point behind the executable; args exclude the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct PipelineOutcome {
    std::vector<std::string> reports;      // evaluation reports written
    std::vector<std::string> comparisons;  // comparison reports written
    std::vector<std::string> models;
    std::vector<std::string> rejected;     // jobs refused before running, with the reason
    std::vector<std::string> failed;       // jobs that ran but produced no successful configuration
    std::size_t succeeded = 0;
};

// Every (metric, task, epsilon, family) job of the config; reports land in
// config.output. Input errors throw; per-job failures are recorded.
PipelineOutcome run_pipeline(const RunConfig& config, std::ostream& log);

struct Verdict {
    int label = 2;
    std::vector<int> labels;
    std::vector<double> scores;
    std::optional<int> reverse_label;  // with both orders: label of (B, A)
    bool consistent = true;            // reverse label mirrors the forward one
};

// ModelMismatch unless the model is a snippet-wise RC model over this
// feature catalog. ParseError from either snippet propagates.
void check_rc_model(const learn::TrainedModel& model);
Verdict compare_snippets(const learn::TrainedModel& model, const extract::Snippet& a, const extract::Snippet& b,
                         bool both_orders);

}  // namespace cl::cli
