#include "cl/cli/app.hpp"
#include "cl/common/csv.hpp"
#include "cl/common/io.hpp"
#include "cl/common/rng.hpp"
#include "cl/eval/nested_cv.hpp"
#include "cl/eval/report.hpp"
#include "jobs.hpp"

#include <map>
#include <ostream>
#include <tuple>

namespace cl::cli {

using dataset::Metric;
using dataset::Setting;
using dataset::Task;

std::string Job::stem() const {
    std::string s = std::string(dataset::task_name(task)) + "-" + std::string(dataset::setting_name(setting)) + "-" +
                    std::string(dataset::metric_name(metric));
    if (task == Task::RC) s += "-" + epsilon_tag(epsilon);
    return s;
}

std::vector<Job> expand_jobs(const RunConfig& c) {
    std::vector<Job> jobs;
    for (auto m : c.metrics)
        for (auto t : c.tasks) {
            if (t == Task::AC) {
                jobs.push_back({m, t, 0.0, c.setting});
                continue;
            }
            for (double e : c.epsilons) jobs.push_back({m, t, e, c.setting});
        }
    return jobs;
}

std::optional<std::string> rejection(const Job& job) {
    if (job.task == Task::AC && job.setting == Setting::SnippetWise && !dataset::snippet_wise_ac_supported(job.metric))
        return std::string(dataset::metric_name(job.metric)) +
               " is excluded for snippet-wise experiments (metric excluded for snippet-wise AC: the aggregated "
               "classes are too small)";
    return std::nullopt;
}

Inputs load_inputs(const RunConfig& c) {
    if (c.features.empty()) throw InvalidArgument("no feature table given (--features)");
    if (c.measurements.empty()) throw InvalidArgument("no measurements given (--measurements)");
    Inputs in{extract::read_feature_table(c.features), dataset::ingest_measurements(c.measurements)};
    if (!c.dataset.empty()) {
        in.measurements = in.measurements.only(c.dataset);
        if (in.measurements.records.empty()) throw InvalidArgument("no measurements for dataset '" + c.dataset + "'");
    }
    return in;
}

namespace {

constexpr std::uint64_t kModelTag = 0x3D31;

eval::ReportContext context_of(const Job& job, const RunConfig& c) {
    return {std::string(dataset::metric_name(job.metric)), std::string(dataset::setting_name(job.setting)),
            std::string(dataset::task_name(job.task)), job.epsilon, c.features.generic_string()};
}

std::string percent(double v) {
    return (v >= 0 ? "+" : "") + csv::format_fixed(100 * v, 1) + "%";
}

// The configuration chosen by the most outer splits; first one on ties.
const eval::ConfigResult* most_chosen(const eval::EvaluationReport& r) {
    const eval::ConfigResult* best = nullptr;
    for (const auto& c : r.configs)
        if (c.error.empty() && (!best || c.chosen_by.size() > best->chosen_by.size())) best = &c;
    return best;
}

learn::TrainedModel final_model(const dataset::LabeledDataset& ds, const eval::EvaluationReport& r, const Job& job,
                                const RunConfig& c) {
    const auto* cfg = most_chosen(r);
    const auto& cand = r.candidates[cfg->candidate];
    learn::TrainOptions opt;
    opt.fraction = cand.fraction;
    opt.smote.seed = derive_seed(c.seed, {kModelTag, 1});
    auto m = learn::train_model(ds.X, ds.y, ds.feature_names, r.family, cand.hyperparams, opt,
                                derive_seed(c.seed, {kModelTag, 0}));
    m.seed = c.seed;
    m.metadata["task"] = dataset::task_name(job.task);
    m.metadata["metric"] = dataset::metric_name(job.metric);
    m.metadata["setting"] = dataset::setting_name(job.setting);
    if (job.task == Task::RC) m.metadata["epsilon"] = job.epsilon;
    m.metadata["dataset"] = c.dataset;
    m.metadata["chosen_by_outer_splits"] = cfg->chosen_by.size();
    return m;
}

}  // namespace

PipelineOutcome run_pipeline(const RunConfig& c, std::ostream& log) {
    validate(c);
    if (c.output.empty()) throw InvalidArgument("no output directory given (--output)");
    const auto in = load_inputs(c);

    eval::CvConfig cv;
    cv.outer_folds = c.outer_folds;
    cv.inner_folds = c.inner_folds;
    if (!c.fractions.empty()) cv.fractions = c.fractions;
    cv.seed = c.seed;

    PipelineOutcome out;
    const bool paired = c.has_task(Task::AC) && c.has_task(Task::RC);
    std::map<std::pair<Metric, learn::Family>, eval::EvaluationReport> ac_reports;
    std::vector<std::tuple<Job, learn::Family, eval::EvaluationReport>> rc_reports;

    for (const auto& job : expand_jobs(c)) {
        if (auto why = rejection(job)) {
            out.rejected.push_back(job.stem() + ": " + *why);
            continue;
        }
        dataset::LabeledDataset ds;
        try {
            ds = job.task == Task::AC
                     ? dataset::build_ac_dataset(in.features, in.measurements, job.metric, job.setting)
                     : dataset::build_rc_dataset(in.features, in.measurements, job.metric, job.setting,
                                                 dataset::RcConfig{job.epsilon, true});
        } catch (const MissingMetric& e) {
            out.rejected.push_back(job.stem() + ": " + e.what());
            continue;
        }
        for (auto fam : c.families) {
            const std::string name = job.stem() + "-" + std::string(learn::family_name(fam));
            eval::EvaluationReport r;
            try {
                r = eval::nested_cv(ds.X, ds.y, c.spec_for(fam), cv);
            } catch (const IoError&) {
                throw;
            } catch (const Error& e) {
                out.failed.push_back(name + ": " + e.what());
                log << name << ": failed: " << e.what() << "\n";
                continue;
            }
            const auto file = name + ".json";
            io::write_atomic(c.output / file, eval::report_json(r, context_of(job, c)).dump(2) + "\n");
            out.reports.push_back(file);
            if (!r.ok()) {
                out.failed.push_back(name + ": no configuration succeeded");
                log << name << ": no configuration succeeded\n";
                continue;
            }
            ++out.succeeded;
            log << name << ": wF1 " << csv::format_fixed(r.averaged_wf1, 3) << ", baseline (" << r.baselines.best.tag()
                << ") " << csv::format_fixed(r.baselines.best.value, 3) << ", RI " << percent(r.ri) << ", "
                << r.configs.size() << " distinct configuration(s)\n";
            if (c.save_models) {
                const auto model_file = name + ".model.json";
                io::write_atomic(c.output / model_file, learn::serialize(final_model(ds, r, job, c)));
                out.models.push_back(model_file);
            }
            if (paired) {
                if (job.task == Task::AC) ac_reports.emplace(std::make_pair(job.metric, fam), std::move(r));
                else rc_reports.emplace_back(job, fam, std::move(r));
            }
        }
    }

    for (const auto& [job, fam, rc] : rc_reports) {
        const auto it = ac_reports.find({job.metric, fam});
        if (it == ac_reports.end()) continue;
        Job ac_job = job;
        ac_job.task = Task::AC;
        ac_job.epsilon = 0;
        const auto cmp = eval::compare(it->second, rc);
        const auto file = "delta-" + std::string(dataset::setting_name(job.setting)) + "-" +
                          std::string(dataset::metric_name(job.metric)) + "-" + epsilon_tag(job.epsilon) + "-" +
                          std::string(learn::family_name(fam)) + ".json";
        io::write_atomic(c.output / file,
                         eval::comparison_json(cmp, context_of(ac_job, c), context_of(job, c), fam).dump(2) + "\n");
        out.comparisons.push_back(file);
        log << file << ": dRI " << percent(cmp.delta) << ", p " << csv::format_fixed(cmp.test.p, 4) << "\n";
    }

    nlohmann::ordered_json summary;
    summary["kind"] = "pipeline_summary";
    summary["config"] = to_json(c);
    summary["reports"] = out.reports;
    summary["comparisons"] = out.comparisons;
    summary["models"] = out.models;
    summary["rejected"] = out.rejected;
    summary["failed"] = out.failed;
    summary["succeeded"] = out.succeeded;
    io::write_atomic(c.output / "summary.json", summary.dump(2) + "\n");
    return out;
}

}  // namespace cl::cli
