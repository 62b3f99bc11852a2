#include "cl/cli/app.hpp"
#include "cl/common/csv.hpp"
#include "cl/common/io.hpp"
#include "cl/eval/report.hpp"
#include "cl/extract/corpus.hpp"
#include "jobs.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <map>
#include <ostream>
#include <set>

namespace cl::cli {

namespace fs = std::filesystem;
using dataset::Task;

namespace {

// Storage for every flag; each subcommand registers the ones it reads.
struct Flags {
    std::string config;
    std::vector<std::string> metrics, tasks, families;
    std::string setting, dataset, snippets, measurements, features, output;
    std::vector<double> epsilons, fractions;
    std::uint64_t seed = 0;
    bool strict = false, lenient = false, save_models = false;
    std::size_t outer = 10, inner = 5;

    std::string model;
    std::vector<std::string> files;
    bool both_orders = false;
    bool table = false;
    std::string format = "text";

    std::map<const CLI::App*, std::map<std::string, CLI::Option*>> opts;
    const CLI::App* active = nullptr;
};

void add_run_flags(CLI::App* sub, Flags& f, const std::vector<std::string>& which) {
    auto has = [&](const char* name) { return std::find(which.begin(), which.end(), name) != which.end(); };
    auto& o = f.opts[sub];
    o["config"] = sub->add_option("--config", f.config, "run configuration JSON; flags override it");
    if (has("snippets")) o["snippets"] = sub->add_option("--snippets", f.snippets, "directory of .java files or manifest CSV");
    if (has("measurements")) o["measurements"] = sub->add_option("--measurements", f.measurements, "measurements CSV");
    if (has("features")) o["features"] = sub->add_option("--features", f.features, "feature table CSV");
    o["output"] = sub->add_option("--output,-o", f.output, "output file or directory");
    if (has("dataset")) o["dataset"] = sub->add_option("--dataset", f.dataset, "keep only this dataset_id");
    if (has("jobs")) {
        o["metric"] = sub->add_option("--metric", f.metrics, "AU PBU ABU ABU50 BD BD50 RL (repeatable)");
        o["setting"] = sub->add_option("--setting", f.setting, "snippet-wise or developer-wise");
        o["task"] = sub->add_option("--task", f.tasks, "AC and/or RC");
        o["epsilon"] = sub->add_option("--epsilon", f.epsilons, "RC margin(s)");
    }
    if (has("learn")) {
        o["family"] = sub->add_option("--family", f.families, "NB KNN LR MLP RF SVM (repeatable)");
        o["seed"] = sub->add_option("--seed", f.seed, "master seed");
        o["features-top"] = sub->add_option("--features-top", f.fractions, "feature fractions searched, e.g. 0.1 0.5 1");
        o["outer-folds"] = sub->add_option("--outer-folds", f.outer, "outer cross-validation folds");
        o["inner-folds"] = sub->add_option("--inner-folds", f.inner, "inner cross-validation folds");
        o["save-models"] = sub->add_flag("--save-models", f.save_models, "also train and save one model per report");
    }
    if (has("strict")) {
        o["strict"] = sub->add_flag("--strict", f.strict, "fail on the first unparsable snippet (default)");
        o["lenient"] = sub->add_flag("--lenient", f.lenient, "skip unparsable snippets and report them");
        o["strict"]->excludes(o["lenient"]);
    }
}

bool given(const Flags& f, const char* name) {
    const auto& o = f.opts.at(f.active);
    const auto it = o.find(name);
    return it != o.end() && it->second->count() > 0;
}

RunConfig resolve(Flags& f, const CLI::App* sub) {
    f.active = sub;
    RunConfig c;
    if (!f.config.empty()) {
        c = load_run_config(f.config);
        // paths in a config file are relative to the file
        const auto base = fs::path(f.config).parent_path();
        for (auto* p : {&c.snippets, &c.measurements, &c.features, &c.output})
            if (!p->empty() && p->is_relative()) *p = base / *p;
    }
    if (given(f, "snippets")) c.snippets = f.snippets;
    if (given(f, "measurements")) c.measurements = f.measurements;
    if (given(f, "features")) c.features = f.features;
    if (given(f, "output")) c.output = f.output;
    if (given(f, "dataset")) c.dataset = f.dataset;
    if (given(f, "metric")) {
        c.metrics.clear();
        for (const auto& m : f.metrics) c.metrics.push_back(dataset::parse_metric(m));
    }
    if (given(f, "setting")) c.setting = dataset::parse_setting(f.setting);
    if (given(f, "task")) {
        c.tasks.clear();
        for (const auto& t : f.tasks) c.tasks.push_back(dataset::parse_task(t));
    }
    if (given(f, "epsilon")) c.epsilons = f.epsilons;
    if (given(f, "family")) {
        c.families.clear();
        for (const auto& x : f.families) c.families.push_back(learn::parse_family(x));
    }
    if (given(f, "seed")) c.seed = f.seed;
    if (given(f, "features-top")) c.fractions = f.fractions;
    if (given(f, "outer-folds")) c.outer_folds = f.outer;
    if (given(f, "inner-folds")) c.inner_folds = f.inner;
    if (given(f, "save-models")) c.save_models = true;
    if (given(f, "strict")) c.strict = true;
    if (given(f, "lenient")) c.strict = false;
    validate(c);
    return c;
}

void emit(const RunConfig& c, const std::string& text, std::ostream& out) {
    if (c.output.empty()) out << text;
    else io::write_atomic(c.output, text);
}

// ---- extract

int cmd_extract(const RunConfig& c, std::ostream& out, std::ostream& err) {
    if (c.snippets.empty()) throw InvalidArgument("no snippets given (--snippets)");
    std::vector<extract::Snippet> snippets;
    std::map<std::string, std::string> where;  // snippet id -> file, for messages
    if (fs::is_directory(c.snippets)) {
        snippets = extract::load_directory(c.snippets, c.dataset.empty() ? "default" : c.dataset);
        for (const auto& s : snippets) where[s.id] = (c.snippets / (s.id + ".java")).generic_string();
    } else {
        snippets = extract::load_manifest(c.snippets);
        const auto rows = csv::read_file(c.snippets);
        const auto& h = rows.front();
        const auto id = std::find(h.begin(), h.end(), "snippet_id") - h.begin();
        const auto path = std::find(h.begin(), h.end(), "path") - h.begin();
        for (std::size_t r = 1; r < rows.size(); ++r)
            where[rows[r][id]] = (c.snippets.parent_path() / rows[r][path]).generic_string();
    }
    auto located = [&](const extract::SkipRecord& s) {
        return where[s.snippet_id] + ":" + std::to_string(s.line) + ":" + std::to_string(s.column) + ": " + s.message;
    };

    extract::CorpusResult res;
    try {
        res = extract::extract_corpus(snippets, c.strict ? extract::Ingestion::Strict : extract::Ingestion::Lenient);
    } catch (const extract::CorpusError& e) {
        for (const auto& s : e.failures()) err << "error: " << located(s) << "\n";
        err << e.failures().size() << " snippet(s) failed to parse; nothing written (use --lenient to skip them)\n";
        return kExitInput;
    }

    nlohmann::ordered_json summary;
    summary["kind"] = "extract_summary";
    summary["catalog_version"] = extract::kCatalogVersion;
    summary["rows"] = res.table.size();
    summary["skipped"] = nlohmann::ordered_json::array();
    for (const auto& s : res.skipped)
        summary["skipped"].push_back({{"snippet_id", s.snippet_id},
                                      {"file", where[s.snippet_id]},
                                      {"line", s.line},
                                      {"column", s.column},
                                      {"message", s.message}});
    emit(c, extract::feature_table_csv(res.table), out);
    if (!c.output.empty()) {
        auto summary_path = c.output;
        summary_path += ".summary.json";
        io::write_atomic(summary_path, summary.dump(2) + "\n");
        out << "extracted " << res.table.size() << " snippet(s), skipped " << res.skipped.size() << "\n";
    }
    for (const auto& s : res.skipped) err << "skipped " << located(s) << "\n";
    return kExitOk;
}

// ---- ingest

nlohmann::ordered_json histogram(const std::map<int, std::size_t>& counts) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    std::size_t n = 0;
    for (const auto& [l, k] : counts) n += k;
    for (const auto& [l, k] : counts)
        j[std::to_string(l)] = {{"count", k}, {"share", static_cast<double>(k) / static_cast<double>(n)}};
    return j;
}

nlohmann::ordered_json dataset_summary(const dataset::MeasurementTable& m) {
    using dataset::Metric;
    nlohmann::ordered_json j;
    std::map<std::string, std::set<std::string>> by_participant;
    std::set<std::string> snippets;
    for (const auto& r : m.records) {
        by_participant[r.participant_id].insert(r.snippet_id);
        snippets.insert(r.snippet_id);
    }
    j["records"] = m.size();
    j["snippets"] = snippets.size();
    j["participants"] = by_participant.size();
    std::uint64_t dev_pairs = 0;
    for (const auto& [p, s] : by_participant) dev_pairs += static_cast<std::uint64_t>(s.size()) * s.size();
    j["rc_pairs_snippet_wise"] = static_cast<std::uint64_t>(snippets.size()) * snippets.size();
    j["rc_pairs_developer_wise"] = dev_pairs;

    auto& dev = j["developer_wise"] = nlohmann::ordered_json::object();
    auto& snip = j["snippet_wise"] = nlohmann::ordered_json::object();
    for (auto metric : dataset::kAllMetrics) {
        const std::string name(dataset::metric_name(metric));
        std::map<int, std::size_t> counts;
        for (const auto& r : m.records)
            if (auto v = r.derived().get(metric)) ++counts[dataset::ac_label_developer(metric, *v)];
        if (counts.empty()) continue;
        dev[name] = histogram(counts);
        if (!dataset::snippet_wise_ac_supported(metric)) continue;
        std::map<int, std::size_t> sc;
        for (const auto& s : dataset::snippet_scores(m, metric)) ++sc[dataset::ac_label_snippet(s)];
        snip[name] = histogram(sc);
    }
    return j;
}

int cmd_ingest(const RunConfig& c, std::ostream& out) {
    if (c.measurements.empty()) throw InvalidArgument("no measurements given (--measurements)");
    auto m = dataset::ingest_measurements(c.measurements);
    if (!c.dataset.empty()) m = m.only(c.dataset);
    nlohmann::ordered_json j;
    j["kind"] = "ingest_summary";
    j["source"] = c.measurements.generic_string();
    j["records"] = m.size();
    j["developer_features"] = m.dev_names;
    auto& per = j["datasets"] = nlohmann::ordered_json::object();
    for (const auto& id : m.dataset_ids()) per[id] = dataset_summary(m.only(id));
    emit(c, j.dump(2) + "\n", out);
    if (!c.output.empty()) out << "ingested " << m.size() << " record(s)\n";
    return kExitOk;
}

// ---- build

std::string manifest(const Job& job, const RunConfig& c, const dataset::ClassDistribution& dist) {
    nlohmann::ordered_json j;
    j["metric"] = dataset::metric_name(job.metric);
    j["setting"] = dataset::setting_name(job.setting);
    j["task"] = dataset::task_name(job.task);
    if (job.task == Task::RC) j["epsilon"] = job.epsilon;
    j["feature_table"] = c.features.generic_string();
    j["catalog_version"] = extract::kCatalogVersion;
    j["instance_count"] = dist.n;
    auto& d = j["class_distribution"] = nlohmann::ordered_json::object();
    for (const auto& [label, count] : dist.counts) d[std::to_string(label)] = {{"count", count}, {"share", dist.share(label)}};
    return j.dump(2) + "\n";
}

int cmd_build(const RunConfig& c, std::ostream& out, std::ostream& err) {
    if (c.output.empty()) throw InvalidArgument("no output directory given (--output)");
    const auto in = load_inputs(c);
    std::size_t built = 0;
    for (const auto& job : expand_jobs(c)) {
        if (auto why = rejection(job)) {
            err << "skip " << job.stem() << ": " << *why << "\n";
            continue;
        }
        dataset::ClassDistribution dist;
        const auto csv_path = c.output / (job.stem() + ".instances.csv");
        try {
            if (job.task == Task::AC) {
                const auto ds = dataset::build_ac_dataset(in.features, in.measurements, job.metric, job.setting);
                io::write_atomic(csv_path, dataset::instances_csv(ds));
                dist = ds.distribution;
            } else {
                // streamed: developer-wise pair sets run to millions of rows
                const dataset::RcPairs pairs(in.features, in.measurements, job.metric, job.setting, {job.epsilon, true});
                io::write_atomic_with(csv_path, [&](std::ostream& os) {
                    auto header = pairs.key_names();
                    for (auto& n : pairs.feature_names()) header.push_back(std::move(n));
                    header.push_back("label");
                    os << csv::join(header) << '\n';
                    std::string line;
                    pairs.for_each([&](const dataset::RcRow& r) {
                        line = csv::escape(r.s1) + ',' + csv::escape(r.s2);
                        if (!r.participant.empty()) line += ',' + csv::escape(r.participant);
                        for (auto part : {r.f1, r.f2, r.dev})
                            for (double v : part) line += ',' + csv::format_fixed(v);
                        line += ',' + std::to_string(r.label) + '\n';
                        os << line;
                        dist.add(r.label);
                    });
                });
            }
        } catch (const MissingMetric& e) {
            err << "skip " << job.stem() << ": " << e.what() << "\n";
            continue;
        }
        io::write_atomic(c.output / (job.stem() + ".manifest.json"), manifest(job, c, dist));
        out << job.stem() << ": " << dist.n << " instance(s)\n";
        ++built;
    }
    if (built == 0) throw InvalidArgument("no dataset could be built from this configuration");
    return kExitOk;
}

// ---- pipeline

int cmd_pipeline(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const auto r = run_pipeline(c, out);
    for (const auto& f : r.rejected) err << "rejected: " << f << "\n";
    for (const auto& f : r.failed) err << "failed: " << f << "\n";
    if (r.succeeded > 0) return kExitOk;
    if (r.reports.empty() && r.failed.empty()) {
        err << "error: every job was rejected; nothing ran\n";
        return kExitInput;
    }
    err << "error: no configuration succeeded\n";
    return kExitAllFailed;
}

// ---- compare

std::string meaning(int label) {
    switch (label) {
        case 0: return "first snippet more comprehensible";
        case 1: return "second snippet more comprehensible";
        case 2: return "equally comprehensible";
    }
    return "unknown";
}

extract::Snippet read_snippet(const fs::path& p) {
    return {p.stem().string(), "compare", io::read_text(p)};
}

int cmd_compare(const Flags& f, std::ostream& out, std::ostream& err) {
    if (f.files.size() != 2) throw InvalidArgument("compare needs exactly two .java files");
    const auto model = learn::deserialize(io::read_text(f.model));
    check_rc_model(model);
    std::vector<extract::Snippet> snips;
    for (const auto& file : f.files) snips.push_back(read_snippet(file));
    Verdict v;
    try {
        v = compare_snippets(model, snips[0], snips[1], f.both_orders);
    } catch (const ParseError& e) {
        // name the file that failed
        for (std::size_t i = 0; i < 2; ++i) try {
                (void)extract::extract_features(snips[i]);
            } catch (const ParseError& pe) {
                err << "error: " << f.files[i] << ":" << pe.what() << "\n";
            }
        return kExitInput;
    }

    nlohmann::ordered_json j;
    j["kind"] = "verdict";
    j["first"] = f.files[0];
    j["second"] = f.files[1];
    j["label"] = v.label;
    j["meaning"] = meaning(v.label);
    auto& sc = j["scores"] = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < v.labels.size(); ++i) sc[std::to_string(v.labels[i])] = v.scores[i];
    j["model"] = {{"file", f.model},
                  {"family", learn::family_name(model.family)},
                  {"hyperparams", learn::params_to_json(model.hyperparams)},
                  {"seed", model.seed}};
    j["metric"] = model.metadata.value("metric", "");
    j["epsilon"] = model.metadata.value("epsilon", 0.0);
    if (v.reverse_label) {
        j["reverse_label"] = *v.reverse_label;
        j["consistent"] = v.consistent;
    }

    std::string text = "first:   " + f.files[0] + "\nsecond:  " + f.files[1] + "\nverdict: " + std::to_string(v.label) +
                       " (" + meaning(v.label) + ")\nscores: ";
    for (std::size_t i = 0; i < v.labels.size(); ++i)
        text += " " + std::to_string(v.labels[i]) + "=" + csv::format_fixed(v.scores[i], 3);
    text += "\nmodel:   " + std::string(learn::family_name(model.family)) + " (" +
            learn::format_params(model.hyperparams) + "), " + j["metric"].get<std::string>() + " eps=" +
            csv::format_fixed(j["epsilon"].get<double>(), 2) + "\n";
    if (v.reverse_label)
        text += "reverse: " + std::to_string(*v.reverse_label) + (v.consistent ? " (consistent)" : " (DISAGREES)") + "\n";
    out << text << j.dump() << "\n";
    if (!f.output.empty()) io::write_atomic(f.output, j.dump(2) + "\n");
    return kExitOk;
}

// ---- report

void collect(const fs::path& p, bool explicit_file, std::vector<nlohmann::json>& evals,
             std::vector<nlohmann::json>& cmps, std::vector<std::string>& names) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(io::read_text(p));
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError(p.generic_string() + ": not JSON: " + e.what());
    }
    const std::string kind = j.is_object() && j.contains("kind") && j["kind"].is_string() ? j["kind"].get<std::string>() : "";
    if (kind == "evaluation") evals.push_back(std::move(j));
    else if (kind == "comparison") cmps.push_back(std::move(j));
    else if (explicit_file) throw SchemaError(p.generic_string() + ": not an evaluation or comparison report");
    else return;
    names.push_back(p.generic_string());
}

std::string signed_percent(double v) { return (v >= 0 ? "+" : "") + csv::format_fixed(100 * v, 1) + "%"; }

std::string listing(const std::vector<nlohmann::json>& evals, const std::vector<nlohmann::json>& cmps) {
    std::vector<std::vector<std::string>> rows;
    std::string out;
    try {
        for (const auto& r : evals) {
            std::string where = r.at("task").get<std::string>() + " " + r.at("setting").get<std::string>() + " " +
                                r.at("metric").get<std::string>();
            if (r.contains("epsilon")) where += " eps=" + csv::format_fixed(r.at("epsilon").get<double>(), 2);
            out += where + " " + r.at("family").get<std::string>() + ": ";
            if (r.at("ok").get<bool>())
                out += "wF1 " + csv::format_fixed(r.at("averaged_wf1").get<double>(), 3) + ", baseline (" +
                       r.at("best_baseline").at("tag").get<std::string>() + ") " +
                       csv::format_fixed(r.at("best_baseline").at("value").get<double>(), 3) + ", RI " +
                       signed_percent(r.at("ri").get<double>()) + "\n";
            else
                out += "no successful configuration\n";
        }
        for (const auto& c : cmps)
            out += "delta " + c.at("setting").get<std::string>() + " " + c.at("metric").get<std::string>() + " eps=" +
                   csv::format_fixed(c.at("epsilon").get<double>(), 2) + " " + c.at("family").get<std::string>() +
                   ": dRI " + signed_percent(c.at("delta_ri").get<double>()) + ", p " +
                   csv::format_fixed(c.at("mann_whitney").at("p").get<double>(), 4) + "\n";
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("malformed report: ") + e.what());
    }
    return out;
}

int cmd_report(const Flags& f, std::ostream& out) {
    if (f.files.empty()) throw InvalidArgument("report needs at least one report file or directory");
    std::vector<nlohmann::json> evals, cmps;
    std::vector<std::string> names;
    for (const auto& arg : f.files) {
        const fs::path p(arg);
        if (fs::is_directory(p)) {
            std::vector<fs::path> files;
            for (const auto& e : fs::directory_iterator(p))
                if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
            std::sort(files.begin(), files.end());
            for (const auto& file : files) collect(file, false, evals, cmps, names);
        } else if (fs::exists(p)) {
            collect(p, true, evals, cmps, names);
        } else {
            throw IoError(arg + ": no such file or directory");
        }
    }
    if (evals.empty() && cmps.empty()) throw SchemaError("no evaluation or comparison reports found");
    const auto format = f.format == "csv" ? eval::TableFormat::Csv : eval::TableFormat::Text;
    std::string text;
    if (f.table) {
        if (!evals.empty()) text += eval::render_table(evals, format);
        if (!cmps.empty()) text += (text.empty() ? "" : "\n") + eval::render_delta_table(cmps, format);
    } else {
        text = listing(evals, cmps);
    }
    if (f.output.empty()) out << text;
    else io::write_atomic(f.output, text);
    return kExitOk;
}

template <class F>
int guarded(F&& fn, std::ostream& err) {
    try {
        return fn();
    } catch (const ModelMismatch& e) {
        err << "error: " << e.what() << "\n";
        return kExitModelMismatch;
    } catch (const VersionMismatch& e) {
        err << "error: " << e.what() << "\n";
        return kExitModelMismatch;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Code comprehensibility lab: feature extraction, dataset building, nested-CV evaluation",
                 "comprehensibility-lab"};
    app.require_subcommand(1);
    Flags f;

    auto* ex = app.add_subcommand("extract", "compute the feature table for a set of Java methods");
    add_run_flags(ex, f, {"snippets", "dataset", "strict"});
    auto* ing = app.add_subcommand("ingest", "validate a measurements CSV and summarize it");
    add_run_flags(ing, f, {"measurements", "dataset"});
    auto* bld = app.add_subcommand("build", "write AC/RC instance tables and manifests");
    add_run_flags(bld, f, {"measurements", "features", "dataset", "jobs"});
    auto* pip = app.add_subcommand("pipeline", "nested cross-validation reports for every configured job");
    add_run_flags(pip, f, {"measurements", "features", "dataset", "jobs", "learn"});

    auto* cmp = app.add_subcommand("compare", "which of two Java methods is more comprehensible");
    cmp->add_option("--model", f.model, "RC snippet-wise model file")->required();
    cmp->add_option("files", f.files, "two .java files, each holding one method")->expected(2);
    cmp->add_flag("--both-orders", f.both_orders, "also score (B, A) and report disagreement");
    cmp->add_option("--output,-o", f.output, "also write the verdict JSON here");

    auto* rep = app.add_subcommand("report", "summarize or tabulate report files");
    rep->add_option("files", f.files, "report files or directories")->expected(0, -1);
    rep->add_flag("--table", f.table, "render result tables instead of a listing");
    rep->add_option("--format", f.format, "text or csv")->check(CLI::IsMember({"text", "csv"}));
    rep->add_option("--output,-o", f.output, "write here instead of stdout");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInput;
    }

    return guarded(
        [&]() -> int {
            if (*ex) return cmd_extract(resolve(f, ex), out, err);
            if (*ing) return cmd_ingest(resolve(f, ing), out);
            if (*bld) return cmd_build(resolve(f, bld), out, err);
            if (*pip) return cmd_pipeline(resolve(f, pip), out, err);
            if (*cmp) return cmd_compare(f, out, err);
            return cmd_report(f, out);
        },
        err);
}

}  // namespace cl::cli
