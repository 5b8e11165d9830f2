// numstab - command-line front end for the numerical-stability toolkit:
// failure-case demos, verification suites, the expression scanner, the
// record catalog, and the NaN-propagation MLP demo.
//
// Exit codes: 0 success / no findings; 1 findings present or an expectation
// failed; 2 usage error; 3 internal error.

#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "numstab/catalog/catalog.hpp"
#include "numstab/exprscan/scan.hpp"
#include "numstab/harness/manifest.hpp"
#include "numstab/harness/mlp.hpp"
#include "numstab/verify.hpp"

namespace {

using nlohmann::json;

constexpr int kSchemaVersion = 1;

std::string data_dir_default() {
#ifdef NUMSTAB_DEFAULT_DATA_DIR
    return NUMSTAB_DEFAULT_DATA_DIR;
#else
    return "data";
#endif
}

struct Paths {
    std::string data_dir = data_dir_default();

    std::string cases() const { return data_dir + "/cases.json"; }
    std::string rules() const { return data_dir + "/rules.json"; }
    std::string aggregate() const { return data_dir + "/paper_aggregate.json"; }
    std::string catalog() const {
        if (const char* env = std::getenv("NUMSTAB_CATALOG")) return env;
        return data_dir + "/catalog_seed.json";
    }
};

std::vector<numstab::exprscan::Rule> load_rules_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open rule file " + path);
    std::ostringstream text;
    text << in.rdbuf();
    return numstab::exprscan::load_rules_json(text.str());
}

json case_report_json(const numstab::harness::CaseReport& r) {
    json j;
    j["id"] = r.id;
    j["observed_unstable"] = r.observed_unstable;
    j["observed_stable"] = r.observed_stable;
    j["pass_unstable"] = r.pass_unstable;
    j["pass_stable"] = r.pass_stable;
    j["pass"] = r.pass();
    if (!r.notes.empty()) j["notes"] = r.notes;
    return j;
}

int cmd_demo(const Paths& paths, const std::string& case_id, bool as_json) {
    const auto manifest = numstab::harness::Manifest::load(paths.cases());
    std::vector<std::string> ids;
    if (case_id == "all")
        ids = manifest.list_cases();
    else
        ids.push_back(case_id);

    std::vector<numstab::harness::CaseReport> reports;
    for (const auto& id : ids) reports.push_back(manifest.run_case(id));

    bool all_pass = true;
    for (const auto& r : reports) all_pass = all_pass && r.pass();

    if (as_json) {
        json out;
        out["schema_version"] = kSchemaVersion;
        out["all_pass"] = all_pass;
        out["cases"] = json::array();
        for (const auto& r : reports) out["cases"].push_back(case_report_json(r));
        std::cout << out.dump(2) << "\n";
    } else {
        for (const auto& r : reports) {
            std::printf("case %-5s %s\n", r.id.c_str(), r.pass() ? "PASS" : "FAIL");
            std::printf("  unstable: %-40s %s\n", r.observed_unstable.c_str(),
                        r.pass_unstable ? "as expected" : "UNEXPECTED");
            std::printf("  stable:   %-40s %s\n", r.observed_stable.c_str(),
                        r.pass_stable ? "as expected" : "UNEXPECTED");
            if (!r.notes.empty()) std::printf("  note: %s\n", r.notes.c_str());
        }
        std::printf("%zu/%zu cases passed\n",
                    static_cast<std::size_t>(std::count_if(
                        reports.begin(), reports.end(),
                        [](const auto& r) { return r.pass(); })),
                    reports.size());
    }
    return all_pass ? 0 : 1;
}

int cmd_verify(const Paths& paths, const std::string& suite, bool as_json) {
    using numstab::verify::SuiteResult;
    std::vector<SuiteResult> results;
    if (suite == "proofs" || suite == "all") {
        results.push_back(numstab::verify::run_proofs_suite());
        results.push_back(numstab::verify::run_rules_suite(load_rules_file(paths.rules())));
    }
    if (suite == "gradients" || suite == "all")
        results.push_back(numstab::verify::run_gradients_suite());
    if (suite == "oracles" || suite == "all")
        results.push_back(numstab::verify::run_oracles_suite());
    if (suite == "all") {
        results.push_back(numstab::verify::run_properties_suite());
        results.push_back(numstab::verify::run_cases_suite(
            numstab::harness::Manifest::load(paths.cases())));
    }

    bool all_pass = true;
    for (const auto& s : results) all_pass = all_pass && s.pass();

    if (as_json) {
        json out;
        out["schema_version"] = kSchemaVersion;
        out["all_pass"] = all_pass;
        out["suites"] = json::array();
        for (const auto& s : results) {
            json js;
            js["name"] = s.name;
            js["pass"] = s.pass();
            js["checks"] = json::array();
            for (const auto& c : s.checks)
                js["checks"].push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
            out["suites"].push_back(std::move(js));
        }
        std::cout << out.dump(2) << "\n";
    } else {
        for (const auto& s : results) {
            std::printf("suite %s\n", s.name.c_str());
            for (const auto& c : s.checks)
                std::printf("  [%s] %s%s%s\n", c.pass ? "PASS" : "FAIL", c.name.c_str(),
                            c.detail.empty() ? "" : " - ", c.detail.c_str());
        }
        std::printf("verify: %s\n", all_pass ? "all suites clean" : "FAILURES present");
    }
    return all_pass ? 0 : 1;
}

int cmd_scan(const Paths& paths, const std::vector<std::string>& targets,
             const std::string& rules_file, const std::string& front_end,
             const std::string& format) {
    using namespace numstab::exprscan;
    const auto rules =
        load_rules_file(rules_file.empty() ? paths.rules() : rules_file);
    const FrontEnd fe = front_end == "heuristic" ? FrontEnd::heuristic : FrontEnd::expr;
    const ScanReport report = scan_paths(targets, rules, fe);

    for (const auto& err : report.errors)
        std::cerr << "scan: " << err.file << ": " << err.message << "\n";

    if (format == "json") {
        json out;
        out["schema_version"] = kSchemaVersion;
        out["front_end"] = front_end;
        out["findings"] = json::array();
        for (const auto& f : report.findings) {
            json jf;
            jf["file"] = f.file;
            jf["line"] = f.line;
            jf["column"] = f.column;
            jf["end_column"] = f.end_column;
            jf["rule"] = f.rule_id;
            jf["confidence"] = to_string(f.confidence);
            jf["matched"] = f.matched;
            jf["rewrite"] = f.rewrite;
            jf["bindings"] = f.bindings;
            out["findings"].push_back(std::move(jf));
        }
        out["errors"] = json::array();
        for (const auto& e : report.errors)
            out["errors"].push_back({{"file", e.file}, {"message", e.message}});
        std::cout << out.dump(2) << "\n";
    } else {
        for (const auto& f : report.findings) {
            std::printf("%s:%d:%d: [%s] (%s) %s\n", f.file.c_str(), f.line, f.column,
                        f.rule_id.c_str(), to_string(f.confidence), f.matched.c_str());
            std::printf("    suggest: %s\n", f.rewrite.c_str());
        }
        std::printf("%zu finding(s)\n", report.findings.size());
    }
    return report.has_exact_findings() ? 1 : 0;
}

void print_stats_table(const char* title, const std::vector<numstab::catalog::StatLine>& lines,
                       int total) {
    std::printf("%s\n", title);
    int sum = 0;
    for (const auto& l : lines) {
        std::printf("  %-45s %5d  %7s\n", l.label.c_str(), l.count,
                    numstab::catalog::format_percent(l.count, total).c_str());
        sum += l.count;
    }
    std::printf("  %-45s %5d  %7s\n", "total", sum,
                numstab::catalog::format_percent(sum, total).c_str());
}

int cmd_catalog_stats(const Paths& paths, const std::string& source, bool as_json) {
    numstab::catalog::CatalogStats stats;
    if (source == "paper-aggregate") {
        stats = numstab::catalog::AggregateCounts::load(paths.aggregate()).as_stats();
    } else {
        stats = numstab::catalog::Catalog::load(paths.catalog()).stats();
    }

    if (as_json) {
        json out;
        out["schema_version"] = kSchemaVersion;
        out["source"] = source;
        out["total"] = stats.total;
        auto dim = [&](const std::vector<numstab::catalog::StatLine>& lines) {
            json arr = json::array();
            for (const auto& l : lines)
                arr.push_back({{"label", l.label},
                               {"count", l.count},
                               {"percent", numstab::catalog::format_percent(l.count, stats.total)}});
            return arr;
        };
        out["exception_type"] = dim(stats.exceptions);
        out["patch_type"] = dim(stats.patches);
        out["dl_topic"] = dim(stats.topics);
        std::cout << out.dump(2) << "\n";
    } else {
        std::printf("source: %s (%d records)\n", source.c_str(), stats.total);
        print_stats_table("errors caused by numerical instability:", stats.exceptions,
                          stats.total);
        print_stats_table("solution patterns:", stats.patches, stats.total);
        print_stats_table("affected topics:", stats.topics, stats.total);
    }
    return 0;
}

int cmd_catalog_query(const Paths& paths, const numstab::catalog::CatalogQuery& query,
                      bool as_json) {
    const auto cat = numstab::catalog::Catalog::load(paths.catalog());
    const auto hits = cat.query(query);
    if (as_json) {
        json out;
        out["schema_version"] = kSchemaVersion;
        out["count"] = hits.size();
        out["entries"] = json::array();
        for (const auto& e : hits) {
            json je;
            je["index"] = e.index;
            je["library"] = e.library;
            je["language"] = e.language;
            je["root_cause"] = e.root_cause;
            je["manifestation"] = e.manifestation;
            je["exception_type"] = e.exception_label();
            je["dl_topics"] = e.dl_topics;
            je["patch_type"] = numstab::catalog::to_string(e.patch_type);
            je["old_solution"] = e.old_solution;
            je["new_solution"] = e.new_solution;
            out["entries"].push_back(std::move(je));
        }
        std::cout << out.dump(2) << "\n";
    } else {
        for (const auto& e : hits) {
            std::printf("#%-3d [%s, %s] %s\n", e.index, e.library.c_str(), e.language.c_str(),
                        numstab::catalog::to_string(e.patch_type).c_str());
            std::printf("     cause: %s\n", e.root_cause.c_str());
            std::printf("     shows: %s\n", e.manifestation.c_str());
            if (!e.new_solution.empty())
                std::printf("     fix:   %s\n", e.new_solution.c_str());
        }
        std::printf("%zu entr%s\n", hits.size(), hits.size() == 1 ? "y" : "ies");
    }
    return 0;
}

int cmd_mlp(const numstab::harness::MlpConfig& cfg, bool as_json) {
    const auto report = numstab::harness::run_mlp_demo(cfg);
    const bool unstable_mode = cfg.softmax_mode == numstab::StabilityMode::unstable;
    if (as_json) {
        json out;
        out["schema_version"] = kSchemaVersion;
        out["mode"] = numstab::to_string(cfg.softmax_mode);
        out["precision"] = numstab::to_string(cfg.softmax_precision);
        out["seed"] = cfg.seed;
        out["epochs"] = cfg.epochs;
        out["losses"] = json::array();
        for (double l : report.losses)
            out["losses"].push_back(numstab::harness::detail::render_value(l));
        out["first_nonfinite_epoch"] =
            report.first_nonfinite_epoch ? json(*report.first_nonfinite_epoch) : json(nullptr);
        out["first_zero_prob_epoch"] =
            report.first_zero_prob_epoch ? json(*report.first_zero_prob_epoch) : json(nullptr);
        out["final_params_finite"] = report.final_params_finite;
        std::cout << out.dump(2) << "\n";
    } else {
        std::printf("mlp demo: %s softmax at %s, seed %llu, %zu epochs\n",
                    numstab::to_string(cfg.softmax_mode),
                    numstab::to_string(cfg.softmax_precision),
                    static_cast<unsigned long long>(cfg.seed), cfg.epochs);
        for (std::size_t e = 0; e < report.losses.size(); ++e) {
            if (e < 3 || e + 3 >= report.losses.size() ||
                (report.first_nonfinite_epoch &&
                 (e + 1 == *report.first_nonfinite_epoch || e == *report.first_nonfinite_epoch)))
                std::printf("  epoch %3zu  loss %s\n", e,
                            numstab::harness::detail::render_value(report.losses[e]).c_str());
            else if (e == 3)
                std::printf("  ...\n");
        }
        if (report.first_zero_prob_epoch)
            std::printf("first zero probability against a zero label: epoch %zu\n",
                        *report.first_zero_prob_epoch);
        if (report.first_nonfinite_epoch)
            std::printf("loss became non-finite at epoch %zu\n", *report.first_nonfinite_epoch);
        else
            std::printf("loss stayed finite for all %zu epochs\n", report.losses.size());
        std::printf("final parameters %s\n",
                    report.final_params_finite ? "finite" : "contain non-finite values");
    }
    // The unstable demo is expected to blow up; the stable one is expected
    // not to. Exit 1 when the run defies its mode's expectation.
    const bool expectation_met = unstable_mode
                                     ? report.first_nonfinite_epoch.has_value()
                                     : (!report.first_nonfinite_epoch &&
                                        report.final_params_finite);
    return expectation_met ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"numstab - unstable numerical kernels, their stable rewrites, and the tooling around them"};
    app.require_subcommand(1);

    Paths paths;
    app.add_option("--data-dir", paths.data_dir,
                   "Directory holding cases.json, rules.json and the catalog fixtures")
        ->envname("NUMSTAB_DATA_DIR");

    // demo
    std::string demo_case;
    bool demo_json = false;
    auto* demo = app.add_subcommand("demo", "Run one failure-inducing case (or all) in both modes");
    demo->add_option("case", demo_case, "Case id (e.g. SM-1) or 'all'")->required();
    demo->add_flag("--json", demo_json, "Emit a JSON report");

    // verify
    std::string verify_suite = "all";
    bool verify_json = false;
    auto* verify = app.add_subcommand("verify", "Run the machine-checked invariant suites");
    verify->add_option("--suite", verify_suite, "proofs, gradients, oracles, or all")
        ->check(CLI::IsMember({"proofs", "gradients", "oracles", "all"}));
    verify->add_flag("--json", verify_json, "Emit a JSON report");

    // scan
    std::vector<std::string> scan_targets;
    std::string scan_rules, scan_front_end = "expr", scan_format = "text";
    auto* scan = app.add_subcommand("scan", "Scan sources for unstable expression patterns");
    scan->add_option("paths", scan_targets, "Files or directories to scan")->required();
    scan->add_option("--rules", scan_rules, "Rule file (defaults to the shipped rule set)");
    scan->add_option("--front-end", scan_front_end, "expr (exact) or heuristic (textual)")
        ->check(CLI::IsMember({"expr", "heuristic"}));
    scan->add_option("--format", scan_format, "text or json")
        ->check(CLI::IsMember({"text", "json"}));

    // catalog
    auto* catalog = app.add_subcommand("catalog", "Query the record catalog or print statistics");
    catalog->require_subcommand(1);

    numstab::catalog::CatalogQuery query;
    std::string opt_topic, opt_cause, opt_exception, opt_patch, opt_keyword;
    bool query_json = false;
    auto* catalog_query = catalog->add_subcommand("query", "Filter catalog entries");
    catalog_query->add_option("--topic", opt_topic, "Exact topic tag, e.g. 'activation functions'");
    catalog_query->add_option("--root-cause", opt_cause, "Substring of the root cause");
    catalog_query
        ->add_option("--exception", opt_exception,
                     "overflow, underflow, loss_of_precision, or invalid_input")
        ->check(CLI::IsMember({"overflow", "underflow", "loss_of_precision", "invalid_input"}));
    catalog_query->add_option("--patch-type", opt_patch, "Patch type enum value")
        ->check(CLI::IsMember({"rewrite_math_formula", "increase_precision_or_change_type",
                               "different_algorithm", "limit_input_range", "relax_tolerance",
                               "add_overflow_check", "add_fix_assertion_or_test",
                               "ignore_test_or_exception", "mixed_precision_training", "other"}));
    catalog_query->add_option("--keyword", opt_keyword, "Case-insensitive search over all text");
    catalog_query->add_flag("--json", query_json, "Emit a JSON report");

    std::string stats_source = "seed";
    bool stats_json = false;
    auto* catalog_stats = catalog->add_subcommand("stats", "Aggregate statistics");
    catalog_stats->add_option("--source", stats_source, "seed or paper-aggregate")
        ->check(CLI::IsMember({"seed", "paper-aggregate"}));
    catalog_stats->add_flag("--json", stats_json, "Emit a JSON report");

    // mlp
    numstab::harness::MlpConfig mlp_cfg;
    std::string mlp_mode = "unstable";
    bool mlp_json = false;
    auto* mlp = app.add_subcommand("mlp", "Train the synthetic-cluster MLP demo");
    mlp->add_option("--mode", mlp_mode, "stable or unstable softmax")
        ->check(CLI::IsMember({"stable", "unstable"}));
    mlp->add_option("--seed", mlp_cfg.seed, "RNG seed");
    mlp->add_option("--epochs", mlp_cfg.epochs, "Training epochs");
    mlp->add_flag("--json", mlp_json, "Emit a JSON report");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return 2;
    }

    try {
        if (demo->parsed()) return cmd_demo(paths, demo_case, demo_json);
        if (verify->parsed()) return cmd_verify(paths, verify_suite, verify_json);
        if (scan->parsed())
            return cmd_scan(paths, scan_targets, scan_rules, scan_front_end, scan_format);
        if (catalog->parsed()) {
            if (catalog_query->parsed()) {
                if (!opt_topic.empty()) query.topic = opt_topic;
                if (!opt_cause.empty()) query.root_cause_substring = opt_cause;
                if (!opt_exception.empty()) query.exception = opt_exception;
                if (!opt_patch.empty()) query.patch_type = opt_patch;
                if (!opt_keyword.empty()) query.keyword = opt_keyword;
                return cmd_catalog_query(paths, query, query_json);
            }
            return cmd_catalog_stats(paths, stats_source, stats_json);
        }
        if (mlp->parsed()) {
            mlp_cfg.softmax_mode = mlp_mode == "stable" ? numstab::StabilityMode::stable
                                                        : numstab::StabilityMode::unstable;
            return cmd_mlp(mlp_cfg, mlp_json);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
