// Acceptance suite: one line per criterion, each run against its stated
// tolerance and wall-clock budget. Exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "numstab/exprscan/scan.hpp"
#include "numstab/harness/manifest.hpp"
#include "numstab/harness/mlp.hpp"
#include "numstab/catalog/catalog.hpp"
#include "numstab/kernels.hpp"
#include "numstab/verify.hpp"

using namespace numstab;

namespace {

int failures = 0;

class Criterion {
public:
    Criterion(int number, std::string label, double budget_seconds)
        : number_(number), label_(std::move(label)), budget_(budget_seconds),
          start_(std::chrono::steady_clock::now()) {}

    void check(bool ok, const std::string& what) {
        if (!ok) {
            problems_.push_back(what);
        }
    }

    ~Criterion() {
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        if (elapsed > budget_) {
            std::ostringstream os;
            os << "exceeded the " << budget_ << " s budget (" << elapsed << " s)";
            problems_.push_back(os.str());
        }
        if (problems_.empty()) {
            std::printf("[PASS] criterion %2d: %s (%.2f s)\n", number_, label_.c_str(), elapsed);
        } else {
            ++failures;
            std::printf("[FAIL] criterion %2d: %s\n", number_, label_.c_str());
            for (const auto& p : problems_) std::printf("        - %s\n", p.c_str());
        }
    }

private:
    int number_;
    std::string label_;
    double budget_;
    std::chrono::steady_clock::time_point start_;
    std::vector<std::string> problems_;
};

std::string data_path(const std::string& name) {
    return std::string(NUMSTAB_DATA_DIR) + "/" + name;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

bool suite_clean(const verify::SuiteResult& s, Criterion& c) {
    for (const auto& check : s.checks)
        c.check(check.pass, s.name + ": " + check.name + " (" + check.detail + ")");
    return s.pass();
}

} // namespace

int main() {
    const harness::Manifest manifest = harness::Manifest::load(data_path("cases.json"));
    const auto rules = exprscan::load_rules_json(slurp(data_path("rules.json")));

    { // 1. Softmax reproduction at binary32, both canonical inputs.
        Criterion c(1, "softmax failure-inducing inputs reproduce", 1.0);
        const auto sm1 = manifest.run_case("SM-1");
        c.check(sm1.pass_unstable, "SM-1 unstable observed " + sm1.observed_unstable);
        c.check(sm1.pass_stable, "SM-1 stable observed " + sm1.observed_stable);
        const auto sm2 = manifest.run_case("SM-2");
        c.check(sm2.pass_unstable, "SM-2 unstable observed " + sm2.observed_unstable);
        c.check(sm2.pass_stable, "SM-2 stable observed " + sm2.observed_stable);
    }

    { // 2. The four cataloged manifestation rows.
        Criterion c(2, "cataloged manifestation rows T4-1..T4-4 reproduce", 5.0);
        for (const char* id : {"T4-1", "T4-2", "T4-3", "T4-4"}) {
            const auto r = manifest.run_case(id);
            c.check(r.pass_unstable,
                    std::string(id) + " unstable observed " + r.observed_unstable);
            c.check(r.pass_stable, std::string(id) + " stable observed " + r.observed_stable);
        }
    }

    { // 3. Billion-element binary search.
        Criterion c(3, "2^31-1 element search: stable finds, unstable overflows", 1.0);
        const auto r = manifest.run_case("BS-1");
        c.check(r.pass_stable, "stable observed " + r.observed_stable);
        c.check(r.pass_unstable, "unstable observed " + r.observed_unstable);
    }

    { // 4. Identity proof suites.
        Criterion c(4, "shift invariance, log-sum-exp, sync-bn, midpoint identities", 10.0);
        suite_clean(verify::run_proofs_suite(), c);
    }

    { // 5. LU backward gradient checks.
        Criterion c(5, "lu_backward matches finite differences at 1e-5 relative", 30.0);
        suite_clean(verify::run_gradients_suite(), c);
    }

    { // 6. Higher-order derivative overflow/underflow pair.
        Criterion c(6, "higher-order gradient overflow and underflow cases", 1.0);
        const double over_u = higher_order_div_grad(1.0, 1e180, 1e200, StabilityMode::unstable);
        const double over_s = higher_order_div_grad(1.0, 1e180, 1e200, StabilityMode::stable);
        c.check(over_u == 0.0 && std::signbit(over_u), "overflow case unstable is -0");
        c.check(std::fabs(over_s - (-1e-220)) <= 1e-233, "overflow case stable is -1e-220");
        const double under_u = higher_order_div_grad(1.0, 1e-100, 1e-200, StabilityMode::unstable);
        const double under_s = higher_order_div_grad(1.0, 1e-100, 1e-200, StabilityMode::stable);
        c.check(std::isinf(under_u) && under_u < 0, "underflow case unstable is -inf");
        c.check(std::fabs(under_s - (-1e300)) <= 1e287, "underflow case stable is -1e300");
    }

    { // 7. Scanner corpus and rule soundness.
        Criterion c(7, "scanner: 10/10 unstable, 0/10 stable, sound rewrites", 10.0);
        const auto unstable =
            exprscan::scan_paths({data_path("corpus/unstable")}, rules, exprscan::FrontEnd::expr);
        c.check(unstable.findings.size() == 10,
                "unstable corpus findings: " + std::to_string(unstable.findings.size()));
        std::set<std::string> seen;
        std::ostringstream rendered;
        for (const auto& f : unstable.findings) {
            seen.insert(f.rule_id);
            c.check(f.confidence == exprscan::Confidence::exact, f.rule_id + " not exact");
            rendered << f.rule_id << ": " << f.rewrite << "\n";
        }
        c.check(seen.size() == 10, "rules covered: " + std::to_string(seen.size()));
        const std::string golden = slurp(std::string(NUMSTAB_GOLDEN_DIR) + "/rewrites.txt");
        c.check(rendered.str() == golden, "suggested rewrites differ from the golden file");

        const auto stable =
            exprscan::scan_paths({data_path("corpus/stable")}, rules, exprscan::FrontEnd::expr);
        c.check(stable.findings.empty(),
                "stable corpus findings: " + std::to_string(stable.findings.size()));

        suite_clean(verify::run_rules_suite(rules), c);
    }

    { // 8. Aggregate statistics.
        Criterion c(8, "aggregate stats reproduce the study percentages", 1.0);
        const auto agg = catalog::AggregateCounts::load(data_path("paper_aggregate.json"));
        auto pct = [&](const std::vector<catalog::StatLine>& dim, const std::string& label) {
            for (const auto& l : dim)
                if (l.label == label) return catalog::format_percent(l.count, agg.total_commits);
            return std::string("missing");
        };
        c.check(pct(agg.exceptions, "overflow") == "46.8%", "overflow percent");
        c.check(pct(agg.exceptions, "loss of precision") == "34.1%", "loss-of-precision percent");
        c.check(pct(agg.patches, "rewrite math formula") == "25.0%", "rewrite percent");
        c.check(pct(agg.patches, "increase precision/change variable type") == "23.4%",
                "increase-precision percent");
        c.check(pct(agg.patches, "use a different algorithm") == "17.1%",
                "different-algorithm percent");
        int ex_sum = 0, patch_sum = 0, topic_sum = 0;
        for (const auto& l : agg.exceptions) ex_sum += l.count;
        for (const auto& l : agg.patches) patch_sum += l.count;
        for (const auto& l : agg.topics) topic_sum += l.count;
        c.check(ex_sum == 252 && patch_sum == 252 && topic_sum == 222, "dimension totals");
    }

    { // 9. MLP demo.
        Criterion c(9, "mlp demo: unstable blows up, stable survives, reproducible", 60.0);
        harness::MlpConfig cfg;
        cfg.softmax_mode = StabilityMode::unstable;
        const auto a = harness::run_mlp_demo(cfg);
        const auto b = harness::run_mlp_demo(cfg);
        c.check(a.first_nonfinite_epoch.has_value(), "unstable run reports a non-finite epoch");
        c.check(a.first_zero_prob_epoch.has_value() &&
                    a.first_nonfinite_epoch >= a.first_zero_prob_epoch,
                "zero-probability event precedes the non-finite loss");
        bool identical = a.losses.size() == b.losses.size() &&
                         a.first_nonfinite_epoch == b.first_nonfinite_epoch;
        for (std::size_t i = 0; identical && i < a.losses.size(); ++i) {
            const bool both_nan = std::isnan(a.losses[i]) && std::isnan(b.losses[i]);
            identical = both_nan || a.losses[i] == b.losses[i];
        }
        c.check(identical, "unstable run is bit-reproducible under the fixed seed");

        cfg.softmax_mode = StabilityMode::stable;
        const auto s = harness::run_mlp_demo(cfg);
        c.check(!s.first_nonfinite_epoch.has_value(), "stable run stays finite");
        c.check(s.final_params_finite, "stable run ends with finite parameters");
    }

    { // 10. Property suites.
        Criterion c(10, "property suites (variance, summation, search, ast, sampler)", 60.0);
        suite_clean(verify::run_properties_suite(), c);
        suite_clean(verify::run_oracles_suite(), c);
    }

    if (failures == 0) {
        std::printf("acceptance: all 10 criteria passed\n");
        return 0;
    }
    std::printf("acceptance: %d criterion(s) FAILED\n", failures);
    return 1;
}
