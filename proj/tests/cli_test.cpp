// End-to-end checks of the installed command-line surface: exit codes and
// the stability of the JSON report schemas against golden files.

#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output;
};

std::string cli_path() {
    const char* env = std::getenv("NUMSTAB_CLI");
    return env ? env : "numstab";
}

RunResult run_cli(const std::string& args, const std::string& cwd = {},
                  const std::string& env_prefix = {}) {
    const std::string out_file = testing::TempDir() + "/cli_out.txt";
    std::string cmd;
    if (!cwd.empty()) cmd += "cd '" + cwd + "' && ";
    if (!env_prefix.empty()) cmd += env_prefix + " ";
    cmd += "'" + cli_path() + "' " + args + " > '" + out_file + "' 2>/dev/null";
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(out_file, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    r.output = os.str();
    std::remove(out_file.c_str());
    return r;
}

std::string golden(const std::string& name) {
    std::ifstream in(std::string(NUMSTAB_GOLDEN_DIR) + "/" + name, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

} // namespace

TEST(Cli, DemoSingleCasePasses) {
    const RunResult r = run_cli("demo SM-1");
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_NE(r.output.find("PASS"), std::string::npos);
    EXPECT_NE(r.output.find("nan"), std::string::npos);
}

TEST(Cli, DemoAllCasesPass) {
    const RunResult r = run_cli("demo all");
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_NE(r.output.find("12/12 cases passed"), std::string::npos);
}

TEST(Cli, DemoJsonMatchesGolden) {
    const RunResult r = run_cli("demo SM-1 --json");
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_EQ(r.output, golden("demo_sm1.json"));
}

TEST(Cli, UnknownCaseIsAUsageError) {
    EXPECT_EQ(run_cli("demo NOPE-9").exit_code, 2);
}

TEST(Cli, UnknownFlagIsAUsageError) {
    EXPECT_EQ(run_cli("demo SM-1 --frobnicate").exit_code, 2);
    EXPECT_EQ(run_cli("no-such-subcommand").exit_code, 2);
}

TEST(Cli, ScanUnstableCorpusExitsOneWithTenFindings) {
    const RunResult r = run_cli("scan corpus/unstable --front-end expr",
                                std::string(NUMSTAB_DATA_DIR));
    EXPECT_EQ(r.exit_code, 1);
    EXPECT_NE(r.output.find("10 finding(s)"), std::string::npos);
}

TEST(Cli, ScanStableCorpusExitsZero) {
    const RunResult r = run_cli("scan corpus/stable --front-end expr",
                                std::string(NUMSTAB_DATA_DIR));
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_NE(r.output.find("0 finding(s)"), std::string::npos);
}

TEST(Cli, ScanJsonMatchesGolden) {
    const RunResult r = run_cli("scan corpus/unstable --front-end expr --format json",
                                std::string(NUMSTAB_DATA_DIR));
    EXPECT_EQ(r.exit_code, 1);
    EXPECT_EQ(r.output, golden("scan_unstable.json"));
}

TEST(Cli, HeuristicFindingsNeverFailTheRun) {
    const std::string tmp = testing::TempDir() + "/heuristic_input.txt";
    {
        std::ofstream out(tmp);
        out << "size_t mid = (low + high) / 2;\n";
    }
    const RunResult r = run_cli("scan '" + tmp + "' --front-end heuristic");
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_NE(r.output.find("[R2] (heuristic)"), std::string::npos);
    std::remove(tmp.c_str());
}

TEST(Cli, CatalogStatsAggregateReproducesTheHeadlinePercentages) {
    const RunResult r = run_cli("catalog stats --source paper-aggregate");
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_NE(r.output.find("46.8%"), std::string::npos);
    EXPECT_NE(r.output.find("34.1%"), std::string::npos);
    EXPECT_NE(r.output.find("25.0%"), std::string::npos);
}

TEST(Cli, CatalogQueryByKeyword) {
    const RunResult r = run_cli("catalog query --keyword 'binary search'");
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_NE(r.output.find("#28"), std::string::npos);
}

TEST(Cli, CatalogPathOverrideThroughEnvironment) {
    const std::string tmp = testing::TempDir() + "/tiny_catalog.json";
    {
        std::ofstream out(tmp);
        out << "[]";
    }
    const RunResult r = run_cli("catalog stats --source seed", std::string(),
                                "NUMSTAB_CATALOG='" + tmp + "'");
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_NE(r.output.find("(0 records)"), std::string::npos);
    std::remove(tmp.c_str());
}

TEST(Cli, VerifyOraclesSuiteIsClean) {
    const RunResult r = run_cli("verify --suite oracles");
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_EQ(r.output.find("[FAIL]"), std::string::npos);
}

TEST(Cli, VerifyAllSuitesExitZeroOnACleanTree) {
    const RunResult r = run_cli("verify --suite all");
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_NE(r.output.find("all suites clean"), std::string::npos);
    for (const char* suite : {"proofs", "rules", "gradients", "oracles", "properties", "cases"})
        EXPECT_NE(r.output.find(std::string("suite ") + suite), std::string::npos) << suite;
}

TEST(Cli, UserRuleFilesLoadThroughTheRulesFlag) {
    // A single-rule file: only the midpoint pattern fires on the corpus.
    const std::string tmp = testing::TempDir() + "/one_rule.json";
    {
        std::ofstream out(tmp);
        out << R"([{"id": "R2", "pattern": "(?l + ?r) / 2", "rewrite": "?l + (?r - ?l) / 2",)"
            << R"( "class": "overflow", "catalog_index": 28, "note": ""}])";
    }
    const RunResult r = run_cli("scan corpus/unstable --rules '" + tmp + "' --front-end expr",
                                std::string(NUMSTAB_DATA_DIR));
    EXPECT_EQ(r.exit_code, 1);
    EXPECT_NE(r.output.find("1 finding(s)"), std::string::npos);
    std::remove(tmp.c_str());
}

TEST(Cli, JsonReportsAreByteStableAcrossRuns) {
    for (const std::string& args :
         {std::string("catalog stats --source paper-aggregate --json"),
          std::string("catalog query --keyword softmax --json"),
          std::string("verify --suite oracles --json")}) {
        const RunResult a = run_cli(args);
        const RunResult b = run_cli(args);
        EXPECT_EQ(a.output, b.output) << args;
        EXPECT_FALSE(a.output.empty());
    }
}

TEST(Cli, MlpStableRunExitsZero) {
    const RunResult r = run_cli("mlp --mode stable");
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_NE(r.output.find("finite"), std::string::npos);
}

TEST(Cli, MlpUnstableRunReportsTheBlowUp) {
    const RunResult r = run_cli("mlp --mode unstable");
    EXPECT_EQ(r.exit_code, 0); // blowing up is this mode's expected outcome
    EXPECT_NE(r.output.find("non-finite"), std::string::npos);
}

TEST(Cli, MlpJsonIsStableAcrossRuns) {
    const RunResult a = run_cli("mlp --mode unstable --json");
    const RunResult b = run_cli("mlp --mode unstable --json");
    EXPECT_EQ(a.output, b.output);
    EXPECT_EQ(a.exit_code, 0);
}
