#pragma once

// The scanner's two front ends. The expression front end parses sources in
// the one-expression-per-line mini language and matches every rule at every
// AST node, producing exact findings. The heuristic front end runs fixed
// textual patterns over arbitrary text and produces best-effort findings
// that never fail a build on their own.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "numstab/exprscan/ast.hpp"
#include "numstab/exprscan/rules.hpp"

namespace numstab::exprscan {

enum class Confidence { exact, heuristic };

inline const char* to_string(Confidence c) {
    return c == Confidence::exact ? "exact" : "heuristic";
}

enum class FrontEnd { expr, heuristic };

struct Finding {
    std::string file;
    int line = 0;
    int column = 0;
    int end_column = 0;
    std::string rule_id;
    std::map<std::string, std::string> bindings; // metavariable -> rendered subexpression
    std::string matched;                         // rendered matched expression / excerpt
    std::string rewrite;                         // rendered suggested replacement
    Confidence confidence = Confidence::exact;
};

struct ScanError {
    std::string file;
    std::string message;
};

struct ScanReport {
    std::vector<Finding> findings;
    std::vector<ScanError> errors;

    bool has_exact_findings() const {
        for (const auto& f : findings)
            if (f.confidence == Confidence::exact) return true;
        return false;
    }
};

namespace detail {

// "R1" < "R2" < ... < "R10": shorter ids first, then lexicographic.
inline bool rule_id_less(const std::string& a, const std::string& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
}

inline void sort_findings(std::vector<Finding>& findings) {
    std::sort(findings.begin(), findings.end(), [](const Finding& a, const Finding& b) {
        if (a.file != b.file) return a.file < b.file;
        if (a.line != b.line) return a.line < b.line;
        if (a.column != b.column) return a.column < b.column;
        if (a.rule_id != b.rule_id) return rule_id_less(a.rule_id, b.rule_id);
        return a.end_column < b.end_column;
    });
}

inline void scan_expr_line(const std::string& file, int line_no, const std::string& line,
                           const std::vector<Rule>& rules, ScanReport& report) {
    // Strip an optional "name =" prefix; '#' comments are handled by the lexer.
    std::string body = line;
    static const std::regex assign_prefix(R"(^\s*[A-Za-z_][A-Za-z0-9_]*\s*=)");
    std::smatch m;
    int col_offset = 0;
    if (std::regex_search(line, m, assign_prefix)) {
        col_offset = static_cast<int>(m[0].length());
        body = std::string(col_offset, ' ') + line.substr(m[0].length());
    }
    // Blank or comment-only lines parse to nothing.
    bool blank = true;
    for (char c : body) {
        if (c == '#') break;
        if (c != ' ' && c != '\t') { blank = false; break; }
    }
    if (blank) return;

    ExprPtr ast;
    try {
        ast = parse_expr(body, /*allow_metavars=*/false, line_no);
    } catch (const ParseError& e) {
        std::ostringstream os;
        os << "line " << e.line << ", column " << e.column << ": " << e.what();
        report.errors.push_back({file, os.str()});
        return;
    }

    visit_exprs(ast, [&](const ExprPtr& node) {
        for (const Rule& rule : rules) {
            const auto bindings = match_rule(rule, node);
            if (!bindings) continue;
            Finding f;
            f.file = file;
            f.line = node->line;
            f.column = node->column;
            f.end_column = node->end_column;
            f.rule_id = rule.id;
            for (const auto& [name, expr] : *bindings)
                f.bindings.emplace(name, render_expr(expr));
            f.matched = render_expr(node);
            f.rewrite = render_expr(suggest_rewrite(rule, *bindings));
            f.confidence = Confidence::exact;
            report.findings.push_back(std::move(f));
        }
    });
}

struct HeuristicPattern {
    std::string rule_id;
    std::regex regex;
};

inline const std::vector<HeuristicPattern>& heuristic_patterns() {
    static const std::vector<HeuristicPattern> patterns = [] {
        std::vector<HeuristicPattern> v;
        // (a + b) / 2 midpoints
        v.push_back({"R2", std::regex(
            R"(\(\s*[A-Za-z_][A-Za-z0-9_.\[\]]*\s*\+\s*[A-Za-z_][A-Za-z0-9_.\[\]]*\s*\)\s*/\s*2(\.0+)?(?![\d.]))")});
        // sqrt(x) * sqrt(x) with the same operand
        v.push_back({"R3", std::regex(
            R"(sqrt\s*\(\s*([A-Za-z_][A-Za-z0-9_]*)\s*\)\s*\*\s*sqrt\s*\(\s*\1\s*\))")});
        // reciprocal square root
        v.push_back({"R10", std::regex(R"(\b1(\.0+)?\s*/\s*sqrt\s*\()")});
        return v;
    }();
    return patterns;
}

inline void scan_heuristic_line(const std::string& file, int line_no, const std::string& line,
                                const std::vector<Rule>& rules, ScanReport& report) {
    for (const auto& pat : heuristic_patterns()) {
        for (auto it = std::sregex_iterator(line.begin(), line.end(), pat.regex);
             it != std::sregex_iterator(); ++it) {
            Finding f;
            f.file = file;
            f.line = line_no;
            f.column = static_cast<int>(it->position()) + 1;
            f.end_column = f.column + static_cast<int>(it->length()) - 1;
            f.rule_id = pat.rule_id;
            f.matched = it->str();
            for (const Rule& r : rules)
                if (r.id == pat.rule_id) { f.rewrite = r.rewrite_text; break; }
            f.confidence = Confidence::heuristic;
            report.findings.push_back(std::move(f));
        }
    }
}

} // namespace detail

/// Scans one named source held in memory.
inline ScanReport scan_text(const std::string& name, const std::string& content,
                            const std::vector<Rule>& rules, FrontEnd front_end) {
    ScanReport report;
    std::istringstream in(content);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (front_end == FrontEnd::expr)
            detail::scan_expr_line(name, line_no, line, rules, report);
        else
            detail::scan_heuristic_line(name, line_no, line, rules, report);
    }
    detail::sort_findings(report.findings);
    return report;
}

/// Scans files and directories (recursively, in sorted path order).
inline ScanReport scan_paths(const std::vector<std::string>& paths,
                             const std::vector<Rule>& rules, FrontEnd front_end) {
    namespace fs = std::filesystem;
    std::vector<std::string> files;
    ScanReport report;
    for (const auto& p : paths) {
        std::error_code ec;
        if (fs::is_directory(p, ec)) {
            for (fs::recursive_directory_iterator it(p, ec), end; it != end; it.increment(ec)) {
                if (ec) break;
                if (it->is_regular_file()) files.push_back(it->path().generic_string());
            }
            if (ec) report.errors.push_back({p, ec.message()});
        } else {
            files.push_back(p);
        }
    }
    std::sort(files.begin(), files.end());

    for (const auto& file : files) {
        std::ifstream in(file, std::ios::binary);
        if (!in) {
            report.errors.push_back({file, "cannot open file"});
            continue;
        }
        std::ostringstream content;
        content << in.rdbuf();
        ScanReport one = scan_text(file, content.str(), rules, front_end);
        report.findings.insert(report.findings.end(), one.findings.begin(), one.findings.end());
        report.errors.insert(report.errors.end(), one.errors.begin(), one.errors.end());
    }
    detail::sort_findings(report.findings);
    return report;
}

} // namespace numstab::exprscan
