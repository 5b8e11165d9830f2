#pragma once

// Vulnerability rules: an expression pattern with metavariables and the
// rewrite template that replaces it. Matching is structural; + and * are
// tried in both operand orders, and a metavariable that occurs twice must
// bind structurally equal subexpressions.

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "numstab/exprscan/ast.hpp"

namespace numstab::exprscan {

enum class InstabilityClass { overflow, underflow, loss_of_precision, invalid_operation };

inline InstabilityClass instability_class_from(const std::string& s) {
    if (s == "overflow") return InstabilityClass::overflow;
    if (s == "underflow") return InstabilityClass::underflow;
    if (s == "loss_of_precision") return InstabilityClass::loss_of_precision;
    if (s == "invalid_operation") return InstabilityClass::invalid_operation;
    throw std::runtime_error("unknown instability class '" + s + "'");
}

inline const char* to_string(InstabilityClass c) {
    switch (c) {
        case InstabilityClass::overflow: return "overflow";
        case InstabilityClass::underflow: return "underflow";
        case InstabilityClass::loss_of_precision: return "loss_of_precision";
        case InstabilityClass::invalid_operation: return "invalid_operation";
    }
    return "?";
}

struct Rule {
    std::string id;
    ExprPtr pattern;
    ExprPtr rewrite;
    std::string pattern_text;
    std::string rewrite_text;
    InstabilityClass klass = InstabilityClass::loss_of_precision;
    int catalog_index = 0;
    std::string note;
};

using Bindings = std::map<std::string, ExprPtr>;

namespace detail {

inline bool match_node(const ExprPtr& pattern, const ExprPtr& node, Bindings& b) {
    if (pattern->kind == ExprKind::metavar) {
        auto it = b.find(pattern->text);
        if (it != b.end()) return expr_equal(it->second, node);
        b.emplace(pattern->text, node);
        return true;
    }
    if (pattern->kind != node->kind || pattern->text != node->text ||
        pattern->children.size() != node->children.size())
        return false;
    if (pattern->kind == ExprKind::binary &&
        (pattern->text == "+" || pattern->text == "*")) {
        Bindings attempt = b;
        if (match_node(pattern->children[0], node->children[0], attempt) &&
            match_node(pattern->children[1], node->children[1], attempt)) {
            b = std::move(attempt);
            return true;
        }
        attempt = b;
        if (match_node(pattern->children[0], node->children[1], attempt) &&
            match_node(pattern->children[1], node->children[0], attempt)) {
            b = std::move(attempt);
            return true;
        }
        return false;
    }
    for (std::size_t i = 0; i < pattern->children.size(); ++i)
        if (!match_node(pattern->children[i], node->children[i], b)) return false;
    return true;
}

inline void collect_metavars(const ExprPtr& e, std::set<std::string>& out) {
    visit_exprs(e, [&](const ExprPtr& n) {
        if (n->kind == ExprKind::metavar) out.insert(n->text);
    });
}

} // namespace detail

/// Matches the rule's pattern against this node (not its subexpressions).
inline std::optional<Bindings> match_rule(const Rule& rule, const ExprPtr& e) {
    Bindings b;
    if (detail::match_node(rule.pattern, e, b)) return b;
    return std::nullopt;
}

/// Replaces every metavariable in a template with its binding.
inline ExprPtr substitute(const ExprPtr& tmpl, const Bindings& bindings) {
    if (tmpl->kind == ExprKind::metavar) {
        auto it = bindings.find(tmpl->text);
        if (it == bindings.end())
            throw std::logic_error("substitute: unbound metavariable ?" + tmpl->text);
        return it->second;
    }
    std::vector<ExprPtr> children;
    children.reserve(tmpl->children.size());
    for (const auto& c : tmpl->children) children.push_back(substitute(c, bindings));
    return make_expr(tmpl->kind, tmpl->text, std::move(children));
}

/// Instantiates the rule's rewrite template with the given bindings.
inline ExprPtr suggest_rewrite(const Rule& rule, const Bindings& bindings) {
    return substitute(rule.rewrite, bindings);
}

/// Instantiates the rule's vulnerability pattern (used by the soundness
/// checks to evaluate both sides of a rule numerically).
inline ExprPtr instantiate_pattern(const Rule& rule, const Bindings& bindings) {
    return substitute(rule.pattern, bindings);
}

inline Rule make_rule(std::string id, const std::string& pattern, const std::string& rewrite,
                      InstabilityClass klass, int catalog_index, std::string note) {
    Rule r;
    r.id = std::move(id);
    r.pattern_text = pattern;
    r.rewrite_text = rewrite;
    r.pattern = parse_expr(pattern, /*allow_metavars=*/true);
    r.rewrite = parse_expr(rewrite, /*allow_metavars=*/true);
    r.klass = klass;
    r.catalog_index = catalog_index;
    r.note = std::move(note);

    std::set<std::string> in_pattern, in_rewrite;
    detail::collect_metavars(r.pattern, in_pattern);
    detail::collect_metavars(r.rewrite, in_rewrite);
    for (const auto& v : in_rewrite)
        if (!in_pattern.count(v))
            throw std::runtime_error("rule " + r.id + ": rewrite metavariable ?" + v +
                                     " does not appear in the pattern");
    return r;
}

/// Loads a rule set from its JSON form:
/// [{id, pattern, rewrite, class, catalog_index, note}].
inline std::vector<Rule> load_rules_json(const std::string& json_text) {
    const nlohmann::json doc = nlohmann::json::parse(json_text);
    if (!doc.is_array()) throw std::runtime_error("rule file: expected a JSON array");
    std::vector<Rule> rules;
    std::set<std::string> seen;
    for (const auto& item : doc) {
        Rule r = make_rule(item.at("id").get<std::string>(),
                           item.at("pattern").get<std::string>(),
                           item.at("rewrite").get<std::string>(),
                           instability_class_from(item.at("class").get<std::string>()),
                           item.at("catalog_index").get<int>(),
                           item.value("note", std::string{}));
        if (!seen.insert(r.id).second)
            throw std::runtime_error("rule file: duplicate rule id " + r.id);
        rules.push_back(std::move(r));
    }
    return rules;
}

} // namespace numstab::exprscan
