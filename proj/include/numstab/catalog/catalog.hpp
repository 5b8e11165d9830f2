#pragma once

// The record store for cataloged instability findings: schema-validated
// load/save in a canonical JSON form, conjunctive querying, and aggregate
// statistics either computed from loaded entries or taken verbatim from the
// shipped aggregate-counts fixture.

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace numstab::catalog {

enum class CommitType { patch, unit_test, new_feature, speed_optimization, other };
enum class ExceptionType { overflow, underflow, loss_of_precision, invalid_input };
enum class PatchType {
    rewrite_math_formula,
    increase_precision_or_change_type,
    different_algorithm,
    limit_input_range,
    relax_tolerance,
    add_overflow_check,
    add_fix_assertion_or_test,
    ignore_test_or_exception,
    mixed_precision_training,
    other
};

namespace detail {

template <typename Enum>
struct EnumNames;

template <>
struct EnumNames<CommitType> {
    static const std::vector<std::pair<CommitType, std::string>>& table() {
        static const std::vector<std::pair<CommitType, std::string>> t = {
            {CommitType::patch, "patch"},
            {CommitType::unit_test, "unit_test"},
            {CommitType::new_feature, "new_feature"},
            {CommitType::speed_optimization, "speed_optimization"},
            {CommitType::other, "other"},
        };
        return t;
    }
};

template <>
struct EnumNames<ExceptionType> {
    static const std::vector<std::pair<ExceptionType, std::string>>& table() {
        static const std::vector<std::pair<ExceptionType, std::string>> t = {
            {ExceptionType::overflow, "overflow"},
            {ExceptionType::underflow, "underflow"},
            {ExceptionType::loss_of_precision, "loss_of_precision"},
            {ExceptionType::invalid_input, "invalid_input"},
        };
        return t;
    }
};

template <>
struct EnumNames<PatchType> {
    static const std::vector<std::pair<PatchType, std::string>>& table() {
        static const std::vector<std::pair<PatchType, std::string>> t = {
            {PatchType::rewrite_math_formula, "rewrite_math_formula"},
            {PatchType::increase_precision_or_change_type, "increase_precision_or_change_type"},
            {PatchType::different_algorithm, "different_algorithm"},
            {PatchType::limit_input_range, "limit_input_range"},
            {PatchType::relax_tolerance, "relax_tolerance"},
            {PatchType::add_overflow_check, "add_overflow_check"},
            {PatchType::add_fix_assertion_or_test, "add_fix_assertion_or_test"},
            {PatchType::ignore_test_or_exception, "ignore_test_or_exception"},
            {PatchType::mixed_precision_training, "mixed_precision_training"},
            {PatchType::other, "other"},
        };
        return t;
    }
};

template <typename Enum>
std::string enum_to_string(Enum v) {
    for (const auto& [e, name] : EnumNames<Enum>::table())
        if (e == v) return name;
    throw std::logic_error("enum_to_string: unknown value");
}

template <typename Enum>
Enum enum_from_string(const std::string& s, const std::string& field, int entry_index) {
    for (const auto& [e, name] : EnumNames<Enum>::table())
        if (name == s) return e;
    std::ostringstream os;
    os << "catalog entry " << entry_index << ": field '" << field << "' has unknown value '" << s
       << "'";
    throw std::runtime_error(os.str());
}

inline std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

inline bool icontains(const std::string& haystack, const std::string& needle) {
    return lower(haystack).find(lower(needle)) != std::string::npos;
}

} // namespace detail

inline std::string to_string(CommitType v) { return detail::enum_to_string(v); }
inline std::string to_string(ExceptionType v) { return detail::enum_to_string(v); }
inline std::string to_string(PatchType v) { return detail::enum_to_string(v); }

struct CatalogEntry {
    int index = 0;
    std::string library;
    std::string commit_hash; // empty for entries reconstructed from literature
    std::string language;
    CommitType commit_type = CommitType::patch;
    std::string root_cause;
    std::string manifestation;
    std::vector<ExceptionType> exception_type; // subset, kept in canonical order
    std::string background;
    std::string problem;
    std::vector<std::string> dl_topics;
    PatchType patch_type = PatchType::other;
    std::string old_solution;
    std::string new_solution;
    std::string unit_test;
    std::map<std::string, std::string> extras; // the unmodeled free-form columns

    /// Canonical combination label, e.g. "overflow, underflow".
    std::string exception_label() const {
        if (exception_type.empty()) return "N/A";
        std::string out;
        for (const auto& e : exception_type) {
            if (!out.empty()) out += ", ";
            out += detail::enum_to_string(e);
        }
        return out;
    }
};

struct StatLine {
    std::string label;
    int count = 0;
};

struct CatalogStats {
    std::vector<StatLine> exceptions;
    std::vector<StatLine> patches;
    std::vector<StatLine> topics;
    int total = 0;
};

/// One-decimal percentage, or an em dash when the base is empty.
inline std::string format_percent(int count, int total) {
    if (total == 0) return "—";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f%%", 100.0 * count / total);
    return buf;
}

struct CatalogQuery {
    std::optional<std::string> topic;
    std::optional<std::string> root_cause_substring;
    std::optional<std::string> exception;
    std::optional<std::string> patch_type;
    std::optional<std::string> keyword;
};

class Catalog {
public:
    static Catalog from_json(const nlohmann::json& doc) {
        if (!doc.is_array()) throw std::runtime_error("catalog: expected a JSON array of entries");
        Catalog cat;
        std::set<int> seen;
        int position = 0;
        for (const auto& item : doc) {
            CatalogEntry e = parse_entry(item, position++);
            if (!seen.insert(e.index).second) {
                std::ostringstream os;
                os << "catalog: duplicate index " << e.index;
                throw std::runtime_error(os.str());
            }
            cat.entries_.push_back(std::move(e));
        }
        std::sort(cat.entries_.begin(), cat.entries_.end(),
                  [](const CatalogEntry& a, const CatalogEntry& b) { return a.index < b.index; });
        return cat;
    }

    static Catalog load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("catalog: cannot open " + path);
        nlohmann::json doc;
        in >> doc;
        return from_json(doc);
    }

    nlohmann::json to_json() const {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& e : entries_) {
            nlohmann::json j;
            j["index"] = e.index;
            j["library"] = e.library;
            j["commit_hash"] = e.commit_hash;
            j["language"] = e.language;
            j["commit_type"] = detail::enum_to_string(e.commit_type);
            j["root_cause"] = e.root_cause;
            j["manifestation"] = e.manifestation;
            nlohmann::json ex = nlohmann::json::array();
            for (const auto& t : e.exception_type) ex.push_back(detail::enum_to_string(t));
            j["exception_type"] = ex;
            j["background"] = e.background;
            j["problem"] = e.problem;
            j["dl_topics"] = e.dl_topics;
            j["patch_type"] = detail::enum_to_string(e.patch_type);
            j["old_solution"] = e.old_solution;
            j["new_solution"] = e.new_solution;
            j["unit_test"] = e.unit_test;
            j["extras"] = e.extras;
            arr.push_back(std::move(j));
        }
        return arr;
    }

    /// Canonical form: two-space indent, keys sorted (nlohmann objects are
    /// alphabetical), trailing newline. load/save round-trips byte-stable.
    void save(const std::string& path) const {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("catalog: cannot write " + path);
        out << to_json().dump(2) << "\n";
    }

    const std::vector<CatalogEntry>& entries() const { return entries_; }

    const CatalogEntry* find(int index) const {
        for (const auto& e : entries_)
            if (e.index == index) return &e;
        return nullptr;
    }

    std::vector<CatalogEntry> query(const CatalogQuery& q) const {
        std::vector<CatalogEntry> out;
        for (const auto& e : entries_) {
            if (q.topic) {
                bool hit = false;
                for (const auto& t : e.dl_topics)
                    if (detail::lower(t) == detail::lower(*q.topic)) { hit = true; break; }
                if (!hit) continue;
            }
            if (q.root_cause_substring && !detail::icontains(e.root_cause, *q.root_cause_substring))
                continue;
            if (q.exception) {
                const ExceptionType want =
                    detail::enum_from_string<ExceptionType>(*q.exception, "exception", -1);
                if (std::find(e.exception_type.begin(), e.exception_type.end(), want) ==
                    e.exception_type.end())
                    continue;
            }
            if (q.patch_type &&
                e.patch_type != detail::enum_from_string<PatchType>(*q.patch_type, "patch_type", -1))
                continue;
            if (q.keyword && !entry_matches_keyword(e, *q.keyword)) continue;
            out.push_back(e);
        }
        return out; // entries_ is already ordered by index
    }

    CatalogStats stats() const {
        std::map<std::string, int> ex, patch, topic;
        for (const auto& e : entries_) {
            ex[e.exception_label()] += 1;
            patch[detail::enum_to_string(e.patch_type)] += 1;
            for (const auto& t : e.dl_topics) topic[t] += 1;
        }
        CatalogStats s;
        s.total = static_cast<int>(entries_.size());
        auto flatten = [](const std::map<std::string, int>& m) {
            std::vector<StatLine> v;
            for (const auto& [label, count] : m) v.push_back({label, count});
            std::stable_sort(v.begin(), v.end(), [](const StatLine& a, const StatLine& b) {
                return a.count > b.count;
            });
            return v;
        };
        s.exceptions = flatten(ex);
        s.patches = flatten(patch);
        s.topics = flatten(topic);
        return s;
    }

private:
    static CatalogEntry parse_entry(const nlohmann::json& j, int position) {
        if (!j.is_object()) {
            std::ostringstream os;
            os << "catalog entry at position " << position << ": expected an object";
            throw std::runtime_error(os.str());
        }
        static const std::set<std::string> known = {
            "index",          "library",      "commit_hash", "language",
            "commit_type",    "root_cause",   "manifestation", "exception_type",
            "background",     "problem",      "dl_topics",   "patch_type",
            "old_solution",   "new_solution", "unit_test",   "extras"};
        CatalogEntry e;
        e.index = require_field(j, "index", position).get<int>();
        if (e.index <= 0) {
            std::ostringstream os;
            os << "catalog entry " << e.index << ": field 'index' must be positive";
            throw std::runtime_error(os.str());
        }
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!known.count(it.key())) {
                std::ostringstream os;
                os << "catalog entry " << e.index << ": unknown field '" << it.key() << "'";
                throw std::runtime_error(os.str());
            }
        }
        e.library = require_field(j, "library", e.index).get<std::string>();
        e.commit_hash = j.value("commit_hash", std::string{});
        e.language = require_field(j, "language", e.index).get<std::string>();
        e.commit_type = detail::enum_from_string<CommitType>(
            require_field(j, "commit_type", e.index).get<std::string>(), "commit_type", e.index);
        e.root_cause = require_field(j, "root_cause", e.index).get<std::string>();
        e.manifestation = require_field(j, "manifestation", e.index).get<std::string>();
        std::set<std::string> ex_seen;
        for (const auto& x : require_field(j, "exception_type", e.index)) {
            const std::string name = x.get<std::string>();
            if (ex_seen.insert(name).second)
                e.exception_type.push_back(detail::enum_from_string<ExceptionType>(
                    name, "exception_type", e.index));
        }
        std::sort(e.exception_type.begin(), e.exception_type.end());
        e.background = j.value("background", std::string{});
        e.problem = j.value("problem", std::string{});
        for (const auto& t : require_field(j, "dl_topics", e.index))
            e.dl_topics.push_back(t.get<std::string>());
        e.patch_type = detail::enum_from_string<PatchType>(
            require_field(j, "patch_type", e.index).get<std::string>(), "patch_type", e.index);
        e.old_solution = j.value("old_solution", std::string{});
        e.new_solution = j.value("new_solution", std::string{});
        e.unit_test = j.value("unit_test", std::string{});
        if (j.contains("extras"))
            for (auto it = j["extras"].begin(); it != j["extras"].end(); ++it)
                e.extras[it.key()] = it.value().get<std::string>();
        return e;
    }

    static const nlohmann::json& require_field(const nlohmann::json& j, const char* name,
                                               int entry_index) {
        if (!j.contains(name)) {
            std::ostringstream os;
            os << "catalog entry " << entry_index << ": missing field '" << name << "'";
            throw std::runtime_error(os.str());
        }
        return j[name];
    }

    static bool entry_matches_keyword(const CatalogEntry& e, const std::string& kw) {
        const std::string fields[] = {e.library,    e.language,     e.root_cause,
                                      e.manifestation, e.background, e.problem,
                                      e.old_solution,  e.new_solution, e.unit_test};
        for (const auto& f : fields)
            if (detail::icontains(f, kw)) return true;
        for (const auto& t : e.dl_topics)
            if (detail::icontains(t, kw)) return true;
        for (const auto& [k, v] : e.extras)
            if (detail::icontains(v, kw)) return true;
        return false;
    }

    std::vector<CatalogEntry> entries_;
};

/// The aggregate-counts fixture carries the study-scale table rows verbatim;
/// it is reported separately from stats computed over the seed entries.
struct AggregateCounts {
    std::vector<StatLine> exceptions;
    std::vector<StatLine> patches;
    std::vector<StatLine> topics;
    int total_commits = 0;

    static AggregateCounts load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("aggregate fixture: cannot open " + path);
        nlohmann::json doc;
        in >> doc;
        AggregateCounts a;
        a.total_commits = doc.at("total_commits").get<int>();
        auto read_dim = [&](const char* name) {
            std::vector<StatLine> v;
            for (const auto& row : doc.at(name))
                v.push_back({row.at("label").get<std::string>(), row.at("count").get<int>()});
            return v;
        };
        a.exceptions = read_dim("exception_type");
        a.patches = read_dim("patch_type");
        a.topics = read_dim("dl_topic");
        return a;
    }

    CatalogStats as_stats() const {
        CatalogStats s;
        s.exceptions = exceptions;
        s.patches = patches;
        s.topics = topics;
        s.total = total_commits;
        return s;
    }
};

} // namespace numstab::catalog
