#pragma once

// Numeric evaluators used to check that a rule's rewrite is mathematically
// equivalent to its pattern. The real-valued evaluator works elementwise on
// small vectors (sum/max/min reduce, scalars broadcast) so the softmax rule
// is exercised with genuine vector semantics; the integer evaluator applies
// C integer division for the rounding rule.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "numstab/exprscan/ast.hpp"

namespace numstab::exprscan {

using RealEnv = std::map<std::string, std::vector<double>>;

inline std::vector<double> eval_real(const ExprPtr& e, const RealEnv& env) {
    auto broadcast = [](std::vector<double> a, std::vector<double> b)
        -> std::pair<std::vector<double>, std::vector<double>> {
        if (a.size() == b.size()) return {std::move(a), std::move(b)};
        if (a.size() == 1) return {std::vector<double>(b.size(), a[0]), std::move(b)};
        if (b.size() == 1) return {std::move(a), std::vector<double>(a.size(), b[0])};
        throw std::runtime_error("eval_real: length mismatch");
    };

    switch (e->kind) {
        case ExprKind::number:
            return {std::stod(e->text)};
        case ExprKind::ident: {
            auto it = env.find(e->text);
            if (it == env.end())
                throw std::runtime_error("eval_real: unbound identifier " + e->text);
            return it->second;
        }
        case ExprKind::metavar:
            throw std::runtime_error("eval_real: uninstantiated metavariable ?" + e->text);
        case ExprKind::neg: {
            auto v = eval_real(e->children[0], env);
            for (double& x : v) x = -x;
            return v;
        }
        case ExprKind::binary: {
            auto [a, b] = broadcast(eval_real(e->children[0], env),
                                    eval_real(e->children[1], env));
            for (std::size_t i = 0; i < a.size(); ++i) {
                if (e->text == "+") a[i] += b[i];
                else if (e->text == "-") a[i] -= b[i];
                else if (e->text == "*") a[i] *= b[i];
                else if (e->text == "/") a[i] /= b[i];
                else a[i] = std::fmod(a[i], b[i]);
            }
            return a;
        }
        case ExprKind::call: {
            std::vector<std::vector<double>> args;
            for (const auto& c : e->children) args.push_back(eval_real(c, env));
            const std::string& fn = e->text;
            if (fn == "sum" || fn == "max" || fn == "min") {
                double acc = fn == "sum" ? 0.0 : args[0][0];
                bool first = true;
                for (const auto& arg : args)
                    for (double x : arg) {
                        if (fn == "sum") acc += x;
                        else if (first) { acc = x; first = false; }
                        else acc = fn == "max" ? std::max(acc, x) : std::min(acc, x);
                    }
                return {acc};
            }
            if (fn == "pow") {
                auto [a, b] = broadcast(std::move(args.at(0)), std::move(args.at(1)));
                for (std::size_t i = 0; i < a.size(); ++i) a[i] = std::pow(a[i], b[i]);
                return a;
            }
            auto v = std::move(args.at(0));
            for (double& x : v) {
                if (fn == "exp") x = std::exp(x);
                else if (fn == "log") x = std::log(x);
                else if (fn == "log1p") x = std::log1p(x);
                else if (fn == "sqrt") x = std::sqrt(x);
                else if (fn == "abs") x = std::fabs(x);
                else throw std::runtime_error("eval_real: unsupported function " + fn);
            }
            return v;
        }
    }
    throw std::logic_error("eval_real: unreachable");
}

using IntEnv = std::map<std::string, std::int64_t>;

/// Integer semantics: '/' truncates like C integer division.
inline std::int64_t eval_int(const ExprPtr& e, const IntEnv& env) {
    switch (e->kind) {
        case ExprKind::number:
            return std::stoll(e->text);
        case ExprKind::ident: {
            auto it = env.find(e->text);
            if (it == env.end())
                throw std::runtime_error("eval_int: unbound identifier " + e->text);
            return it->second;
        }
        case ExprKind::neg:
            return -eval_int(e->children[0], env);
        case ExprKind::binary: {
            const std::int64_t a = eval_int(e->children[0], env);
            const std::int64_t b = eval_int(e->children[1], env);
            if (e->text == "+") return a + b;
            if (e->text == "-") return a - b;
            if (e->text == "*") return a * b;
            if (b == 0) throw std::runtime_error("eval_int: division by zero");
            if (e->text == "/") return a / b;
            return a % b;
        }
        default:
            throw std::runtime_error("eval_int: unsupported node");
    }
}

} // namespace numstab::exprscan
