#pragma once

// Machine-checkable forms of the equivalence claims and invariants: the
// softmax/log-sum-exp identities, the SyncBN rewrite, the midpoint identity,
// rewrite-rule soundness, gradient checks, and the oracle self-tests. Every
// suite is deterministic (fixed seeds) and returns structured results so the
// CLI and the test binaries can share them.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "numstab/exprscan/eval.hpp"
#include "numstab/exprscan/rules.hpp"
#include "numstab/exprscan/scan.hpp"
#include "numstab/harness/manifest.hpp"
#include "numstab/kernels.hpp"
#include "numstab/oracles.hpp"

namespace numstab::verify {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct SuiteResult {
    std::string name;
    std::vector<CheckResult> checks;

    bool pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

namespace detail {

inline void add_check(SuiteResult& suite, const std::string& name, bool pass,
                      const std::string& detail) {
    suite.checks.push_back({name, pass, detail});
}

inline std::string worst(double v) {
    std::ostringstream os;
    os << "worst " << v;
    return os.str();
}

inline RealVector random_vector(std::mt19937_64& rng, std::size_t min_n, std::size_t max_n,
                                double lo, double hi,
                                Precision p = Precision::binary64) {
    std::uniform_int_distribution<std::size_t> nd(min_n, max_n);
    std::uniform_real_distribution<double> vd(lo, hi);
    std::vector<double> v(nd(rng));
    for (double& x : v) x = vd(rng);
    return RealVector(std::move(v), p);
}

} // namespace detail

/// Softmax shift invariance, the log-sum-exp identity, log-softmax
/// consistency, the SyncBN rewrite, and the midpoint integer identity.
inline SuiteResult run_proofs_suite() {
    using detail::add_check;
    SuiteResult suite{"proofs", {}};
    std::mt19937_64 rng(20250809);

    {
        std::uniform_real_distribution<double> shift(-100.0, 100.0);
        double worst = 0.0;
        for (int t = 0; t < 1000; ++t) {
            const RealVector x = detail::random_vector(rng, 2, 16, -50.0, 50.0);
            const double c = shift(rng);
            RealVector shifted = x;
            for (double& v : shifted.elements) v += c;
            const RealVector a = softmax(x, StabilityMode::stable);
            const RealVector b = softmax(shifted, StabilityMode::stable);
            for (std::size_t i = 0; i < a.size(); ++i)
                worst = std::max(worst, std::fabs(a[i] - b[i]));
        }
        add_check(suite, "softmax shift invariance <= 1e-12", worst <= 1e-12,
                  detail::worst(worst));
    }
    {
        double worst = 0.0;
        for (int t = 0; t < 1000; ++t) {
            const RealVector x = detail::random_vector(rng, 1, 16, -20.0, 20.0);
            double direct = 0.0;
            for (double v : x.elements) direct += std::exp(v);
            worst = std::max(worst, std::fabs(log_sum_exp(x) - std::log(direct)));
        }
        add_check(suite, "log-sum-exp identity <= 1e-12", worst <= 1e-12, detail::worst(worst));
    }
    {
        double worst = 0.0;
        for (int t = 0; t < 500; ++t) {
            const RealVector x = detail::random_vector(rng, 2, 16, -30.0, 30.0);
            const RealVector ls = log_softmax(x, StabilityMode::stable);
            const RealVector p = softmax(x, StabilityMode::stable);
            for (std::size_t i = 0; i < x.size(); ++i) {
                const double lp = std::log(p[i]);
                if (std::isfinite(lp)) worst = std::max(worst, std::fabs(ls[i] - lp));
            }
        }
        add_check(suite, "log-softmax consistency <= 1e-9", worst <= 1e-9, detail::worst(worst));
    }
    {
        std::uniform_real_distribution<double> eps_d(1e-6, 1e-2);
        double worst = 0.0;
        for (int t = 0; t < 1000; ++t) {
            const RealVector x = detail::random_vector(rng, 2, 16, -10.0, 10.0);
            double mean = 0.0;
            for (double v : x.elements) mean += v;
            mean /= static_cast<double>(x.size());
            double var = 0.0;
            for (double v : x.elements) var += (v - mean) * (v - mean);
            var /= static_cast<double>(x.size());

            SyncBNParams params;
            params.epsilon = eps_d(rng);
            params.mean = mean;
            params.variance = var;
            params.gamma = 1.0;
            params.beta = 1.0 - 1.0 / std::sqrt(var + params.epsilon);
            const RealVector lhs = sync_bn_normalize(x, params, StabilityMode::stable);
            const RealVector rhs = sync_bn_reference(x, params);
            for (std::size_t i = 0; i < x.size(); ++i)
                worst = std::max(worst, std::fabs(lhs[i] - rhs[i]));
        }
        add_check(suite, "sync-bn rewrite equivalence <= 1e-12", worst <= 1e-12,
                  detail::worst(worst));
    }
    {
        std::uniform_int_distribution<std::int64_t> ld(0, (std::int64_t{1} << 31) - 1);
        std::size_t failures = 0;
        for (int t = 0; t < 100000; ++t) {
            std::int64_t l = ld(rng), r = ld(rng);
            if (l > r) std::swap(l, r);
            if (l + (r - l) / 2 != (l + r) / 2) ++failures;
        }
        add_check(suite, "midpoint identity over 1e5 pairs", failures == 0,
                  std::to_string(failures) + " failures");
    }
    return suite;
}

/// Numeric soundness of every rewrite rule plus the one-application fixpoint.
inline SuiteResult run_rules_suite(const std::vector<exprscan::Rule>& rules) {
    using namespace exprscan;
    using detail::add_check;
    SuiteResult suite{"rules", {}};
    std::mt19937_64 rng(77001);

    // Per-rule operand ranges where both sides are well conditioned. These
    // mirror the notes shipped with the rule set.
    auto range_for = [](const std::string& rule_id,
                        const std::string& var) -> std::pair<double, double> {
        if (rule_id == "R1") return {-10.0, 10.0};
        if (rule_id == "R2") return {-1e6, 1e6};
        if (rule_id == "R3" || rule_id == "R4" || rule_id == "R10")
            return var == "y" ? std::pair{1e-3, 1e3} : std::pair{-100.0, 100.0};
        if (rule_id == "R5") return var == "x" ? std::pair{5.0, 10.0} : std::pair{0.1, 1.0};
        if (rule_id == "R6") return var == "z" ? std::pair{0.5, 2.0} : std::pair{-10.0, 10.0};
        if (rule_id == "R7") return var == "x" ? std::pair{1.0, 10.0} : std::pair{-10.0, 10.0};
        if (rule_id == "R8") return var == "y" ? std::pair{0.5, 2.0} : std::pair{2.0, 10.0};
        return {0.5, 2.0};
    };

    for (const auto& rule : rules) {
        if (rule.id == "R9") {
            // Integer-division semantics, brute force: both sides must equal
            // 4 * ceil(x*y / 4) over the whole documented product range.
            const Bindings b{{"x", make_expr(ExprKind::ident, "x")},
                             {"y", make_expr(ExprKind::ident, "y")}};
            const ExprPtr lhs_tree = instantiate_pattern(rule, b);
            const ExprPtr rhs_tree = suggest_rewrite(rule, b);
            bool ok = true;
            std::int64_t bad = -1;
            IntEnv env{{"x", 0}, {"y", 1}};
            for (std::int64_t p = 0; p <= (1 << 20) && ok; ++p) {
                env["x"] = p;
                const std::int64_t lhs = eval_int(lhs_tree, env);
                const std::int64_t rhs = eval_int(rhs_tree, env);
                const std::int64_t want = 4 * ((p + 3) / 4);
                if (lhs != rhs || rhs != want) {
                    ok = false;
                    bad = p;
                }
            }
            add_check(suite, "R9 integer equivalence (brute force)", ok,
                      ok ? "xy in [0, 2^20]" : "first failure at product " + std::to_string(bad));
            continue;
        }

        std::set<std::string> vars;
        exprscan::detail::collect_metavars(rule.pattern, vars);
        double worst_rel = 0.0;
        bool ok = true;
        for (int t = 0; t < 1000 && ok; ++t) {
            Bindings b;
            RealEnv env;
            std::size_t vec_len = rule.id == "R1" ? 1 + (t % 4) : 1;
            for (const auto& v : vars) {
                const auto [lo, hi] = range_for(rule.id, v);
                std::uniform_real_distribution<double> dist(lo, hi);
                std::vector<double> val(vec_len);
                for (double& x : val) x = dist(rng);
                env["v_" + v] = val;
                b.emplace(v, make_expr(ExprKind::ident, "v_" + v));
            }
            env["epsilon"] = {1e-12}; // rules R5/R7 reference a literal epsilon
            const auto lhs = eval_real(instantiate_pattern(rule, b), env);
            const auto rhs = eval_real(suggest_rewrite(rule, b), env);
            if (lhs.size() != rhs.size()) { ok = false; break; }
            for (std::size_t i = 0; i < lhs.size(); ++i) {
                const double denom = std::max({std::fabs(lhs[i]), std::fabs(rhs[i]), 1e-30});
                const double rel = std::fabs(lhs[i] - rhs[i]) / denom;
                worst_rel = std::max(worst_rel, rel);
                if (!(rel <= 1e-9)) ok = false;
            }
        }
        add_check(suite, rule.id + " rewrite equivalence <= 1e-9 relative", ok,
                  detail::worst(worst_rel));
    }

    // Fixpoint: instantiate each pattern with fresh identifiers, rewrite
    // once, and require that no node of the result matches the same rule.
    for (const auto& rule : rules) {
        std::set<std::string> vars;
        exprscan::detail::collect_metavars(rule.pattern, vars);
        Bindings b;
        int i = 0;
        for (const auto& v : vars)
            b.emplace(v, make_expr(ExprKind::ident, "fresh" + std::to_string(i++)));
        const ExprPtr rewritten = suggest_rewrite(rule, b);
        bool rematches = false;
        visit_exprs(rewritten, [&](const ExprPtr& node) {
            if (match_rule(rule, node)) rematches = true;
        });
        add_check(suite, rule.id + " rewrite is a fixpoint", !rematches,
                  render_expr(rewritten));
    }
    return suite;
}

/// LU backward (stable route) against central finite differences.
inline SuiteResult run_gradients_suite() {
    using detail::add_check;
    SuiteResult suite{"gradients", {}};
    std::mt19937_64 rng(424242);
    std::uniform_real_distribution<double> ud(-1.0, 1.0);

    auto packed_loss = [](const RealMatrix& c) {
        return [c](const RealMatrix& a) {
            const LuFactors f = lu_decompose(a);
            double acc = 0.0;
            for (std::size_t i = 0; i < a.rows; ++i)
                for (std::size_t j = 0; j < a.cols; ++j) {
                    const double packed = i > j ? f.l.at(i, j) : f.u.at(i, j);
                    acc += c.at(i, j) * packed;
                }
            return acc;
        };
    };

    double worst_rel = 0.0;
    bool ok = true;
    int runs = 0;
    for (std::size_t n : {std::size_t{3}, std::size_t{4}}) {
        for (int t = 0; t < 50; ++t) {
            RealMatrix a = RealMatrix::identity(n);
            for (double& v : a.elements) v += 0.1 * ud(rng);
            RealMatrix c(n, n);
            for (double& v : c.elements) v = ud(rng);

            const LuFactors f = lu_decompose(a);
            const RealMatrix got = lu_backward(f.l, f.u, f.p, c, StabilityMode::stable);
            const RealMatrix want = finite_diff_grad(packed_loss(c), a);
            double scale = std::max(max_abs(want), 1e-12);
            double diff = 0.0;
            for (std::size_t i = 0; i < n * n; ++i)
                diff = std::max(diff, std::fabs(got.elements[i] - want.elements[i]));
            worst_rel = std::max(worst_rel, diff / scale);
            if (!(diff / scale <= 1e-5)) ok = false;
            ++runs;
        }
    }
    add_check(suite, "lu_backward stable vs finite differences <= 1e-5 relative", ok,
              detail::worst(worst_rel) + " over " + std::to_string(runs) + " matrices");

    // A matrix that forces row exchanges, so the permutation path is covered.
    {
        RealMatrix a(3, 3);
        const double vals[9] = {0.01, 1.0, 0.2, 1.0, 0.02, 0.1, 0.3, 0.1, 1.0};
        std::copy(vals, vals + 9, a.elements.begin());
        RealMatrix c(3, 3);
        for (double& v : c.elements) v = ud(rng);
        const LuFactors f = lu_decompose(a);
        bool pivoted = false;
        for (std::size_t i = 0; i < 3; ++i)
            if (f.p.at(i, i) != 1.0) pivoted = true;
        const RealMatrix got = lu_backward(f.l, f.u, f.p, c, StabilityMode::stable);
        const RealMatrix want = finite_diff_grad(packed_loss(c), a);
        double diff = 0.0;
        for (std::size_t i = 0; i < 9; ++i)
            diff = std::max(diff, std::fabs(got.elements[i] - want.elements[i]));
        const double rel = diff / std::max(max_abs(want), 1e-12);
        add_check(suite, "lu_backward stable with pivoting vs finite differences",
                  pivoted && rel <= 1e-5, detail::worst(rel));
    }
    return suite;
}

/// Self-checks for the oracle module.
inline SuiteResult run_oracles_suite() {
    using detail::add_check;
    SuiteResult suite{"oracles", {}};
    std::mt19937_64 rng(1003);

    {
        const double r = compensated_sum(RealVector{1e16, 1.0, -1e16});
        add_check(suite, "compensated_sum recovers the lost unit", r == 1.0,
                  harness::detail::render_value(r));
    }
    {
        bool ok = true;
        double worst_ulps = 0.0;
        std::uniform_real_distribution<double> mag(0.0, 20.0);
        std::uniform_real_distribution<double> sign(-1.0, 1.0);
        for (int t = 0; t < 100 && ok; ++t) {
            std::uniform_int_distribution<std::size_t> nd(2, 1000);
            std::vector<double> terms(nd(rng));
            for (double& x : terms) x = sign(rng) * std::pow(10.0, mag(rng));
            const double base = compensated_sum(RealVector{terms});
            std::vector<double> perm = terms;
            for (int s = 0; s < 10; ++s) {
                std::shuffle(perm.begin(), perm.end(), rng);
                const double r = compensated_sum(RealVector{perm});
                const double ulp = std::nextafter(std::fabs(base), INFINITY) - std::fabs(base);
                const double ulps = std::fabs(r - base) / (ulp > 0 ? ulp : 1e-300);
                worst_ulps = std::max(worst_ulps, ulps);
                if (ulps > 1.0) ok = false;
            }
        }
        add_check(suite, "compensated_sum permutation invariance within 1 ulp", ok,
                  detail::worst(worst_ulps) + " ulp");
    }
    {
        std::uniform_real_distribution<double> ud(-1.0, 1.0);
        RealMatrix a(4, 4), c(4, 4);
        for (double& v : a.elements) v = ud(rng);
        for (double& v : c.elements) v = ud(rng);
        const RealMatrix grad = finite_diff_grad(
            [&](const RealMatrix& m) {
                double acc = 0.0;
                for (std::size_t i = 0; i < 16; ++i) acc += c.elements[i] * m.elements[i];
                return acc;
            },
            a);
        double diff = 0.0;
        for (std::size_t i = 0; i < 16; ++i)
            diff = std::max(diff, std::fabs(grad.elements[i] - c.elements[i]));
        add_check(suite, "finite_diff_grad on tr(C^T A) reproduces C <= 1e-9", diff <= 1e-9,
                  detail::worst(diff));

        const RealMatrix grad2 = finite_diff_grad(
            [](const RealMatrix& m) {
                double acc = 0.0;
                for (double v : m.elements) acc += v * v;
                return acc;
            },
            a);
        double rel = 0.0;
        for (std::size_t i = 0; i < 16; ++i) {
            const double want = 2.0 * a.elements[i];
            rel = std::max(rel, std::fabs(grad2.elements[i] - want) /
                                    std::max(std::fabs(want), 1e-6));
        }
        add_check(suite, "finite_diff_grad on |A|_F^2 gives 2A <= 1e-6 relative", rel <= 1e-6,
                  detail::worst(rel));

        const RealMatrix zero = finite_diff_grad([](const RealMatrix&) { return 7.5; }, a);
        add_check(suite, "finite_diff_grad of a constant loss is zero", max_abs(zero) == 0.0,
                  detail::worst(max_abs(zero)));
    }
    {
        const auto miss = linear_search(0, [](std::uint64_t) { return 0; });
        const auto hit = linear_search(10, [](std::uint64_t i) {
            return i < 5 ? -1 : (i > 5 ? 1 : 0);
        });
        add_check(suite, "linear_search basics",
                  miss.status == SearchStatus::not_found && hit.status == SearchStatus::found &&
                      hit.index == 5,
                  "");
    }
    return suite;
}

/// The property-level suites backing the remaining invariants.
inline SuiteResult run_properties_suite() {
    using detail::add_check;
    SuiteResult suite{"properties", {}};
    std::mt19937_64 rng(90210);

    {
        std::uniform_real_distribution<double> vd(-1e6, 1e6);
        double worst = 0.0;
        for (int t = 0; t < 200; ++t) {
            const RealVector xs = detail::random_vector(rng, 2, 500, -1e6, 1e6);
            const auto w = variance(xs, VarianceAlgo::welford);
            const auto tp = variance(xs, VarianceAlgo::two_pass);
            worst = std::max(worst,
                             std::fabs(w.variance - tp.variance) /
                                 std::max(std::fabs(tp.variance), 1e-30));
        }
        add_check(suite, "welford vs two-pass <= 1e-12 relative (binary64)", worst <= 1e-12,
                  detail::worst(worst));
    }
    {
        std::vector<double> data(1000);
        for (std::size_t i = 0; i < data.size(); ++i)
            data[i] = 1e5 + static_cast<double>(i);
        const RealVector xs32(data, Precision::binary32);
        const auto oracle = variance(RealVector(data), VarianceAlgo::two_pass);
        const auto w = variance(xs32, VarianceAlgo::welford);
        const auto naive = variance(xs32, VarianceAlgo::naive);
        const double w_err = std::fabs(w.variance - oracle.variance) / oracle.variance;
        const double n_err = std::fabs(naive.variance - oracle.variance) / oracle.variance;
        add_check(suite, "welford survives the 1e5 offset at binary32, naive does not",
                  w_err <= 1e-3 && n_err > 1e-3,
                  "welford rel " + std::to_string(w_err) + ", naive rel " + std::to_string(n_err));
    }
    {
        std::uniform_real_distribution<double> mag(-6.0, 6.0);
        std::uniform_real_distribution<double> sign(-1.0, 1.0);
        std::vector<double> terms(10000);
        for (double& x : terms) x = std::copysign(std::pow(10.0, mag(rng)), sign(rng));
        const RealVector xs32(terms, Precision::binary32);
        const double oracle = compensated_sum(RealVector{terms});
        const double asc = ordered_sum(xs32, SumPolicy::ascending_magnitude);
        const double given = ordered_sum(xs32, SumPolicy::given_order);
        add_check(suite, "ascending-magnitude summation beats given order",
                  std::fabs(asc - oracle) <= std::fabs(given - oracle),
                  "asc err " + std::to_string(std::fabs(asc - oracle)) + ", given err " +
                      std::to_string(std::fabs(given - oracle)));
        const double empty = ordered_sum(RealVector{}, SumPolicy::ascending_magnitude);
        std::vector<double> sorted = terms;
        std::sort(sorted.begin(), sorted.end(),
                  [](double a, double b) { return std::fabs(a) < std::fabs(b); });
        const RealVector sorted32(sorted, Precision::binary32);
        add_check(suite, "ordered_sum edge cases",
                  empty == 0.0 && ordered_sum(sorted32, SumPolicy::given_order) ==
                                      ordered_sum(sorted32, SumPolicy::ascending_magnitude),
                  "");
    }
    {
        bool ok = true;
        std::uniform_int_distribution<std::size_t> nb(0, 32);
        std::uniform_int_distribution<int> vi(-50, 50);
        for (int t = 0; t < 200 && ok; ++t) {
            std::vector<double> bounds(nb(rng));
            for (double& b : bounds) b = vi(rng);
            std::sort(bounds.begin(), bounds.end());
            std::vector<double> values(20);
            for (double& v : values) v = vi(rng);
            const auto got = bucketize(RealVector{values}, RealVector{bounds});
            for (std::size_t i = 0; i < values.size(); ++i) {
                std::size_t count = 0;
                for (double b : bounds)
                    if (b <= values[i]) ++count;
                if (got[i] != count) ok = false;
            }
        }
        add_check(suite, "bucketize matches the linear-scan count oracle", ok, "200 instances");
    }
    {
        bool ok = true;
        for (std::uint64_t n = 0; n <= 64 && ok; ++n) {
            for (std::int64_t target = -1; target <= static_cast<std::int64_t>(2 * n + 1) && ok;
                 ++target) {
                const auto probe = [n, target](std::uint64_t i) {
                    const std::int64_t v = static_cast<std::int64_t>(2 * i); // a[i] = 2i
                    return v < target ? -1 : (v > target ? 1 : 0);
                };
                const SearchResult want = linear_search(n, probe);
                for (IndexWidth w : {IndexWidth::i8, IndexWidth::i16, IndexWidth::i32,
                                     IndexWidth::i64}) {
                    const auto stable = bounded_binary_search(n, probe, w, StabilityMode::stable);
                    const auto unstable =
                        bounded_binary_search(n, probe, w, StabilityMode::unstable);
                    if (!(stable == want)) ok = false;
                    // No overflow is reachable at these lengths, so the
                    // unstable path must agree everywhere too.
                    if (!(unstable == want)) ok = false;
                }
            }
        }
        add_check(suite, "bounded_binary_search exhaustive vs linear scan (n <= 64, all widths)",
                  ok, "");
    }
    {
        // Random ASTs of depth <= 6: parse(render(e)) == e, and rendering is
        // a fixpoint of parse-then-render.
        using namespace exprscan;
        std::uniform_int_distribution<int> kind(0, 5);
        std::uniform_int_distribution<int> leaf(0, 2);
        std::uniform_int_distribution<int> num(0, 99);
        std::uniform_int_distribution<int> fn(0, 8);
        std::uniform_int_distribution<int> op(0, 4);
        static const char* ops = "+-*/%";
        std::function<ExprPtr(int)> gen = [&](int depth) -> ExprPtr {
            if (depth <= 0 || kind(rng) == 0) {
                switch (leaf(rng)) {
                    case 0: return make_expr(ExprKind::number, std::to_string(num(rng)));
                    default:
                        return make_expr(ExprKind::ident,
                                         std::string(1, static_cast<char>('a' + num(rng) % 26)));
                }
            }
            switch (kind(rng)) {
                case 1: return make_expr(ExprKind::neg, "-", {gen(depth - 1)});
                case 2: case 3: {
                    return make_expr(ExprKind::binary, std::string(1, ops[op(rng)]),
                                     {gen(depth - 1), gen(depth - 1)});
                }
                default: {
                    const auto& fns = known_functions();
                    const std::string name = fns[static_cast<std::size_t>(fn(rng))];
                    std::vector<ExprPtr> args{gen(depth - 1)};
                    if ((name == "pow" || name == "max" || name == "min") && kind(rng) > 2)
                        args.push_back(gen(depth - 1));
                    return make_expr(ExprKind::call, name, std::move(args));
                }
            }
        };
        bool ok = true;
        std::string bad;
        for (int t = 0; t < 500 && ok; ++t) {
            const ExprPtr e = gen(6);
            const std::string text = render_expr(e);
            try {
                const ExprPtr back = parse_expr(text);
                if (!expr_equal(e, back) || render_expr(back) != text) {
                    ok = false;
                    bad = text;
                }
            } catch (const ParseError& err) {
                ok = false;
                bad = text + " (" + err.what() + ")";
            }
        }
        add_check(suite, "parse/render round trip over random ASTs", ok, bad);
    }
    {
        std::mt19937_64 sampler_rng(7);
        std::size_t subnormals = 0, out_of_range = 0;
        for (int t = 0; t < 1000000; ++t) {
            const double raw = normalized_uniform_raw(sampler_rng);
            if (is_subnormal(raw)) ++subnormals;
            if (!(raw >= 1.0 && raw < 1.125)) ++out_of_range;
        }
        std::mt19937_64 map_rng(8);
        std::size_t mapped_bad = 0;
        for (int t = 0; t < 100000; ++t) {
            const double m = sample_normalized_uniform(map_rng, -0.9, 1.0);
            if (!(m >= -0.9 && m < 1.0)) ++mapped_bad;
        }
        add_check(suite, "sampler: 1e6 raw draws normal and in [1, 1.125)",
                  subnormals == 0 && out_of_range == 0 && mapped_bad == 0,
                  std::to_string(subnormals) + " subnormal, " + std::to_string(out_of_range) +
                      " out of range, " + std::to_string(mapped_bad) + " mapped out of range");
    }
    return suite;
}

/// Every shipped manifest case must pass both of its expectations.
inline SuiteResult run_cases_suite(const harness::Manifest& manifest) {
    using detail::add_check;
    SuiteResult suite{"cases", {}};
    for (const auto& id : manifest.list_cases()) {
        const harness::CaseReport r = manifest.run_case(id);
        add_check(suite, "case " + id, r.pass(),
                  "unstable: " + r.observed_unstable + "; stable: " + r.observed_stable);
    }
    return suite;
}

} // namespace numstab::verify
