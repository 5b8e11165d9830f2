#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <vector>

#include "numstab/precision.hpp"

namespace numstab {

/// Which of the two paired implementations a dual-path kernel runs.
enum class StabilityMode { stable, unstable };

inline const char* to_string(StabilityMode m) {
    return m == StabilityMode::stable ? "stable" : "unstable";
}

/// Dense real vector with a declared arithmetic precision.
struct RealVector {
    std::vector<double> elements;
    Precision precision = Precision::binary64;

    RealVector() = default;
    RealVector(std::vector<double> e, Precision p = Precision::binary64)
        : elements(std::move(e)), precision(p) {}
    RealVector(std::initializer_list<double> e, Precision p = Precision::binary64)
        : elements(e), precision(p) {}

    std::size_t size() const { return elements.size(); }
    bool empty() const { return elements.empty(); }
    double operator[](std::size_t i) const { return elements[i]; }
    double& operator[](std::size_t i) { return elements[i]; }
};

/// Dense row-major real matrix with a declared arithmetic precision.
struct RealMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> elements; // row-major, rows*cols entries
    Precision precision = Precision::binary64;

    RealMatrix() = default;
    RealMatrix(std::size_t r, std::size_t c, double fill = 0.0,
               Precision p = Precision::binary64)
        : rows(r), cols(c), elements(r * c, fill), precision(p) {}

    static RealMatrix identity(std::size_t n, Precision p = Precision::binary64) {
        RealMatrix m(n, n, 0.0, p);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
        return m;
    }

    double at(std::size_t i, std::size_t j) const { return elements[i * cols + j]; }
    double& at(std::size_t i, std::size_t j) { return elements[i * cols + j]; }

    bool square() const { return rows == cols; }
};

inline RealMatrix transpose(const RealMatrix& a) {
    RealMatrix t(a.cols, a.rows, 0.0, a.precision);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < a.cols; ++j) t.at(j, i) = a.at(i, j);
    return t;
}

inline RealMatrix matmul(const RealMatrix& a, const RealMatrix& b) {
    if (a.cols != b.rows) throw std::domain_error("matmul: inner dimensions differ");
    Fp fp(a.precision);
    RealMatrix c(a.rows, b.cols, 0.0, a.precision);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t k = 0; k < a.cols; ++k) {
            const double aik = a.at(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols; ++j)
                c.at(i, j) = fp.add(c.at(i, j), fp.mul(aik, b.at(k, j)));
        }
    return c;
}

inline double max_abs(const RealMatrix& a) {
    double m = 0.0;
    for (double v : a.elements) {
        double av = v < 0 ? -v : v;
        if (av > m) m = av;
    }
    return m;
}

/// Per-element normalization parameters for the SyncBN kernels.
struct SyncBNParams {
    double epsilon = 1e-5; // > 0
    double gamma = 1.0;
    double beta = 0.0;
    double mean = 0.0;     // E[x] over the batch
    double variance = 0.0; // Var[x] over the batch, >= 0
};

/// Logits-parametrized Bernoulli observation.
struct BernoulliParams {
    double logits = 0.0;
    int outcome = 0; // 0 or 1
};

enum class SearchStatus { found, not_found, index_overflow };

inline const char* to_string(SearchStatus s) {
    switch (s) {
        case SearchStatus::found: return "found";
        case SearchStatus::not_found: return "not_found";
        case SearchStatus::index_overflow: return "index_overflow";
    }
    return "?";
}

/// Outcome of a bounded binary search. `index` is meaningful for `found`
/// (match position) and `not_found` (insertion point); it is unset when the
/// simulated index width overflowed.
struct SearchResult {
    SearchStatus status = SearchStatus::not_found;
    std::uint64_t index = 0;

    bool operator==(const SearchResult&) const = default;
};

} // namespace numstab
