#pragma once

// IEEE-754 precision emulation. Every kernel runs its arithmetic in binary64
// and rounds each intermediate result to the precision tagged on its input,
// so binary32 failure modes reproduce deterministically on any host.

#include <cmath>
#include <cstdint>
#include <string>

namespace numstab {

enum class Precision { binary32, binary64 };

inline const char* to_string(Precision p) {
    return p == Precision::binary32 ? "binary32" : "binary64";
}

/// Rounds one binary64 value to binary32 and widens it back.
inline double round_binary32(double x) {
    return static_cast<double>(static_cast<float>(x));
}

/// Arithmetic with per-operation rounding to a target precision.
///
/// For binary64 the rounding step is the identity; for binary32 each result
/// is squeezed through a float, which is how the unstable kernels overflow
/// and underflow at desk scale.
class Fp {
public:
    explicit constexpr Fp(Precision p) : precision_(p) {}

    constexpr Precision precision() const { return precision_; }

    double round(double x) const {
        return precision_ == Precision::binary32 ? round_binary32(x) : x;
    }

    double add(double a, double b) const { return round(a + b); }
    double sub(double a, double b) const { return round(a - b); }
    double mul(double a, double b) const { return round(a * b); }
    double div(double a, double b) const { return round(a / b); }
    double neg(double a) const { return -a; } // exact; preserves the sign of zero

    double exp(double x) const { return round(std::exp(x)); }
    double log(double x) const { return round(std::log(x)); }
    double log1p(double x) const { return round(std::log1p(x)); }
    double log2(double x) const { return round(std::log2(x)); }
    double exp2(double x) const { return round(std::exp2(x)); }
    double sqrt(double x) const { return round(std::sqrt(x)); }
    double floor(double x) const { return round(std::floor(x)); }
    double trunc(double x) const { return round(std::trunc(x)); }

private:
    Precision precision_;
};

/// Finiteness classes used when comparing observed against expected outputs.
/// NaN sign is deliberately not modeled; its rendering is platform-dependent.
enum class FinitenessClass { finite, pos_inf, neg_inf, nan };

inline FinitenessClass classify(double x) {
    if (std::isnan(x)) return FinitenessClass::nan;
    if (std::isinf(x)) return x > 0 ? FinitenessClass::pos_inf : FinitenessClass::neg_inf;
    return FinitenessClass::finite;
}

inline const char* to_string(FinitenessClass c) {
    switch (c) {
        case FinitenessClass::finite: return "finite";
        case FinitenessClass::pos_inf: return "+inf";
        case FinitenessClass::neg_inf: return "-inf";
        case FinitenessClass::nan: return "nan";
    }
    return "?";
}

inline bool is_subnormal(double x) {
    return std::fpclassify(x) == FP_SUBNORMAL;
}

} // namespace numstab
