#pragma once

#include <cmath>
#include <cstdio>
#include <string>

#include "ainfty/rational.hpp"

namespace ainfty {

/// Numeric backend used to produce a value.
enum class Backend { Exact, Floating };

inline const char* to_string(Backend b) { return b == Backend::Exact ? "exact" : "float"; }

/// A nonnegative condition constant: either finite (exact rational or
/// binary64, tagged by backend) or positive infinity. Infinity arises only
/// from the documented degenerate cases (zero weight under a negative
/// exponent, zero median with positive average, empty beta-level set).
class ExtendedValue {
public:
    ExtendedValue() : backend_(Backend::Exact), infinite_(false), exact_(0), approx_(0.0) {}

    static ExtendedValue exact(Rational r) {
        ExtendedValue v;
        v.backend_ = Backend::Exact;
        v.approx_ = r.to_double();
        v.exact_ = std::move(r);
        return v;
    }
    static ExtendedValue floating(double d) {
        ExtendedValue v;
        v.backend_ = Backend::Floating;
        v.approx_ = d;
        return v;
    }
    static ExtendedValue infinity(Backend b) {
        ExtendedValue v;
        v.backend_ = b;
        v.infinite_ = true;
        v.approx_ = std::numeric_limits<double>::infinity();
        return v;
    }

    Backend backend() const { return backend_; }
    bool is_infinite() const { return infinite_; }
    bool is_exact() const { return backend_ == Backend::Exact && !infinite_; }

    /// Finite exact value; only meaningful when is_exact().
    const Rational& rational() const {
        if (!is_exact()) throw Error("ExtendedValue: no exact finite value");
        return exact_;
    }

    double to_double() const { return approx_; }

    /// Three-way comparison by numeric value (+inf compares above every
    /// finite value). Exact pairs compare exactly, mixed pairs as binary64.
    static int cmp(const ExtendedValue& a, const ExtendedValue& b) {
        if (a.infinite_ || b.infinite_) {
            if (a.infinite_ && b.infinite_) return 0;
            return a.infinite_ ? 1 : -1;
        }
        if (a.is_exact() && b.is_exact()) {
            if (a.exact_ < b.exact_) return -1;
            return a.exact_ == b.exact_ ? 0 : 1;
        }
        if (a.approx_ < b.approx_) return -1;
        return a.approx_ == b.approx_ ? 0 : 1;
    }

    friend bool operator<(const ExtendedValue& a, const ExtendedValue& b) { return cmp(a, b) < 0; }
    friend bool operator>(const ExtendedValue& a, const ExtendedValue& b) { return cmp(a, b) > 0; }
    friend bool operator==(const ExtendedValue& a, const ExtendedValue& b) {
        if (a.infinite_ != b.infinite_) return false;
        if (a.infinite_) return true;
        if (a.is_exact() && b.is_exact()) return a.exact_ == b.exact_;
        return a.approx_ == b.approx_;
    }

    /// |a-b| <= rel_tol * max(|a|,|b|); infinities match only each other.
    bool approx_equal(const ExtendedValue& o, double rel_tol) const {
        if (infinite_ || o.infinite_) return infinite_ == o.infinite_;
        const double a = approx_, b = o.approx_;
        const double scale = std::max(std::fabs(a), std::fabs(b));
        return std::fabs(a - b) <= rel_tol * std::max(scale, 1e-300);
    }

    /// "p/q" for exact values, %.17g for floats, "inf" for infinity.
    std::string str() const {
        if (infinite_) return "inf";
        if (is_exact()) return exact_.str();
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", approx_);
        return buf;
    }

private:
    Backend backend_;
    bool infinite_;
    Rational exact_;
    double approx_;
};

} // namespace ainfty
