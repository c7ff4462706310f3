#pragma once

#include <gmpxx.h>

#include <cmath>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "ainfty/errors.hpp"

namespace ainfty {

/// Arbitrary-precision rational, always stored in lowest terms with a
/// positive denominator. This is the number type for every exact quantity
/// in the library (atom measures, weight values, basis measures, exact
/// condition constants).
class Rational {
public:
    Rational() : v_(0) {}
    Rational(long n) : v_(n) {} // NOLINT(google-explicit-constructor)
    Rational(long n, long d) : v_(n, d) {
        if (d == 0) throw Error("Rational: zero denominator");
        canonicalize();
    }
    explicit Rational(const mpz_class& n) : v_(n) {}
    Rational(const mpz_class& n, const mpz_class& d) : v_(n, d) {
        if (d == 0) throw Error("Rational: zero denominator");
        canonicalize();
    }
    explicit Rational(const mpq_class& q) : v_(q) { canonicalize(); }

    /// Parses "p", "p/q", with optional leading sign. Decimal or scientific
    /// literals are rejected, never coerced.
    static Rational from_string(std::string_view text) {
        auto r = try_parse(text);
        if (!r) throw ParseError("not a rational literal (expected \"p\" or \"p/q\"): '" +
                                 std::string(text) + "'");
        return *r;
    }

    static std::optional<Rational> try_parse(std::string_view text) {
        if (text.empty()) return std::nullopt;
        const auto slash = text.find('/');
        const auto digits = [](std::string_view s, bool allow_sign) {
            if (s.empty()) return false;
            std::size_t i = 0;
            if (allow_sign && (s[0] == '+' || s[0] == '-')) i = 1;
            if (i == s.size()) return false;
            for (; i < s.size(); ++i)
                if (s[i] < '0' || s[i] > '9') return false;
            return true;
        };
        std::string_view num = slash == std::string_view::npos ? text : text.substr(0, slash);
        if (!digits(num, true)) return std::nullopt;
        if (num.front() == '+') num.remove_prefix(1); // mpz rejects a leading '+'
        mpz_class n(std::string(num), 10);
        if (slash == std::string_view::npos) return Rational(n);
        std::string_view den = text.substr(slash + 1);
        if (!digits(den, false)) return std::nullopt;
        mpz_class d(std::string(den), 10);
        if (d == 0) return std::nullopt;
        return Rational(n, d);
    }

    /// Renders as "p/q" (always with an explicit denominator).
    std::string str() const { return v_.get_num().get_str() + "/" + v_.get_den().get_str(); }

    double to_double() const { return v_.get_d(); }

    const mpz_class& numerator() const { return v_.get_num(); }
    const mpz_class& denominator() const { return v_.get_den(); }
    bool is_integer() const { return v_.get_den() == 1; }
    bool is_zero() const { return sgn(v_) == 0; }
    int sign() const { return sgn(v_); }

    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) throw Error("Rational: division by zero");
        v_ /= o.v_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    friend Rational operator-(const Rational& a) { Rational r; r.v_ = -a.v_; return r; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
    friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
    friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

    /// Integer power; `e` may be negative (base must be nonzero then).
    Rational pow_int(long e) const {
        if (e == 0) return Rational(1);
        const bool inv = e < 0;
        unsigned long k = inv ? static_cast<unsigned long>(-(e + 1)) + 1ul
                              : static_cast<unsigned long>(e);
        if (inv && is_zero()) throw Error("Rational: 0 raised to a negative power");
        mpz_class n, d;
        mpz_pow_ui(n.get_mpz_t(), v_.get_num().get_mpz_t(), k);
        mpz_pow_ui(d.get_mpz_t(), v_.get_den().get_mpz_t(), k);
        return inv ? Rational(d, n) : Rational(n, d);
    }

    static Rational pow2(long e) { return Rational(2).pow_int(e); }

    /// Natural log as binary64, robust for magnitudes far outside double
    /// range (uses mantissa/exponent decomposition of both parts).
    double log() const {
        if (sign() <= 0) throw Error("Rational: log of non-positive value");
        signed long en = 0, ed = 0;
        const double mn = mpz_get_d_2exp(&en, v_.get_num().get_mpz_t());
        const double md = mpz_get_d_2exp(&ed, v_.get_den().get_mpz_t());
        return std::log(mn) - std::log(md) + M_LN2 * static_cast<double>(en - ed);
    }

    std::size_t hash() const {
        const auto h_mpz = [](const mpz_class& z) {
            std::size_t h = 1469598103934665603ull;
            const std::size_t n = mpz_size(z.get_mpz_t());
            for (std::size_t i = 0; i < n; ++i) {
                h ^= static_cast<std::size_t>(mpz_getlimbn(z.get_mpz_t(), i));
                h *= 1099511628211ull;
            }
            if (sgn(z) < 0) h = ~h;
            return h;
        };
        return h_mpz(v_.get_num()) * 31 + h_mpz(v_.get_den());
    }

private:
    void canonicalize() { mpq_canonicalize(v_.get_mpq_t()); }
    mpq_class v_;
};

struct RationalHash {
    std::size_t operator()(const Rational& r) const { return r.hash(); }
};

} // namespace ainfty
