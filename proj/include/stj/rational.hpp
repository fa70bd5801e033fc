#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <compare>
#include <cstdint>
#include <iosfwd>
#include <sstream>
#include <string>
#include <string_view>

#include "stj/errors.hpp"

namespace stj {

using Integer = boost::multiprecision::cpp_int;

// Exact rational scalar.  Backed by boost::multiprecision::cpp_rational, which
// keeps den > 0 and gcd(|num|, den) = 1 after every operation.  Text form is
// "p/q" with the "/q" omitted when q = 1; parse/print round-trips exactly.
class Rational {
public:
    using backend = boost::multiprecision::cpp_rational;

    Rational() : v_(0) {}
    Rational(int n) : v_(n) {}           // NOLINT(google-explicit-constructor)
    Rational(long long n) : v_(n) {}     // NOLINT(google-explicit-constructor)
    Rational(const Integer& n) : v_(n) {}  // NOLINT(google-explicit-constructor)
    Rational(const Integer& n, const Integer& d) {
        if (d == 0) throw invalid_value("rational with zero denominator");
        v_ = d < 0 ? backend(-n, -d) : backend(n, d);
    }
    Rational(long long n, long long d) : Rational(Integer(n), Integer(d)) {}
    explicit Rational(backend v) : v_(std::move(v)) {}

    static Rational parse(std::string_view text) {
        auto bad = [&] { return invalid_value("malformed rational '" + std::string(text) + "'"); };
        auto digits = [](std::string_view s) {
            if (s.empty()) return false;
            for (char c : s)
                if (c < '0' || c > '9') return false;
            return true;
        };
        std::string_view body = text;
        bool neg = false;
        if (!body.empty() && body[0] == '-') {
            neg = true;
            body.remove_prefix(1);
        }
        auto slash = body.find('/');
        std::string_view nstr = slash == std::string_view::npos ? body : body.substr(0, slash);
        if (!digits(nstr)) throw bad();
        Integer n{std::string(nstr)};
        Integer d{1};
        if (slash != std::string_view::npos) {
            std::string_view dstr = body.substr(slash + 1);
            if (!digits(dstr)) throw bad();
            d = Integer{std::string(dstr)};
            if (d == 0) throw bad();
        }
        return Rational(neg ? Integer(-n) : n, d);
    }

    Integer num() const { return boost::multiprecision::numerator(v_); }
    Integer den() const { return boost::multiprecision::denominator(v_); }

    bool is_zero() const { return v_ == 0; }
    bool is_integer() const { return den() == 1; }
    int sign() const { return v_ < 0 ? -1 : (v_ > 0 ? 1 : 0); }

    Rational operator-() const { return Rational(backend(-v_)); }
    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) throw invalid_value("rational division by zero");
        v_ /= o.v_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
    friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
    friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

    friend Rational abs(const Rational& a) { return a.v_ < 0 ? -a : a; }
    friend const Rational& min(const Rational& a, const Rational& b) { return b < a ? b : a; }
    friend const Rational& max(const Rational& a, const Rational& b) { return a < b ? b : a; }

    Rational pow(unsigned k) const {
        Rational out(1), base = *this;
        while (k) {
            if (k & 1U) out *= base;
            base *= base;
            k >>= 1U;
        }
        return out;
    }

    // Largest integer <= *this.
    Integer floor() const {
        Integer q = num() / den();
        if (num() < 0 && q * den() != num()) --q;
        return q;
    }

    std::string str() const {
        std::string s = num().str();
        if (den() != 1) s += "/" + den().str();
        return s;
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
    backend v_;
};

// Non-authoritative decimal rendering for human-facing output.
inline std::string to_decimal_string(const Rational& r, int significant = 15) {
    using flt = boost::multiprecision::cpp_bin_float_50;
    flt x = flt(r.num()) / flt(r.den());
    std::ostringstream os;
    os.precision(significant);
    os << x;
    return os.str();
}

}  // namespace stj
