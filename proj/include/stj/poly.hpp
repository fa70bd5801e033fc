#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stj/config.hpp"
#include "stj/errors.hpp"
#include "stj/rational.hpp"

namespace stj {

// Polynomial with rational coefficients, ascending degree order.  The zero
// polynomial is the empty coefficient list.  The public constructor enforces
// the configured degree cap (default 6); results of internal arithmetic such
// as products and antiderivatives are built through raw() and may exceed it.
class Poly {
public:
    Poly() = default;

    explicit Poly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) {
        trim();
        int cap = config::max_poly_degree();
        if (degree() > cap) {
            throw degree_overflow("polynomial degree " + std::to_string(degree()) +
                                  " exceeds cap " + std::to_string(cap));
        }
    }

    static Poly raw(std::vector<Rational> coeffs) {
        Poly p;
        p.c_ = std::move(coeffs);
        p.trim();
        return p;
    }

    static Poly constant(Rational c) {
        return c.is_zero() ? Poly() : raw({std::move(c)});
    }
    static Poly identity() { return raw({Rational(0), Rational(1)}); }

    const std::vector<Rational>& coeffs() const { return c_; }
    bool is_zero() const { return c_.empty(); }
    // Degree of the zero polynomial is reported as -1.
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_constant() const { return c_.size() <= 1; }

    Rational coeff(size_t i) const { return i < c_.size() ? c_[i] : Rational(0); }
    Rational leading() const { return c_.empty() ? Rational(0) : c_.back(); }

    Rational eval(const Rational& x) const {
        Rational acc(0);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
        return acc;
    }

    Poly derivative() const {
        if (c_.size() <= 1) return Poly();
        std::vector<Rational> d(c_.size() - 1);
        for (size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * Rational(static_cast<long long>(i));
        return raw(std::move(d));
    }

    // Antiderivative with zero constant term.
    Poly antiderivative() const {
        if (c_.empty()) return Poly();
        std::vector<Rational> d(c_.size() + 1);
        d[0] = Rational(0);
        for (size_t i = 0; i < c_.size(); ++i)
            d[i + 1] = c_[i] / Rational(static_cast<long long>(i + 1));
        return raw(std::move(d));
    }

    friend Poly operator+(const Poly& a, const Poly& b) {
        std::vector<Rational> d(std::max(a.c_.size(), b.c_.size()), Rational(0));
        for (size_t i = 0; i < a.c_.size(); ++i) d[i] += a.c_[i];
        for (size_t i = 0; i < b.c_.size(); ++i) d[i] += b.c_[i];
        return raw(std::move(d));
    }
    friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }
    Poly operator-() const {
        std::vector<Rational> d(c_);
        for (auto& x : d) x = -x;
        return raw(std::move(d));
    }
    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero()) return Poly();
        std::vector<Rational> d(a.c_.size() + b.c_.size() - 1, Rational(0));
        for (size_t i = 0; i < a.c_.size(); ++i)
            for (size_t j = 0; j < b.c_.size(); ++j) d[i + j] += a.c_[i] * b.c_[j];
        return raw(std::move(d));
    }
    Poly scaled(const Rational& r) const {
        if (r.is_zero()) return Poly();
        std::vector<Rational> d(c_);
        for (auto& x : d) x *= r;
        return raw(std::move(d));
    }
    Poly pow(unsigned k) const {
        Poly out = constant(Rational(1)), base = *this;
        while (k) {
            if (k & 1U) out = out * base;
            base = base * base;
            k >>= 1U;
        }
        return out;
    }
    Poly shifted(const Rational& c) const {  // p(x) + c
        return *this + constant(c);
    }

    friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    // Display form, e.g. "2x^3 - x + 1/4".
    std::string str() const {
        if (c_.empty()) return "0";
        std::string out;
        for (int i = degree(); i >= 0; --i) {
            const Rational& ci = c_[static_cast<size_t>(i)];
            if (ci.is_zero()) continue;
            Rational mag = abs(ci);
            if (out.empty()) {
                if (ci.sign() < 0) out += "-";
            } else {
                out += ci.sign() < 0 ? " - " : " + ";
            }
            bool unit = (mag == Rational(1));
            if (i == 0 || !unit) out += mag.str();
            if (i > 0) {
                out += "x";
                if (i > 1) out += "^" + std::to_string(i);
            }
        }
        return out.empty() ? "0" : out;
    }

private:
    void trim() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }

    std::vector<Rational> c_;
};

inline Rational poly_eval(const Poly& p, const Rational& x) { return p.eval(x); }
inline Poly poly_antiderivative(const Poly& p) { return p.antiderivative(); }

namespace detail {

// Remainder of a by b (rational coefficients, b nonzero).
inline Poly poly_rem(const Poly& a, const Poly& b) {
    Poly r = a;
    while (!r.is_zero() && r.degree() >= b.degree()) {
        Rational q = r.leading() / b.leading();
        int shift = r.degree() - b.degree();
        std::vector<Rational> t(static_cast<size_t>(shift + b.degree() + 1), Rational(0));
        for (size_t i = 0; i < b.coeffs().size(); ++i)
            t[static_cast<size_t>(shift) + i] = b.coeffs()[i] * q;
        r = r - Poly::raw(std::move(t));
    }
    return r;
}

inline Poly poly_monic(const Poly& p) {
    if (p.is_zero()) return p;
    return p.scaled(Rational(1) / p.leading());
}

inline Poly poly_gcd(Poly a, Poly b) {
    while (!b.is_zero()) {
        Poly r = poly_monic(poly_rem(a, b));
        a = std::move(b);
        b = std::move(r);
    }
    return poly_monic(a);
}

}  // namespace detail

// Sturm chain of the square-free part of p.  Counts distinct real roots with
// exact rational arithmetic; used for monotonicity and sign-constancy checks.
class SturmChain {
public:
    explicit SturmChain(const Poly& p) {
        Poly d = p.derivative();
        sqfree_ = d.is_zero() ? detail::poly_monic(p) : detail::poly_monic(
            [&] {
                Poly g = detail::poly_gcd(p, d);
                if (g.degree() < 1) return p;
                // Divide p by g exactly: since g | p, repeated leading-term
                // elimination terminates with zero remainder.
                Poly q, r = p;
                std::vector<Rational> qc(static_cast<size_t>(p.degree() - g.degree() + 1),
                                         Rational(0));
                while (!r.is_zero() && r.degree() >= g.degree()) {
                    Rational c = r.leading() / g.leading();
                    int shift = r.degree() - g.degree();
                    qc[static_cast<size_t>(shift)] = c;
                    std::vector<Rational> t(static_cast<size_t>(shift + g.degree() + 1),
                                            Rational(0));
                    for (size_t i = 0; i < g.coeffs().size(); ++i)
                        t[static_cast<size_t>(shift) + i] = g.coeffs()[i] * c;
                    r = r - Poly::raw(std::move(t));
                }
                return Poly::raw(std::move(qc));
            }());
        if (sqfree_.is_constant()) return;
        chain_.push_back(sqfree_);
        chain_.push_back(sqfree_.derivative());
        while (true) {
            const Poly& prev = chain_[chain_.size() - 2];
            const Poly& last = chain_.back();
            Poly r = detail::poly_rem(prev, last);
            if (r.is_zero()) break;
            chain_.push_back(-r);
        }
    }

    const Poly& square_free() const { return sqfree_; }

    // Number of distinct real roots in the half-open interval (lo, hi].
    int count_halfopen(const Rational& lo, const Rational& hi) const {
        if (chain_.empty()) return 0;
        return variations(lo) - variations(hi);
    }

    // Number of distinct real roots in the open interval (lo, hi).
    int count_open(const Rational& lo, const Rational& hi) const {
        if (chain_.empty()) return 0;
        int n = count_halfopen(lo, hi);
        if (sqfree_.eval(hi).is_zero()) --n;
        return n;
    }

private:
    int variations(const Rational& x) const {
        int v = 0, prev = 0;
        for (const Poly& p : chain_) {
            int s = p.eval(x).sign();
            if (s == 0) continue;
            if (prev != 0 && s != prev) ++v;
            prev = s;
        }
        return v;
    }

    Poly sqfree_;
    std::vector<Poly> chain_;
};

namespace detail {

// Rational square root, when one exists.
inline std::optional<Rational> exact_sqrt(const Rational& r) {
    if (r.sign() < 0) return std::nullopt;
    Integer ns = boost::multiprecision::sqrt(r.num());
    Integer ds = boost::multiprecision::sqrt(r.den());
    if (ns * ns != r.num() || ds * ds != r.den()) return std::nullopt;
    return Rational(ns, ds);
}

struct RootList {
    std::vector<Rational> roots;  // rational roots found, ascending
    bool all_rational = true;     // false when an irrational real root exists
};

// Real roots of a degree <= 2 polynomial in closed form.
inline RootList low_degree_roots(const Poly& p) {
    RootList out;
    if (p.degree() <= 0) return out;  // constants handled by callers
    if (p.degree() == 1) {
        out.roots.push_back(-p.coeff(0) / p.coeff(1));
        return out;
    }
    Rational a = p.coeff(2), b = p.coeff(1), c = p.coeff(0);
    Rational disc = b * b - Rational(4) * a * c;
    if (disc.sign() < 0) return out;
    if (disc.is_zero()) {
        out.roots.push_back(-b / (Rational(2) * a));
        return out;
    }
    auto s = exact_sqrt(disc);
    if (!s) {
        out.all_rational = false;
        return out;
    }
    Rational r1 = (-b - *s) / (Rational(2) * a);
    Rational r2 = (-b + *s) / (Rational(2) * a);
    if (r2 < r1) std::swap(r1, r2);
    out.roots = {r1, r2};
    return out;
}

}  // namespace detail

// Rational roots of p strictly inside (lo, hi), plus a flag telling whether
// irrational roots remain in the interval.  Closed forms cover degree <= 2;
// for higher degree, bisection of Sturm-isolated roots finds those roots that
// land exactly on a bisection point.
struct InteriorRoots {
    std::vector<Rational> rational_roots;
    bool has_irrational = false;
};

inline InteriorRoots roots_in_open_interval(const Poly& p, const Rational& lo,
                                            const Rational& hi) {
    InteriorRoots out;
    if (p.is_constant()) return out;
    SturmChain chain(p);
    int total = chain.count_open(lo, hi);
    if (total == 0) return out;
    const Poly& s = chain.square_free();
    if (s.degree() <= 2) {
        auto rl = detail::low_degree_roots(s);
        if (!rl.all_rational) {
            // With both roots irrational none lies on a rational point; any
            // root counted inside the interval is irrational.
            out.has_irrational = true;
            return out;
        }
        for (const Rational& r : rl.roots)
            if (lo < r && r < hi) out.rational_roots.push_back(r);
        return out;
    }
    // Isolate, then bisect hoping to land on the root exactly.
    struct Seg { Rational a, b; int n; };
    std::vector<Seg> work{{lo, hi, total}};
    while (!work.empty()) {
        Seg seg = work.back();
        work.pop_back();
        if (seg.n == 0) continue;
        bool found = false;
        Rational a = seg.a, b = seg.b;
        int n = seg.n;
        for (int iter = 0; iter < 128; ++iter) {
            Rational m = (a + b) / Rational(2);
            if (s.eval(m).is_zero()) {
                out.rational_roots.push_back(m);
                int nl = chain.count_open(a, m);
                int nr = chain.count_open(m, b);
                if (nl) work.push_back({a, m, nl});
                if (nr) work.push_back({m, b, nr});
                found = true;
                break;
            }
            int nl = chain.count_open(a, m);
            // Root exactly at m was excluded above, so the rest is right of m.
            if (nl == n) { b = m; continue; }
            if (nl == 0) { a = m; continue; }
            work.push_back({a, m, nl});
            work.push_back({m, b, n - nl});
            found = true;
            break;
        }
        if (!found) out.has_irrational = true;
    }
    std::sort(out.rational_roots.begin(), out.rational_roots.end());
    return out;
}

// Certified outer bounds (m, M) for p on [lo, hi]:
//   m <= inf p <= sup p <= M   and   M - m <= (sup p - inf p) + width.
// Critical points are bracketed by exact bisection on the derivative's sign
// changes; if they cannot be pinned to rational points, intervals are shrunk
// until the residual uncertainty fits inside `width`.
inline std::pair<Rational, Rational> poly_range(const Poly& p, const Rational& lo,
                                                const Rational& hi, const Rational& width) {
    if (lo >= hi) throw invalid_value("poly_range requires lo < hi");
    if (width.sign() < 0) throw invalid_value("poly_range requires width >= 0");
    if (p.is_constant()) {
        Rational c = p.eval(lo);
        return {c, c};
    }
    Poly d = p.derivative();
    std::vector<Rational> candidates{p.eval(lo), p.eval(hi)};

    SturmChain chain(d);
    // Per-piece derivative bound: |p'(x)| <= sum |d_i| R^i on [lo, hi].
    Rational radius = max(abs(lo), abs(hi));
    Rational deriv_bound(0), rpow(1);
    for (const Rational& c : d.coeffs()) {
        deriv_bound += abs(c) * rpow;
        rpow *= radius;
    }
    Rational half_width = width / Rational(2);
    Rational min_len =
        (width.is_zero() || deriv_bound.is_zero()) ? Rational(0) : half_width / deriv_bound;

    bool slack_used = false;
    struct Seg { Rational a, b; int depth; };
    std::vector<Seg> work{{lo, hi, 0}};
    while (!work.empty()) {
        Seg seg = work.back();
        work.pop_back();
        candidates.push_back(p.eval(seg.a));
        candidates.push_back(p.eval(seg.b));
        if (chain.count_open(seg.a, seg.b) == 0) continue;
        const Poly& s = chain.square_free();
        if (s.degree() <= 2) {
            auto rl = detail::low_degree_roots(s);
            if (rl.all_rational) {
                for (const Rational& r : rl.roots)
                    if (seg.a < r && r < seg.b) candidates.push_back(p.eval(r));
                continue;
            }
        }
        if (!width.is_zero() && seg.b - seg.a <= min_len) {
            // Extrema inside this sliver move p by at most deriv_bound * len.
            slack_used = true;
            continue;
        }
        if (seg.depth > 200) {
            throw invalid_value(
                "poly_range: cannot certify extrema exactly with width 0 "
                "(irrational critical point)");
        }
        Rational m = (seg.a + seg.b) / Rational(2);
        work.push_back({seg.a, m, seg.depth + 1});
        work.push_back({m, seg.b, seg.depth + 1});
    }
    Rational mlo = candidates.front(), mhi = candidates.front();
    for (const Rational& c : candidates) {
        if (c < mlo) mlo = c;
        if (c > mhi) mhi = c;
    }
    if (slack_used) {
        mlo -= half_width;
        mhi += half_width;
    }
    return {mlo, mhi};
}

}  // namespace stj
