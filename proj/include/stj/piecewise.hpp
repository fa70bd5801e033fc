#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stj/errors.hpp"
#include "stj/poly.hpp"
#include "stj/rational.hpp"

namespace stj {

// Ordered breakpoints a = x_0 < ... < x_n = b of a closed interval.
class Partition {
public:
    explicit Partition(std::vector<Rational> pts) : pts_(std::move(pts)) {
        if (pts_.size() < 2) throw invalid_value("partition needs at least two points");
        for (size_t i = 1; i < pts_.size(); ++i)
            if (!(pts_[i - 1] < pts_[i]))
                throw invalid_value("partition points must be strictly increasing");
    }

    static Partition uniform(const Rational& a, const Rational& b, int n) {
        if (n < 1) throw invalid_value("partition needs at least one interval");
        std::vector<Rational> pts;
        pts.reserve(static_cast<size_t>(n) + 1);
        for (int i = 0; i <= n; ++i)
            pts.push_back(a + (b - a) * Rational(i) / Rational(n));
        return Partition(std::move(pts));
    }

    const std::vector<Rational>& points() const { return pts_; }
    const Rational& a() const { return pts_.front(); }
    const Rational& b() const { return pts_.back(); }
    size_t intervals() const { return pts_.size() - 1; }

    bool contains_point(const Rational& x) const {
        return std::binary_search(pts_.begin(), pts_.end(), x);
    }

    Partition refined_with(const std::vector<Rational>& extra) const {
        std::vector<Rational> pts = pts_;
        for (const Rational& x : extra)
            if (x > a() && x < b() && !std::binary_search(pts_.begin(), pts_.end(), x))
                pts.push_back(x);
        std::sort(pts.begin(), pts.end());
        pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
        return Partition(std::move(pts));
    }

    Partition bisected() const {
        std::vector<Rational> pts;
        pts.reserve(pts_.size() * 2 - 1);
        for (size_t i = 0; i + 1 < pts_.size(); ++i) {
            pts.push_back(pts_[i]);
            pts.push_back((pts_[i] + pts_[i + 1]) / Rational(2));
        }
        pts.push_back(pts_.back());
        return Partition(std::move(pts));
    }

    friend bool operator==(const Partition& p, const Partition& q) { return p.pts_ == q.pts_; }

private:
    std::vector<Rational> pts_;
};

inline Partition common_refinement(const Partition& p, const Partition& q) {
    if (p.a() != q.a() || p.b() != q.b())
        throw domain_mismatch("common refinement of partitions of different intervals");
    std::vector<Rational> pts = p.points();
    pts.insert(pts.end(), q.points().begin(), q.points().end());
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return Partition(std::move(pts));
}

struct Discontinuity {
    Rational x;
    Rational left_gap;   // f(x) - f(x-)
    Rational right_gap;  // f(x+) - f(x)
};

// Piecewise-polynomial function on [a, b]: polynomial pieces on the open
// partition intervals plus explicit, independent values at the breakpoints.
// Point values are first class; they need not match the adjacent pieces, and
// that difference is exactly what distinguishes the RDS from the DS integral.
//
// The Dirichlet variant carries only its domain.  It evaluates to 1 at every
// rational point (all inputs here are rational) and has no one-sided limits.
class PiecewiseFn {
public:
    PiecewiseFn(std::vector<Rational> breaks, std::vector<Poly> pieces,
                std::vector<Rational> values)
        : breaks_(std::move(breaks)), pieces_(std::move(pieces)), values_(std::move(values)) {
        if (breaks_.size() < 2) throw invalid_value("piecewise function needs both endpoints");
        if (pieces_.size() != breaks_.size() - 1 || values_.size() != breaks_.size())
            throw invalid_value("piecewise function with inconsistent piece/value counts");
        for (size_t i = 1; i < breaks_.size(); ++i)
            if (!(breaks_[i - 1] < breaks_[i]))
                throw invalid_value("breakpoints must be strictly increasing");
    }

    static PiecewiseFn dirichlet(const Rational& a, const Rational& b) {
        if (!(a < b)) throw invalid_value("empty domain");
        PiecewiseFn f;
        f.dirichlet_ = true;
        f.breaks_ = {a, b};
        return f;
    }

    static PiecewiseFn constant(const Rational& a, const Rational& b, const Rational& c) {
        return PiecewiseFn({a, b}, {Poly::constant(c)}, {c, c});
    }

    // Polynomial on [a, b] with matching point values.
    static PiecewiseFn from_poly(const Rational& a, const Rational& b, const Poly& p) {
        return PiecewiseFn({a, b}, {p}, {p.eval(a), p.eval(b)});
    }

    static PiecewiseFn identity(const Rational& a, const Rational& b) {
        return from_poly(a, b, Poly::identity());
    }

    // H_c(x - t) restricted to [a, b]: 0 left of t, c at t, 1 right of t.
    static PiecewiseFn heaviside(const Rational& a, const Rational& b, const Rational& c,
                                 const Rational& t) {
        if (t < a || t > b) return constant(a, b, t < a ? Rational(1) : Rational(0));
        if (t == a)
            return PiecewiseFn({a, b}, {Poly::constant(Rational(1))}, {c, Rational(1)});
        if (t == b)
            return PiecewiseFn({a, b}, {Poly::constant(Rational(0))}, {Rational(0), c});
        return PiecewiseFn({a, t, b},
                           {Poly::constant(Rational(0)), Poly::constant(Rational(1))},
                           {Rational(0), c, Rational(1)});
    }

    bool is_dirichlet() const { return dirichlet_; }
    const Rational& a() const { return breaks_.front(); }
    const Rational& b() const { return breaks_.back(); }
    const std::vector<Rational>& breakpoints() const { return breaks_; }
    const std::vector<Poly>& pieces() const { return pieces_; }
    const std::vector<Rational>& point_values() const { return values_; }

    bool is_step() const {
        if (dirichlet_) return false;
        for (const Poly& p : pieces_)
            if (!p.is_constant()) return false;
        return true;
    }

    bool in_domain(const Rational& x) const { return x >= a() && x <= b(); }

    Rational eval(const Rational& x) const {
        require_domain(x);
        if (dirichlet_) return Rational(1);
        if (auto k = break_index(x)) return values_[*k];
        return pieces_[interval_index(x)].eval(x);
    }

    // Piece covering the open interval around x; x must not be a breakpoint.
    const Poly& piece_containing(const Rational& x) const {
        require_domain(x);
        require_limits();
        if (break_index(x)) throw invalid_value("point " + x.str() + " is a breakpoint");
        return pieces_[interval_index(x)];
    }

    // One-sided limits, with the endpoint conventions f(a-) = f(a) and
    // f(b+) = f(b).
    Rational limit_left(const Rational& x) const {
        require_domain(x);
        require_limits();
        if (x == a()) return values_.front();
        if (auto k = break_index(x)) return pieces_[*k - 1].eval(x);
        return pieces_[interval_index(x)].eval(x);
    }

    Rational limit_right(const Rational& x) const {
        require_domain(x);
        require_limits();
        if (x == b()) return values_.back();
        if (auto k = break_index(x)) return pieces_[*k].eval(x);
        return pieces_[interval_index(x)].eval(x);
    }

    std::vector<Discontinuity> discontinuities() const {
        require_limits();
        std::vector<Discontinuity> out;
        for (const Rational& x : breaks_) {
            Rational lg = eval(x) - limit_left(x);
            Rational rg = limit_right(x) - eval(x);
            if (!lg.is_zero() || !rg.is_zero()) out.push_back({x, lg, rg});
        }
        return out;
    }

    // Same function with extra breakpoints inserted mid-piece.
    PiecewiseFn refined_with(const std::vector<Rational>& extra) const {
        require_limits();
        std::vector<Rational> inserts;
        for (const Rational& x : extra)
            if (x > a() && x < b() && !break_index(x)) inserts.push_back(x);
        if (inserts.empty()) return *this;
        std::sort(inserts.begin(), inserts.end());
        inserts.erase(std::unique(inserts.begin(), inserts.end()), inserts.end());
        std::vector<Rational> nb;
        std::vector<Poly> np;
        std::vector<Rational> nv;
        size_t j = 0;
        for (size_t i = 0; i + 1 < breaks_.size(); ++i) {
            nb.push_back(breaks_[i]);
            nv.push_back(values_[i]);
            while (j < inserts.size() && inserts[j] < breaks_[i + 1]) {
                np.push_back(pieces_[i]);
                nb.push_back(inserts[j]);
                nv.push_back(pieces_[i].eval(inserts[j]));
                ++j;
            }
            np.push_back(pieces_[i]);
        }
        nb.push_back(breaks_.back());
        nv.push_back(values_.back());
        return PiecewiseFn(std::move(nb), std::move(np), std::move(nv));
    }

    PiecewiseFn restrict(const Rational& c, const Rational& d) const {
        if (!(c < d)) throw invalid_value("empty restriction interval");
        if (c < a() || d > b()) throw out_of_domain("restriction outside domain");
        if (dirichlet_) return dirichlet(c, d);
        std::vector<Rational> nb{c};
        std::vector<Poly> np;
        std::vector<Rational> nv{eval(c)};
        for (size_t i = 0; i + 1 < breaks_.size(); ++i) {
            const Rational& u = breaks_[i];
            const Rational& v = breaks_[i + 1];
            if (v <= c || u >= d) continue;
            // Piece i overlaps (c, d).
            Rational hi = min(v, d);
            np.push_back(pieces_[i]);
            nb.push_back(hi);
            nv.push_back(hi == d ? eval(d) : values_[i + 1]);
        }
        return PiecewiseFn(std::move(nb), std::move(np), std::move(nv));
    }

    friend bool operator==(const PiecewiseFn& f, const PiecewiseFn& g) {
        return f.dirichlet_ == g.dirichlet_ && f.breaks_ == g.breaks_ &&
               f.pieces_ == g.pieces_ && f.values_ == g.values_;
    }

private:
    PiecewiseFn() = default;

    void require_domain(const Rational& x) const {
        if (!in_domain(x))
            throw out_of_domain("point " + x.str() + " outside [" + a().str() + ", " +
                                b().str() + "]");
    }
    void require_limits() const {
        if (dirichlet_)
            throw unsupported_dirichlet("the Dirichlet function has no one-sided limits");
    }

    std::optional<size_t> break_index(const Rational& x) const {
        auto it = std::lower_bound(breaks_.begin(), breaks_.end(), x);
        if (it != breaks_.end() && *it == x)
            return static_cast<size_t>(it - breaks_.begin());
        return std::nullopt;
    }

    // Index of the open interval containing x (x must not be a breakpoint).
    size_t interval_index(const Rational& x) const {
        auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
        return static_cast<size_t>(it - breaks_.begin()) - 1;
    }

    bool dirichlet_ = false;
    std::vector<Rational> breaks_;
    std::vector<Poly> pieces_;
    std::vector<Rational> values_;
};

// A piecewise function whose pieces are all constants.  The interval
// constants and the breakpoint values are independent data.
class StepFn {
public:
    explicit StepFn(PiecewiseFn f) : fn_(std::move(f)) {
        if (!fn_.is_step()) throw invalid_value("not a step function");
    }

    static StepFn on(const Partition& p, std::vector<Rational> constants,
                     std::vector<Rational> values) {
        if (constants.size() != p.intervals() || values.size() != p.points().size())
            throw invalid_value("step function with inconsistent constant/value counts");
        std::vector<Poly> pieces;
        pieces.reserve(constants.size());
        for (auto& c : constants) pieces.push_back(Poly::constant(c));
        return StepFn(PiecewiseFn(p.points(), std::move(pieces), std::move(values)));
    }

    const PiecewiseFn& fn() const { return fn_; }
    operator const PiecewiseFn&() const { return fn_; }  // NOLINT

    Rational eval(const Rational& x) const { return fn_.eval(x); }
    const Rational& a() const { return fn_.a(); }
    const Rational& b() const { return fn_.b(); }

private:
    PiecewiseFn fn_;
};

inline PiecewiseFn pw_add(const PiecewiseFn& f, const PiecewiseFn& g) {
    if (f.is_dirichlet() || g.is_dirichlet())
        throw unsupported_dirichlet("no pointwise algebra on the Dirichlet function");
    if (f.a() != g.a() || f.b() != g.b())
        throw domain_mismatch("adding functions on different domains");
    PiecewiseFn fr = f.refined_with(g.breakpoints());
    PiecewiseFn gr = g.refined_with(f.breakpoints());
    std::vector<Poly> pieces;
    pieces.reserve(fr.pieces().size());
    for (size_t i = 0; i < fr.pieces().size(); ++i)
        pieces.push_back(fr.pieces()[i] + gr.pieces()[i]);
    std::vector<Rational> values;
    values.reserve(fr.point_values().size());
    for (size_t i = 0; i < fr.point_values().size(); ++i)
        values.push_back(fr.point_values()[i] + gr.point_values()[i]);
    return PiecewiseFn(fr.breakpoints(), std::move(pieces), std::move(values));
}

inline PiecewiseFn pw_scale(const Rational& r, const PiecewiseFn& f) {
    if (f.is_dirichlet())
        throw unsupported_dirichlet("no pointwise algebra on the Dirichlet function");
    std::vector<Poly> pieces;
    pieces.reserve(f.pieces().size());
    for (const Poly& p : f.pieces()) pieces.push_back(p.scaled(r));
    std::vector<Rational> values;
    values.reserve(f.point_values().size());
    for (const Rational& v : f.point_values()) values.push_back(v * r);
    return PiecewiseFn(f.breakpoints(), std::move(pieces), std::move(values));
}

inline PiecewiseFn pw_pow(const PiecewiseFn& f, unsigned k) {
    if (f.is_dirichlet()) {
        // D^k = D for k >= 1 (values 0 and 1 are fixed points); D^0 = 1.
        if (k == 0) return PiecewiseFn::constant(f.a(), f.b(), Rational(1));
        return f;
    }
    std::vector<Poly> pieces;
    pieces.reserve(f.pieces().size());
    for (const Poly& p : f.pieces()) pieces.push_back(p.pow(k));
    std::vector<Rational> values;
    values.reserve(f.point_values().size());
    for (const Rational& v : f.point_values()) values.push_back(v.pow(k));
    return PiecewiseFn(f.breakpoints(), std::move(pieces), std::move(values));
}

inline PiecewiseFn pw_restrict(const PiecewiseFn& f, const Rational& c, const Rational& d) {
    return f.restrict(c, d);
}

// max(f, 0), with pieces subdivided at their sign-change roots.  Sign changes
// must land on rational points: degree <= 2 pieces get closed-form roots;
// higher-degree pieces must have no interior roots that cannot be pinned to a
// rational point, otherwise IrrationalRoot is raised and the caller falls
// back to enclosure integration.
inline PiecewiseFn pos_part(const PiecewiseFn& f) {
    if (f.is_dirichlet())
        throw unsupported_dirichlet("pos_part of the Dirichlet function");
    std::vector<Rational> nb{f.a()};
    std::vector<Poly> np;
    std::vector<Rational> nv{max(f.point_values().front(), Rational(0))};
    for (size_t i = 0; i + 1 < f.breakpoints().size(); ++i) {
        const Rational& u = f.breakpoints()[i];
        const Rational& v = f.breakpoints()[i + 1];
        const Poly& q = f.pieces()[i];
        InteriorRoots roots = q.is_constant() ? InteriorRoots{}
                                              : roots_in_open_interval(q, u, v);
        if (roots.has_irrational)
            throw irrational_root("piece on (" + u.str() + ", " + v.str() +
                                  ") changes sign at an irrational point");
        std::vector<Rational> cuts{u};
        cuts.insert(cuts.end(), roots.rational_roots.begin(), roots.rational_roots.end());
        cuts.push_back(v);
        for (size_t j = 0; j + 1 < cuts.size(); ++j) {
            Rational mid = (cuts[j] + cuts[j + 1]) / Rational(2);
            np.push_back(q.eval(mid).sign() > 0 ? q : Poly());
            nb.push_back(cuts[j + 1]);
            nv.push_back(j + 2 < cuts.size()
                             ? Rational(0)  // piece value at its own root
                             : max(f.point_values()[i + 1], Rational(0)));
        }
    }
    return PiecewiseFn(std::move(nb), std::move(np), std::move(nv));
}

inline PiecewiseFn neg_part(const PiecewiseFn& f) { return pos_part(pw_scale(-1, f)); }
inline PiecewiseFn pw_abs(const PiecewiseFn& f) { return pw_add(pos_part(f), neg_part(f)); }

// Best-fit bracketing step functions of f on the partition P: on each open
// partition interval the upper (lower) step takes an outer bound on sup f
// (inf f) with slack at most `width`; at partition points both take f's own
// value.  Pointwise v <= f <= u, and u - v exceeds the true oscillation by at
// most 2*width per interval.
inline std::pair<StepFn, StepFn> best_fit_steps(const PiecewiseFn& f, const Partition& p,
                                                const Rational& width) {
    if (f.is_dirichlet())
        throw unsupported_dirichlet("best-fit steps of the Dirichlet function are undefined");
    if (p.a() < f.a() || p.b() > f.b()) throw out_of_domain("partition outside domain");
    std::vector<Rational> uppers, lowers, values;
    const auto& pts = p.points();
    for (const Rational& x : pts) values.push_back(f.eval(x));
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
        const Rational& lo = pts[i];
        const Rational& hi = pts[i + 1];
        std::vector<Rational> cuts{lo};
        for (const Rational& x : f.breakpoints())
            if (lo < x && x < hi) cuts.push_back(x);
        cuts.push_back(hi);
        std::optional<Rational> mi, ma;
        auto take = [&](const Rational& v) {
            if (!mi || v < *mi) mi = v;
            if (!ma || v > *ma) ma = v;
        };
        for (size_t j = 0; j + 1 < cuts.size(); ++j) {
            Rational mid = (cuts[j] + cuts[j + 1]) / Rational(2);
            const Poly& q = f.piece_containing(mid);
            auto [mm, MM] = poly_range(q, cuts[j], cuts[j + 1], width);
            take(mm);
            take(MM);
            if (j + 2 < cuts.size()) take(f.eval(cuts[j + 1]));  // interior breakpoint of f
        }
        uppers.push_back(*ma);
        lowers.push_back(*mi);
    }
    return {StepFn::on(p, std::move(uppers), values), StepFn::on(p, std::move(lowers), values)};
}

}  // namespace stj
