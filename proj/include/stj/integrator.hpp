#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stj/errors.hpp"
#include "stj/piecewise.hpp"
#include "stj/poly.hpp"
#include "stj/rational.hpp"

namespace stj {

// An interval or singleton for alpha-length queries.
struct IntervalSet {
    enum class Kind { Open, Closed, OpenClosed, ClosedOpen, Singleton };
    Kind kind;
    Rational c, d;

    static IntervalSet open(Rational c, Rational d) { return make(Kind::Open, c, d); }
    static IntervalSet closed(Rational c, Rational d) { return make(Kind::Closed, c, d); }
    static IntervalSet open_closed(Rational c, Rational d) {  // (c, d]
        return make(Kind::OpenClosed, c, d);
    }
    static IntervalSet closed_open(Rational c, Rational d) {  // [c, d)
        return make(Kind::ClosedOpen, c, d);
    }
    static IntervalSet singleton(Rational c) {
        IntervalSet s{Kind::Singleton, c, c};
        return s;
    }

private:
    static IntervalSet make(Kind k, Rational c, Rational d) {
        if (!(c < d)) throw invalid_value("interval needs c < d");
        return IntervalSet{k, std::move(c), std::move(d)};
    }
};

enum class Chirality { Left, Right };

struct SaltusTerm {
    Rational location;
    Rational weight;  // nonzero
};

// One chirality of a reduced saltus series.  Left terms are coefficients of
// H_0(x - x_i) (left continuous), Right terms of H_1(x - y_i) (right
// continuous).  Finitely many terms are stored; `tail_bound` is an l^1 bound
// on whatever was truncated away (0 means the series is represented exactly).
class SaltusPart {
public:
    SaltusPart(Chirality chi, std::vector<SaltusTerm> terms, Rational tail_bound)
        : chi_(chi), terms_(std::move(terms)), tail_(std::move(tail_bound)) {
        if (tail_.sign() < 0) throw invalid_value("saltus tail bound must be nonnegative");
        for (size_t i = 0; i < terms_.size(); ++i) {
            if (terms_[i].weight.is_zero())
                throw invalid_value("saltus weights must be nonzero");
            if (i > 0 && !(terms_[i - 1].location < terms_[i].location))
                throw invalid_value("saltus locations must be strictly increasing");
        }
    }

    static SaltusPart empty(Chirality chi) { return SaltusPart(chi, {}, Rational(0)); }

    Chirality chirality() const { return chi_; }
    const std::vector<SaltusTerm>& terms() const { return terms_; }
    const Rational& tail_bound() const { return tail_; }
    bool trivial() const { return terms_.empty() && tail_.is_zero(); }

    Rational sum_below(const Rational& x) const {  // sum of weights at locations < x
        Rational s(0);
        for (const auto& t : terms_) {
            if (!(t.location < x)) break;
            s += t.weight;
        }
        return s;
    }
    Rational sum_upto(const Rational& x) const {  // locations <= x
        Rational s(0);
        for (const auto& t : terms_) {
            if (t.location > x) break;
            s += t.weight;
        }
        return s;
    }
    Rational value(const Rational& x) const {
        return chi_ == Chirality::Left ? sum_below(x) : sum_upto(x);
    }
    Rational weight_at(const Rational& x) const {
        for (const auto& t : terms_) {
            if (t.location == x) return t.weight;
            if (t.location > x) break;
        }
        return Rational(0);
    }
    Rational total_abs() const {
        Rational s(0);
        for (const auto& t : terms_) s += abs(t.weight);
        return s;
    }

    // Applies `f` to every weight, dropping terms that become zero.
    template <typename F>
    SaltusPart map_weights(F&& f, Rational new_tail) const {
        std::vector<SaltusTerm> out;
        out.reserve(terms_.size());
        for (const auto& t : terms_) {
            Rational w = f(t.weight);
            if (!w.is_zero()) out.push_back({t.location, w});
        }
        return SaltusPart(chi_, std::move(out), std::move(new_tail));
    }

private:
    Chirality chi_;
    std::vector<SaltusTerm> terms_;
    Rational tail_;
};

namespace detail {

// Splits pieces at their critical points so that every piece is monotone on
// its closed interval.  Critical points must be rational; otherwise the piece
// cannot be certified monotone and NonMonotonePiece is raised.
inline PiecewiseFn normalize_monotone(const PiecewiseFn& f) {
    if (f.is_dirichlet()) return f;  // rejected by the Integrator constructor
    std::vector<Rational> splits;
    for (size_t i = 0; i + 1 < f.breakpoints().size(); ++i) {
        const Poly d = f.pieces()[i].derivative();
        if (d.is_constant()) continue;
        InteriorRoots r =
            roots_in_open_interval(d, f.breakpoints()[i], f.breakpoints()[i + 1]);
        if (r.has_irrational)
            throw non_monotone_piece("piece on (" + f.breakpoints()[i].str() + ", " +
                                     f.breakpoints()[i + 1].str() +
                                     ") has an irrational critical point");
        splits.insert(splits.end(), r.rational_roots.begin(), r.rational_roots.end());
    }
    return splits.empty() ? f : f.refined_with(splits);
}

}  // namespace detail

// A bounded-variation integrator alpha = G + S_L + S_R: a continuous part
// with piecewise-monotone polynomial pieces, plus reduced left- and
// right-continuous saltus series.  Everything downstream (alpha-lengths,
// variation, Jordan decomposition, step integrals) is computed exactly from
// this representation.
class Integrator {
public:
    Integrator(PiecewiseFn continuous, SaltusPart left, SaltusPart right)
        : cont_(detail::normalize_monotone(continuous)),
          left_(std::move(left)),
          right_(std::move(right)) {
        if (cont_.is_dirichlet())
            throw invalid_value("integrator continuous part cannot be Dirichlet");
        if (left_.chirality() != Chirality::Left || right_.chirality() != Chirality::Right)
            throw invalid_value("integrator saltus parts have swapped chirality");
        if (!cont_.discontinuities().empty())
            throw invalid_value("integrator continuous part has a jump");
        auto check_locations = [&](const SaltusPart& part) {
            for (const auto& t : part.terms())
                if (t.location < a() || t.location > b())
                    throw out_of_domain("saltus location outside domain");
        };
        check_locations(left_);
        check_locations(right_);
        // Reduced representation: no left term at b, no right term at a.
        if (!left_.weight_at(b()).is_zero())
            throw invalid_value("reduced saltus forbids a left-continuous term at b");
        if (!right_.weight_at(a()).is_zero())
            throw invalid_value("reduced saltus forbids a right-continuous term at a");
    }

    static Integrator constant(const Rational& a, const Rational& b, const Rational& c) {
        return Integrator(PiecewiseFn::constant(a, b, c), SaltusPart::empty(Chirality::Left),
                          SaltusPart::empty(Chirality::Right));
    }

    // Saltus decomposition of a piecewise function: per-breakpoint jumps
    // become reduced saltus terms and what remains is continuous.
    static Integrator from_piecewise(const PiecewiseFn& pw) {
        if (pw.is_dirichlet())
            throw unsupported_dirichlet("the Dirichlet function is not of bounded variation");
        std::vector<SaltusTerm> lterms, rterms;
        for (const Rational& x : pw.breakpoints()) {
            Rational rg = pw.limit_right(x) - pw.eval(x);   // H_0 coefficient
            Rational lg = pw.eval(x) - pw.limit_left(x);    // H_1 coefficient
            if (!rg.is_zero()) lterms.push_back({x, rg});
            if (!lg.is_zero()) rterms.push_back({x, lg});
        }
        SaltusPart left(Chirality::Left, std::move(lterms), Rational(0));
        SaltusPart right(Chirality::Right, std::move(rterms), Rational(0));
        const auto& br = pw.breakpoints();
        std::vector<Poly> pieces;
        std::vector<Rational> values;
        pieces.reserve(pw.pieces().size());
        values.reserve(br.size());
        for (size_t i = 0; i < br.size(); ++i) {
            values.push_back(pw.eval(br[i]) - left.sum_below(br[i]) - right.sum_upto(br[i]));
            if (i + 1 < br.size()) {
                Rational step = left.sum_upto(br[i]) + right.sum_upto(br[i]);
                pieces.push_back(pw.pieces()[i] - Poly::constant(step));
            }
        }
        return Integrator(PiecewiseFn(br, std::move(pieces), std::move(values)),
                          std::move(left), std::move(right));
    }

    const Rational& a() const { return cont_.a(); }
    const Rational& b() const { return cont_.b(); }
    const PiecewiseFn& continuous_part() const { return cont_; }
    const SaltusPart& left_saltus() const { return left_; }
    const SaltusPart& right_saltus() const { return right_; }
    Rational tail_total() const { return left_.tail_bound() + right_.tail_bound(); }

    Rational value(const Rational& x) const {
        return cont_.eval(x) + left_.value(x) + right_.value(x);
    }
    Rational limit_left(const Rational& x) const {
        if (x == a()) return value(x);  // alpha(a-) = alpha(a)
        return cont_.eval(x) + left_.sum_below(x) + right_.sum_below(x);
    }
    Rational limit_right(const Rational& x) const {
        if (x == b()) return value(x);  // alpha(b+) = alpha(b)
        return cont_.eval(x) + left_.sum_upto(x) + right_.sum_upto(x);
    }

    // alpha-length of intervals and singletons via one-sided limits.
    Rational mu(const IntervalSet& s) const {
        if (s.c < a() || s.d > b()) throw out_of_domain("alpha-length outside domain");
        using K = IntervalSet::Kind;
        switch (s.kind) {
            case K::Open: return limit_left(s.d) - limit_right(s.c);
            case K::Closed: return limit_right(s.d) - limit_left(s.c);
            case K::OpenClosed: return limit_right(s.d) - limit_right(s.c);
            case K::ClosedOpen: return limit_left(s.d) - limit_left(s.c);
            case K::Singleton: return limit_right(s.c) - limit_left(s.c);
        }
        throw invalid_value("unreachable");
    }

    // Classical alpha-length alpha(d) - alpha(c), point values only.
    Rational mu_classical(const Rational& c, const Rational& d) const {
        if (c < a() || d > b()) throw out_of_domain("alpha-length outside domain");
        return value(d) - value(c);
    }

    bool increasing() const {
        for (const auto& t : left_.terms())
            if (t.weight.sign() < 0) return false;
        for (const auto& t : right_.terms())
            if (t.weight.sign() < 0) return false;
        const auto& br = cont_.breakpoints();
        for (size_t i = 0; i + 1 < br.size(); ++i)
            if (cont_.pieces()[i].eval(br[i + 1]) < cont_.pieces()[i].eval(br[i])) return false;
        return true;
    }

    // Total variation of the continuous part over [a, b].
    Rational continuous_variation() const {
        Rational v(0);
        const auto& br = cont_.breakpoints();
        for (size_t i = 0; i + 1 < br.size(); ++i)
            v += abs(cont_.pieces()[i].eval(br[i + 1]) - cont_.pieces()[i].eval(br[i]));
        return v;
    }

    // Variation function Valpha(x) = V(alpha, [a, x]) as an integrator.
    Integrator variation() const {
        return Integrator(variation_of_continuous(),
                          left_.map_weights([](const Rational& w) { return abs(w); },
                                            left_.tail_bound()),
                          right_.map_weights([](const Rational& w) { return abs(w); },
                                             right_.tail_bound()));
    }

    // Jordan decomposition: Palpha = (Valpha + alpha - alpha(a)) / 2 and
    // Nalpha = (Valpha - alpha + alpha(a)) / 2, both increasing, with
    // alpha(x) = Palpha(x) - Nalpha(x) + alpha(a) exactly.
    std::pair<Integrator, Integrator> jordan() const {
        PiecewiseFn vg = variation_of_continuous();
        PiecewiseFn g0 = pw_add(cont_, PiecewiseFn::constant(a(), b(), -cont_.eval(a())));
        PiecewiseFn pg = pw_scale(Rational(1, 2), pw_add(vg, g0));
        PiecewiseFn ng = pw_scale(Rational(1, 2), pw_add(vg, pw_scale(-1, g0)));
        auto pos = [](const Rational& w) { return max(w, Rational(0)); };
        auto neg = [](const Rational& w) { return max(-w, Rational(0)); };
        Integrator p(pg, left_.map_weights(pos, left_.tail_bound()),
                     right_.map_weights(pos, right_.tail_bound()));
        Integrator n(ng, left_.map_weights(neg, left_.tail_bound()),
                     right_.map_weights(neg, right_.tail_bound()));
        return {std::move(p), std::move(n)};
    }

    // sup |alpha| + Valpha(b) of the represented (truncated) integrator.
    Rational bv_norm() const {
        Rational sup(0);
        for (const Rational& e : event_points()) {
            sup = max(sup, abs(value(e)));
            sup = max(sup, abs(limit_left(e)));
            sup = max(sup, abs(limit_right(e)));
        }
        return sup + continuous_variation() + left_.total_abs() + right_.total_abs();
    }

    // Left-continuous normalization: same one-sided limits everywhere,
    // interior point values replaced by left limits.  Requires continuity at
    // b, since the value there is pinned by the convention alpha(b+) = alpha(b).
    Integrator normalize_left() const {
        if (!right_.weight_at(b()).is_zero())
            throw endpoint_discontinuity("cannot left-normalize: jump at right endpoint");
        std::map<Rational, Rational> merged;
        for (const auto& t : left_.terms()) merged[t.location] += t.weight;
        for (const auto& t : right_.terms()) merged[t.location] += t.weight;
        std::vector<SaltusTerm> lterms;
        for (auto& [loc, w] : merged)
            if (!w.is_zero()) lterms.push_back({loc, w});
        return Integrator(cont_,
                          SaltusPart(Chirality::Left, std::move(lterms), tail_total()),
                          SaltusPart::empty(Chirality::Right));
    }

    // alpha-mesh of a partition: the largest open-interval alpha-length.
    Rational alpha_mesh(const Partition& p) const {
        if (!increasing()) throw not_increasing("alpha-mesh needs an increasing integrator");
        if (p.a() != a() || p.b() != b())
            throw domain_mismatch("partition does not span the integrator domain");
        Rational m(0);
        const auto& pts = p.points();
        for (size_t i = 0; i + 1 < pts.size(); ++i)
            m = max(m, mu(IntervalSet::open(pts[i], pts[i + 1])));
        return m;
    }

    // The truncated integrator as an explicit piecewise function.
    PiecewiseFn to_piecewise() const {
        std::vector<Rational> events = event_points();
        std::vector<Poly> pieces;
        std::vector<Rational> values;
        values.reserve(events.size());
        for (size_t i = 0; i < events.size(); ++i) {
            values.push_back(value(events[i]));
            if (i + 1 < events.size()) {
                Rational mid = (events[i] + events[i + 1]) / Rational(2);
                Rational step = left_.sum_upto(events[i]) + right_.sum_upto(events[i]);
                pieces.push_back(cont_.piece_containing(mid) + Poly::constant(step));
            }
        }
        return PiecewiseFn(std::move(events), std::move(pieces), std::move(values));
    }

    Integrator restrict(const Rational& c, const Rational& d) const {
        Integrator out = from_piecewise(to_piecewise().restrict(c, d));
        out.left_ = SaltusPart(Chirality::Left, out.left_.terms(), left_.tail_bound());
        out.right_ = SaltusPart(Chirality::Right, out.right_.terms(), right_.tail_bound());
        return out;
    }

    static Integrator linear_combination(const Rational& r1, const Integrator& x,
                                         const Rational& r2, const Integrator& y) {
        if (x.a() != y.a() || x.b() != y.b())
            throw domain_mismatch("combining integrators on different domains");
        PiecewiseFn pw = pw_add(pw_scale(r1, x.to_piecewise()), pw_scale(r2, y.to_piecewise()));
        Integrator out = from_piecewise(pw);
        Rational lt = abs(r1) * x.left_.tail_bound() + abs(r2) * y.left_.tail_bound();
        Rational rt = abs(r1) * x.right_.tail_bound() + abs(r2) * y.right_.tail_bound();
        out.left_ = SaltusPart(Chirality::Left, out.left_.terms(), lt);
        out.right_ = SaltusPart(Chirality::Right, out.right_.terms(), rt);
        return out;
    }

    // Breakpoints of the continuous part plus all saltus locations, sorted.
    std::vector<Rational> event_points() const {
        std::vector<Rational> pts = cont_.breakpoints();
        for (const auto& t : left_.terms()) pts.push_back(t.location);
        for (const auto& t : right_.terms()) pts.push_back(t.location);
        std::sort(pts.begin(), pts.end());
        pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
        return pts;
    }

private:
    PiecewiseFn variation_of_continuous() const {
        const auto& br = cont_.breakpoints();
        std::vector<Rational> nv{Rational(0)};
        std::vector<Poly> np;
        Rational acc(0);
        for (size_t i = 0; i + 1 < br.size(); ++i) {
            const Poly& q = cont_.pieces()[i];
            Rational qu = q.eval(br[i]), qv = q.eval(br[i + 1]);
            if (qv >= qu) {
                np.push_back(q + Poly::constant(acc - qu));
            } else {
                np.push_back(-q + Poly::constant(acc + qu));
            }
            acc += abs(qv - qu);
            nv.push_back(acc);
        }
        return PiecewiseFn(br, std::move(np), std::move(nv));
    }

    PiecewiseFn cont_;
    SaltusPart left_;
    SaltusPart right_;
};

inline Rational bv_norm(const Integrator& x) { return x.bv_norm(); }

inline Rational bv_distance(const Integrator& x, const Integrator& y) {
    return Integrator::linear_combination(1, x, -1, y).bv_norm();
}

}  // namespace stj
