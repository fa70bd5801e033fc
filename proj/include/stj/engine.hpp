#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stj/errors.hpp"
#include "stj/integrator.hpp"
#include "stj/piecewise.hpp"
#include "stj/poly.hpp"
#include "stj/rational.hpp"

namespace stj {

// Result of an integral computation.  Exact results have lo == hi.  Either
// way the truncated saltus tail contributes an extra error budget: the true
// integral lies in [lo - tail_error * integrand_bound,
//                   hi + tail_error * integrand_bound].
struct IntegralResult {
    bool exact = true;
    Rational lo, hi;
    Rational tail_error;       // l^1 mass of omitted saltus terms
    Rational integrand_bound;  // M with |f| <= M on [a, b]
    int refinements = 0;       // bisection rounds (0 on the exact path)
    bool converged = true;     // false when the tolerance was not reached
    std::optional<Partition> final_partition;  // enclosure path, increasing case

    static IntegralResult exact_value(Rational v, Rational tail, Rational bound) {
        IntegralResult r;
        r.lo = v;
        r.hi = std::move(v);
        r.tail_error = std::move(tail);
        r.integrand_bound = std::move(bound);
        return r;
    }

    const Rational& value() const {
        if (!exact) throw invalid_value("enclosure result has no single exact value");
        return lo;
    }
    Rational width() const { return hi - lo; }
    bool contains(const Rational& v) const { return lo <= v && v <= hi; }
    std::pair<Rational, Rational> guarantee() const {
        Rational slack = tail_error * integrand_bound;
        return {lo - slack, hi + slack};
    }
};

enum class Method { Auto, Enclosure };

struct EngineOptions {
    Rational tol = Rational(1, 1000000);
    int max_refine = 60;
    Method method = Method::Auto;
};

// ----------------------------------------------------------------------------
// Step integrals

// RDS integral of a step function: point terms against singleton alpha-lengths
// plus interval constants against open-interval alpha-lengths.  The working
// partition is refined with alpha's jump locations so no singleton mass is
// ever straddled.
inline Rational rds_step_integral(const StepFn& s, const Integrator& alpha) {
    if (s.a() != alpha.a() || s.b() != alpha.b())
        throw domain_mismatch("step function and integrator domains differ");
    PiecewiseFn r = s.fn().refined_with(alpha.event_points());
    Rational acc(0);
    const auto& br = r.breakpoints();
    for (size_t i = 0; i < br.size(); ++i) {
        acc += r.eval(br[i]) * alpha.mu(IntervalSet::singleton(br[i]));
        if (i + 1 < br.size())
            acc += r.pieces()[i].coeff(0) * alpha.mu(IntervalSet::open(br[i], br[i + 1]));
    }
    return acc;
}

// Classical DS step integral: interval constants against point-value
// alpha-lengths.  Point values of the step function do not contribute.
inline Rational ds_step_integral(const StepFn& s, const Integrator& alpha) {
    if (s.a() != alpha.a() || s.b() != alpha.b())
        throw domain_mismatch("step function and integrator domains differ");
    Rational acc(0);
    const auto& br = s.fn().breakpoints();
    for (size_t i = 0; i + 1 < br.size(); ++i)
        acc += s.fn().pieces()[i].coeff(0) * alpha.mu_classical(br[i], br[i + 1]);
    return acc;
}

// Ross upper/lower sums on a partition: RDS step integrals of the best-fit
// bracketing steps.  Returns (U, L) with U >= L for increasing alpha.
inline std::pair<Rational, Rational> ross_sums(const PiecewiseFn& f, const Integrator& alpha,
                                               const Partition& p, const Rational& width) {
    if (!alpha.increasing()) throw not_increasing("ross sums need an increasing integrator");
    auto [u, v] = best_fit_steps(f, p, width);
    return {rds_step_integral(u, alpha), rds_step_integral(v, alpha)};
}

// ----------------------------------------------------------------------------
// Exact-path helpers

namespace detail {

// Integral of f against a continuous piecewise-C^1 integrator G, computed as
// sum of exact antiderivatives of f * G' over the common piece refinement.
// Point values of f contribute nothing against continuous G.
inline Rational continuous_contribution(const PiecewiseFn& f, const PiecewiseFn& g) {
    std::vector<Rational> cuts = f.breakpoints();
    cuts.insert(cuts.end(), g.breakpoints().begin(), g.breakpoints().end());
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    Rational acc(0);
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        Rational mid = (cuts[i] + cuts[i + 1]) / Rational(2);
        const Poly& qf = f.piece_containing(mid);
        const Poly& qg = g.piece_containing(mid);
        Poly anti = (qf * qg.derivative()).antiderivative();
        acc += anti.eval(cuts[i + 1]) - anti.eval(cuts[i]);
    }
    return acc;
}

// Cheap sound bound on sup |f|: per-piece l^1 coefficient bounds plus the
// point values.
inline Rational integrand_bound(const PiecewiseFn& f) {
    if (f.is_dirichlet()) return Rational(1);
    Rational bound(0);
    const auto& br = f.breakpoints();
    for (size_t i = 0; i + 1 < br.size(); ++i) {
        Rational radius = max(abs(br[i]), abs(br[i + 1]));
        Rational s(0), rp(1);
        for (const Rational& c : f.pieces()[i].coeffs()) {
            s += abs(c) * rp;
            rp *= radius;
        }
        bound = max(bound, s);
    }
    for (const Rational& v : f.point_values()) bound = max(bound, abs(v));
    return bound;
}

inline Rational saltus_rds(const PiecewiseFn& f, const SaltusPart& part) {
    Rational acc(0);
    for (const auto& t : part.terms()) acc += t.weight * f.eval(t.location);
    return acc;
}

inline Rational saltus_ds(const PiecewiseFn& f, const SaltusPart& part) {
    Rational acc(0);
    for (const auto& t : part.terms())
        acc += t.weight * (part.chirality() == Chirality::Left ? f.limit_right(t.location)
                                                               : f.limit_left(t.location));
    return acc;
}

struct Enclosure {
    Rational lo, hi;
    int rounds = 0;
    bool converged = true;
    std::optional<Partition> partition;
};

// Adaptive bracketing loop for increasing gamma.  Starts from a partition
// holding every breakpoint of f and every event point of gamma; bisects the
// interval with the largest gap contribution (leftmost tie), with a full
// uniform bisection every 8th round.
template <typename StepIntegral>
Enclosure enclose_increasing(const PiecewiseFn& f, const Integrator& gamma, const Rational& tol,
                             int max_refine, StepIntegral&& step_integral) {
    Rational mu_total = gamma.mu(IntervalSet::closed(gamma.a(), gamma.b()));
    if (mu_total.is_zero()) {
        Enclosure e;
        e.lo = e.hi = Rational(0);
        e.partition = Partition({gamma.a(), gamma.b()});
        return e;
    }
    std::vector<Rational> pts{gamma.a(), gamma.b()};
    for (const Rational& x : f.breakpoints()) pts.push_back(x);
    for (const Rational& x : gamma.event_points()) pts.push_back(x);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    Partition p(std::move(pts));

    Rational width = tol / (Rational(8) * max(mu_total, Rational(1)));
    Enclosure e;
    for (int round = 0;; ++round) {
        auto [u, v] = best_fit_steps(f, p, width);
        e.lo = step_integral(v, gamma);
        e.hi = step_integral(u, gamma);
        e.rounds = round;
        if (e.hi - e.lo <= tol) {
            e.partition = p;
            return e;
        }
        if (round >= max_refine) {
            e.converged = false;
            e.partition = p;
            return e;
        }
        if ((round + 1) % 8 == 0) {
            p = p.bisected();
            continue;
        }
        // Greedy round: bisect every interval whose gap contribution reaches
        // half the largest one (deterministic; a single leftmost maximizer
        // when the gap is concentrated).
        const auto& pp = p.points();
        std::vector<Rational> gaps(pp.size() - 1);
        Rational best_gap(0);
        for (size_t i = 0; i + 1 < pp.size(); ++i) {
            gaps[i] = (u.fn().pieces()[i].coeff(0) - v.fn().pieces()[i].coeff(0)) *
                      gamma.mu(IntervalSet::open(pp[i], pp[i + 1]));
            best_gap = max(best_gap, gaps[i]);
        }
        std::vector<Rational> splits;
        for (size_t i = 0; i + 1 < pp.size(); ++i)
            if (Rational(2) * gaps[i] >= best_gap && gaps[i].sign() > 0)
                splits.push_back((pp[i] + pp[i + 1]) / Rational(2));
        if (splits.empty()) splits.push_back((pp[0] + pp[1]) / Rational(2));
        p = p.refined_with(splits);
    }
}

// An increasing integrator with no mass at all contributes exactly zero.
inline bool integrator_trivial(const Integrator& g) {
    return g.mu(IntervalSet::closed(g.a(), g.b())).is_zero() &&
           g.left_saltus().terms().empty() && g.right_saltus().terms().empty();
}

template <typename StepIntegral>
IntegralResult enclose_via_jordan(const PiecewiseFn& f, const Integrator& alpha,
                                  const EngineOptions& opt, StepIntegral&& step_integral) {
    if (opt.tol.sign() <= 0) throw invalid_value("enclosure tolerance must be positive");
    auto [pa, na] = alpha.jordan();
    bool n_trivial = integrator_trivial(na);
    bool p_trivial = integrator_trivial(pa);
    Rational budget = (n_trivial || p_trivial) ? opt.tol : opt.tol / Rational(2);
    Enclosure ep, en;
    ep.lo = ep.hi = en.lo = en.hi = Rational(0);
    if (!p_trivial) ep = enclose_increasing(f, pa, budget, opt.max_refine, step_integral);
    if (!n_trivial) en = enclose_increasing(f, na, budget, opt.max_refine, step_integral);
    IntegralResult r;
    r.exact = false;
    r.lo = ep.lo - en.hi;
    r.hi = ep.hi - en.lo;
    r.refinements = ep.rounds + en.rounds;
    r.converged = ep.converged && en.converged;
    r.tail_error = alpha.tail_total();
    r.integrand_bound = integrand_bound(f);
    if (n_trivial) r.final_partition = ep.partition;
    return r;
}

}  // namespace detail

// ----------------------------------------------------------------------------
// The RDS integral

// Exact path whenever the integrand is piecewise polynomial: decompose alpha
// into continuous part plus saltus series; the continuous contribution is an
// exact antiderivative sum and each saltus term contributes weight * f(x_i).
// The enclosure path brackets f between best-fit step functions over the
// Jordan decomposition of alpha and bisects until U - L <= tol.
inline IntegralResult rds_integrate(const PiecewiseFn& f, const Integrator& alpha,
                                    const EngineOptions& opt = {}) {
    if (f.a() != alpha.a() || f.b() != alpha.b())
        throw domain_mismatch("integrand and integrator domains differ");
    if (f.is_dirichlet()) {
        if (!alpha.continuous_variation().is_zero())
            throw unsupported_dirichlet(
                "Dirichlet integrand needs a pure-saltus integrator; G-measure of [" +
                alpha.a().str() + ", " + alpha.b().str() + "] is " +
                alpha.continuous_variation().str());
        Rational v(0);
        for (const auto& t : alpha.left_saltus().terms()) v += t.weight;   // D = 1 at rationals
        for (const auto& t : alpha.right_saltus().terms()) v += t.weight;
        return IntegralResult::exact_value(v, alpha.tail_total(), Rational(1));
    }
    if (opt.method == Method::Enclosure) {
        return detail::enclose_via_jordan(f, alpha, opt,
                                          [](const StepFn& s, const Integrator& g) {
                                              return rds_step_integral(s, g);
                                          });
    }
    Rational v = detail::continuous_contribution(f, alpha.continuous_part()) +
                 detail::saltus_rds(f, alpha.left_saltus()) +
                 detail::saltus_rds(f, alpha.right_saltus());
    return IntegralResult::exact_value(v, alpha.tail_total(), detail::integrand_bound(f));
}

// Interior DS integral.  The continuous-part path is identical to the RDS
// one; saltus terms weigh one-sided limits of f instead of its point values.
inline IntegralResult ds_integrate(const PiecewiseFn& f, const Integrator& alpha,
                                   const EngineOptions& opt = {}) {
    if (f.is_dirichlet())
        throw unsupported_dirichlet("the DS integral does not handle the Dirichlet function");
    if (f.a() != alpha.a() || f.b() != alpha.b())
        throw domain_mismatch("integrand and integrator domains differ");
    if (opt.method == Method::Enclosure) {
        return detail::enclose_via_jordan(f, alpha, opt,
                                          [](const StepFn& s, const Integrator& g) {
                                              return ds_step_integral(s, g);
                                          });
    }
    Rational v = detail::continuous_contribution(f, alpha.continuous_part()) +
                 detail::saltus_ds(f, alpha.left_saltus()) +
                 detail::saltus_ds(f, alpha.right_saltus());
    return IntegralResult::exact_value(v, alpha.tail_total(), detail::integrand_bound(f));
}

// RDS minus DS: sum of a_i (f(x_i) - f(x_i+)) over left-continuous terms plus
// b_i (f(y_i) - f(y_i-)) over right-continuous ones.  Signed weights make
// this the Jordan-decomposed difference in one pass.
inline Rational discrepancy(const PiecewiseFn& f, const Integrator& alpha) {
    if (f.is_dirichlet()) throw unsupported_dirichlet("discrepancy needs one-sided limits of f");
    if (f.a() != alpha.a() || f.b() != alpha.b())
        throw domain_mismatch("integrand and integrator domains differ");
    Rational acc(0);
    for (const auto& t : alpha.left_saltus().terms())
        acc += t.weight * (f.eval(t.location) - f.limit_right(t.location));
    for (const auto& t : alpha.right_saltus().terms())
        acc += t.weight * (f.eval(t.location) - f.limit_left(t.location));
    return acc;
}

// Jump-interaction term of integration by parts at t.
inline Rational parts_correction(const Integrator& alpha, const Integrator& beta,
                                 const Rational& t) {
    if (t < alpha.a() || t > alpha.b() || t < beta.a() || t > beta.b())
        throw out_of_domain("correction point outside domain");
    Rational am = (alpha.limit_right(t) + alpha.limit_left(t)) / Rational(2);
    Rational bm = (beta.limit_right(t) + beta.limit_left(t)) / Rational(2);
    return (alpha.value(t) - am) * beta.mu(IntervalSet::singleton(t)) +
           (beta.value(t) - bm) * alpha.mu(IntervalSet::singleton(t));
}

struct PartsResult {
    IntegralResult lhs;          // integral of alpha d beta plus beta d alpha
    Rational rhs;                // boundary product plus jump corrections
    Rational correction_total;   // the jump corrections alone
};

// Integration by parts with jump correction:
//   I(alpha d beta) + I(beta d alpha)
//     = alpha(b) beta(b) - alpha(a) beta(a) + sum A(t) over common jumps.
inline PartsResult parts_check(const Integrator& alpha, const Integrator& beta,
                               const EngineOptions& opt = {}) {
    if (alpha.a() != beta.a() || alpha.b() != beta.b())
        throw domain_mismatch("integrators on different domains");
    if (!alpha.tail_total().is_zero() || !beta.tail_total().is_zero())
        throw inexact_saltus("integration by parts needs exactly represented saltus series");
    PiecewiseFn fa = alpha.to_piecewise();
    PiecewiseFn fb = beta.to_piecewise();
    IntegralResult l1 = rds_integrate(fa, beta, opt);
    IntegralResult l2 = rds_integrate(fb, alpha, opt);
    PartsResult out;
    out.lhs = IntegralResult::exact_value(l1.value() + l2.value(), Rational(0),
                                          l1.integrand_bound + l2.integrand_bound);
    std::vector<Rational> common;
    for (const auto& t : alpha.left_saltus().terms()) common.push_back(t.location);
    for (const auto& t : alpha.right_saltus().terms()) common.push_back(t.location);
    std::sort(common.begin(), common.end());
    common.erase(std::unique(common.begin(), common.end()), common.end());
    Rational corr(0);
    for (const Rational& t : common) {
        bool beta_jumps = !beta.left_saltus().weight_at(t).is_zero() ||
                          !beta.right_saltus().weight_at(t).is_zero();
        if (beta_jumps) corr += parts_correction(alpha, beta, t);
    }
    out.correction_total = corr;
    out.rhs = alpha.value(alpha.b()) * beta.value(beta.b()) -
              alpha.value(alpha.a()) * beta.value(beta.a()) + corr;
    return out;
}

// RDS-Lebesgue criterion specialized to this library's data: every piecewise
// integrand is integrable (finite discontinuity set, each point of zero
// measure under the continuous parts); the Dirichlet function is integrable
// exactly when the integrator has no continuous mass.
inline std::pair<bool, std::string> is_rds_integrable(const PiecewiseFn& f,
                                                      const Integrator& alpha) {
    if (!f.is_dirichlet())
        return {true,
                "piecewise integrand: finitely many discontinuities, each of zero measure "
                "under the continuous parts of the decomposition"};
    Rational g = alpha.continuous_variation();
    if (g.is_zero())
        return {true, "pure-saltus integrator: Dirichlet integral is the sum of the weights"};
    return {false, "G-measure of [" + alpha.a().str() + ", " + alpha.b().str() + "] is " +
                       g.str()};
}

// Integrates every member of a family; plumbing for convergence experiments.
inline std::vector<IntegralResult> convergence_table(const std::vector<PiecewiseFn>& fs,
                                                     const Integrator& alpha,
                                                     const EngineOptions& opt = {}) {
    std::vector<IntegralResult> out;
    out.reserve(fs.size());
    for (const auto& f : fs) out.push_back(rds_integrate(f, alpha, opt));
    return out;
}

struct IntegratorSequenceRow {
    IntegralResult result;
    std::optional<Rational> distance_to_limit;
};

inline std::vector<IntegratorSequenceRow> integrator_sequence_table(
    const PiecewiseFn& f, const std::vector<Integrator>& alphas,
    const std::optional<Integrator>& limit = std::nullopt, const EngineOptions& opt = {}) {
    std::vector<IntegratorSequenceRow> out;
    out.reserve(alphas.size());
    for (const auto& a : alphas) {
        IntegratorSequenceRow row{rds_integrate(f, a, opt), std::nullopt};
        if (limit) row.distance_to_limit = bv_distance(a, *limit);
        out.push_back(std::move(row));
    }
    return out;
}

}  // namespace stj
