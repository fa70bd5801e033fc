#pragma once

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

#include "stj/engine.hpp"
#include "stj/errors.hpp"
#include "stj/integrator.hpp"
#include "stj/piecewise.hpp"

namespace stj {

// Partition with one sample point per interval; samples may sit anywhere in
// the closed interval, endpoints included.
struct TaggedPartition {
    Partition partition;
    std::vector<Rational> samples;

    TaggedPartition(Partition p, std::vector<Rational> s)
        : partition(std::move(p)), samples(std::move(s)) {
        if (samples.size() != partition.intervals())
            throw invalid_value("one sample per partition interval required");
        const auto& pts = partition.points();
        for (size_t i = 0; i < samples.size(); ++i)
            if (samples[i] < pts[i] || samples[i] > pts[i + 1])
                throw invalid_value("sample outside its closed interval");
    }

    static TaggedPartition midpoints(const Partition& p) {
        std::vector<Rational> s;
        const auto& pts = p.points();
        for (size_t i = 0; i + 1 < pts.size(); ++i)
            s.push_back((pts[i] + pts[i + 1]) / Rational(2));
        return TaggedPartition(p, std::move(s));
    }
};

// Riemann step function of f: the sampled value on each open interval, f's
// own value at the partition points.
inline StepFn riemann_step(const PiecewiseFn& f, const TaggedPartition& tp) {
    if (f.is_dirichlet())
        throw unsupported_dirichlet("Riemann step functions need pointwise sampling of f");
    std::vector<Rational> consts, values;
    for (const Rational& s : tp.samples) consts.push_back(f.eval(s));
    for (const Rational& x : tp.partition.points()) values.push_back(f.eval(x));
    return StepFn::on(tp.partition, std::move(consts), std::move(values));
}

// Outer bounds on the RDS step integral of riemann_step(f, *) over all tagged
// choices on P: per interval the sample value ranges over f's closed-interval
// range; the singleton terms are fixed by the partition.
inline std::pair<Rational, Rational> sample_extremes(const PiecewiseFn& f,
                                                     const Integrator& alpha, const Partition& p,
                                                     const Rational& width) {
    if (!alpha.increasing())
        throw not_increasing("sample extremes need an increasing integrator");
    if (f.is_dirichlet()) throw unsupported_dirichlet("sample extremes need pointwise f");
    if (p.a() != alpha.a() || p.b() != alpha.b())
        throw domain_mismatch("partition does not span the integrator domain");
    const auto& pts = p.points();
    Rational fixed(0);
    for (const Rational& x : pts) fixed += f.eval(x) * alpha.mu(IntervalSet::singleton(x));
    Rational lo = fixed, hi = fixed;
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
        Rational mass = alpha.mu(IntervalSet::open(pts[i], pts[i + 1]));
        // Closed-interval range of f: piece ranges plus every point value of
        // f in [x_i, x_{i+1}] (samples may sit at breakpoints or endpoints).
        std::vector<Rational> cuts{pts[i]};
        for (const Rational& x : f.breakpoints())
            if (pts[i] < x && x < pts[i + 1]) cuts.push_back(x);
        cuts.push_back(pts[i + 1]);
        Rational mi = f.eval(pts[i]), ma = mi;
        auto take = [&](const Rational& v) {
            if (v < mi) mi = v;
            if (v > ma) ma = v;
        };
        take(f.eval(pts[i + 1]));
        for (size_t j = 0; j + 1 < cuts.size(); ++j) {
            Rational mid = (cuts[j] + cuts[j + 1]) / Rational(2);
            auto [mm, MM] = poly_range(f.piece_containing(mid), cuts[j], cuts[j + 1], width);
            take(mm);
            take(MM);
            if (j + 2 < cuts.size()) take(f.eval(cuts[j + 1]));
        }
        lo += mi * mass;
        hi += ma * mass;
    }
    return {lo, hi};
}

struct MrsRow {
    Rational delta;  // requested mesh
    Rational mesh;   // achieved mesh after jitter
    Rational gap;    // sample-extremes spread
};

// Mesh-convergence probe for the modified Riemann-Stieltjes integral.  For
// each delta it builds a near-uniform partition that deliberately avoids the
// jump points of alpha (jitter of delta/3 off each jump), then reports the
// spread of possible Riemann step integrals.  A spread bounded away from 0 as
// delta -> 0 witnesses mRS non-integrability.
inline std::vector<MrsRow> mrs_probe(const PiecewiseFn& f, const Integrator& alpha,
                                     const std::vector<Rational>& deltas) {
    if (!alpha.increasing()) throw not_increasing("mrs probe needs an increasing integrator");
    std::vector<MrsRow> out;
    for (const Rational& delta : deltas) {
        if (delta.sign() <= 0) throw invalid_value("mesh target must be positive");
        Rational len = alpha.b() - alpha.a();
        Integer n = ((len / delta) - Rational(1, 1000000000)).floor() + 1;
        if (n < 1) n = 1;
        auto is_jump = [&](const Rational& x) {
            return !alpha.mu(IntervalSet::singleton(x)).is_zero();
        };
        std::vector<Rational> pts{alpha.a()};
        for (Integer k = 1; k < n; ++k) {
            Rational x = alpha.a() + len * Rational(k) / Rational(n);
            if (is_jump(x)) {
                bool placed = false;
                for (const Rational& jit :
                     {delta / Rational(3), -delta / Rational(3), delta / Rational(6),
                      -delta / Rational(6)}) {
                    Rational cand = x + jit;
                    if (cand > pts.back() && cand < alpha.b() && !is_jump(cand)) {
                        pts.push_back(cand);
                        placed = true;
                        break;
                    }
                }
                if (!placed) throw mesh_unachievable("cannot jitter off jump at " + x.str());
            } else {
                pts.push_back(x);
            }
        }
        pts.push_back(alpha.b());
        Partition p(std::move(pts));
        Rational mesh(0);
        for (size_t i = 0; i + 1 < p.points().size(); ++i)
            mesh = max(mesh, p.points()[i + 1] - p.points()[i]);
        auto [lo, hi] = sample_extremes(f, alpha, p, delta / Rational(1024));
        out.push_back({delta, mesh, hi - lo});
    }
    return out;
}

struct RpsRow {
    int round;
    Rational gap;
};

// Refinement-convergence probe for the Ross-Pollard integral: starting from a
// base partition that contains every jump of alpha, bisect all intervals each
// round and report the spread.  The spread shrinks to 0 exactly for
// RDS-integrable integrands.
inline std::vector<RpsRow> rps_probe(const PiecewiseFn& f, const Integrator& alpha,
                                     const Partition& base, int rounds) {
    if (!alpha.increasing()) throw not_increasing("rps probe needs an increasing integrator");
    for (const Rational& x : alpha.event_points())
        if (!alpha.mu(IntervalSet::singleton(x)).is_zero() && !base.contains_point(x))
            throw invalid_value("base partition must contain the jump at " + x.str());
    std::vector<RpsRow> out;
    Partition p = base;
    for (int r = 0; r <= rounds; ++r) {
        auto [lo, hi] = sample_extremes(f, alpha, p, Rational(1, 1024) / Rational(2).pow(r));
        out.push_back({r, hi - lo});
        p = p.bisected();
    }
    return out;
}

struct RrsRow {
    Rational target;    // alpha-mesh target
    Rational achieved;  // alpha-mesh of the built partition
    Rational gap;
};

// Alpha-mesh probe for the Ross-Riemann integral: jump locations of mass at
// least delta are forced into the partition, then intervals are split until
// the alpha-mesh condition holds.
inline std::vector<RrsRow> rrs_probe(const PiecewiseFn& f, const Integrator& alpha,
                                     const std::vector<Rational>& deltas) {
    if (!alpha.increasing()) throw not_increasing("rrs probe needs an increasing integrator");
    std::vector<RrsRow> out;
    for (const Rational& delta : deltas) {
        if (delta.sign() <= 0) throw invalid_value("alpha-mesh target must be positive");
        std::vector<Rational> pts{alpha.a(), alpha.b()};
        for (const Rational& x : alpha.event_points())
            if (alpha.mu(IntervalSet::singleton(x)) >= delta) pts.push_back(x);
        std::sort(pts.begin(), pts.end());
        pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
        Partition p(std::move(pts));
        for (int guard = 0;; ++guard) {
            if (guard > 4096) throw mesh_unachievable("alpha-mesh splitting did not settle");
            std::vector<Rational> splits;
            const auto& pp = p.points();
            for (size_t i = 0; i + 1 < pp.size(); ++i)
                if (alpha.mu(IntervalSet::open(pp[i], pp[i + 1])) > delta)
                    splits.push_back((pp[i] + pp[i + 1]) / Rational(2));
            if (splits.empty()) break;
            p = p.refined_with(splits);
        }
        auto [lo, hi] = sample_extremes(f, alpha, p, delta / Rational(1024));
        out.push_back({delta, alpha.alpha_mesh(p), hi - lo});
    }
    return out;
}

}  // namespace stj
