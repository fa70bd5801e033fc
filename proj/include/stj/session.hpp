#pragma once

#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "stj/dsl.hpp"
#include "stj/engine.hpp"
#include "stj/riemann.hpp"

// Turns parsed programs into evaluated output records.  This is the layer the
// CLI and the fixture tests share.

namespace stj::session {

struct Options {
    Rational tol = Rational(1, 1000000);
    int max_refine = 60;
    Method method = Method::Auto;
    std::optional<uint64_t> seed;  // enables sampled-sum demo rows for probes
};

// ---------------------------------------------------------------------------
// Elaboration of expressions onto a query interval

namespace detail {

class Elaborator {
public:
    Elaborator(const std::map<std::string, const dsl::Expr*>& env, Rational a, Rational b)
        : env_(env), a_(std::move(a)), b_(std::move(b)) {}

    PiecewiseFn expr(const dsl::Expr& e) const {
        std::optional<PiecewiseFn> acc;
        for (const auto& [sign, term] : e.terms) {
            PiecewiseFn t = term_fn(term);
            if (sign < 0) t = pw_scale(-1, t);
            acc = acc ? pw_add(*acc, t) : std::move(t);
        }
        return *acc;
    }

private:
    PiecewiseFn term_fn(const dsl::Term& t) const {
        PiecewiseFn f = atom_fn(t.atom);
        if (t.coef) f = pw_scale(*t.coef, f);
        return f;
    }

    PiecewiseFn atom_fn(const dsl::Atom& at) const {
        using K = dsl::Atom::Kind;
        switch (at.kind) {
            case K::Scalar: return PiecewiseFn::constant(a_, b_, at.scalar);
            case K::X: return PiecewiseFn::identity(a_, b_);
            case K::Name: return expr(*env_.at(at.name));
            case K::Heaviside: return PiecewiseFn::heaviside(a_, b_, at.h_c, at.h_at);
            case K::Dirichlet: return PiecewiseFn::dirichlet(a_, b_);
            case K::Piecewise: {
                const dsl::PiecewiseLit& p = *at.pw;
                if (a_ < p.lo || b_ > p.hi)
                    throw out_of_domain("piecewise literal on [" + p.lo.str() + ", " +
                                        p.hi.str() + "] does not cover [" + a_.str() + ", " +
                                        b_.str() + "]");
                PiecewiseFn f(p.breaks, p.pieces, p.values);
                if (a_ != p.lo || b_ != p.hi) f = f.restrict(a_, b_);
                return f;
            }
            case K::Sub: return expr(*at.sub);
            case K::Pow: {
                PiecewiseFn base = atom_fn(*at.base);
                PiecewiseFn powed = pw_pow(base, at.exp);
                if (!powed.is_dirichlet()) {
                    for (const Poly& piece : powed.pieces())
                        if (piece.degree() > config::max_poly_degree())
                            throw degree_overflow("power raises piece degree to " +
                                                  std::to_string(piece.degree()) +
                                                  ", above the cap " +
                                                  std::to_string(config::max_poly_degree()));
                }
                return powed;
            }
        }
        throw invalid_value("unreachable");
    }

    const std::map<std::string, const dsl::Expr*>& env_;
    Rational a_, b_;
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Output records

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

struct OutputRecord {
    std::string query;   // canonical echo
    std::string kind;    // exact | enclosure | report | table
    std::vector<std::pair<std::string, std::string>> values;  // canonical rationals
    std::vector<std::string> notes;
    Rational tail_error;
    int refinements = 0;
    bool converged = true;
    std::optional<Table> table;
    std::optional<Table> demo;  // seeded sample rows, when requested
};

namespace detail {

inline void fill_result(OutputRecord& rec, const IntegralResult& r) {
    rec.kind = r.exact ? "exact" : "enclosure";
    if (r.exact) {
        rec.values.emplace_back("value", r.value().str());
    } else {
        rec.values.emplace_back("lo", r.lo.str());
        rec.values.emplace_back("hi", r.hi.str());
    }
    rec.tail_error = r.tail_error;
    rec.refinements = r.refinements;
    rec.converged = r.converged;
    if (!r.tail_error.is_zero()) {
        auto [glo, ghi] = r.guarantee();
        rec.values.emplace_back("guarantee-lo", glo.str());
        rec.values.emplace_back("guarantee-hi", ghi.str());
    }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Program evaluation

inline std::vector<OutputRecord> run(const dsl::Program& prog, const Options& opt = {}) {
    std::map<std::string, const dsl::Expr*> env;
    for (const auto& [name, e] : prog.bindings) env[name] = &e;
    EngineOptions eopt;
    eopt.tol = opt.tol;
    eopt.max_refine = opt.max_refine;
    eopt.method = opt.method;

    std::vector<OutputRecord> out;
    for (const dsl::Query& q : prog.queries) {
        detail::Elaborator el(env, q.lo, q.hi);
        auto fn_of = [&](const std::string& name) { return el.expr(*env.at(name)); };
        auto integrator_of = [&](const std::string& name) {
            return Integrator::from_piecewise(fn_of(name));
        };
        OutputRecord rec;
        rec.query = dsl::detail::query_str(q);
        switch (q.kind) {
            case dsl::QueryKind::Integrate: {
                detail::fill_result(rec, rds_integrate(fn_of(q.f), integrator_of(q.g), eopt));
                break;
            }
            case dsl::QueryKind::Compare: {
                PiecewiseFn f = fn_of(q.f);
                Integrator alpha = integrator_of(q.g);
                rec.kind = "report";
                rec.values.emplace_back("rds", rds_integrate(f, alpha, eopt).value().str());
                rec.values.emplace_back("ds", ds_integrate(f, alpha, eopt).value().str());
                rec.values.emplace_back("discrepancy", discrepancy(f, alpha).str());
                break;
            }
            case dsl::QueryKind::Parts: {
                PartsResult pr = parts_check(integrator_of(q.f), integrator_of(q.g), eopt);
                rec.kind = "report";
                rec.values.emplace_back("lhs", pr.lhs.value().str());
                rec.values.emplace_back("rhs", pr.rhs.str());
                rec.values.emplace_back("correction", pr.correction_total.str());
                break;
            }
            case dsl::QueryKind::Decompose: {
                Integrator alpha = integrator_of(q.f);
                auto [p, n] = alpha.jordan();
                rec.kind = "report";
                rec.values.emplace_back("alpha(a)", alpha.value(alpha.a()).str());
                rec.values.emplace_back("variation", alpha.variation().value(alpha.b()).str());
                rec.values.emplace_back("P(b)", p.value(p.b()).str());
                rec.values.emplace_back("N(b)", n.value(n.b()).str());
                Table t;
                t.columns = {"part", "location", "weight"};
                for (const auto& term : alpha.left_saltus().terms())
                    t.rows.push_back({"left", term.location.str(), term.weight.str()});
                for (const auto& term : alpha.right_saltus().terms())
                    t.rows.push_back({"right", term.location.str(), term.weight.str()});
                rec.table = std::move(t);
                const auto& br = alpha.continuous_part().breakpoints();
                for (size_t i = 0; i + 1 < br.size(); ++i)
                    rec.notes.push_back("continuous on (" + br[i].str() + ", " + br[i + 1].str() +
                                        "): " + alpha.continuous_part().pieces()[i].str());
                break;
            }
            case dsl::QueryKind::Check: {
                auto [ok, reason] = is_rds_integrable(fn_of(q.f), integrator_of(q.g));
                rec.kind = "report";
                rec.values.emplace_back("integrable", ok ? "true" : "false");
                rec.notes.push_back(reason);
                break;
            }
            case dsl::QueryKind::Sums: {
                PiecewiseFn f = fn_of(q.f);
                Integrator alpha = integrator_of(q.g);
                rec.kind = "table";
                Table t;
                if (q.probe == dsl::ProbeKind::Mrs) {
                    std::vector<Rational> deltas = q.deltas;
                    if (deltas.empty())
                        deltas = {Rational(1, 10), Rational(1, 100), Rational(1, 1000)};
                    t.columns = {"delta", "mesh", "gap"};
                    for (const auto& row : mrs_probe(f, alpha, deltas))
                        t.rows.push_back({row.delta.str(), row.mesh.str(), row.gap.str()});
                } else if (q.probe == dsl::ProbeKind::Rps) {
                    std::vector<Rational> base = q.base;
                    base.push_back(q.lo);
                    base.push_back(q.hi);
                    for (const Rational& x : alpha.event_points())
                        if (!alpha.mu(IntervalSet::singleton(x)).is_zero()) base.push_back(x);
                    std::sort(base.begin(), base.end());
                    base.erase(std::unique(base.begin(), base.end()), base.end());
                    int rounds = q.rounds.value_or(8);
                    t.columns = {"round", "gap"};
                    for (const auto& row : rps_probe(f, alpha, Partition(base), rounds))
                        t.rows.push_back({std::to_string(row.round), row.gap.str()});
                } else {
                    std::vector<Rational> deltas = q.deltas;
                    if (deltas.empty())
                        deltas = {Rational(1, 2), Rational(1, 4), Rational(1, 8), Rational(1, 16)};
                    t.columns = {"target", "achieved", "gap"};
                    for (const auto& row : rrs_probe(f, alpha, deltas))
                        t.rows.push_back({row.target.str(), row.achieved.str(), row.gap.str()});
                }
                rec.table = std::move(t);
                // Optional deterministic demo: sampled Riemann sums under the
                // given seed, all inside the probe's extreme bounds.
                if (opt.seed) {
                    std::mt19937_64 rng(*opt.seed);
                    Partition p =
                        Partition::uniform(q.lo, q.hi, 8).refined_with(alpha.event_points());
                    const auto& pts = p.points();
                    Table demo;
                    demo.columns = {"sample", "riemann-sum"};
                    for (int k = 0; k < 5; ++k) {
                        std::vector<Rational> tags;
                        for (size_t i = 0; i + 1 < pts.size(); ++i) {
                            long long u = static_cast<long long>(rng() % 1048577ULL);
                            tags.push_back(pts[i] +
                                           (pts[i + 1] - pts[i]) * Rational(u, 1048576));
                        }
                        Rational v = rds_step_integral(
                            riemann_step(f, TaggedPartition(p, std::move(tags))), alpha);
                        demo.rows.push_back({std::to_string(k), v.str()});
                    }
                    rec.demo = std::move(demo);
                    rec.notes.push_back("sampled riemann sums use seed " +
                                        std::to_string(*opt.seed));
                }
                break;
            }
        }
        out.push_back(std::move(rec));
    }
    return out;
}

}  // namespace stj::session
