#include <catch2/catch_amalgamated.hpp>

#include "random_gen.hpp"
#include "stj/riemann.hpp"

using namespace stj;

namespace {

Integrator h1_at_zero() {
    return Integrator::from_piecewise(
        PiecewiseFn::heaviside(Rational(-1), Rational(1), Rational(1), Rational(0)));
}

PiecewiseFn h1_fn() {
    return PiecewiseFn::heaviside(Rational(-1), Rational(1), Rational(1), Rational(0));
}

}  // namespace

TEST_CASE("riemann step function") {
    PiecewiseFn f = PiecewiseFn::identity(Rational(0), Rational(1));
    TaggedPartition tp(Partition({Rational(0), Rational(1)}), {Rational(1, 2)});
    StepFn r = riemann_step(f, tp);
    CHECK(r.eval(Rational(1, 4)) == Rational(1, 2));
    CHECK(r.eval(Rational(0)) == Rational(0));
    CHECK(r.eval(Rational(1)) == Rational(1));

    // step sampled at midpoints reproduces its interval constants
    StepFn s = StepFn::on(Partition({Rational(0), Rational(1, 2), Rational(1)}),
                          {Rational(3), Rational(-2)}, {Rational(0), Rational(9), Rational(1)});
    StepFn rs = riemann_step(s.fn(), TaggedPartition::midpoints(
                                         Partition({Rational(0), Rational(1, 2), Rational(1)})));
    CHECK(rs.eval(Rational(1, 4)) == Rational(3));
    CHECK(rs.eval(Rational(3, 4)) == Rational(-2));

    PiecewiseFn h = h1_fn();
    TaggedPartition tph(Partition({Rational(-1), Rational(1)}), {Rational(-1, 2)});
    CHECK(riemann_step(h, tph).eval(Rational(1, 2)) == Rational(0));

    // samples may sit at interval endpoints
    TaggedPartition ends(Partition({Rational(0), Rational(1)}), {Rational(1)});
    CHECK(riemann_step(f, ends).eval(Rational(1, 2)) == Rational(1));
    CHECK_THROWS_AS(TaggedPartition(Partition({Rational(0), Rational(1)}), {Rational(2)}),
                    stj::invalid_value);
}

TEST_CASE("sample extremes bound all tagged choices") {
    PiecewiseFn h = h1_fn();
    Integrator alpha = h1_at_zero();
    auto [lo, hi] = sample_extremes(h, alpha, Partition({Rational(-1), Rational(1)}),
                                    Rational(0));
    CHECK(lo == Rational(0));
    CHECK(hi == Rational(1));

    auto [lo0, hi0] =
        sample_extremes(h, alpha, Partition({Rational(-1), Rational(0), Rational(1)}),
                        Rational(0));
    CHECK(lo0 == Rational(1));
    CHECK(hi0 == Rational(1));

    stj::testgen::Gen gen(41);
    for (int t = 0; t < 30; ++t) {
        PiecewiseFn f = gen.pw_linear(Rational(-1), Rational(1), 3);
        Integrator a = gen.integrator(Rational(-1), Rational(1), 3, true);
        Partition p = Partition(gen.breakpoints(Rational(-1), Rational(1), 4));
        auto [l, u] = sample_extremes(f, a, p, Rational(1, 1000));
        for (int k = 0; k < 15; ++k) {
            // random tags, endpoints allowed
            std::vector<Rational> tags;
            const auto& pts = p.points();
            for (size_t i = 0; i + 1 < pts.size(); ++i) {
                long long pick = gen.ri(0, 4);
                if (pick == 0) tags.push_back(pts[i]);
                else if (pick == 1) tags.push_back(pts[i + 1]);
                else tags.push_back(gen.point_in(pts[i], pts[i + 1]));
            }
            Rational v = rds_step_integral(riemann_step(f, TaggedPartition(p, tags)), a);
            CHECK(l <= v);
            CHECK(v <= u);
        }
    }
}

TEST_CASE("riemann steps stay inside the best-fit bracket") {
    stj::testgen::Gen gen(42);
    for (int t = 0; t < 30; ++t) {
        PiecewiseFn f = gen.pw_linear(Rational(0), Rational(1), 3);
        Partition p = Partition(gen.breakpoints(Rational(0), Rational(1), 4));
        auto [u, v] = best_fit_steps(f, p, Rational(1, 1000));
        std::vector<Rational> tags;
        const auto& pts = p.points();
        for (size_t i = 0; i + 1 < pts.size(); ++i) tags.push_back(gen.point_in(pts[i], pts[i + 1]));
        StepFn r = riemann_step(f, TaggedPartition(p, tags));
        for (int k = 0; k < 40; ++k) {
            Rational x = gen.point_in(Rational(0), Rational(1));
            CHECK(v.eval(x) <= r.eval(x));
            CHECK(r.eval(x) <= u.eval(x));
        }
    }
}

TEST_CASE("mrs probe reproduces the counterexample") {
    PiecewiseFn h = h1_fn();
    Integrator alpha = h1_at_zero();
    auto rows = mrs_probe(h, alpha, {Rational(1, 10), Rational(1, 100), Rational(1, 1000)});
    REQUIRE(rows.size() == 3);
    for (const auto& row : rows) CHECK(row.gap == Rational(1));
}

TEST_CASE("mrs probe gap shrinks for continuous data") {
    PiecewiseFn f = PiecewiseFn::identity(Rational(0), Rational(1));
    Integrator x = Integrator::from_piecewise(PiecewiseFn::identity(Rational(0), Rational(1)));
    auto rows = mrs_probe(f, x, {Rational(1, 10), Rational(1, 100)});
    CHECK(rows[0].gap <= Rational(1, 10));
    CHECK(rows[1].gap <= Rational(1, 100));
    CHECK(rows[1].gap < rows[0].gap);

    // step integrand against continuous alpha: gap shrinks linearly
    PiecewiseFn s = PiecewiseFn::heaviside(Rational(0), Rational(1), Rational(1), Rational(1, 2));
    auto srows = mrs_probe(s, x, {Rational(1, 10), Rational(1, 100), Rational(1, 1000)});
    CHECK(srows[0].gap > srows[1].gap);
    CHECK(srows[1].gap > srows[2].gap);
    CHECK(srows[2].gap <= Rational(3, 1000));
}

TEST_CASE("rps probe") {
    PiecewiseFn h = h1_fn();
    Integrator alpha = h1_at_zero();
    auto rows = rps_probe(h, alpha, Partition({Rational(-1), Rational(0), Rational(1)}), 3);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].gap == Rational(0));

    // base must contain the jump
    CHECK_THROWS_AS(rps_probe(h, alpha, Partition({Rational(-1), Rational(1)}), 1),
                    stj::invalid_value);

    PiecewiseFn f = PiecewiseFn::identity(Rational(0), Rational(1));
    Integrator x = Integrator::from_piecewise(PiecewiseFn::identity(Rational(0), Rational(1)));
    auto xr = rps_probe(f, x, Partition({Rational(0), Rational(1)}), 10);
    CHECK(xr[10].gap == Rational(1) / Rational(2).pow(10));
    for (size_t i = 1; i < xr.size(); ++i) CHECK(xr[i].gap <= xr[i - 1].gap);

    PiecewiseFn c = PiecewiseFn::constant(Rational(0), Rational(1), Rational(7));
    auto cr = rps_probe(c, x, Partition({Rational(0), Rational(1)}), 3);
    for (const auto& row : cr) CHECK(row.gap == Rational(0));
}

TEST_CASE("rrs probe forces heavy jumps into the partition") {
    PiecewiseFn h = h1_fn();
    Integrator alpha = h1_at_zero();
    auto rows = rrs_probe(h, alpha, {Rational(1, 2)});
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].gap == Rational(0));
    CHECK(rows[0].achieved <= Rational(1, 2));

    Integrator x = Integrator::from_piecewise(PiecewiseFn::identity(Rational(0), Rational(1)));
    PiecewiseFn f = PiecewiseFn::identity(Rational(0), Rational(1));
    auto xr = rrs_probe(f, x, {Rational(1, 4)});
    CHECK(xr[0].achieved <= Rational(1, 4));
    CHECK(xr[0].gap <= Rational(1, 4));

    PiecewiseFn c = PiecewiseFn::constant(Rational(0), Rational(1), Rational(-3));
    auto cr = rrs_probe(c, x, {Rational(1, 8)});
    CHECK(cr[0].gap == Rational(0));
}

TEST_CASE("rps gap is non-increasing on random instances") {
    stj::testgen::Gen gen(43);
    for (int t = 0; t < 10; ++t) {
        PiecewiseFn f = gen.pw_linear(Rational(0), Rational(1), 3);
        Integrator a = gen.integrator(Rational(0), Rational(1), 3, true);
        std::vector<Rational> base{Rational(0), Rational(1)};
        for (const Rational& x : a.event_points())
            if (!a.mu(IntervalSet::singleton(x)).is_zero()) base.push_back(x);
        std::sort(base.begin(), base.end());
        base.erase(std::unique(base.begin(), base.end()), base.end());
        auto rows = rps_probe(f, a, Partition(base), 6);
        for (size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].gap <= rows[i - 1].gap);
    }
}
