#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "stj/piecewise.hpp"

using stj::Partition;
using stj::PiecewiseFn;
using stj::Poly;
using stj::Rational;
using stj::StepFn;

namespace {
Poly P(std::initializer_list<long long> c) {
    std::vector<Rational> v;
    for (long long x : c) v.emplace_back(x);
    return Poly(std::move(v));
}
}  // namespace

TEST_CASE("evaluation honors explicit point values") {
    // Heaviside-style step with value a at 0 on [-1, 1]
    Rational a(1, 3);
    PiecewiseFn h = PiecewiseFn::heaviside(Rational(-1), Rational(1), a, Rational(0));
    CHECK(h.eval(Rational(0)) == a);
    CHECK(h.eval(Rational(-1, 2)) == Rational(0));
    CHECK(h.eval(Rational(1, 2)) == Rational(1));

    PiecewiseFn sq = PiecewiseFn::from_poly(Rational(0), Rational(1), P({0, 0, 1}));
    CHECK(sq.eval(Rational(1, 2)) == Rational(1, 4));

    PiecewiseFn d = PiecewiseFn::dirichlet(Rational(0), Rational(1));
    CHECK(d.eval(Rational(1, 3)) == Rational(1));  // rational inputs only

    CHECK_THROWS_AS(sq.eval(Rational(2)), stj::out_of_domain);
}

TEST_CASE("one-sided limits and endpoint conventions") {
    PiecewiseFn h = PiecewiseFn::heaviside(Rational(-1), Rational(1), Rational(1, 2), Rational(0));
    CHECK(h.limit_right(Rational(0)) == Rational(1));
    CHECK(h.limit_left(Rational(0)) == Rational(0));
    // f(a-) = f(a) at the left endpoint
    CHECK(h.limit_left(Rational(-1)) == h.eval(Rational(-1)));
    CHECK(h.limit_right(Rational(1)) == h.eval(Rational(1)));

    PiecewiseFn f({Rational(0), Rational(1), Rational(2)}, {P({0, 0, 1}), P({0, 1})},
                  {Rational(0), Rational(1), Rational(2)});
    CHECK(f.limit_left(Rational(1)) == Rational(1));   // x^2 -> 1
    CHECK(f.limit_right(Rational(1)) == Rational(1));  // x -> 1

    CHECK_THROWS_AS(PiecewiseFn::dirichlet(Rational(0), Rational(1)).limit_left(Rational(1, 2)),
                    stj::unsupported_dirichlet);
}

TEST_CASE("limits agree with nearby evaluations") {
    PiecewiseFn f({Rational(0), Rational(1), Rational(2)}, {P({0, 0, 1}), P({3, -1})},
                  {Rational(5), Rational(7), Rational(1)});
    Rational eps(1, 1000000);
    for (Rational x : {Rational(1)}) {
        // formula check: left limit equals adjacent piece evaluated at x
        CHECK(f.limit_left(x) == P({0, 0, 1}).eval(x));
        CHECK(f.limit_right(x) == P({3, -1}).eval(x));
        // offset check
        Rational le = f.eval(x - eps), re = f.eval(x + eps);
        CHECK(abs(le - f.limit_left(x)) <= Rational(3) * eps);
        CHECK(abs(re - f.limit_right(x)) <= Rational(3) * eps);
    }
}

TEST_CASE("discontinuity report carries both gaps") {
    PiecewiseFn sq = PiecewiseFn::from_poly(Rational(0), Rational(1), P({0, 0, 1}));
    CHECK(sq.discontinuities().empty());

    Rational a(2, 5);
    PiecewiseFn h = PiecewiseFn::heaviside(Rational(-1), Rational(1), a, Rational(0));
    auto d = h.discontinuities();
    REQUIRE(d.size() == 1);
    CHECK(d[0].x == Rational(0));
    CHECK(d[0].left_gap == a);
    CHECK(d[0].right_gap == Rational(1) - a);

    // point value equal to the left limit: only the right gap remains
    PiecewiseFn g({Rational(-1), Rational(0), Rational(1)},
                  {Poly::constant(Rational(2)), Poly::constant(Rational(5))},
                  {Rational(2), Rational(2), Rational(5)});
    auto dg = g.discontinuities();
    REQUIRE(dg.size() == 1);
    CHECK(dg[0].left_gap == Rational(0));
    CHECK(dg[0].right_gap == Rational(3));
}

TEST_CASE("best-fit steps on a partition") {
    PiecewiseFn f = PiecewiseFn::identity(Rational(0), Rational(1));
    Partition p({Rational(0), Rational(1, 2), Rational(1)});
    auto [u, v] = stj::best_fit_steps(f, p, Rational(0));
    // upper pieces (1/2, 1), lower pieces (0, 1/2), point values (0, 1/2, 1)
    CHECK(u.eval(Rational(1, 4)) == Rational(1, 2));
    CHECK(u.eval(Rational(3, 4)) == Rational(1));
    CHECK(v.eval(Rational(1, 4)) == Rational(0));
    CHECK(v.eval(Rational(3, 4)) == Rational(1, 2));
    for (Rational x : {Rational(0), Rational(1, 2), Rational(1)}) {
        CHECK(u.eval(x) == f.eval(x));
        CHECK(v.eval(x) == f.eval(x));
    }

    PiecewiseFn c = PiecewiseFn::constant(Rational(0), Rational(1), Rational(7, 3));
    auto [uc, vc] = stj::best_fit_steps(c, p, Rational(0));
    for (Rational x : {Rational(1, 4), Rational(3, 4), Rational(1, 2)}) {
        CHECK(uc.eval(x) == Rational(7, 3));
        CHECK(vc.eval(x) == Rational(7, 3));
    }

    PiecewiseFn sq = PiecewiseFn::from_poly(Rational(-1), Rational(1), P({0, 0, 1}));
    Partition p2({Rational(-1), Rational(0), Rational(1)});
    auto [u2, v2] = stj::best_fit_steps(sq, p2, Rational(1, 1000));
    CHECK(v2.eval(Rational(-1, 2)) <= Rational(0));
    CHECK(u2.eval(Rational(-1, 2)) >= Rational(1));
    CHECK_THROWS_AS(
        stj::best_fit_steps(PiecewiseFn::dirichlet(Rational(0), Rational(1)), p, Rational(0)),
        stj::unsupported_dirichlet);
}

TEST_CASE("best-fit bracket property on random points") {
    PiecewiseFn f({Rational(0), Rational(1, 3), Rational(1)}, {P({1, -3}), P({0, 0, 2})},
                  {Rational(1), Rational(10), Rational(2)});
    Partition p({Rational(0), Rational(1, 4), Rational(5, 8), Rational(1)});
    auto [u, v] = stj::best_fit_steps(f, p, Rational(1, 1000));
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<long long> d(0, 10000);
    for (int i = 0; i < 1000; ++i) {
        Rational x(d(rng), 10000);
        CHECK(v.eval(x) <= f.eval(x));
        CHECK(f.eval(x) <= u.eval(x));
    }
}

TEST_CASE("best-fit steps tighten under refinement") {
    PiecewiseFn f = PiecewiseFn::from_poly(Rational(0), Rational(1), P({0, 1, -1}));  // x - x^2
    Partition p({Rational(0), Rational(1, 2), Rational(1)});
    Partition q = p.refined_with({Rational(1, 4), Rational(3, 4)});
    auto [up, vp] = stj::best_fit_steps(f, p, Rational(0));
    auto [uq, vq] = stj::best_fit_steps(f, q, Rational(0));
    std::mt19937_64 rng(4);
    std::uniform_int_distribution<long long> d(1, 9999);
    for (int i = 0; i < 300; ++i) {
        Rational x(d(rng), 10000);
        CHECK(uq.eval(x) <= up.eval(x));
        CHECK(vq.eval(x) >= vp.eval(x));
    }
}

TEST_CASE("pos_part splits at rational sign changes") {
    PiecewiseFn f = PiecewiseFn::identity(Rational(-1), Rational(1));
    PiecewiseFn g = stj::pos_part(f);
    CHECK(g.eval(Rational(-1, 2)) == Rational(0));
    CHECK(g.eval(Rational(0)) == Rational(0));
    CHECK(g.eval(Rational(1, 2)) == Rational(1, 2));

    CHECK(stj::pos_part(PiecewiseFn::constant(Rational(0), Rational(1), Rational(-1)))
              .eval(Rational(1, 2)) == Rational(0));

    PiecewiseFn st({Rational(-1), Rational(0), Rational(1)},
                   {Poly::constant(Rational(-2)), Poly::constant(Rational(3))},
                   {Rational(-2), Rational(-2), Rational(3)});
    PiecewiseFn pst = stj::pos_part(st);
    CHECK(pst.eval(Rational(-1, 2)) == Rational(0));
    CHECK(pst.eval(Rational(1, 2)) == Rational(3));
    CHECK(pst.eval(Rational(0)) == Rational(0));

    // x^2 - 2 changes sign at an irrational point
    PiecewiseFn ir = PiecewiseFn::from_poly(Rational(0), Rational(2), P({-2, 0, 1}));
    CHECK_THROWS_AS(stj::pos_part(ir), stj::irrational_root);

    std::mt19937_64 rng(5);
    std::uniform_int_distribution<long long> d(0, 10000);
    PiecewiseFn w = PiecewiseFn::from_poly(Rational(0), Rational(1), P({0, 1, -1}));
    PiecewiseFn pw = stj::pos_part(pw_scale(-1, w));
    for (int i = 0; i < 200; ++i) {
        Rational x(d(rng), 10000);
        CHECK(pw.eval(x) == max(-w.eval(x), Rational(0)));
    }
}

TEST_CASE("piecewise algebra") {
    CHECK(common_refinement(Partition({Rational(0), Rational(1, 2), Rational(1)}),
                            Partition({Rational(0), Rational(1, 3), Rational(1)}))
              .points() ==
          std::vector<Rational>{Rational(0), Rational(1, 3), Rational(1, 2), Rational(1)});

    PiecewiseFn x = PiecewiseFn::identity(Rational(0), Rational(1));
    PiecewiseFn one_minus = PiecewiseFn::from_poly(Rational(0), Rational(1), P({1, -1}));
    PiecewiseFn s = pw_add(x, one_minus);
    for (Rational t : {Rational(0), Rational(1, 7), Rational(1)})
        CHECK(s.eval(t) == Rational(1));

    Rational a(1, 5);
    PiecewiseFn h = PiecewiseFn::heaviside(Rational(-1), Rational(1), a, Rational(0));
    CHECK(pw_scale(2, h).eval(Rational(0)) == Rational(2) * a);

    CHECK_THROWS_AS(pw_add(x, PiecewiseFn::identity(Rational(0), Rational(2))),
                    stj::domain_mismatch);

    std::mt19937_64 rng(6);
    std::uniform_int_distribution<long long> d(0, 1000);
    for (int i = 0; i < 100; ++i) {
        Rational t(d(rng), 1000);
        CHECK(pw_add(x, h.restrict(Rational(0), Rational(1))).eval(t) ==
              x.eval(t) + h.eval(t));
        CHECK(pw_scale(Rational(-3, 2), x).eval(t) == Rational(-3, 2) * t);
    }
}

TEST_CASE("restriction re-anchors endpoint conventions") {
    Rational a(1, 4);
    PiecewiseFn h = PiecewiseFn::heaviside(Rational(-1), Rational(1), a, Rational(0));
    PiecewiseFn left = h.restrict(Rational(-1), Rational(0));
    CHECK(left.eval(Rational(0)) == a);
    CHECK(left.limit_right(Rational(0)) == a);  // new right endpoint: f(b+) = f(b)
    PiecewiseFn right = h.restrict(Rational(0), Rational(1));
    CHECK(right.eval(Rational(0)) == a);
    CHECK(right.limit_left(Rational(0)) == a);  // new left endpoint
    CHECK(right.limit_right(Rational(0)) == Rational(1));
    CHECK_THROWS_AS(h.restrict(Rational(-2), Rational(0)), stj::out_of_domain);
}

TEST_CASE("step function wrapper validates") {
    Partition p({Rational(0), Rational(1)});
    StepFn s = StepFn::on(p, {Rational(3)}, {Rational(0), Rational(5)});
    CHECK(s.eval(Rational(1, 2)) == Rational(3));
    CHECK(s.eval(Rational(1)) == Rational(5));
    CHECK_THROWS_AS(StepFn(PiecewiseFn::identity(Rational(0), Rational(1))), stj::invalid_value);
}
