#pragma once

// Seeded generators for randomized property tests.  Everything is built on a
// coarse rational grid so exact comparisons stay cheap.

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "stj/integrator.hpp"
#include "stj/piecewise.hpp"

namespace stj::testgen {

class Gen {
public:
    explicit Gen(uint64_t seed) : rng_(seed) {}

    long long ri(long long lo, long long hi) {
        return std::uniform_int_distribution<long long>(lo, hi)(rng_);
    }

    Rational rq(long long lo, long long hi, long long maxden = 8) {
        long long d = ri(1, maxden);
        return Rational(ri(lo * d, hi * d), d);
    }

    // a = x_0 < ... < x_n = b on a 1/48 grid.
    std::vector<Rational> breakpoints(const Rational& a, const Rational& b, int max_interior) {
        std::set<Rational> pts{a, b};
        int n = static_cast<int>(ri(0, max_interior));
        for (int i = 0; i < n; ++i) {
            Rational t = a + (b - a) * Rational(ri(1, 47), 48);
            pts.insert(t);
        }
        return {pts.begin(), pts.end()};
    }

    StepFn step(const Rational& a, const Rational& b, int max_interior) {
        auto br = breakpoints(a, b, max_interior);
        std::vector<Rational> consts, values;
        for (size_t i = 0; i + 1 < br.size(); ++i) consts.push_back(rq(-6, 6));
        for (size_t i = 0; i < br.size(); ++i) values.push_back(rq(-6, 6));
        return StepFn::on(Partition(br), std::move(consts), std::move(values));
    }

    // Piecewise-linear function with independent point values (so with jumps).
    PiecewiseFn pw_linear(const Rational& a, const Rational& b, int max_interior) {
        auto br = breakpoints(a, b, max_interior);
        std::vector<Poly> pieces;
        std::vector<Rational> values;
        for (size_t i = 0; i + 1 < br.size(); ++i)
            pieces.push_back(Poly::raw({rq(-6, 6), rq(-4, 4)}));
        for (size_t i = 0; i < br.size(); ++i) values.push_back(rq(-6, 6));
        return PiecewiseFn(br, std::move(pieces), std::move(values));
    }

    // Continuous piecewise-linear function.
    PiecewiseFn pw_linear_continuous(const Rational& a, const Rational& b, int max_interior) {
        auto br = breakpoints(a, b, max_interior);
        std::vector<Poly> pieces;
        std::vector<Rational> values;
        Rational v = rq(-6, 6);
        values.push_back(v);
        for (size_t i = 0; i + 1 < br.size(); ++i) {
            Rational slope = rq(-4, 4);
            // piece through (br[i], v) with the chosen slope
            pieces.push_back(Poly::raw({v - slope * br[i], slope}));
            v = pieces.back().eval(br[i + 1]);
            values.push_back(v);
        }
        return PiecewiseFn(br, std::move(pieces), std::move(values));
    }

    // BV integrator: continuous piecewise-linear part plus random saltus terms.
    Integrator integrator(const Rational& a, const Rational& b, int max_interior,
                          bool force_increasing = false) {
        PiecewiseFn cont = force_increasing ? increasing_continuous(a, b, max_interior)
                                            : pw_linear_continuous(a, b, max_interior);
        auto locs = breakpoints(a, b, max_interior);
        std::vector<SaltusTerm> lt, rt;
        for (const Rational& x : locs) {
            if (ri(0, 2) == 0 && x != b) {
                Rational w = force_increasing ? rq(1, 4) : rq(-4, 4);
                if (!w.is_zero()) lt.push_back({x, w});
            }
            if (ri(0, 2) == 0 && x != a) {
                Rational w = force_increasing ? rq(1, 4) : rq(-4, 4);
                if (!w.is_zero()) rt.push_back({x, w});
            }
        }
        return Integrator(cont, SaltusPart(Chirality::Left, std::move(lt), Rational(0)),
                          SaltusPart(Chirality::Right, std::move(rt), Rational(0)));
    }

    PiecewiseFn increasing_continuous(const Rational& a, const Rational& b, int max_interior) {
        auto br = breakpoints(a, b, max_interior);
        std::vector<Poly> pieces;
        std::vector<Rational> values;
        Rational v = rq(-6, 6);
        values.push_back(v);
        for (size_t i = 0; i + 1 < br.size(); ++i) {
            Rational slope = rq(0, 4);
            pieces.push_back(Poly::raw({v - slope * br[i], slope}));
            v = pieces.back().eval(br[i + 1]);
            values.push_back(v);
        }
        return PiecewiseFn(br, std::move(pieces), std::move(values));
    }

    Rational point_in(const Rational& a, const Rational& b) {
        return a + (b - a) * Rational(ri(1, 95), 96);
    }

private:
    std::mt19937_64 rng_;
};

}  // namespace stj::testgen
