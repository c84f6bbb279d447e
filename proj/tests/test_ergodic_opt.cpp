#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cms/errors.hpp"
#include "cms/ergodic_opt.hpp"
#include "support.hpp"

using namespace cms;

namespace {

double brute_alpha(const MarkovPotential& phi) {
    double best = -1e300;
    for (const Word& c : fixtures::simple_cycles(phi.graph())) best = std::max(best, fixtures::cycle_mean(phi, c));
    return best;
}

LogVector shifted(const LogVector& v) {
    LogVector out = v;
    for (double& x : out) x -= v[0];
    return out;
}

} // namespace

TEST_CASE("maximizing value on the fixtures") {
    const MaxCycleCert c0 = maximizing_value(fixtures::f0());
    CHECK(c0.alpha == 0.0);
    CHECK(c0.cycle == Word{1});
    const MaxCycleCert c1 = maximizing_value(fixtures::f1());
    CHECK(c1.alpha == 0.0);
    CHECK(c1.cycle == Word{1});
    for (CycleMethod m : {CycleMethod::Enumerate, CycleMethod::Karp}) {
        const MaxCycleCert c2 = maximizing_value(fixtures::f2_raw(20), m);
        CHECK(c2.alpha == doctest::Approx(-1.0));
        CHECK(c2.cycle == Word{1});
    }
}

TEST_CASE("two-cycle maximizer and tie breaking") {
    const ShiftGraph g = build_shift(ShiftSpec::full_shift(3));
    const MarkovPotential phi = MarkovPotential::from_function(g, [](Symbol a, Symbol b) {
        return (a == 2 && b == 3) || (a == 3 && b == 2) ? 1.0 : 0.0;
    });
    for (CycleMethod m : {CycleMethod::Enumerate, CycleMethod::Karp}) {
        const MaxCycleCert c = maximizing_value(phi, m);
        CHECK(c.alpha == 1.0);
        CHECK(c.cycle == Word{2, 3});
    }
    // all loops tie: the shortest, lexicographically smallest wins
    const MaxCycleCert flat = maximizing_value(MarkovPotential::from_function(g, [](Symbol, Symbol) { return 0.5; }));
    CHECK(flat.cycle == Word{1});
}

TEST_CASE("enumeration, Karp and brute force agree on random graphs") {
    std::mt19937 rng(123);
    for (int trial = 0; trial < 80; ++trial) {
        const int n = 1 + trial % 9;
        const MarkovPotential phi =
            fixtures::random_potential(rng, fixtures::random_graph(rng, n, 0.25, trial % 2 == 0));
        const double alpha = brute_alpha(phi);
        const MaxCycleCert e = maximizing_value(phi, CycleMethod::Enumerate);
        const MaxCycleCert k = maximizing_value(phi, CycleMethod::Karp);
        CHECK(e.alpha == doctest::Approx(alpha).epsilon(1e-12));
        CHECK(k.alpha == doctest::Approx(alpha).epsilon(1e-12));
        CHECK(fixtures::cycle_mean(phi, e.cycle) == doctest::Approx(alpha).epsilon(1e-12));
        CHECK(fixtures::cycle_mean(phi, k.cycle) == doctest::Approx(alpha).epsilon(1e-12));
        CHECK(e.cycle == k.cycle);
        CHECK(is_admissible(phi.graph(), e.cycle));
    }
}

TEST_CASE("calibrated pair on the rank-one fixture") {
    const SubActionPair p = calibrated_pair(fixtures::f1());
    CHECK(p.alpha == 0.0);
    CHECK(p.V == LogVector{0.0, -1.0});
    CHECK(p.V_T == LogVector{0.0, -1.0});
    CHECK(p.omega_edges == std::vector<Edge>{{1, 1}, {1, 2}});
    const NonWandering nw = nonwandering(fixtures::f1(), p);
    CHECK(nw.zero_defect_edges == std::vector<Edge>{{1, 1}, {1, 2}});
    CHECK(nw.recurrent_edges == std::vector<Edge>{{1, 1}});
    CHECK(nw.recurrent_symbols == Word{1});
    const auto d = edge_defects(fixtures::f1(), p);
    CHECK(d == std::vector<double>{0.0, 0.0, -2.0, -2.0});
}

TEST_CASE("renewal sub-actions") {
    // normalized phi(ab) = 1 - (a+b)/2; V(a) = max_{1 -> a}(phi(1a) + V(1)) = 1/2 - a/2
    const MarkovPotential phi = fixtures::f2(8);
    const SubActionPair p = calibrated_pair(phi);
    CHECK(p.alpha == doctest::Approx(0.0).epsilon(1e-15));
    for (int a = 1; a <= 8; ++a) CHECK(p.V[a - 1] - p.V[0] == doctest::Approx(0.5 - a / 2.0));
    // V^T(a) = sum of phi down the chain a -> a-1 -> ... -> 1
    for (int a = 2; a <= 8; ++a) {
        double s = 0.0;
        for (int b = a; b >= 2; --b) s += phi(b, b - 1);
        CHECK(p.V_T[a - 1] - p.V_T[0] == doctest::Approx(s));
    }
}

TEST_CASE("sub-action properties on random potentials") {
    std::mt19937 rng(456);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 2 + trial % 10;
        const MarkovPotential phi =
            fixtures::random_potential(rng, fixtures::random_graph(rng, n, 0.2, trial % 3 != 0));
        const SubActionPair p = calibrated_pair(phi);
        CHECK(forward_calibration_residual(phi, p.V, p.alpha) < 1e-10);
        CHECK(backward_calibration_residual(phi, p.V_T, p.alpha) < 1e-10);
        double top = -1e300;
        for (std::size_t i = 0; i < p.V.size(); ++i) top = std::max(top, p.V[i] + p.V_T[i]);
        CHECK(std::abs(top) < 1e-10);
        for (double d : edge_defects(phi, p)) CHECK(d <= 1e-10);
        // the maximizing cycle is made of zero-defect edges
        const auto& c = p.maximizing_cycle;
        for (std::size_t i = 0; i < c.size(); ++i) {
            const Edge e{c[i], c[(i + 1) % c.size()]};
            CHECK(std::find(p.omega_edges.begin(), p.omega_edges.end(), e) != p.omega_edges.end());
        }
        const NonWandering nw = nonwandering(phi, p);
        CHECK_FALSE(nw.recurrent_symbols.empty());
        // backward sub-action is the forward one of the transpose
        const LogVector fwd_t = forward_subaction(transpose_potential(phi), p.alpha);
        const LogVector a = shifted(fwd_t), b = shifted(p.V_T);
        for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-10));
    }
}

TEST_CASE("wrong alpha is detected") {
    const MarkovPotential phi = fixtures::f1();
    CHECK_THROWS_AS(forward_subaction(phi, -0.5), ConvergenceError);
    CHECK_THROWS_AS(backward_subaction(phi, 0.5), ConvergenceError);
}

TEST_CASE("periodic critical graph falls back to a Kleene-star seed") {
    // maximizing cycle 1 <-> 2 with a periodic critical graph
    const ShiftGraph g = build_shift(ShiftSpec::full_shift(3));
    const MarkovPotential phi = MarkovPotential::from_function(g, [](Symbol a, Symbol b) {
        if ((a == 1 && b == 2) || (a == 2 && b == 1)) return 0.0;
        return -1.0 - 0.1 * a - 0.2 * b;
    });
    const SubActionPair p = calibrated_pair(phi);
    CHECK(p.alpha == 0.0);
    CHECK(forward_calibration_residual(phi, p.V, 0.0) < 1e-12);
    CHECK(backward_calibration_residual(phi, p.V_T, 0.0) < 1e-12);
    CHECK(p.maximizing_cycle == Word{1, 2});
}

TEST_CASE("zero-temperature sub-actions converge to the max-plus ones") {
    const auto grid = geometric_grid(1.0, 2.0, 11);
    for (const MarkovPotential& phi : {fixtures::f1(), fixtures::f2(10)}) {
        const SubActionPair p = calibrated_pair(phi);
        const ZeroTempSubAction z = subaction_zero_temp(phi, grid);
        CHECK(z.t_max == 1024.0);
        std::vector<double> d(p.V.size()), dt(p.V.size());
        for (std::size_t i = 0; i < d.size(); ++i) {
            d[i] = z.V[i] - p.V[i];
            dt[i] = z.V_T[i] - p.V_T[i];
        }
        CHECK(spread(d) < 0.05);
        CHECK(spread(dt) < 0.05);
        CHECK(z.cauchy.size() == grid.size() - 1);
        CHECK(z.cauchy_decreasing);
    }
}

TEST_CASE("spread") {
    CHECK(spread(std::vector<double>{}) == 0.0);
    CHECK(spread(std::vector<double>{3.0, -1.0, 2.0}) == 4.0);
}
