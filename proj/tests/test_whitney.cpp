#include <doctest.h>

#include <cmath>
#include <random>
#include <set>
#include <stdexcept>
#include <vector>

#include "helegraph/whitney.hpp"

using namespace helegraph;

namespace {
double gauss_bump(const VecN& x) { return std::exp(-x[0] * x[0]); }
} // namespace

TEST_CASE("decompose: N=1 ladder between grid points, ratios pinned") {
    const WhitneyDecomposition w = WhitneyDecomposition::build(0, 1);
    const auto cubes = w.enumerate({0.0, 0.0}, {1.0, 0.0}, 8);
    REQUIRE(!cubes.empty());
    double smallest_center = 1.0;
    for (const auto& q : cubes) {
        const double ratio = w.cube_grid_distance(q) / q.diam();
        CHECK(ratio == doctest::Approx(1.0));  // dyadic ladder at N=1
        smallest_center = std::min(smallest_center, q.center[0]);
    }
    // cubes accumulate at the endpoints
    CHECK(smallest_center < 0.01);

    // pairwise disjoint interiors and coverage of sampled off-grid points
    for (size_t a = 0; a < cubes.size(); ++a)
        for (size_t b = a + 1; b < cubes.size(); ++b) {
            const double la = cubes[a].lo()[0], ha = cubes[a].hi()[0];
            const double lb = cubes[b].lo()[0], hb = cubes[b].hi()[0];
            CHECK(std::min(ha, hb) - std::max(la, lb) <= 1e-15);
        }
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(1e-3, 1.0 - 1e-3);
    for (int t = 0; t < 200; ++t) {
        const double x = u(rng);
        const WhitneyCube q = w.locate({x, 0.0});
        CHECK(q.lo()[0] <= x);
        CHECK(q.hi()[0] >= x);
        CHECK(w.is_selected(q));
    }
}

TEST_CASE("decompose: translation by a grid vector maps the cube set to itself") {
    for (int N : {1, 2}) {
        const int m = 2;
        const WhitneyDecomposition w = WhitneyDecomposition::build(m, N);
        const double h = w.grid_size();
        const auto base = w.enumerate({0.0, 0.0}, {N == 1 ? 4 * h : 2 * h, 2 * h}, 6);
        const auto moved = w.enumerate({h, N == 1 ? 0.0 : h},
                                       {N == 1 ? 5 * h : 3 * h, 3 * h}, 6);
        std::set<std::vector<double>> a, b;
        for (const auto& q : base) {
            std::vector<double> key{q.side, q.center[0] + h};
            if (N > 1) key.push_back(q.center[1] + h);
            a.insert(key);
        }
        for (const auto& q : moved) {
            std::vector<double> key{q.side, q.center[0]};
            if (N > 1) key.push_back(q.center[1]);
            b.insert(key);
        }
        CHECK(a == b);
    }
}

TEST_CASE("partition of unity: nonnegative, sums to one, gradient bound") {
    for (int N : {1, 2}) {
        const WhitneyDecomposition w = WhitneyDecomposition::build(2, N);
        std::mt19937_64 rng(11 + N);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        double grad_constant = 0.0;
        for (int t = 0; t < 500; ++t) {
            VecN x{u(rng), N > 1 ? u(rng) : 0.0};
            if (w.on_grid(x)) continue;
            const auto cubes = w.overlapping(x);
            REQUIRE(!cubes.empty());
            const auto phi = w.partition_values(x, cubes);
            double total = 0.0;
            for (double v : phi) {
                CHECK(v >= 0.0);
                CHECK(v <= 1.0 + 1e-12);
                total += v;
            }
            CHECK(std::abs(total - 1.0) <= 1e-12);
            // support confined to Q*: each overlapping cube contains x in 9/8 Q
            for (const auto& q : cubes)
                for (int d = 0; d < N; ++d)
                    CHECK(std::abs(x[d] - q.center[d]) <= (9.0 / 16.0) * q.side);
            // finite-difference gradient of one partition member
            if (t % 50 == 0 && !cubes.empty()) {
                const double eps = 1e-7 * cubes[0].side;
                VecN xp = x, xm = x;
                xp[0] += eps;
                xm[0] -= eps;
                const auto pp = w.partition_values(xp, w.overlapping(xp));
                const auto pm = w.partition_values(xm, w.overlapping(xm));
                if (pp.size() == phi.size() && pm.size() == phi.size()) {
                    const double g = (pp[0] - pm[0]) / (2 * eps);
                    grad_constant = std::max(grad_constant, std::abs(g) * cubes[0].diam());
                }
            }
        }
        CHECK(grad_constant < 60.0);  // |grad phi| <= C / diam with moderate C
    }
}

TEST_CASE("discrete_gradient: exact arithmetic cases and window errors") {
    {
        GridSamples g([](const VecN& x) { return x[0] * x[0]; }, 2, 1);  // h = 1/4
        const VecN grad = discrete_gradient(g, {1.0, 0.0});
        CHECK(grad[0] == doctest::Approx(2.0));
    }
    {
        GridSamples g([](const VecN& x) { return 3.0 * x[0] - 1.0; }, 3, 1);
        CHECK(discrete_gradient(g, {0.5, 0.0})[0] == doctest::Approx(3.0));
    }
    {
        GridSamples g([](const VecN& x) { return x[0] * x[0] * x[0]; }, 1, 1);  // h = 1/2
        CHECK(discrete_gradient(g, {0.0, 0.0})[0] == doctest::Approx(0.25));
    }
    {
        GridSamples g([](const VecN& x) { return x[0]; }, 1, 1);
        CHECK_THROWS_AS(discrete_gradient(g, {2.0, 0.0}), std::invalid_argument);
    }
}

TEST_CASE("extensions: grid values exact, affine reproduction, Taylor remainder") {
    const int m = 4;
    const WhitneyDecomposition w = WhitneyDecomposition::build(m, 1);
    {
        GridSamples g(gauss_bump, m, 1);
        for (double x : {0.0, 0.25, -0.5, 1.0}) {
            CHECK(extend0(g, w, {x, 0.0}) == gauss_bump({x, 0.0}));
            CHECK(extend1(g, w, {x, 0.0}) == gauss_bump({x, 0.0}));
        }
    }
    {
        GridSamples g([](const VecN& x) { return 2.0 - 0.7 * x[0]; }, m, 1);
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> u(-3.0, 3.0);
        for (int t = 0; t < 100; ++t) {
            const double x = u(rng);
            CHECK(std::abs(extend1(g, w, {x, 0.0}) - (2.0 - 0.7 * x)) <= 1e-12);
        }
    }
    {
        // E1 of x^2: |E1 f - f| <= C h dist(x, G_m)
        GridSamples g([](const VecN& x) { return x[0] * x[0]; }, m, 1);
        std::mt19937_64 rng(6);
        std::uniform_real_distribution<double> u(-2.0, 2.0);
        const double h = w.grid_size();
        for (int t = 0; t < 100; ++t) {
            const double x = u(rng);
            if (w.on_grid({x, 0.0})) continue;
            const double dist = std::abs(x - std::nearbyint(x / h) * h);
            const double err = std::abs(extend1(g, w, {x, 0.0}) - x * x);
            CHECK(err <= 8.0 * h * std::max(dist, h / 1024));
        }
    }
}

TEST_CASE("extend0 preserves order") {
    const int m = 3;
    const WhitneyDecomposition w = WhitneyDecomposition::build(m, 1);
    GridSamples g1([](const VecN& x) { return std::sin(x[0]); }, m, 1);
    GridSamples g2([](const VecN& x) { return std::sin(x[0]) + 0.1 + 0.05 * x[0] * x[0]; }, m, 1);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int t = 0; t < 200; ++t) {
        const VecN x{u(rng), 0.0};
        if (w.on_grid(x)) continue;
        CHECK(extend0(g1, w, x) <= extend0(g2, w, x) + 1e-14);
    }
}

TEST_CASE("project: affine fixed point, exact translation covariance, Lipschitz uniformity") {
    {
        const EvalFn f = [](const VecN& x) { return 1.0 + 0.3 * x[0]; };
        const EvalFn pf = project(f, 3, 1);
        for (double x : {0.11, -0.77, 1.31}) CHECK(std::abs(pf({x, 0.0}) - f({x, 0.0})) <= 1e-12);
    }
    {
        const int m = 3;
        const double z = 0.125;  // in G_3
        const EvalFn f = [](const VecN& x) { return std::exp(-x[0] * x[0]); };
        const EvalFn tf = [&](const VecN& x) { return f({x[0] + z, 0.0}); };
        const EvalFn pf = project(f, m, 1);
        const EvalFn ptf = project(tf, m, 1);
        for (double x : {0.033203125, 0.25732421875, -0.611328125, 1.0009765625})
            CHECK(ptf({x, 0.0}) == pf({x + z, 0.0}));  // bitwise for dyadic points
    }
    {
        for (int m = 2; m <= 6; ++m) {
            const EvalFn f = [](const VecN& x) { return std::abs(std::sin(2.0 * x[0])); };
            const EvalFn pf = project(f, m, 1);
            double lip = 0.0;
            std::mt19937_64 rng(13);
            std::uniform_real_distribution<double> u(-1.5, 1.5);
            for (int t = 0; t < 400; ++t) {
                const double a = u(rng), b = u(rng);
                if (std::abs(a - b) < 1e-9) continue;
                lip = std::max(lip,
                               std::abs(pf({a, 0.0}) - pf({b, 0.0})) / std::abs(a - b));
            }
            CHECK(lip <= 2.0 * 2.6);  // Lip(f) = 2, uniform constant across m
        }
    }
}

TEST_CASE("approximate: identity operator agrees on G_m") {
    const OperatorFn J = [](const EvalFn& g, const VecN& x) { return g(x); };
    const OperatorFn Jm = approximate(J, 3, 1);
    const EvalFn f = gauss_bump;
    for (double x : {0.0, 0.125, -0.75, 1.5})
        CHECK(std::abs(Jm(f, {x, 0.0}) - f({x, 0.0})) <= 1e-12);
}

TEST_CASE("approximate: truncated half-Laplacian converges in trend and translates") {
    const double R0 = 1.0;
    const OperatorFn J = [R0](const EvalFn& g, const VecN& x) {
        return truncated_half_laplacian(g, x, R0, 1);
    };
    const EvalFn f = gauss_bump;

    std::vector<double> errs;
    for (int m : {3, 4, 5, 6}) {
        const OperatorFn Jm = approximate(J, m, 1);
        double err = 0.0;
        for (int t = 0; t <= 24; ++t) {
            const VecN x{-1.0 + 2.0 * t / 24.0, 0.0};
            err = std::max(err, std::abs(Jm(f, x) - J(f, x)));
        }
        errs.push_back(err);
    }
    CHECK(errs.back() < errs.front());          // decreasing in trend
    CHECK(errs[3] < 0.5 * errs[0]);

    // grid-shift invariance inherited from J
    const int m = 4;
    const OperatorFn Jm = approximate(J, m, 1);
    const double z = 0.25;
    const EvalFn tf = [&](const VecN& x) { return f({x[0] + z, 0.0}); };
    for (double x : {0.1875, -0.40625})
        CHECK(std::abs(Jm(tf, {x, 0.0}) - Jm(f, {x + z, 0.0})) <= 1e-10);
}

TEST_CASE("level caps are enforced") {
    CHECK_THROWS_AS(WhitneyDecomposition::build(13, 1), std::invalid_argument);
    CHECK_THROWS_AS(WhitneyDecomposition::build(8, 2), std::invalid_argument);
    CHECK_THROWS_AS(WhitneyDecomposition::build(3, 3), std::invalid_argument);
}
