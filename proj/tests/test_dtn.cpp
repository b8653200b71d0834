#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "helegraph/dtn.hpp"
#include "helegraph/probe.hpp"

using namespace helegraph;

namespace {
const double P = 2.0 * M_PI;

GraphInterface flat(int n, double c, double L = 2.0) {
    return make_interface(std::vector<double>(n, c), P, L);
}

GraphInterface trig(int n, double mean, std::vector<std::pair<double, double>> modes,
                    double L = 2.0) {
    std::vector<double> s(n);
    for (int j = 0; j < n; ++j) {
        double v = mean;
        int k = 1;
        for (auto [amp, phase] : modes) v += amp * std::cos(k++ * j * P / n + phase);
        s[j] = v;
    }
    return make_interface(s, P, L);
}
} // namespace

TEST_CASE("dtn_plus and dtn_minus: flat closed forms") {
    DtnOptions opt;
    opt.ny = 48;
    for (double v : dtn_plus(flat(48, 1.0), opt)) CHECK(std::abs(v - 1.0) <= 1e-10);
    for (double v : dtn_plus(flat(48, 0.5), opt)) CHECK(std::abs(v - 2.0) <= 1e-10);
    const BoundaryLaw diff = BoundaryLaw::difference();
    for (double v : dtn_minus(flat(48, 1.0), diff, opt)) CHECK(std::abs(v - 1.0) <= 1e-10);
    for (double v : dtn_minus(flat(48, 0.5), diff, opt))
        CHECK(std::abs(v - 1.0 / 1.5) <= 1e-10);
    // a linear-in-height solution is annihilated by any constant A2
    const BoundaryLaw aniso = BoundaryLaw::difference(SpdMatrix2{2.0, 0.0, 1.0});
    for (double v : dtn_minus(flat(48, 1.0), aniso, opt)) CHECK(std::abs(v - 1.0) <= 1e-10);
}

TEST_CASE("velocity: flat assembly values") {
    DtnOptions opt;
    opt.ny = 48;
    const VelocityField one = velocity(flat(48, 1.0), BoundaryLaw::one_phase(), opt);
    for (double v : one.values) CHECK(std::abs(v - 1.0) <= 1e-10);
    const VelocityField eq = velocity(flat(48, 1.0), BoundaryLaw::difference(), opt);
    for (double v : eq.values) CHECK(std::abs(v) <= 1e-10);
    const VelocityField half = velocity(flat(48, 0.5), BoundaryLaw::difference(), opt);
    for (double v : half.values) CHECK(std::abs(v - (2.0 - 1.0 / 1.5)) <= 1e-9);
    // nodewise identity values = G(I+, I-) * metric factor
    for (int i = 0; i < 48; ++i)
        CHECK(half.values[i] ==
              doctest::Approx((half.i_plus[i] - half.i_minus[i]) * half.gradient_factor[i]));
}

TEST_CASE("velocity: class-K enforcement is strict by default, warn-only when asked") {
    DtnOptions opt;
    opt.ny = 32;
    ClassKParams k;
    k.delta = 0.2;
    k.strip_height = 2.0;
    k.lip_bound = 0.05;  // the cosine below violates this
    opt.class_k = k;
    const GraphInterface f = trig(32, 1.0, {{0.1, 0.0}});
    CHECK_THROWS_AS(velocity(f, BoundaryLaw::one_phase(), opt), std::invalid_argument);
    opt.enforce_class_k = false;
    CHECK_NOTHROW(velocity(f, BoundaryLaw::one_phase(), opt));
    CHECK(!opt.warnings.empty());
}

TEST_CASE("muskat_rhs: constants and windowed affine data") {
    for (double v : muskat_rhs(flat(64, 1.0))) CHECK(std::abs(v) <= 1e-12);

    // odd windowed ramp around the center node: affine there, zero at center
    const int n = 128;
    std::vector<double> s(n);
    const PeriodicGrid g{n, P};
    for (int j = 0; j < n; ++j) {
        const double u = g.wrap(g.node(j) - M_PI);
        s[j] = 1.0 + 0.2 * u * plateau_profile(u / 2.5);
    }
    const auto rhs = muskat_rhs(make_interface(s, P, 2.0));
    CHECK(std::abs(rhs[n / 2]) <= 1e-10);
}

TEST_CASE("muskat_rhs: matches a 10x refined quadrature") {
    const int n = 128;
    const GraphInterface coarse = trig(n, 1.0, {{0.1, 0.0}});
    const GraphInterface fine = trig(10 * n, 1.0, {{0.1, 0.0}});
    const auto rc = muskat_rhs(coarse);
    const auto rf = muskat_rhs(fine);
    for (int j = 0; j < n; ++j) CHECK(std::abs(rc[j] - rf[10 * j]) <= 1e-6);
}

TEST_CASE("GCP at touching points") {
    DtnOptions opt;
    opt.ny = 48;
    const GraphInterface f = trig(64, 1.0, {{0.1, 0.3}});
    SUBCASE("equal inputs give equal outputs") {
        const auto a = velocity(f, BoundaryLaw::one_phase(), opt);
        const auto b = velocity(f, BoundaryLaw::one_phase(), opt);
        for (int i = 0; i < 64; ++i) CHECK(a.values[i] == b.values[i]);
    }
    SUBCASE("a bump away from the touching node strictly raises H there") {
        std::vector<double> psi(64, 0.0);
        const PeriodicGrid g{64, P};
        for (int j = 0; j < 64; ++j)
            psi[j] = 0.05 * bump_profile(g.wrap(g.node(j) - 2.0) / 0.4);
        for (int j = -2; j <= 2; ++j) psi[(j + 64) % 64] = 0.0;
        const GraphInterface gf = f.perturbed(psi, 1.0);
        const auto hf = velocity(f, BoundaryLaw::one_phase(), opt);
        const auto hg = velocity(gf, BoundaryLaw::one_phase(), opt);
        CHECK(hg.values[0] - hf.values[0] > 1e-4);
    }
}

TEST_CASE("constant shifts: i+ decreases, i- increases, with the quantitative lower bound") {
    DtnOptions opt;
    opt.ny = 48;
    const GraphInterface f = trig(64, 1.0, {{0.2, 0.0}});
    const auto ip0 = dtn_plus(f, opt);
    const auto im0 = dtn_minus(f, BoundaryLaw::difference(), opt);
    for (double eps : {0.01, 0.05}) {
        std::vector<double> up(f.samples());
        for (double& v : up) v += eps;
        const GraphInterface fe = f.with_samples(up);
        const auto ip1 = dtn_plus(fe, opt);
        const auto im1 = dtn_minus(fe, BoundaryLaw::difference(), opt);
        for (int i = 0; i < 64; ++i) {
            CHECK(ip1[i] <= ip0[i] + 1e-9);
            CHECK(im1[i] >= im0[i] - 1e-9);
            // i+(f) - C eps <= i+(f+eps) with C on the scale of 1/delta^2
            CHECK(ip0[i] - ip1[i] <= 3.0 * eps);
            CHECK(im1[i] - im0[i] <= 3.0 * eps);
        }
    }
}

TEST_CASE("velocity is Lipschitz in (f, grad f) across randomized class-K pairs") {
    DtnOptions opt;
    opt.ny = 48;
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst_ratio = 0.0;
    for (int trial = 0; trial < 6; ++trial) {
        const GraphInterface f =
            trig(64, 1.0, {{0.15 * u(rng), u(rng)}, {0.05 * u(rng), u(rng)}});
        const GraphInterface g =
            trig(64, 1.0, {{0.15 * u(rng), u(rng)}, {0.05 * u(rng), u(rng)}});
        const auto hf = velocity(f, BoundaryLaw::difference(), opt);
        const auto hg = velocity(g, BoundaryLaw::difference(), opt);
        double dh = 0.0, df = 0.0, dgrad = 0.0;
        for (int i = 0; i < 64; ++i) {
            dh = std::max(dh, std::abs(hf.values[i] - hg.values[i]));
            df = std::max(df, std::abs(f.samples()[i] - g.samples()[i]));
            dgrad = std::max(dgrad, std::abs(f.gradient()[i] - g.gradient()[i]));
        }
        if (df + dgrad > 0.0) worst_ratio = std::max(worst_ratio, dh / (df + dgrad));
    }
    CHECK(worst_ratio > 0.0);
    CHECK(worst_ratio <= 50.0);  // measured constant stays of moderate size
}

TEST_CASE("velocity commutes with grid shifts") {
    DtnOptions opt;
    opt.ny = 48;
    const GraphInterface f = trig(64, 1.0, {{0.15, 0.4}, {0.07, 1.1}});
    const GraphInterface fs = f.shifted(5);
    const auto v = velocity(f, BoundaryLaw::difference(), opt);
    const auto vs = velocity(fs, BoundaryLaw::difference(), opt);
    for (int i = 0; i < 64; ++i)
        CHECK(std::abs(vs.values[i] - v.values[(i + 5) % 64]) <= 1e-12);
}

TEST_CASE("custom monotone table law") {
    // G(a, b) = 1.2 a - 0.8 b sampled on a coarse grid; bicubic interpolation
    // reproduces the plane and the sampled ellipticity check passes.
    std::vector<double> ag, bg;
    for (int i = 0; i < 9; ++i) {
        ag.push_back(-1.0 + 0.5 * i);
        bg.push_back(-1.0 + 0.5 * i);
    }
    std::vector<double> vals;
    for (double b : bg)
        for (double a : ag) vals.push_back(1.2 * a - 0.8 * b);
    const BoundaryLaw law = BoundaryLaw::custom(MonotoneTable(ag, bg, vals), 0.8, 1.2);
    CHECK_NOTHROW(law.verify_ellipticity(0.2, 2.0, 0.2, 2.0));
    CHECK(law.g(1.0, 1.0) == doctest::Approx(0.4).epsilon(1e-12));

    DtnOptions opt;
    opt.ny = 48;
    const auto v = velocity(flat(48, 1.0), law, opt);
    for (double x : v.values) CHECK(std::abs(x - 0.4) <= 1e-9);

    // a law flat in its first argument violates the lower ellipticity bound
    std::vector<double> bad;
    for (double b : bg)
        for (double a : ag) bad.push_back(-0.8 * b + 0.0 * a);
    const BoundaryLaw degenerate = BoundaryLaw::custom(MonotoneTable(ag, bg, bad), 0.8, 1.2);
    CHECK_THROWS_AS(degenerate.verify_ellipticity(0.2, 2.0, 0.2, 2.0), std::invalid_argument);
}
