#include <doctest.h>

#include <cmath>
#include <vector>

#include "helegraph/grid.hpp"

using namespace helegraph;

TEST_CASE("periodic wrap and distance") {
    PeriodicGrid g{8, 2.0 * M_PI};
    CHECK(g.wrap(2.0 * M_PI + 0.3) == doctest::Approx(0.3));
    CHECK(g.wrap(-0.3) == doctest::Approx(-0.3));
    CHECK(g.distance(0.1, 2.0 * M_PI - 0.1) == doctest::Approx(0.2));
    CHECK(g.wrap_index(-1) == 7);
}

TEST_CASE("spectral derivative exact on band-limited data") {
    const int n = 64;
    const double P = 2.0 * M_PI;
    std::vector<double> f(n), expect(n);
    for (int j = 0; j < n; ++j) {
        const double x = j * P / n;
        f[j] = 1.0 + 0.1 * std::cos(x) - 0.05 * std::sin(3.0 * x);
        expect[j] = -0.1 * std::sin(x) - 0.15 * std::cos(3.0 * x);
    }
    const auto g = spectral_derivative(f, P);
    for (int j = 0; j < n; ++j) CHECK(g[j] == doctest::Approx(expect[j]).epsilon(1e-12));

    const auto g2 = spectral_second_derivative(f, P);
    for (int j = 0; j < n; ++j) {
        const double x = j * P / n;
        CHECK(g2[j] == doctest::Approx(-0.1 * std::cos(x) + 0.45 * std::sin(3.0 * x))
                           .epsilon(1e-10));
    }
}

TEST_CASE("centered derivative is second order") {
    const double P = 2.0 * M_PI;
    auto worst = [&](int n) {
        std::vector<double> f(n);
        for (int j = 0; j < n; ++j) f[j] = std::sin(2.0 * j * P / n);
        const auto g = centered_derivative(f, P);
        double e = 0.0;
        for (int j = 0; j < n; ++j)
            e = std::max(e, std::abs(g[j] - 2.0 * std::cos(2.0 * j * P / n)));
        return e;
    };
    const double e1 = worst(64), e2 = worst(128);
    CHECK(e1 / e2 > 3.5);
    CHECK(e1 / e2 < 4.5);
}

TEST_CASE("mode amplitude and trig interpolation") {
    const int n = 32;
    const double P = 2.0 * M_PI;
    std::vector<double> f(n);
    for (int j = 0; j < n; ++j) f[j] = 0.7 * std::cos(3.0 * j * P / n) + 0.2;
    const auto a = mode_amplitude(f, P, 3);
    CHECK(a.cos_part == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(a.sin_part == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(trig_interpolate(f, P, 0.4321) ==
          doctest::Approx(0.7 * std::cos(3.0 * 0.4321) + 0.2).epsilon(1e-11));
}

TEST_CASE("batched fft round trip") {
    const int n = 48, rows = 3;
    std::vector<double> in(static_cast<size_t>(rows) * n), out(in.size());
    for (size_t k = 0; k < in.size(); ++k) in[k] = std::sin(0.1 * k) + 0.3 * k / in.size();
    std::vector<std::complex<double>> spec(static_cast<size_t>(rows) * (n / 2 + 1));
    rfft_rows(in.data(), rows, n, spec.data());
    irfft_rows(spec.data(), rows, n, out.data());
    for (size_t k = 0; k < in.size(); ++k) CHECK(out[k] == doctest::Approx(in[k]).epsilon(1e-13));
}
