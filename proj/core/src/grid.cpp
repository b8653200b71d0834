#include "helegraph/grid.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <stdexcept>

#include <fftw3.h>

namespace helegraph {

double PeriodicGrid::wrap(double x) const {
    double r = std::remainder(x, period);
    if (r <= -period / 2) r += period;
    return r;
}

double PeriodicGrid::distance(double x, double y) const {
    return std::abs(wrap(x - y));
}

namespace {

// FFTW planning is not thread safe; executions share per-call buffers here,
// so the whole transform is serialized. Gradients are computed once per
// interface construction, this is not on a hot path.
std::mutex fftw_mutex;

std::vector<double> spectral_multiplier(const std::vector<double>& f, double period,
                                        int derivative_order) {
    const int n = static_cast<int>(f.size());
    if (n < 2) throw std::invalid_argument("spectral derivative needs n >= 2");
    std::lock_guard<std::mutex> lock(fftw_mutex);

    std::vector<double> in(f);
    std::vector<std::complex<double>> spec(n / 2 + 1);
    fftw_plan fwd = fftw_plan_dft_r2c_1d(n, in.data(),
                                         reinterpret_cast<fftw_complex*>(spec.data()),
                                         FFTW_ESTIMATE);
    fftw_execute(fwd);
    fftw_destroy_plan(fwd);

    const double w0 = 2.0 * M_PI / period;
    for (int k = 0; k <= n / 2; ++k) {
        const double xi = w0 * k;
        std::complex<double> m;
        if (derivative_order == 1) {
            m = std::complex<double>(0.0, xi);
            if (n % 2 == 0 && k == n / 2) m = 0.0; // Nyquist has no odd derivative
        } else {
            m = std::complex<double>(-xi * xi, 0.0);
        }
        spec[k] *= m / static_cast<double>(n);
    }

    std::vector<double> out(n);
    fftw_plan bwd = fftw_plan_dft_c2r_1d(n, reinterpret_cast<fftw_complex*>(spec.data()),
                                         out.data(), FFTW_ESTIMATE);
    fftw_execute(bwd);
    fftw_destroy_plan(bwd);
    return out;
}

} // namespace

std::vector<double> spectral_derivative(const std::vector<double>& f, double period) {
    return spectral_multiplier(f, period, 1);
}

std::vector<double> spectral_second_derivative(const std::vector<double>& f, double period) {
    return spectral_multiplier(f, period, 2);
}

std::vector<double> centered_derivative(const std::vector<double>& f, double period) {
    const int n = static_cast<int>(f.size());
    const double dx = period / n;
    std::vector<double> g(n);
    for (int j = 0; j < n; ++j) {
        const double fp = f[(j + 1) % n];
        const double fm = f[(j - 1 + n) % n];
        g[j] = (fp - fm) / (2.0 * dx);
    }
    return g;
}

double trig_interpolate(const std::vector<double>& f, double period, double x) {
    const int n = static_cast<int>(f.size());
    const double w0 = 2.0 * M_PI / period;
    // Direct evaluation of the interpolating trigonometric polynomial.
    // O(n^2) overall if called per node; used for off-grid point queries only.
    double a0 = 0.0;
    for (double v : f) a0 += v;
    a0 /= n;
    double s = a0;
    for (int k = 1; k <= n / 2; ++k) {
        double ck = 0.0, sk = 0.0;
        for (int j = 0; j < n; ++j) {
            const double xj = j * period / n;
            ck += f[j] * std::cos(w0 * k * xj);
            sk += f[j] * std::sin(w0 * k * xj);
        }
        double scale = 2.0 / n;
        if (n % 2 == 0 && k == n / 2) scale = 1.0 / n; // shared Nyquist mode
        s += scale * (ck * std::cos(w0 * k * x) + sk * std::sin(w0 * k * x));
    }
    return s;
}

void rfft_rows(const double* in, int nrows, int n, std::complex<double>* out) {
    std::lock_guard<std::mutex> lock(fftw_mutex);
    const int nh = n / 2 + 1;
    double* buf_in = fftw_alloc_real(static_cast<size_t>(nrows) * n);
    fftw_complex* buf_out = fftw_alloc_complex(static_cast<size_t>(nrows) * nh);
    std::copy(in, in + static_cast<size_t>(nrows) * n, buf_in);
    int dims[1] = {n};
    fftw_plan plan = fftw_plan_many_dft_r2c(1, dims, nrows, buf_in, nullptr, 1, n, buf_out,
                                            nullptr, 1, nh, FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
    std::copy(reinterpret_cast<std::complex<double>*>(buf_out),
              reinterpret_cast<std::complex<double>*>(buf_out) + static_cast<size_t>(nrows) * nh,
              out);
    fftw_free(buf_in);
    fftw_free(buf_out);
}

void irfft_rows(const std::complex<double>* in, int nrows, int n, double* out) {
    std::lock_guard<std::mutex> lock(fftw_mutex);
    const int nh = n / 2 + 1;
    fftw_complex* buf_in = fftw_alloc_complex(static_cast<size_t>(nrows) * nh);
    double* buf_out = fftw_alloc_real(static_cast<size_t>(nrows) * n);
    std::copy(in, in + static_cast<size_t>(nrows) * nh,
              reinterpret_cast<std::complex<double>*>(buf_in));
    int dims[1] = {n};
    fftw_plan plan = fftw_plan_many_dft_c2r(1, dims, nrows, buf_in, nullptr, 1, nh, buf_out,
                                            nullptr, 1, n, FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
    const double scale = 1.0 / n;
    for (long k = 0; k < static_cast<long>(nrows) * n; ++k) out[k] = buf_out[k] * scale;
    fftw_free(buf_in);
    fftw_free(buf_out);
}

ModeAmplitude mode_amplitude(const std::vector<double>& f, double period, int k) {
    const int n = static_cast<int>(f.size());
    const double w0 = 2.0 * M_PI / period;
    ModeAmplitude a;
    for (int j = 0; j < n; ++j) {
        const double xj = j * period / n;
        a.cos_part += f[j] * std::cos(w0 * k * xj);
        a.sin_part += f[j] * std::sin(w0 * k * xj);
    }
    a.cos_part *= 2.0 / n;
    a.sin_part *= 2.0 / n;
    return a;
}

} // namespace helegraph
