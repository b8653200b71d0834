#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace helegraph {

// Uniform periodic grid on [0, P) with n nodes, x_j = j*P/n.
struct PeriodicGrid {
    int n = 0;
    double period = 0.0;

    double dx() const { return period / n; }
    double node(int j) const { return j * period / n; }
    int wrap_index(int j) const {
        int r = j % n;
        return r < 0 ? r + n : r;
    }
    // Representative of x in (-P/2, P/2].
    double wrap(double x) const;
    // Periodic distance |x - y|_P.
    double distance(double x, double y) const;
};

// Spectral derivative of real periodic samples (FFT, ik multiplier,
// Nyquist mode zeroed). Exact on band-limited data.
std::vector<double> spectral_derivative(const std::vector<double>& f, double period);
std::vector<double> spectral_second_derivative(const std::vector<double>& f, double period);

// Second-order centered difference on the periodic grid.
std::vector<double> centered_derivative(const std::vector<double>& f, double period);

// Trigonometric (band-limited) interpolation of periodic samples at x.
double trig_interpolate(const std::vector<double>& f, double period, double x);

// Amplitude of the cos/sin components at integer mode k: returns
// (2/n) * sum_j f_j * cos(k w x_j) and the sin analogue.
struct ModeAmplitude {
    double cos_part = 0.0;
    double sin_part = 0.0;
};
ModeAmplitude mode_amplitude(const std::vector<double>& f, double period, int k);

// Batched row transforms (length n each, nrows rows); backward is normalized
// so that irfft_rows(rfft_rows(x)) == x. Used by the constant-coefficient
// fast solver.
void rfft_rows(const double* in, int nrows, int n, std::complex<double>* out);
void irfft_rows(const std::complex<double>* in, int nrows, int n, double* out);

} // namespace helegraph
