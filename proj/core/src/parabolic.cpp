#include "helegraph/parabolic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "helegraph/grid.hpp"
#include "helegraph/interface.hpp"

namespace helegraph {

void KernelClassParams::validate() const {
    if (!(Lambda >= 1.0)) throw std::invalid_argument("kernel class requires Lambda >= 1");
    if (!(r0 > 0.0)) throw std::invalid_argument("kernel class requires r0 > 0");
    if (n != 1) throw std::invalid_argument("kernel class is implemented for n = 1");
}

namespace {

double simpson_rec(const std::function<double(double)>& fn, double a, double b, int depth,
                   double fa, double fm, double fb, double tol) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = fn(lm), frm = fn(rm);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson_rec(fn, a, m, depth - 1, fa, flm, fm, tol / 2) +
           simpson_rec(fn, m, b, depth - 1, fm, frm, fb, tol / 2);
}

double integrate(const std::function<double(double)>& fn, double a, double b,
                 double tol = 1e-11) {
    if (!(b > a)) return 0.0;
    const double m = 0.5 * (a + b);
    return simpson_rec(fn, a, b, 36, fn(a), fn(m), fn(b), tol);
}

// int_{rho < |h| < r0} h K(h) dh (the odd part of K is what survives).
double shell_first_moment(const std::function<double(double)>& K, double rho, double r0) {
    return integrate([&](double h) { return h * (K(h) - K(-h)); }, rho, r0);
}

double fplus(double s, double Lambda) {
    return s >= 0.0 ? Lambda * s : s / Lambda;
}
double fminus(double s, double Lambda) {
    return s >= 0.0 ? s / Lambda : Lambda * s;
}

} // namespace

MemberVerification verify_member(const LinearMember& m, const KernelClassParams& params) {
    params.validate();
    MemberVerification v;
    v.kernel_bounds_ok = true;
    // Kernel bounds on a geometric |h| ladder, both signs.
    for (int k = 0; k <= 60; ++k) {
        const double h = 1e-3 * std::pow(1.35, k);
        if (h > 64.0) break;
        for (double s : {h, -h}) {
            const double ratio = m.kernel(s) * h * h;  // in [1/Lambda, Lambda]
            v.worst_kernel_ratio = std::max({v.worst_kernel_ratio, ratio,
                                             ratio > 0 ? 1.0 / ratio : 1e300});
            if (!(ratio >= 1.0 / params.Lambda - 1e-12) ||
                !(ratio <= params.Lambda + 1e-12))
                v.kernel_bounds_ok = false;
        }
    }
    // Drift coupling on a rho ladder.
    v.drift_bound_ok = true;
    for (double rho = params.r0; rho > 1e-4 * params.r0; rho *= 0.5) {
        const double defect = std::abs(m.drift - shell_first_moment(m.kernel, rho, params.r0));
        v.worst_drift_defect = std::max(v.worst_drift_defect, defect);
        if (defect > params.Lambda + 1e-9) v.drift_bound_ok = false;
    }
    return v;
}

LinearMember random_member(std::uint64_t seed, const KernelClassParams& params) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int attempt = 0; attempt < 64; ++attempt) {
        // Even part: log-modulated between the class bounds with margin.
        const double span = 0.9 * std::log(params.Lambda);
        const int modes = 3;
        std::vector<double> amp(modes), phase(modes);
        double total = 0.0;
        for (int i = 0; i < modes; ++i) {
            amp[i] = unit(rng);
            total += amp[i];
            phase[i] = 2.0 * M_PI * unit(rng);
        }
        for (int i = 0; i < modes; ++i) amp[i] *= span / std::max(total, 1e-12);
        // Odd part: sign(h) profile decaying to 0 at h -> 0 so the first
        // moment stays bounded; keep it a fraction of the allowed band.
        const double odd_scale = 0.35 * unit(rng);
        const double odd_power = 0.5 + 0.5 * unit(rng);
        const double r0 = params.r0;

        auto kernel = [=](double h) {
            const double a = std::abs(h);
            double logmod = 0.0;
            const double w = std::log(a);
            for (int i = 0; i < modes; ++i) logmod += amp[i] * std::cos((i + 1) * w + phase[i]);
            double k = std::exp(logmod) / (a * a);
            const double odd = odd_scale * std::pow(std::min(a / r0, 1.0), odd_power) *
                               std::exp(-a / (4.0 * r0));
            k *= (h >= 0.0 ? 1.0 + odd : 1.0 - odd);
            return k;
        };

        LinearMember m;
        m.kernel = kernel;
        // Compatible drift: full first moment over B_r0 plus a small slack.
        const double moment = shell_first_moment(kernel, 1e-6 * r0, r0);
        const double slack = (unit(rng) - 0.5) * 0.5 * params.Lambda;
        m.drift = moment + slack;
        if (std::abs(m.drift) > params.Lambda) continue;
        m.verification = verify_member(m, params);
        if (m.verification.ok()) return m;
    }
    throw std::runtime_error("random_member: rejection sampling failed");
}

std::vector<double> linear_apply(const std::vector<double>& u, double period,
                                 const LinearMember& m, const KernelClassParams& params) {
    params.validate();
    const int n = static_cast<int>(u.size());
    const double dx = period / n;
    const std::vector<double> du = spectral_derivative(u, period);
    const std::vector<double> ddu = spectral_second_derivative(u, period);
    const double shell = integrate([&](double h) { return h * h * (m.kernel(h) + m.kernel(-h)); },
                                   0.0, 2.0 * dx);
    const int kmax = n / 2;

    std::vector<double> out(n);
    for (int j = 0; j < n; ++j) {
        double acc = m.drift * du[j] + 0.5 * ddu[j] * shell;
        for (int k = 3; k <= kmax; ++k) {
            const double w = (k == 3 ? 1.5 : 1.0) * dx;
            for (int sgn : {+1, -1}) {
                const double h = sgn * k * dx;
                const double comp = std::abs(h) <= params.r0 ? du[j] * h : 0.0;
                const double delta = u[(j + sgn * k % n + n) % n] - u[j] - comp;
                acc += delta * m.kernel(h) * w;
            }
        }
        out[j] = acc;
    }
    return out;
}

std::vector<double> extremal(const std::vector<double>& u, double period,
                             const KernelClassParams& params, ExtremalSign sign) {
    params.validate();
    const int n = static_cast<int>(u.size());
    const double dx = period / n;
    const double L = params.Lambda;
    const std::vector<double> du = spectral_derivative(u, period);
    const std::vector<double> ddu = spectral_second_derivative(u, period);
    const int kmax = n / 2;

    std::vector<double> out(n);
    for (int j = 0; j < n; ++j) {
        double acc;
        if (sign == ExtremalSign::plus)
            acc = L * std::abs(du[j]) + 2.0 * dx * fplus(ddu[j], L);
        else
            acc = -L * std::abs(du[j]) + 2.0 * dx * fminus(ddu[j], L);
        for (int k = 3; k <= kmax; ++k) {
            const double w = (k == 3 ? 1.5 : 1.0) * dx;
            const double h = k * dx;
            const double d2 = u[(j + k) % n] + u[(j - k % n + n) % n] - 2.0 * u[j];
            const double f = sign == ExtremalSign::plus ? fplus(d2, L) : fminus(d2, L);
            acc += f / (h * h) * w;
        }
        out[j] = acc;
    }
    return out;
}

ScalingReport scaling_check(const std::vector<double>& u, double period, double r,
                            const KernelClassParams& params, const LinearMember& member,
                            double tolerance) {
    params.validate();
    if (!(r > 0.0) || r > 1.0) throw std::invalid_argument("scaling_check requires r in (0,1]");
    const double lg = std::log2(1.0 / r);
    if (std::abs(lg - std::nearbyint(lg)) > 1e-12)
        throw std::invalid_argument("scaling_check: r must be a power of 2 relative to dx");

    ScalingReport rep;
    rep.r = r;

    // u_r(x) = u(rx)/r on the coarse grid of period P/r (same node count).
    const int n = static_cast<int>(u.size());
    std::vector<double> ur(n);
    for (int j = 0; j < n; ++j) ur[j] = u[j] / r;
    const double coarse_period = period / r;

    const auto mp_coarse = extremal(ur, coarse_period, params, ExtremalSign::plus);
    const auto mm_coarse = extremal(ur, coarse_period, params, ExtremalSign::minus);
    const auto mp_fine = extremal(u, period, params, ExtremalSign::plus);
    const auto mm_fine = extremal(u, period, params, ExtremalSign::minus);
    for (int j = 0; j < n; ++j) {
        rep.max_identity_error_plus =
            std::max(rep.max_identity_error_plus, std::abs(mp_coarse[j] - mp_fine[j]));
        rep.max_identity_error_minus =
            std::max(rep.max_identity_error_minus, std::abs(mm_coarse[j] - mm_fine[j]));
    }

    // Rescaled member: K_r(h) = r^{n+1} K(rh), b_r = b - int_{B_r0 \ B_r} h K dh.
    LinearMember scaled;
    auto K = member.kernel;
    scaled.kernel = [K, r](double h) { return r * r * K(r * h); };
    scaled.drift = member.drift - shell_first_moment(K, r * params.r0, params.r0);
    rep.rescaled_member = verify_member(scaled, params);

    rep.pass = rep.max_identity_error_plus <= tolerance &&
               rep.max_identity_error_minus <= tolerance && rep.rescaled_member.ok();
    return rep;
}

DifferenceQuotientReport difference_quotient_check(const std::vector<TimeSlice>& slices,
                                                   double period,
                                                   const std::vector<int>& h_cells,
                                                   const KernelClassParams& params, double A,
                                                   double gamma, double tol) {
    params.validate();
    if (slices.size() < 3)
        throw std::invalid_argument("difference_quotient_check needs at least 3 snapshots");
    const int n = static_cast<int>(slices.front().values.size());
    const double dx = period / n;
    const double t0 = slices.back().t;

    DifferenceQuotientReport rep;
    rep.min_frac_sub = 1.0;
    rep.min_frac_super = 1.0;

    for (int hc : h_cells) {
        if (hc == 0 || std::abs(hc) >= n)
            throw std::invalid_argument("difference_quotient_check: bad offset");
        const double habs = std::abs(hc) * dx;
        rep.h_values.push_back(habs);

        auto quotient = [&](const TimeSlice& s) {
            std::vector<double> v(n);
            for (int j = 0; j < n; ++j)
                v[j] = (s.values[((j + hc) % n + n) % n] - s.values[j]) / habs;
            return v;
        };

        long ok_sub = 0, ok_super = 0, total = 0;
        double vmax = 0.0;
        double late_seminorm = 0.0;
        for (size_t i = 1; i + 1 < slices.size(); ++i) {
            const std::vector<double> v = quotient(slices[i]);
            const std::vector<double> vp = quotient(slices[i + 1]);
            const std::vector<double> vm = quotient(slices[i - 1]);
            const double dt2 = slices[i + 1].t - slices[i - 1].t;
            const auto mplus = extremal(v, period, params, ExtremalSign::plus);
            const auto mminus = extremal(v, period, params, ExtremalSign::minus);
            for (int j = 0; j < n; ++j) {
                const double vt = (vp[j] - vm[j]) / dt2;
                if (vt - mplus[j] <= A + tol) ++ok_sub;
                if (vt - mminus[j] >= -(A + tol)) ++ok_super;
                ++total;
                vmax = std::max(vmax, std::abs(v[j]));
            }
            if (slices[i].t >= t0 / 2)
                late_seminorm = std::max(
                    late_seminorm, seminorm(v, period, SeminormKind::holder, gamma).value);
        }
        rep.frac_sub_ok.push_back(static_cast<double>(ok_sub) / total);
        rep.frac_super_ok.push_back(static_cast<double>(ok_super) / total);
        rep.holder_seminorm.push_back(late_seminorm);
        rep.holder_reference = std::max(
            rep.holder_reference, (vmax + t0 * A) / std::pow(t0, gamma));
        rep.min_frac_sub = std::min(rep.min_frac_sub, rep.frac_sub_ok.back());
        rep.min_frac_super = std::min(rep.min_frac_super, rep.frac_super_ok.back());
    }
    return rep;
}

} // namespace helegraph
