#include "helegraph/whitney.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

namespace helegraph {

namespace {

double smoothstep(double s) {  // quintic, C^2 at both ends
    s = std::clamp(s, 0.0, 1.0);
    return s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
}

// C^2 cut: 1 for |t| <= 1/2, 0 for |t| >= 9/16 (support factor 9/8).
double edge(double t) {
    const double a = std::abs(t);
    if (a <= 0.5) return 1.0;
    if (a >= 9.0 / 16.0) return 0.0;
    return smoothstep((9.0 / 16.0 - a) * 16.0);
}

std::int64_t grid_key(const std::array<long long, 2>& k, int N) {
    const long long base = 1LL << 40;
    return k[0] + (N > 1 ? base * k[1] : 0);
}

} // namespace

double WhitneyCube::diam() const { return side * std::sqrt(static_cast<double>(N)); }

VecN WhitneyCube::lo() const {
    VecN v{0.0, 0.0};
    for (int d = 0; d < N; ++d) v[d] = center[d] - side / 2;
    return v;
}

VecN WhitneyCube::hi() const {
    VecN v{0.0, 0.0};
    for (int d = 0; d < N; ++d) v[d] = center[d] + side / 2;
    return v;
}

WhitneyDecomposition::WhitneyDecomposition(int m, int N)
    : m_(m), N_(N), h_(std::ldexp(1.0, -m)), window_(std::ldexp(1.0, m)) {}

WhitneyDecomposition WhitneyDecomposition::build(int m, int N) {
    if (N != 1 && N != 2) throw std::invalid_argument("whitney: N must be 1 or 2");
    if (m < 0 || (N == 1 && m > 12) || (N == 2 && m > 7))
        throw std::invalid_argument("whitney: level cap exceeded");
    return WhitneyDecomposition(m, N);
}

bool WhitneyDecomposition::on_grid(const VecN& x) const {
    for (int d = 0; d < N_; ++d)
        if (x[d] != std::nearbyint(x[d] / h_) * h_) return false;
    return true;
}

double WhitneyDecomposition::cube_grid_distance(const WhitneyCube& q) const {
    // The lattice is a product set, so the box distance separates per axis.
    double s2 = 0.0;
    for (int d = 0; d < N_; ++d) {
        const double lo = q.center[d] - q.side / 2;
        const double hi = q.center[d] + q.side / 2;
        const double klo = std::floor(hi / h_);
        const double khi = std::ceil(lo / h_);
        double dd = 0.0;
        if (klo * h_ >= lo) {
            dd = 0.0;  // a lattice coordinate inside the interval
        } else {
            dd = std::min(lo - klo * h_, khi * h_ - hi);
        }
        s2 += dd * dd;
    }
    return std::sqrt(s2);
}

namespace {

// Squared distance from a dyadic box to the lattice, exact in doubles.
double box_grid_dist2(const VecN& clo, const VecN& chi, double h, int N) {
    double s2 = 0.0;
    for (int d = 0; d < N; ++d) {
        const double klo = std::floor(chi[d] / h);
        double dd;
        if (klo * h >= clo[d]) {
            dd = 0.0;
        } else {
            dd = std::min(clo[d] - klo * h, (klo + 1.0) * h - chi[d]);
        }
        s2 += dd * dd;
    }
    return s2;
}

} // namespace

bool WhitneyDecomposition::is_selected(const WhitneyCube& q) const {
    if (q.generation < 1) return false;
    const VecN lo = q.lo(), hi = q.hi();
    const double d2 = box_grid_dist2(lo, hi, h_, N_);
    const double diam2 = static_cast<double>(N_) * q.side * q.side;
    if (diam2 > d2) return false;
    // parent must fail the same test (maximality)
    WhitneyCube parent;
    parent.N = N_;
    parent.generation = q.generation - 1;
    parent.side = q.side * 2;
    for (int d = 0; d < N_; ++d) {
        const double cell = std::floor(q.center[d] / parent.side);
        parent.center[d] = (cell + 0.5) * parent.side;
    }
    const double pd2 = box_grid_dist2(parent.lo(), parent.hi(), h_, N_);
    const double pdiam2 = static_cast<double>(N_) * parent.side * parent.side;
    return pdiam2 > pd2;
}

WhitneyCube WhitneyDecomposition::locate(const VecN& x) const {
    if (on_grid(x)) throw std::invalid_argument("whitney locate: point lies on G_m");
    WhitneyCube q;
    q.N = N_;
    for (int g = 1; g <= 60; ++g) {
        q.generation = g;
        q.side = std::ldexp(h_, -g);
        for (int d = 0; d < N_; ++d)
            q.center[d] = (std::floor(x[d] / q.side) + 0.5) * q.side;
        const double d2 = box_grid_dist2(q.lo(), q.hi(), h_, N_);
        if (static_cast<double>(N_) * q.side * q.side <= d2) {
            // nearest grid point to the center; no ties for generation >= 2
            for (int d = 0; d < N_; ++d)
                q.nearest_grid[d] = std::nearbyint(q.center[d] / h_) * h_;
            return q;
        }
    }
    throw std::invalid_argument("whitney locate: point too close to G_m");
}

double WhitneyDecomposition::bump(const WhitneyCube& q, const VecN& x) const {
    double v = 1.0;
    for (int d = 0; d < q.N; ++d) v *= edge((x[d] - q.center[d]) / q.side);
    return v;
}

std::vector<WhitneyCube> WhitneyDecomposition::overlapping(const VecN& x) const {
    const WhitneyCube home = locate(x);
    std::vector<WhitneyCube> out;
    for (int g = std::max(1, home.generation - 4); g <= home.generation + 4; ++g) {
        const double side = std::ldexp(h_, -g);
        std::array<long long, 2> base{0, 0};
        for (int d = 0; d < N_; ++d) base[d] = static_cast<long long>(std::floor(x[d] / side));
        const int reach = 2;
        std::array<long long, 2> off{0, 0};
        for (off[0] = -reach; off[0] <= reach; ++off[0]) {
            for (off[1] = N_ > 1 ? -reach : 0; off[1] <= (N_ > 1 ? reach : 0); ++off[1]) {
                WhitneyCube q;
                q.N = N_;
                q.generation = g;
                q.side = side;
                for (int d = 0; d < N_; ++d) q.center[d] = (base[d] + off[d] + 0.5) * side;
                bool inside = true;
                for (int d = 0; d < N_; ++d)
                    inside = inside && std::abs(x[d] - q.center[d]) < (9.0 / 16.0) * side;
                if (!inside || !is_selected(q)) continue;
                for (int d = 0; d < N_; ++d)
                    q.nearest_grid[d] = std::nearbyint(q.center[d] / h_) * h_;
                out.push_back(q);
            }
        }
    }
    return out;
}

std::vector<double> WhitneyDecomposition::partition_values(
    const VecN& x, const std::vector<WhitneyCube>& cubes) const {
    std::vector<double> w(cubes.size());
    double total = 0.0;
    for (size_t i = 0; i < cubes.size(); ++i) {
        w[i] = bump(cubes[i], x);
        total += w[i];
    }
    if (!(total > 0.0))
        throw std::invalid_argument("whitney partition: no covering cube at x");
    for (double& v : w) v /= total;
    return w;
}

std::vector<WhitneyCube> WhitneyDecomposition::enumerate(const VecN& lo, const VecN& hi,
                                                         int max_generation) const {
    std::vector<WhitneyCube> out;
    std::array<long long, 2> c0{0, 0}, c1{0, 0};
    for (int d = 0; d < N_; ++d) {
        c0[d] = static_cast<long long>(std::floor(lo[d] / h_));
        c1[d] = static_cast<long long>(std::ceil(hi[d] / h_)) - 1;
    }
    std::function<void(const WhitneyCube&)> descend = [&](const WhitneyCube& q) {
        bool meets = true;
        for (int d = 0; d < N_; ++d)
            meets = meets && q.center[d] + q.side / 2 > lo[d] && q.center[d] - q.side / 2 < hi[d];
        if (!meets) return;
        if (q.generation >= 1 && is_selected(q)) {
            WhitneyCube sel = q;
            for (int d = 0; d < N_; ++d)
                sel.nearest_grid[d] = std::nearbyint(sel.center[d] / h_) * h_;
            out.push_back(sel);
            return;
        }
        if (q.generation >= max_generation) return;
        const double child = q.side / 2;
        std::array<int, 2> o{0, 0};
        for (o[0] = 0; o[0] < 2; ++o[0]) {
            for (o[1] = 0; o[1] < (N_ > 1 ? 2 : 1); ++o[1]) {
                WhitneyCube qc;
                qc.N = N_;
                qc.generation = q.generation + 1;
                qc.side = child;
                for (int d = 0; d < N_; ++d)
                    qc.center[d] = q.center[d] + (o[d] - 0.5) * child;
                descend(qc);
            }
        }
    };
    std::array<long long, 2> cell{0, 0};
    for (cell[0] = c0[0]; cell[0] <= c1[0]; ++cell[0]) {
        for (cell[1] = c0[1]; cell[1] <= (N_ > 1 ? c1[1] : c0[1]); ++cell[1]) {
            WhitneyCube root;
            root.N = N_;
            root.generation = 0;
            root.side = h_;
            for (int d = 0; d < N_; ++d) root.center[d] = (cell[d] + 0.5) * h_;
            descend(root);
        }
    }
    return out;
}

GridSamples::GridSamples(std::function<double(const VecN&)> source, int m, int N)
    : source_(std::move(source)), m_(m), N_(N), h_(std::ldexp(1.0, -m)),
      window_(std::ldexp(1.0, m)) {
    if (N != 1 && N != 2) throw std::invalid_argument("grid samples: N must be 1 or 2");
}

bool GridSamples::in_window(const VecN& p) const {
    double r2 = 0.0;
    for (int d = 0; d < N_; ++d) r2 += p[d] * p[d];
    return r2 <= window_ * window_;
}

double GridSamples::value(const VecN& p) const {
    std::array<long long, 2> k{0, 0};
    for (int d = 0; d < N_; ++d) k[d] = llround(p[d] / h_);
    const std::int64_t key = grid_key(k, N_);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    VecN q{0.0, 0.0};
    for (int d = 0; d < N_; ++d) q[d] = k[d] * h_;
    const double v = in_window(q) ? source_(q) : 0.0;
    memo_.emplace(key, v);
    return v;
}

VecN discrete_gradient(const GridSamples& g, const VecN& x) {
    VecN grad{0.0, 0.0};
    const double h = g.grid_size();
    if (!g.in_window(x))
        throw std::invalid_argument("discrete_gradient: point outside window");
    for (int d = 0; d < g.dim(); ++d) {
        VecN xp = x, xm = x;
        xp[d] += h;
        xm[d] -= h;
        if (!g.in_window(xp) || !g.in_window(xm))
            throw std::invalid_argument("discrete_gradient: neighbor outside window");
        grad[d] = (g.value(xp) - g.value(xm)) / (2.0 * h);
    }
    return grad;
}

namespace {

// Gradient used inside E1: truncated values, no window error (matches the
// truncation convention of the extension itself).
VecN truncated_gradient(const GridSamples& g, const VecN& x) {
    VecN grad{0.0, 0.0};
    const double h = g.grid_size();
    for (int d = 0; d < g.dim(); ++d) {
        VecN xp = x, xm = x;
        xp[d] += h;
        xm[d] -= h;
        grad[d] = (g.value(xp) - g.value(xm)) / (2.0 * h);
    }
    return grad;
}

} // namespace

double extend0(const GridSamples& g, const WhitneyDecomposition& w, const VecN& x) {
    if (w.on_grid(x)) return g.value(x);
    const auto cubes = w.overlapping(x);
    const auto phi = w.partition_values(x, cubes);
    double v = 0.0;
    for (size_t i = 0; i < cubes.size(); ++i) v += g.value(cubes[i].nearest_grid) * phi[i];
    return v;
}

double extend1(const GridSamples& g, const WhitneyDecomposition& w, const VecN& x) {
    if (w.on_grid(x)) return g.value(x);
    const auto cubes = w.overlapping(x);
    const auto phi = w.partition_values(x, cubes);
    double v = 0.0;
    for (size_t i = 0; i < cubes.size(); ++i) {
        const VecN& yhat = cubes[i].nearest_grid;
        const VecN grad = truncated_gradient(g, yhat);
        double p = g.value(yhat);
        for (int d = 0; d < w.dim(); ++d) p += grad[d] * (x[d] - yhat[d]);
        v += p * phi[i];
    }
    return v;
}

EvalFn project(const EvalFn& f, int m, int N) {
    auto samples = std::make_shared<GridSamples>(f, m, N);
    auto w = std::make_shared<WhitneyDecomposition>(WhitneyDecomposition::build(m, N));
    return [samples, w](const VecN& x) { return extend1(*samples, *w, x); };
}

OperatorFn approximate(const OperatorFn& J, int m, int N) {
    return [J, m, N](const EvalFn& f, const VecN& x) {
        EvalFn pf = project(f, m, N);
        auto jval = std::make_shared<GridSamples>(
            [J, pf](const VecN& p) { return J(pf, p); }, m, N);
        auto w = std::make_shared<WhitneyDecomposition>(WhitneyDecomposition::build(m, N));
        return extend0(*jval, *w, x);
    };
}

double truncated_half_laplacian(const EvalFn& g, const VecN& x, double R0, int N) {
    // Graded geometric mesh in |h|, second differences so the gradient
    // compensator drops out.
    const double h_min = 1e-5 * R0;
    const double ratio = 1.06;
    double acc = 0.0;
    if (N == 1) {
        auto second_diff = [&](double r) {
            VecN xp = x, xm = x;
            xp[0] += r;
            xm[0] -= r;
            return g(xp) + g(xm) - 2.0 * g(x);
        };
        double a = h_min;
        while (a < R0) {
            const double b = std::min(a * ratio, R0);
            const double rm = 0.5 * (a + b);
            acc += 0.5 * second_diff(rm) / (rm * rm) * (b - a);
            a = b;
        }
        return acc;
    }
    const int n_theta = 16;  // integrand is smooth in angle
    for (int t = 0; t < n_theta; ++t) {
        const double theta = M_PI * (t + 0.5) / n_theta;  // half circle + pairing
        const double cx = std::cos(theta), sy = std::sin(theta);
        double a = h_min;
        while (a < R0) {
            const double b = std::min(a * ratio, R0);
            const double rm = 0.5 * (a + b);
            VecN xp = x, xm = x;
            xp[0] += rm * cx;
            xp[1] += rm * sy;
            xm[0] -= rm * cx;
            xm[1] -= rm * sy;
            const double d2 = g(xp) + g(xm) - 2.0 * g(x);
            // |h|^{-N-1} = r^{-3}; area element r dr dtheta; pairing gives 1/2
            acc += 0.5 * d2 / (rm * rm) * (b - a) * (M_PI / n_theta);
            a = b;
        }
    }
    return acc;
}

} // namespace helegraph
