#include "helegraph/evolution.hpp"

#include <cmath>
#include <stdexcept>

namespace helegraph {

namespace {

DiagnosticsRecord diagnose(double t, const GraphInterface& f, const ClassKParams& k,
                           const EvolveOptions& opt) {
    DiagnosticsRecord rec;
    rec.t = t;
    rec.min_f = f.min_value();
    rec.max_f = f.max_value();
    rec.lip = seminorm(f, SeminormKind::lipschitz).value;
    const auto& grad = f.gradient(opt.dtn.gradient);
    for (double gamma : opt.holder_gammas)
        rec.holder_grad.push_back(
            seminorm(grad, f.period(), SeminormKind::holder, gamma).value);
    rec.class_k_member = class_k_check(f, k, opt.dtn.gradient).member;
    return rec;
}

bool finite(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

bool margin_ok(const GraphInterface& f, const ClassKParams& k) {
    return f.min_value() > k.delta / 2 && f.max_value() < k.strip_height - k.delta / 2;
}

} // namespace

double cfl_dt(const GraphInterface& f, const BoundaryLaw& law, double cfl,
              const ClassKParams& k, double dt_max) {
    if (!(cfl > 0.0) || cfl > 1.0) throw std::invalid_argument("cfl must lie in (0, 1]");
    const double w0 = 2.0 * M_PI / f.period();
    double S = 0.0;
    for (int m = 1; m <= f.nx() / 2; ++m) {
        const double xi = w0 * m;
        S = std::max(S, xi / (std::tanh(k.delta * xi) * k.delta) * law.Lambda);
    }
    return std::min(cfl * f.dx() / S, dt_max);
}

FlowState step(const FlowState& state, double dt, const BoundaryLaw& law,
               const ClassKParams& k, const EvolveOptions& opt) {
    if (!(dt > 0.0)) throw std::invalid_argument("step requires dt > 0");

    double dt_try = dt;
    for (int attempt = 0; attempt <= opt.max_halvings; ++attempt, dt_try *= 0.5) {
        VelocityField v1;
        try {
            v1 = velocity(state.f, law, opt.dtn);
        } catch (const SolveError&) {
            continue;
        }
        if (!finite(v1.values)) continue;

        std::vector<double> mid(state.f.samples());
        for (size_t j = 0; j < mid.size(); ++j) mid[j] += dt_try * v1.values[j];
        GraphInterface f_mid = state.f.with_samples(mid);
        if (!margin_ok(f_mid, k)) continue;

        VelocityField v2;
        try {
            v2 = velocity(f_mid, law, opt.dtn);
        } catch (const SolveError&) {
            continue;
        }
        if (!finite(v2.values)) continue;

        std::vector<double> next(state.f.samples());
        for (size_t j = 0; j < next.size(); ++j)
            next[j] = 0.5 * (state.f.samples()[j] + mid[j] + dt_try * v2.values[j]);
        GraphInterface f_next = state.f.with_samples(next);
        if (!margin_ok(f_next, k)) continue;

        FlowState out;
        out.t = state.t + dt_try;
        out.f = std::move(f_next);
        out.last_velocity = std::move(v2);
        out.diagnostics = diagnose(out.t, out.f, k, opt);
        return out;
    }
    throw StepRejected("step: persistent rejection after max halvings", state);
}

Trajectory evolve(const GraphInterface& f0, const BoundaryLaw& law, double T,
                  double output_cadence, const ClassKParams& k, const EvolveOptions& opt) {
    {
        const ClassKReport rep = class_k_check(f0, k, opt.dtn.gradient);
        if (!rep.member && opt.dtn.enforce_class_k)
            throw std::invalid_argument("evolve: initial data outside class K");
    }

    Trajectory traj;
    FlowState state;
    state.t = 0.0;
    state.f = f0;
    state.diagnostics = diagnose(0.0, f0, k, opt);
    traj.snapshots.push_back(state);
    traj.series.push_back(state.diagnostics);

    double next_output = output_cadence;
    while (state.t < T - 1e-14) {
        double dt = cfl_dt(state.f, law, opt.cfl, k, opt.dt_max);
        dt = std::min(dt, T - state.t);
        state = step(state, dt, law, k, opt);
        traj.series.push_back(state.diagnostics);
        if (state.t >= next_output - 1e-14 || state.t >= T - 1e-14) {
            traj.snapshots.push_back(state);
            while (next_output <= state.t + 1e-14) next_output += output_cadence;
        }
    }

    // [grad f]_{C^gamma} over the late window [T/2, T].
    traj.late_window_holder.assign(opt.holder_gammas.size(), 0.0);
    for (const auto& snap : traj.snapshots) {
        if (snap.t < T / 2 - 1e-14) continue;
        for (size_t g = 0; g < opt.holder_gammas.size(); ++g)
            traj.late_window_holder[g] =
                std::max(traj.late_window_holder[g], snap.diagnostics.holder_grad[g]);
    }

    // Trend fit ||f||_{C^{1,gamma}} ~ t^{-gamma_hat} over t in [T/4, T].
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (const auto& rec : traj.series) {
        if (rec.t < T / 4 || rec.t <= 0.0) continue;
        const double norm = std::max(std::abs(rec.min_f), std::abs(rec.max_f)) + rec.lip +
                            rec.holder_grad.front();
        const double lx = std::log(rec.t), ly = std::log(norm);
        sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
        ++n;
    }
    if (n >= 2) {
        const double denom = n * sxx - sx * sx;
        if (std::abs(denom) > 0.0) traj.fitted_gamma_hat = -(n * sxy - sx * sy) / denom;
    }
    return traj;
}

} // namespace helegraph
