#pragma once

#include <vector>

#include "helegraph/dtn.hpp"
#include "helegraph/interface.hpp"

namespace helegraph {

struct DiagnosticsRecord {
    double t = 0.0;
    double min_f = 0.0;
    double max_f = 0.0;
    double lip = 0.0;
    std::vector<double> holder_grad;  // [grad f]_{C^gamma} per configured gamma
    bool class_k_member = false;
};

struct FlowState {
    double t = 0.0;
    GraphInterface f;
    VelocityField last_velocity;
    DiagnosticsRecord diagnostics;
};

struct EvolveOptions {
    double cfl = 0.5;
    double dt_max = 1e-2;
    std::vector<double> holder_gammas{0.1, 0.25, 0.5};
    int max_halvings = 8;
    DtnOptions dtn;
};

struct StepRejected : std::runtime_error {
    StepRejected(const std::string& what, FlowState last)
        : std::runtime_error(what), last_valid(std::move(last)) {}
    FlowState last_valid;
};

// Conservative linearized speed: dt = cfl * dx / S with
// S = max over resolved modes of |xi| coth(delta |xi|)/delta * Lambda,
// capped at dt_max.
double cfl_dt(const GraphInterface& f, const BoundaryLaw& law, double cfl,
              const ClassKParams& k, double dt_max);

// One SSP-RK2 step; halves dt and retries (up to max_halvings) when the
// class-K margin delta/2 is violated or the velocity is not finite.
FlowState step(const FlowState& state, double dt, const BoundaryLaw& law,
               const ClassKParams& k, const EvolveOptions& opt);

struct Trajectory {
    std::vector<FlowState> snapshots;
    std::vector<DiagnosticsRecord> series;  // one record per accepted step
    // Trend fit of ||f||_{C^{1,gamma}} ~ t^{-gamma_hat} over the second half
    // of the run, for gamma = holder_gammas.front().
    double fitted_gamma_hat = 0.0;
    // max over snapshots in [T/2, T] of [grad f]_{C^gamma}, per gamma.
    std::vector<double> late_window_holder;
};

Trajectory evolve(const GraphInterface& f0, const BoundaryLaw& law, double T,
                  double output_cadence, const ClassKParams& k, const EvolveOptions& opt);

} // namespace helegraph
