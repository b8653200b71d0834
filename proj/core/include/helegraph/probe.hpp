#pragma once

#include <cstdint>
#include <vector>

#include "helegraph/dtn.hpp"
#include "helegraph/interface.hpp"

namespace helegraph {

// C^2 compactly supported bump profile (quartic spline):
//   eta(t) = (1-|t|)^3 (1+3|t|) on [-1,1], 0 outside; eta(0)=1.
double bump_profile(double t);
// C^2 radial plateau, 1 on [0,1/2], 0 outside [0,1] (quintic smoothstep edge).
double plateau_profile(double t);

// Bump psi(x) = A * eta((x - center)/width), support excluding a 2*dx
// neighborhood of the probe point x=0.
struct BumpSpec {
    double center = 0.5;
    double width = 0.1;
    double amplitude = 1.0;

    std::vector<double> sample(const PeriodicGrid& g) const;
    double mass() const { return 0.8 * amplitude * width; }  // exact integral of the spline
    void validate(const PeriodicGrid& g) const;
};

// Flat-strip oracles (separation of variables on the flat state).
// One-phase linearization symbol: m(xi) = |xi| coth(c |xi|) / c; the measured
// response to an eps*cos(xi x) perturbation is -m(xi).
double flat_symbol_one_phase(double xi, double c);
// Difference law with A2 = Id adds the minus-phase part.
double flat_symbol(const BoundaryLaw& law, double c, double strip_height, double xi);
// Levy density of the flat one-phase linearization (inverse Fourier transform
// of m(xi) - m(0)): K_c(h) = (pi / (4 c^3)) / sinh^2(pi h / (2c)).
double flat_kernel_one_phase(double h, double c);
// Same density by direct regularized quadrature of the symbol; used as the
// derivation cross-check of the closed form.
double flat_kernel_one_phase_quadrature(double h, double c);
double flat_kernel(const BoundaryLaw& law, double h, double c, double strip_height);

struct ProbeOptions {
    double eps = 1e-3;          // finite-difference step in the bump direction
    double defect_tol = 0.05;   // Richardson defect gate
    int x0_index = 0;           // probe evaluation node (x = 0 by default)
    DtnOptions dtn;
};

struct ExtractedKernel {
    std::vector<double> h_samples;
    std::vector<double> K_values;
    std::vector<double> richardson_defect;
    double drift_estimate = 0.0;       // b reconstructed from the odd probe
    double zero_order_estimate = 0.0;  // c = l(1), the constant-shift response
    double R0 = 0.0;
    double eps = 0.0;
    double C_lower = 0.0;  // min of K(h) h^2 over the fit window
    double C_upper = 0.0;  // max of K(h) h^2 over the fit window
    bool all_positive = false;
};

// Centered finite-difference linearization of H at f in direction psi,
// evaluated at the probe node: l(psi) = [H(f+eps psi) - H(f-eps psi)]/(2 eps),
// with one Richardson step (eps, eps/2). defect returns the relative
// quadratic-in-eps defect between the two centered estimates.
double probe_functional(const GraphInterface& f, const BoundaryLaw& law,
                        const std::vector<double>& psi, const ProbeOptions& opt,
                        double* defect = nullptr);

ExtractedKernel probe_kernel(const GraphInterface& f, const BoundaryLaw& law,
                             const std::vector<BumpSpec>& bumps, double R0,
                             const ProbeOptions& opt);

struct SandwichReport {
    // One entry per bump: measured difference H(f+psi)-H(f) at the probe node,
    // the exact integral of psi |y|^-2, and the two sandwich ratios.
    std::vector<double> differences;
    std::vector<double> integrals;
    double C_lower = 0.0;  // max over bumps of integral/difference
    double C_upper = 0.0;  // max over bumps of difference/integral
    bool all_positive = false;
};

SandwichReport bump_sandwich_test(const GraphInterface& f, const BoundaryLaw& law,
                                  const std::vector<BumpSpec>& bumps, const ProbeOptions& opt);

struct ShiftReport {
    std::vector<double> eps_values;
    std::vector<double> worst_plus_increase;   // max_x (i+(f+eps) - i+(f)), should be <= tol
    std::vector<double> worst_minus_decrease;  // max_x (i-(f) - i-(f+eps)), should be <= tol
    double C = 0.0;  // max over eps of max_x (i+(f) - i+(f+eps))/eps
    bool monotone = false;
};

ShiftReport constant_shift_test(const GraphInterface& f, const BoundaryLaw& law,
                                const std::vector<double>& eps_list, const ProbeOptions& opt);

struct RotationReport {
    std::vector<double> tilts;       // |grad psi(0)| per trial
    std::vector<double> measured;    // |H(f+psi,0) - H(f,0)|
    std::vector<double> bound_rhs;   // C-normalized right side |grad psi(0)| + eps2 ||psi||
    double C = 0.0;                  // max measured / rhs
};

// Tilted perturbations psi(x) = s sin(2 pi x / P) (psi(0)=0, grad psi(0)=s).
RotationReport rotation_estimate_test(const GraphInterface& f, const BoundaryLaw& law,
                                      const std::vector<double>& tilt_list, double eps2,
                                      const ProbeOptions& opt);

struct DriftReport {
    std::vector<double> tau_values, r_values;
    // M(tau, r) = l(phi_{tau,r}) / tau, row-major over (tau, r).
    std::vector<double> normalized;
    double C = 0.0;                   // max |M|
    double compensation_spread = 0.0; // max_r M - min_r M at the largest tau
};

// phi_{tau,r}(y) = tau r phi(y/r), phi(y) = y * plateau(|y|); the normalized
// probe M approximates b - int_{B_{r0} \ B_r} h K(h) dh up to a bounded term.
DriftReport probe_drift(const GraphInterface& f, const BoundaryLaw& law,
                        const std::vector<double>& tau_over_r,
                        const std::vector<double>& r_list, const ProbeOptions& opt);

struct GcpReport {
    int pairs = 0;
    int violations = 0;
    double worst_violation = 0.0;  // max over pairs of H(f,x0) - H(g,x0)
    double tolerance = 0.0;
};

// Randomized ordered pairs f <= g touching at a node with matching gradients
// (g = f + nonnegative bumps supported away from x0).
GcpReport gcp_test(std::uint64_t seed, const BoundaryLaw& law, int n_pairs, int nx, int ny,
                   const ClassKParams& k, double tolerance);

struct DecayReport {
    std::vector<double> R_values;
    std::vector<double> sup_differences;  // sup over B_R of |H(f)-H(g_R)|
    double alpha = 0.0;                   // fitted log-log slope
};

// For each R, g_R = f + bump supported outside B_{2R} (width scaling with R);
// measures sup_{B_R} |H(f) - H(g_R)| and fits the decay exponent.
DecayReport decay_test(const GraphInterface& f_base, const BoundaryLaw& law,
                       const std::vector<double>& R_list, double bump_amplitude,
                       const ProbeOptions& opt);

struct SymbolRow {
    double xi = 0.0;
    double measured = 0.0;
    double oracle = 0.0;
    double rel_error = 0.0;
};

// Perturbs the flat state by eps cos(xi x) and measures the linear response
// coefficient against the separation-of-variables oracle.
std::vector<SymbolRow> symbol_check(double c, double strip_height, const BoundaryLaw& law,
                                    const std::vector<double>& xi_list, int nx, int ny,
                                    double period, const ProbeOptions& opt);

} // namespace helegraph
