#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace helegraph {

// Kernel-drift ellipticity class on the n = 1 interface: kernels with
// Lambda^-1 |h|^-2 <= K <= Lambda |h|^-2 and drift coupled through
// sup_rho |b - int_{B_r0 \ B_rho} h K(h) dh| <= Lambda.
struct KernelClassParams {
    double Lambda = 2.0;
    double r0 = 0.5;
    int n = 1;

    void validate() const;
};

struct MemberVerification {
    bool kernel_bounds_ok = false;
    bool drift_bound_ok = false;
    double worst_kernel_ratio = 0.0;   // max of K h^2 Lambda^{+-1} excess
    double worst_drift_defect = 0.0;   // sup over the rho ladder
    bool ok() const { return kernel_bounds_ok && drift_bound_ok; }
};

struct LinearMember {
    double drift = 0.0;
    std::function<double(double)> kernel;  // K(h), h != 0
    MemberVerification verification;
};

// Samples the class conditions on an h-ladder and a rho-ladder.
MemberVerification verify_member(const LinearMember& m, const KernelClassParams& params);

// Random verified member (deterministic in the seed); kernels are
// log-perturbed |h|^-2 profiles with a decaying odd part, drift chosen
// compatible with the coupling condition and |b| <= Lambda.
LinearMember random_member(std::uint64_t seed, const KernelClassParams& params);

// L_{K,b} u = b u' + int delta_h u K(h) dh on periodic samples; the
// |h| <= 2 dx shell is replaced by its Taylor value u''(x)/2 * int h^2 K dh.
std::vector<double> linear_apply(const std::vector<double>& u, double period,
                                 const LinearMember& m, const KernelClassParams& params);

enum class ExtremalSign { plus, minus };

// Implemented extremal representative (drift bound decoupled, kernel part in
// symmetrized second differences):
//   M+ u = Lambda |u'| + int_0^inf [Lambda (d2u)^+ - Lambda^-1 (d2u)^-] h^-2 dh
//   M- u = -Lambda |u'| + int_0^inf [Lambda^-1 (d2u)^+ - Lambda (d2u)^-] h^-2 dh
// with d2u = u(x+h) + u(x-h) - 2u(x).
std::vector<double> extremal(const std::vector<double>& u, double period,
                             const KernelClassParams& params, ExtremalSign sign);

struct ScalingReport {
    double r = 1.0;
    double max_identity_error_plus = 0.0;   // |M+(u_r)(x) - M+(u)(rx)| sup
    double max_identity_error_minus = 0.0;
    MemberVerification rescaled_member;      // class conditions after rescaling
    bool pass = false;
};

// u lives on a fine grid of the given period; u_r(x) = u(rx)/r is formed on
// the matching coarse grid (r must be a power of 2). Also rescales a sampled
// member (K_r(h) = r^2 K(rh), b_r = b - int_{B_r0 \ B_r} h K dh) and
// re-verifies the class conditions.
ScalingReport scaling_check(const std::vector<double>& u, double period, double r,
                            const KernelClassParams& params, const LinearMember& member,
                            double tolerance = 1e-4);

struct TimeSlice {
    double t = 0.0;
    std::vector<double> values;
};

struct DifferenceQuotientReport {
    std::vector<double> h_values;        // physical offsets
    std::vector<double> frac_sub_ok;     // share of nodes with dt v - M+ v <= A + tol
    std::vector<double> frac_super_ok;   // share with dt v - M- v >= -(A + tol)
    std::vector<double> holder_seminorm; // [v_h]_{C^gamma} over the late window
    double holder_reference = 0.0;       // C/t0^gamma (||u||_inf + t0 A) form, C = 1
    double min_frac_sub = 0.0, min_frac_super = 0.0;
};

// Difference-quotient regularity harness: builds v_h = (u(x+h,t)-u(x,t))/|h|
// from trajectory slices, forms centered time differences at interior
// snapshots and checks the extremal sub/supersolution inequalities.
DifferenceQuotientReport difference_quotient_check(const std::vector<TimeSlice>& slices,
                                                   double period,
                                                   const std::vector<int>& h_cells,
                                                   const KernelClassParams& params, double A,
                                                   double gamma, double tol);

} // namespace helegraph
