#pragma once

#include <memory>
#include <string>
#include <vector>

#include "helegraph/interface.hpp"

namespace helegraph {

enum class Phase { plus, minus };
enum class BoundaryEdge { gamma_plus, gamma_minus };

// Constant symmetric positive definite 2x2 diffusion matrix for the minus phase.
struct SpdMatrix2 {
    double a11 = 1.0;
    double a12 = 0.0;
    double a22 = 1.0;

    bool is_spd() const { return a11 > 0.0 && a11 * a22 - a12 * a12 > 0.0; }
    static SpdMatrix2 identity() { return {1.0, 0.0, 1.0}; }
};

// Divergence-form problem -div(A(xi,eta) grad V) = source on the flattened
// phase rectangle [0,P) x [0,1], periodic in xi, Dirichlet at eta = 0, 1.
// Nodes: i = 0..nx-1 (periodic), j = 0..ny (rows j=0 and j=ny are boundary).
struct TransformedProblem {
    Phase phase = Phase::plus;
    int nx = 0, ny = 0;
    double period = 0.0;

    // Nodal coefficient fields, row-major, (ny+1) rows of nx values.
    std::vector<double> a11, a12, a22;
    std::vector<double> source;            // nodal, transformed density
    std::vector<double> dirichlet_bottom;  // eta = 0, size nx
    std::vector<double> dirichlet_top;     // eta = 1, size nx

    // Flattening metadata.
    std::vector<double> f_samples;
    std::vector<double> f_gradient;
    std::vector<double> thickness;  // f (plus) or L - f (minus), per column
    double strip_height = 0.0;

    double lambda_T = 0.0, Lambda_T = 0.0;  // nodal ellipticity bounds

    int idx(int i, int j) const { return j * nx + i; }
    double dxi() const { return period / nx; }
    double deta() const { return 1.0 / ny; }
    BoundaryEdge gamma_edge() const {
        return phase == Phase::plus ? BoundaryEdge::gamma_plus : BoundaryEdge::gamma_minus;
    }
};

struct SolveOptions {
    // automatic: the Fourier path when the coefficients are constant along x
    // (flat interfaces), otherwise sparse direct up to direct_unknown_cap
    // unknowns and Krylov+ILU above.
    enum class Method { automatic, direct, krylov, fourier } method = Method::automatic;
    double tol = 1e-10;
    int max_iterations = 2000;
    int direct_unknown_cap = 1 << 18;
};

struct SolveError : std::runtime_error {
    explicit SolveError(const std::string& what, std::vector<double> history = {})
        : std::runtime_error(what), residual_history(std::move(history)) {}
    std::vector<double> residual_history;
};

struct BulkSolution {
    std::vector<double> values;  // full grid incl. Dirichlet rows, (ny+1) x nx
    double residual_norm = 0.0;  // relative algebraic residual
    // Max-principle audit: how far the solution exceeds the range of the
    // boundary data (0 when the source term is nonzero, where it does not apply).
    double max_principle_violation = 0.0;
    std::shared_ptr<const TransformedProblem> problem;

    double value(int i, int j) const { return values[problem->idx(i, j)]; }
};

// Monotonicity audit of the assembled 9-point operator: positive off-diagonal
// entries break the M-matrix property; they are reported, not fatal.
struct MonotonicityAudit {
    long positive_offdiagonals = 0;
    double max_positive_entry = 0.0;
    double tolerance = 0.0;
    bool clean() const { return positive_offdiagonals == 0; }
};

// Exact pushforward of the constant-coefficient operator under the
// vertical-scaling flattening:
//   plus:  (x, y) -> (x, y / f(x)),             Laplacian
//   minus: (x, y) -> (x, (y - f(x))/(L - f(x))), tr(A2 D^2) in divergence form
// Requires f strictly inside (0, L) with margin and, for minus, A2 SPD.
TransformedProblem flatten(const GraphInterface& f, Phase phase,
                           const SpdMatrix2& A2 = SpdMatrix2::identity(), int ny = 0,
                           double margin = 1e-9);

// Coefficient values of the pushforward at an arbitrary point (used by the
// chain-rule oracle test): fval/fgrad are f(xi), f'(xi).
struct CoefficientTriple {
    double a11, a12, a22;
};
CoefficientTriple flatten_coefficients(Phase phase, const SpdMatrix2& A2, double strip_height,
                                       double fval, double fgrad, double eta);

MonotonicityAudit audit_monotonicity(const TransformedProblem& p, double tolerance = 1e-13);

BulkSolution solve_bulk(const TransformedProblem& p, const SolveOptions& opt = {});

// Process-wide high-water mark of the max-principle audit over every
// zero-source solve since the last reset.
double max_principle_high_water();
void reset_max_principle_high_water();

// One-sided normal derivative on Gamma_f in the sign convention where both
// phases of a class-K configuration yield positive flux. 3-point one-sided
// differences in eta plus one Richardson step, times the exact metric factor.
std::vector<double> boundary_flux(const BulkSolution& u, BoundaryEdge edge);

// Bulk solve with indicator boundary data on Gamma (1 on indicated nodes,
// 0 elsewhere on Gamma and on the fixed boundary).
BulkSolution harmonic_measure(const GraphInterface& f, const std::vector<char>& indicator,
                              Phase phase, int ny = 0, const SolveOptions& opt = {},
                              const SpdMatrix2& A2 = SpdMatrix2::identity());

// Homogeneous-Dirichlet solve with a discrete delta load (unit integral
// against the transformed cell measure) at interior node (i, j).
BulkSolution greens_function(const GraphInterface& f, int source_i, int source_j, Phase phase,
                             int ny = 0, const SolveOptions& opt = {},
                             const SpdMatrix2& A2 = SpdMatrix2::identity());

// Evaluate a bulk solution at physical coordinates (x, y) by bilinear
// interpolation on the flattened rectangle.
double sample_solution(const BulkSolution& u, double x, double y);

// Physical location of the transformed node (i, j).
struct PhysicalPoint {
    double x, y;
};
PhysicalPoint node_location(const TransformedProblem& p, int i, int j);
// Distance of the node to the domain boundary (bottom wall + Gamma for plus;
// Gamma + top wall for minus), measured in physical coordinates.
double node_boundary_distance(const TransformedProblem& p, int i, int j);

struct GrowthReport {
    std::vector<double> s_values;
    std::vector<double> ratios;  // U(X0 + s nu)/s
    double ratio_min = 0.0, ratio_max = 0.0;
    bool positive = false;
};

// Samples U_f along the inward normal at a Gamma node over a geometric ladder
// s in [s_min, s_max] and reports bounds on U(X0 + s nu)/s.
GrowthReport linear_growth_check(const GraphInterface& f, int x0_index, double s_min,
                                 double s_max, int n_samples = 12, int ny = 0,
                                 const SolveOptions& opt = {});

} // namespace helegraph
