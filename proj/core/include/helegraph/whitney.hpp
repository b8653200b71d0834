#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <unordered_map>
#include <vector>

namespace helegraph {

// Finite-dimensional approximation machinery on the dyadic grids
// G_m = 2^-m Z^N, N in {1, 2}: Whitney cube decomposition of R^N \ G_m,
// a subordinate partition of unity, extensions E0/E1, the projection
// pi_m = E1 o T_m, and operator approximations J^m = E0 o T_m o J o pi_m.

using VecN = std::array<double, 2>;  // first N entries are used

struct WhitneyCube {
    int N = 1;
    int generation = 0;   // side = h_m * 2^-generation
    double side = 0.0;
    VecN center{0.0, 0.0};
    VecN nearest_grid{0.0, 0.0};  // \hat y: grid point closest to the center

    double diam() const;
    VecN lo() const;
    VecN hi() const;
};

class WhitneyDecomposition {
public:
    // Level caps: m <= 12 for N = 1, m <= 7 for N = 2.
    static WhitneyDecomposition build(int m, int N);

    int level() const { return m_; }
    int dim() const { return N_; }
    double grid_size() const { return h_; }
    double window_radius() const { return window_; }

    bool on_grid(const VecN& x) const;
    // Selected cube containing x (x must be off the grid).
    WhitneyCube locate(const VecN& x) const;
    // All cubes whose dilated support Q* (sides * 9/8) contains x.
    std::vector<WhitneyCube> overlapping(const VecN& x) const;
    // Partition-of-unity weights for the overlapping cubes at x.
    std::vector<double> partition_values(const VecN& x,
                                         const std::vector<WhitneyCube>& cubes) const;
    // Mollified cube indicator (1 on Q, 0 outside Q*, C^2 edge).
    double bump(const WhitneyCube& q, const VecN& x) const;

    // Every selected cube intersecting [lo, hi] with generation <= max_generation.
    std::vector<WhitneyCube> enumerate(const VecN& lo, const VecN& hi,
                                       int max_generation) const;

    // Exact distance from the (closed) cube to G_m.
    double cube_grid_distance(const WhitneyCube& q) const;
    bool is_selected(const WhitneyCube& q) const;

private:
    WhitneyDecomposition(int m, int N);
    int m_, N_;
    double h_, window_;
};

// m-level truncation of an evaluable function: values f(p) 1_{B_{2^m}}(p) on
// grid points, memoized.
class GridSamples {
public:
    GridSamples(std::function<double(const VecN&)> source, int m, int N);

    int level() const { return m_; }
    int dim() const { return N_; }
    double grid_size() const { return h_; }
    double window_radius() const { return window_; }
    bool in_window(const VecN& p) const;

    // Truncated value at a grid point (0 outside the window).
    double value(const VecN& p) const;

private:
    std::function<double(const VecN&)> source_;
    int m_, N_;
    double h_, window_;
    mutable std::unordered_map<std::int64_t, double> memo_;
};

// Centered lattice difference (u(x + h_m e_j) - u(x - h_m e_j)) / (2 h_m);
// throws when x or a neighbor leaves the window.
VecN discrete_gradient(const GridSamples& g, const VecN& x);

// Zero- and first-order Whitney extensions. On G_m both return the truncated
// sample exactly; off the grid they are phi-weighted combinations over the
// cubes whose Q* contains x.
double extend0(const GridSamples& g, const WhitneyDecomposition& w, const VecN& x);
double extend1(const GridSamples& g, const WhitneyDecomposition& w, const VecN& x);

using EvalFn = std::function<double(const VecN&)>;

// pi_m = E1_m o T_m as an evaluable closure (shares one memoized sample set).
EvalFn project(const EvalFn& f, int m, int N);

// Black-box operator J(g, x) acting on evaluable functions.
using OperatorFn = std::function<double(const EvalFn&, const VecN&)>;

// J^m = E0_m o T_m o J o pi_m, also evaluable; finite rank in the sense that
// it depends on f only through the grid window values.
OperatorFn approximate(const OperatorFn& J, int m, int N);

// Truncated half-Laplacian L_Delta(g, x) = int_{B_R0} delta_h g(x) |h|^-N-1 dh
// by graded symmetric quadrature (second differences, so the compensator
// cancels); reference operator for the J^m -> J convergence checks.
double truncated_half_laplacian(const EvalFn& g, const VecN& x, double R0, int N);

} // namespace helegraph
