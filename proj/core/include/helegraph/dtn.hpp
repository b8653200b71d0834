#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "helegraph/elliptic.hpp"
#include "helegraph/interface.hpp"

namespace helegraph {

// Monotone bicubic table for custom boundary laws G(a, b). Ellipticity
// (lambda <= dG/da <= Lambda, lambda <= -dG/db <= Lambda) is verified by
// sampled finite differences at construction.
class MonotoneTable {
public:
    MonotoneTable() = default;
    MonotoneTable(std::vector<double> a_grid, std::vector<double> b_grid,
                  std::vector<double> values /* row-major, b-major rows */);

    double operator()(double a, double b) const;
    bool empty() const { return values_.empty(); }

private:
    std::vector<double> a_grid_, b_grid_, values_;
    double at(int ia, int ib) const;
};

enum class LawKind { one_phase_identity, difference, custom_table };

// Two-phase balance law G with ellipticity constants, plus the minus-phase
// diffusion matrix A2.
struct BoundaryLaw {
    LawKind kind = LawKind::one_phase_identity;
    double lambda = 1.0;
    double Lambda = 1.0;
    SpdMatrix2 A2 = SpdMatrix2::identity();
    MonotoneTable table;

    double g(double a, double b) const;
    bool uses_minus_phase() const { return kind != LawKind::one_phase_identity; }

    static BoundaryLaw one_phase();
    static BoundaryLaw difference(SpdMatrix2 A2 = SpdMatrix2::identity());
    static BoundaryLaw custom(MonotoneTable table, double lambda, double Lambda,
                              SpdMatrix2 A2 = SpdMatrix2::identity());

    // Sampled finite-difference check of the ellipticity bounds on [a0,a1]x[b0,b1].
    void verify_ellipticity(double a0, double a1, double b0, double b1, int samples = 12,
                            double tol = 1e-6) const;
};

struct DtnOptions {
    std::optional<ClassKParams> class_k;  // checked when present
    bool enforce_class_k = true;          // strict by default, warn-only for experiments
    int ny = 0;                           // bulk rows; 0 means nx
    SolveOptions solver;
    GradientBackend gradient = GradientBackend::spectral;
    mutable std::vector<std::string> warnings;
};

struct VelocityField {
    std::vector<double> values;            // G(I+, I-) * sqrt(1 + |grad f|^2)
    std::vector<double> i_plus;
    std::vector<double> i_minus;           // zeros for a one-phase law
    std::vector<double> gradient_factor;   // sqrt(1 + |grad f|^2)
    double max_principle_violation = 0.0;  // worst audit among the bulk solves
};

// I+(f, .): flux of the plus-phase solve (bottom data 1, Gamma data 0).
std::vector<double> dtn_plus(const GraphInterface& f, const DtnOptions& opt = {});

// I-(f, .): flux of the minus-phase solve (Gamma data 0, top data -1) under
// tr(A2 D^2 U) = 0.
std::vector<double> dtn_minus(const GraphInterface& f, const BoundaryLaw& law,
                              const DtnOptions& opt = {});

VelocityField velocity(const GraphInterface& f, const BoundaryLaw& law,
                       const DtnOptions& opt = {});

// Periodic-window analogue of the Muskat right-hand side
//   int [f(y)-f(x)-(y-x) f'(x)] / ((y-x)^2 + (f(y)-f(x))^2) dy,
// trapezoid over one period, singular point replaced by its limit
// f''(x) / (2 (1 + f'(x)^2)).
std::vector<double> muskat_rhs(const GraphInterface& f);

} // namespace helegraph
