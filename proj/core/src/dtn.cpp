#include "helegraph/dtn.hpp"

#include <cmath>
#include <stdexcept>

namespace helegraph {

namespace {

// Catmull-Rom cubic through 4 equally indexed values, clamped at the edges.
double cubic(double pm1, double p0, double p1, double p2, double t) {
    return p0 + 0.5 * t * (p1 - pm1 +
                           t * (2.0 * pm1 - 5.0 * p0 + 4.0 * p1 - p2 +
                                t * (3.0 * (p0 - p1) + p2 - pm1)));
}

int locate(const std::vector<double>& g, double x) {
    int lo = 0, hi = static_cast<int>(g.size()) - 2;
    while (lo < hi) {
        const int mid = (lo + hi + 1) / 2;
        if (g[mid] <= x) lo = mid; else hi = mid - 1;
    }
    return lo;
}

} // namespace

MonotoneTable::MonotoneTable(std::vector<double> a_grid, std::vector<double> b_grid,
                             std::vector<double> values)
    : a_grid_(std::move(a_grid)), b_grid_(std::move(b_grid)), values_(std::move(values)) {
    if (a_grid_.size() < 4 || b_grid_.size() < 4)
        throw std::invalid_argument("monotone table needs at least a 4x4 grid");
    if (values_.size() != a_grid_.size() * b_grid_.size())
        throw std::invalid_argument("monotone table size mismatch");
}

double MonotoneTable::at(int ia, int ib) const {
    const int na = static_cast<int>(a_grid_.size());
    const int nb = static_cast<int>(b_grid_.size());
    ia = std::clamp(ia, 0, na - 1);
    ib = std::clamp(ib, 0, nb - 1);
    return values_[static_cast<size_t>(ib) * na + ia];
}

double MonotoneTable::operator()(double a, double b) const {
    const int ia = locate(a_grid_, std::clamp(a, a_grid_.front(), a_grid_.back()));
    const int ib = locate(b_grid_, std::clamp(b, b_grid_.front(), b_grid_.back()));
    const double ta = (a - a_grid_[ia]) / (a_grid_[ia + 1] - a_grid_[ia]);
    const double tb = (b - b_grid_[ib]) / (b_grid_[ib + 1] - b_grid_[ib]);
    double rows[4];
    for (int r = -1; r <= 2; ++r)
        rows[r + 1] = cubic(at(ia - 1, ib + r), at(ia, ib + r), at(ia + 1, ib + r),
                            at(ia + 2, ib + r), ta);
    return cubic(rows[0], rows[1], rows[2], rows[3], tb);
}

double BoundaryLaw::g(double a, double b) const {
    switch (kind) {
        case LawKind::one_phase_identity: return a;
        case LawKind::difference: return a - b;
        default: return table(a, b);
    }
}

BoundaryLaw BoundaryLaw::one_phase() { return BoundaryLaw{}; }

BoundaryLaw BoundaryLaw::difference(SpdMatrix2 A2) {
    BoundaryLaw law;
    law.kind = LawKind::difference;
    law.A2 = A2;
    return law;
}

BoundaryLaw BoundaryLaw::custom(MonotoneTable table, double lambda, double Lambda,
                                SpdMatrix2 A2) {
    BoundaryLaw law;
    law.kind = LawKind::custom_table;
    law.table = std::move(table);
    law.lambda = lambda;
    law.Lambda = Lambda;
    law.A2 = A2;
    return law;
}

void BoundaryLaw::verify_ellipticity(double a0, double a1, double b0, double b1, int samples,
                                     double tol) const {
    const double ha = (a1 - a0) / samples;
    const double hb = (b1 - b0) / samples;
    const double step = 1e-5 * std::max(a1 - a0, b1 - b0);
    for (int ia = 0; ia <= samples; ++ia) {
        for (int ib = 0; ib <= samples; ++ib) {
            const double a = a0 + ia * ha;
            const double b = b0 + ib * hb;
            const double da = (g(a + step, b) - g(a - step, b)) / (2.0 * step);
            const double db = (g(a, b + step) - g(a, b - step)) / (2.0 * step);
            if (da < lambda - tol || da > Lambda + tol)
                throw std::invalid_argument("boundary law violates ellipticity in a");
            if (-db < lambda - tol || -db > Lambda + tol)
                throw std::invalid_argument("boundary law violates ellipticity in b");
        }
    }
}

namespace {

void check_class_k(const GraphInterface& f, const DtnOptions& opt) {
    if (!opt.class_k) return;
    const ClassKReport rep = class_k_check(f, *opt.class_k, opt.gradient);
    if (rep.member) return;
    std::string msg = "interface outside class K:";
    for (const auto& v : rep.violations) msg += " [" + v + "]";
    if (opt.enforce_class_k) throw std::invalid_argument(msg);
    opt.warnings.push_back(msg);
}

} // namespace

std::vector<double> dtn_plus(const GraphInterface& f, const DtnOptions& opt) {
    check_class_k(f, opt);
    TransformedProblem p = flatten(f, Phase::plus, SpdMatrix2::identity(), opt.ny);
    for (int i = 0; i < p.nx; ++i) p.dirichlet_bottom[i] = 1.0;
    BulkSolution u = solve_bulk(p, opt.solver);
    return boundary_flux(u, BoundaryEdge::gamma_plus);
}

std::vector<double> dtn_minus(const GraphInterface& f, const BoundaryLaw& law,
                              const DtnOptions& opt) {
    check_class_k(f, opt);
    TransformedProblem p = flatten(f, Phase::minus, law.A2, opt.ny);
    for (int i = 0; i < p.nx; ++i) p.dirichlet_top[i] = -1.0;
    BulkSolution u = solve_bulk(p, opt.solver);
    return boundary_flux(u, BoundaryEdge::gamma_minus);
}

VelocityField velocity(const GraphInterface& f, const BoundaryLaw& law, const DtnOptions& opt) {
    check_class_k(f, opt);
    VelocityField vf;
    vf.gradient_factor.resize(f.nx());
    const auto& grad = f.gradient(opt.gradient);
    for (int i = 0; i < f.nx(); ++i) vf.gradient_factor[i] = std::sqrt(1.0 + grad[i] * grad[i]);

    {
        TransformedProblem p = flatten(f, Phase::plus, SpdMatrix2::identity(), opt.ny);
        for (int i = 0; i < p.nx; ++i) p.dirichlet_bottom[i] = 1.0;
        BulkSolution u = solve_bulk(p, opt.solver);
        vf.max_principle_violation = u.max_principle_violation;
        vf.i_plus = boundary_flux(u, BoundaryEdge::gamma_plus);
    }
    if (law.uses_minus_phase()) {
        TransformedProblem p = flatten(f, Phase::minus, law.A2, opt.ny);
        for (int i = 0; i < p.nx; ++i) p.dirichlet_top[i] = -1.0;
        BulkSolution u = solve_bulk(p, opt.solver);
        vf.max_principle_violation = std::max(vf.max_principle_violation,
                                              u.max_principle_violation);
        vf.i_minus = boundary_flux(u, BoundaryEdge::gamma_minus);
    } else {
        vf.i_minus.assign(f.nx(), 0.0);
    }

    vf.values.resize(f.nx());
    for (int i = 0; i < f.nx(); ++i)
        vf.values[i] = law.g(vf.i_plus[i], vf.i_minus[i]) * vf.gradient_factor[i];
    return vf;
}

std::vector<double> muskat_rhs(const GraphInterface& f) {
    const int n = f.nx();
    const double dx = f.dx();
    const auto& s = f.samples();
    const auto& grad = f.gradient(GradientBackend::spectral);
    const std::vector<double> curv = spectral_second_derivative(s, f.period());
    PeriodicGrid g = f.grid();

    std::vector<double> out(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int k = 0; k < n; ++k) {
            if (k == i) {
                acc += 0.5 * curv[i] / (1.0 + grad[i] * grad[i]);
                continue;
            }
            const double h = g.wrap(g.node(k) - g.node(i));
            const double df = s[k] - s[i];
            acc += (df - h * grad[i]) / (h * h + df * df);
        }
        out[i] = acc * dx;
    }
    return out;
}

} // namespace helegraph
