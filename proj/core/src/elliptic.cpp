#include "helegraph/elliptic.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <Eigen/IterativeLinearSolvers>

namespace helegraph {

namespace {

std::atomic<double> g_max_principle_high_water{0.0};

void record_max_principle(double violation) {
    double cur = g_max_principle_high_water.load();
    while (violation > cur &&
           !g_max_principle_high_water.compare_exchange_weak(cur, violation)) {
    }
}

} // namespace

double max_principle_high_water() { return g_max_principle_high_water.load(); }
void reset_max_principle_high_water() { g_max_principle_high_water.store(0.0); }

CoefficientTriple flatten_coefficients(Phase phase, const SpdMatrix2& A2, double strip_height,
                                       double fval, double fgrad, double eta) {
    if (phase == Phase::plus) {
        // (x,y) -> (x, y/f): A_hat = det(J) J^-1 J^-T with J = [[1,0],[eta f', f]].
        return {fval, -eta * fgrad, (1.0 + eta * eta * fgrad * fgrad) / fval};
    }
    const double g = strip_height - fval;
    const double beta = (1.0 - eta) * fgrad;
    return {A2.a11 * g, A2.a12 - A2.a11 * beta,
            (A2.a11 * beta * beta - 2.0 * A2.a12 * beta + A2.a22) / g};
}

TransformedProblem flatten(const GraphInterface& f, Phase phase, const SpdMatrix2& A2, int ny,
                           double margin) {
    if (!A2.is_spd()) throw std::invalid_argument("flatten: A2 is not SPD");
    if (!(f.min_value() > margin) || !(f.max_value() < f.strip_height() - margin))
        throw std::invalid_argument("flatten: interface violates the (0, L) margin");
    if (ny == 0) ny = f.nx();
    if (ny < 8) throw std::invalid_argument("flatten: ny must be at least 8");

    TransformedProblem p;
    p.phase = phase;
    p.nx = f.nx();
    p.ny = ny;
    p.period = f.period();
    p.strip_height = f.strip_height();
    p.f_samples = f.samples();
    p.f_gradient = f.gradient(GradientBackend::spectral);

    const int rows = ny + 1;
    p.a11.resize(rows * p.nx);
    p.a12.resize(rows * p.nx);
    p.a22.resize(rows * p.nx);
    p.source.assign(rows * p.nx, 0.0);
    p.dirichlet_bottom.assign(p.nx, 0.0);
    p.dirichlet_top.assign(p.nx, 0.0);
    p.thickness.resize(p.nx);

    p.lambda_T = std::numeric_limits<double>::infinity();
    p.Lambda_T = 0.0;
    for (int i = 0; i < p.nx; ++i) {
        const double fv = p.f_samples[i];
        const double fg = p.f_gradient[i];
        p.thickness[i] = phase == Phase::plus ? fv : p.strip_height - fv;
        for (int j = 0; j <= ny; ++j) {
            const double eta = static_cast<double>(j) / ny;
            const auto c = flatten_coefficients(phase, A2, p.strip_height, fv, fg, eta);
            const int k = p.idx(i, j);
            p.a11[k] = c.a11;
            p.a12[k] = c.a12;
            p.a22[k] = c.a22;
            const double tr = c.a11 + c.a22;
            const double det = c.a11 * c.a22 - c.a12 * c.a12;
            const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * det));
            const double lmax = 0.5 * (tr + disc);
            const double lmin = det / lmax;
            p.lambda_T = std::min(p.lambda_T, lmin);
            p.Lambda_T = std::max(p.Lambda_T, lmax);
        }
    }
    if (!(p.lambda_T > 0.0)) throw std::invalid_argument("flatten: coefficients not elliptic");
    return p;
}

namespace {

// 3x3 stencil of the flux-conservative 9-point discretization of
// -div(A grad V) at interior node (i, j): face coefficients are arithmetic
// node averages, cross terms use the centered corner average.
// c[di+1][dj+1] multiplies V(i+di, j+dj).
struct Stencil {
    double c[3][3];
};

Stencil stencil_at(const TransformedProblem& p, int i, int j) {
    const int nx = p.nx;
    const double dxi = p.dxi(), deta = p.deta();
    const double cx = 1.0 / (dxi * dxi);
    const double cy = 1.0 / (deta * deta);
    const double cc = 1.0 / (4.0 * dxi * deta);
    auto coeff = [&](const std::vector<double>& a, int ii, int jj) {
        return a[p.idx((ii % nx + nx) % nx, jj)];
    };
    const double a11e = 0.5 * (coeff(p.a11, i, j) + coeff(p.a11, i + 1, j));
    const double a11w = 0.5 * (coeff(p.a11, i, j) + coeff(p.a11, i - 1, j));
    const double a22n = 0.5 * (coeff(p.a22, i, j) + coeff(p.a22, i, j + 1));
    const double a22s = 0.5 * (coeff(p.a22, i, j) + coeff(p.a22, i, j - 1));
    const double a12e = 0.5 * (coeff(p.a12, i, j) + coeff(p.a12, i + 1, j));
    const double a12w = 0.5 * (coeff(p.a12, i, j) + coeff(p.a12, i - 1, j));
    const double a12n = 0.5 * (coeff(p.a12, i, j) + coeff(p.a12, i, j + 1));
    const double a12s = 0.5 * (coeff(p.a12, i, j) + coeff(p.a12, i, j - 1));

    Stencil s{};
    s.c[2][1] = -a11e * cx + (-a12n + a12s) * cc;        // (+1, 0)
    s.c[0][1] = -a11w * cx + (a12n - a12s) * cc;         // (-1, 0)
    s.c[1][1] = (a11e + a11w) * cx + (a22n + a22s) * cy; // (0, 0)
    s.c[1][2] = -a22n * cy + (-a12e + a12w) * cc;        // (0, +1)
    s.c[1][0] = -a22s * cy + (a12e - a12w) * cc;         // (0, -1)
    s.c[2][2] = (-a12e - a12n) * cc;                     // (+1, +1)
    s.c[0][0] = (-a12w - a12s) * cc;                     // (-1, -1)
    s.c[2][0] = (a12e + a12s) * cc;                      // (+1, -1)
    s.c[0][2] = (a12w + a12n) * cc;                      // (-1, +1)
    return s;
}

struct Assembled {
    std::vector<Eigen::Triplet<double>> triplets;
    Eigen::VectorXd rhs;
    int n_unknowns = 0;
};

Assembled assemble(const TransformedProblem& p) {
    const int nx = p.nx, ny = p.ny;
    Assembled out;
    out.n_unknowns = nx * (ny - 1);
    out.rhs = Eigen::VectorXd::Zero(out.n_unknowns);
    out.triplets.reserve(static_cast<size_t>(out.n_unknowns) * 9);

    auto unknown = [&](int i, int j) { return (j - 1) * nx + ((i % nx + nx) % nx); };
    auto boundary_value = [&](int i, int j) {
        const int iw = (i % nx + nx) % nx;
        return j == 0 ? p.dirichlet_bottom[iw] : p.dirichlet_top[iw];
    };

    for (int j = 1; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const int row = unknown(i, j);
            const Stencil s = stencil_at(p, i, j);
            for (int di = -1; di <= 1; ++di) {
                for (int dj = -1; dj <= 1; ++dj) {
                    const double c = s.c[di + 1][dj + 1];
                    if (c == 0.0) continue;
                    if (j + dj == 0 || j + dj == ny)
                        out.rhs[row] -= c * boundary_value(i + di, j + dj);
                    else
                        out.triplets.emplace_back(row, unknown(i + di, j + dj), c);
                }
            }
            out.rhs[row] += p.source[p.idx(i, j)];
        }
    }
    return out;
}

// Relative residual of a full-grid candidate (Dirichlet rows included in
// `values`, so boundary elimination is implicit in the stencil application).
double stencil_relative_residual(const TransformedProblem& p,
                                 const std::vector<double>& values) {
    const int nx = p.nx, ny = p.ny;
    double r2 = 0.0, b2 = 0.0;
    for (int j = 1; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const Stencil s = stencil_at(p, i, j);
            double acc = 0.0;
            double brow = p.source[p.idx(i, j)];
            for (int di = -1; di <= 1; ++di) {
                for (int dj = -1; dj <= 1; ++dj) {
                    const double c = s.c[di + 1][dj + 1];
                    if (c == 0.0) continue;
                    const int ii = ((i + di) % nx + nx) % nx;
                    acc += c * values[p.idx(ii, j + dj)];
                    if (j + dj == 0) brow -= c * p.dirichlet_bottom[ii];
                    if (j + dj == ny) brow -= c * p.dirichlet_top[ii];
                }
            }
            const double res = acc - p.source[p.idx(i, j)];
            r2 += res * res;
            b2 += brow * brow;
        }
    }
    return std::sqrt(r2) / std::max(std::sqrt(b2), 1e-300);
}

} // namespace

MonotonicityAudit audit_monotonicity(const TransformedProblem& p, double tolerance) {
    Assembled sys = assemble(p);
    Eigen::SparseMatrix<double> A(sys.n_unknowns, sys.n_unknowns);
    A.setFromTriplets(sys.triplets.begin(), sys.triplets.end());
    MonotonicityAudit audit;
    audit.tolerance = tolerance;
    for (int k = 0; k < A.outerSize(); ++k) {
        for (Eigen::SparseMatrix<double>::InnerIterator it(A, k); it; ++it) {
            if (it.row() == it.col()) continue;
            if (it.value() > tolerance) {
                ++audit.positive_offdiagonals;
                audit.max_positive_entry = std::max(audit.max_positive_entry, it.value());
            }
        }
    }
    return audit;
}

namespace {

// Largest deviation of the coefficient fields along x, relative to their
// overall scale; zero for flat interfaces (and any constant A2).
bool x_constant_coefficients(const TransformedProblem& p) {
    double scale = 1.0, spread = 0.0;
    for (const auto* field : {&p.a11, &p.a12, &p.a22}) {
        for (int j = 0; j <= p.ny; ++j) {
            const double ref = (*field)[p.idx(0, j)];
            for (int i = 0; i < p.nx; ++i) {
                const double v = (*field)[p.idx(i, j)];
                scale = std::max(scale, std::abs(v));
                spread = std::max(spread, std::abs(v - ref));
            }
        }
    }
    return spread <= 1e-12 * scale;
}

// Constant-in-x coefficients diagonalize over the periodic direction: one
// complex tridiagonal solve (Thomas) per Fourier mode.
void solve_fourier(const TransformedProblem& p, std::vector<double>& values) {
    const int nx = p.nx, ny = p.ny;
    const int rows = ny - 1;
    const int nh = nx / 2 + 1;

    std::vector<Stencil> st(rows + 2);
    for (int j = 1; j < ny; ++j) st[j] = stencil_at(p, 0, j);

    // Real right-hand side with Dirichlet elimination folded in pointwise.
    std::vector<double> rhs(static_cast<size_t>(rows) * nx);
    for (int j = 1; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            double b = p.source[p.idx(i, j)];
            if (j == 1)
                for (int di = -1; di <= 1; ++di)
                    b -= st[j].c[di + 1][0] * p.dirichlet_bottom[((i + di) % nx + nx) % nx];
            if (j == ny - 1)
                for (int di = -1; di <= 1; ++di)
                    b -= st[j].c[di + 1][2] * p.dirichlet_top[((i + di) % nx + nx) % nx];
            rhs[static_cast<size_t>(j - 1) * nx + i] = b;
        }
    }

    std::vector<std::complex<double>> spec(static_cast<size_t>(rows) * nh);
    rfft_rows(rhs.data(), rows, nx, spec.data());

    // Thomas sweep per mode.
    std::vector<std::complex<double>> diag(rows), upper(rows), lower(rows), sol(rows);
    for (int k = 0; k < nh; ++k) {
        const double phi = 2.0 * M_PI * k / nx;
        const std::complex<double> z(std::cos(phi), std::sin(phi));
        const std::complex<double> zb = std::conj(z);
        for (int j = 1; j < ny; ++j) {
            const auto& c = st[j].c;
            diag[j - 1] = c[1][1] + c[2][1] * z + c[0][1] * zb;
            upper[j - 1] = c[1][2] + c[2][2] * z + c[0][2] * zb;
            lower[j - 1] = c[1][0] + c[2][0] * z + c[0][0] * zb;
        }
        for (int r = 0; r < rows; ++r) sol[r] = spec[static_cast<size_t>(r) * nh + k];
        for (int r = 1; r < rows; ++r) {
            if (std::abs(diag[r - 1]) == 0.0)
                throw SolveError("solve_bulk: Fourier tridiagonal breakdown");
            const std::complex<double> w = lower[r] / diag[r - 1];
            diag[r] -= w * upper[r - 1];
            sol[r] -= w * sol[r - 1];
        }
        sol[rows - 1] /= diag[rows - 1];
        for (int r = rows - 2; r >= 0; --r)
            sol[r] = (sol[r] - upper[r] * sol[r + 1]) / diag[r];
        for (int r = 0; r < rows; ++r) spec[static_cast<size_t>(r) * nh + k] = sol[r];
    }

    std::vector<double> interior(static_cast<size_t>(rows) * nx);
    irfft_rows(spec.data(), rows, nx, interior.data());
    for (int j = 1; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            values[p.idx(i, j)] = interior[static_cast<size_t>(j - 1) * nx + i];
}

} // namespace

BulkSolution solve_bulk(const TransformedProblem& p, const SolveOptions& opt) {
    const int n_unknowns = p.nx * (p.ny - 1);
    SolveOptions::Method method = opt.method;
    if (method == SolveOptions::Method::automatic) {
        if (x_constant_coefficients(p))
            method = SolveOptions::Method::fourier;
        else
            method = n_unknowns <= opt.direct_unknown_cap ? SolveOptions::Method::direct
                                                          : SolveOptions::Method::krylov;
    }
    if (method == SolveOptions::Method::fourier && !x_constant_coefficients(p))
        throw std::invalid_argument("solve_bulk: Fourier path needs x-constant coefficients");

    BulkSolution sol;
    sol.problem = std::make_shared<TransformedProblem>(p);
    sol.values.assign(static_cast<size_t>(p.ny + 1) * p.nx, 0.0);
    for (int i = 0; i < p.nx; ++i) {
        sol.values[p.idx(i, 0)] = p.dirichlet_bottom[i];
        sol.values[p.idx(i, p.ny)] = p.dirichlet_top[i];
    }

    if (method == SolveOptions::Method::fourier) {
        solve_fourier(p, sol.values);
    } else {
        Assembled sys = assemble(p);
        Eigen::SparseMatrix<double> A(sys.n_unknowns, sys.n_unknowns);
        A.setFromTriplets(sys.triplets.begin(), sys.triplets.end());
        A.makeCompressed();

        Eigen::VectorXd u;
        if (method == SolveOptions::Method::direct) {
            Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
            lu.analyzePattern(A);
            lu.factorize(A);
            if (lu.info() != Eigen::Success)
                throw SolveError("solve_bulk: LU factorization failed");
            u = lu.solve(sys.rhs);
        } else {
            Eigen::BiCGSTAB<Eigen::SparseMatrix<double>, Eigen::IncompleteLUT<double>> krylov;
            krylov.preconditioner().setDroptol(1e-6);
            krylov.setTolerance(opt.tol * 1e-2);
            std::vector<double> history;
            krylov.setMaxIterations(64);
            krylov.compute(A);
            u = Eigen::VectorXd::Zero(sys.n_unknowns);
            int used = 0;
            while (true) {
                u = krylov.solveWithGuess(sys.rhs, u);
                history.push_back(krylov.error());
                used += 64;
                if (krylov.info() == Eigen::Success) break;
                if (used >= opt.max_iterations)
                    throw SolveError("solve_bulk: Krylov iteration did not converge", history);
            }
        }
        for (int j = 1; j < p.ny; ++j)
            for (int i = 0; i < p.nx; ++i) sol.values[p.idx(i, j)] = u[(j - 1) * p.nx + i];
    }

    const double rel_res = stencil_relative_residual(p, sol.values);
    if (rel_res > std::max(1e-8, opt.tol))
        throw SolveError("solve_bulk: residual above tolerance", {rel_res});
    sol.residual_norm = rel_res;

    bool zero_source = true;
    for (double s : p.source)
        if (s != 0.0) { zero_source = false; break; }
    if (zero_source) {
        double bd_min = std::numeric_limits<double>::infinity(), bd_max = -bd_min;
        for (int i = 0; i < p.nx; ++i) {
            bd_min = std::min({bd_min, p.dirichlet_bottom[i], p.dirichlet_top[i]});
            bd_max = std::max({bd_max, p.dirichlet_bottom[i], p.dirichlet_top[i]});
        }
        double v_min = *std::min_element(sol.values.begin(), sol.values.end());
        double v_max = *std::max_element(sol.values.begin(), sol.values.end());
        sol.max_principle_violation = std::max({0.0, v_max - bd_max, bd_min - v_min});
        record_max_principle(sol.max_principle_violation);
    }
    return sol;
}

std::vector<double> boundary_flux(const BulkSolution& u, BoundaryEdge edge) {
    const TransformedProblem& p = *u.problem;
    if (edge != p.gamma_edge())
        throw std::invalid_argument("boundary_flux: edge does not match solution phase");
    if (p.ny < 8) throw std::invalid_argument("boundary_flux: ny too small for Richardson step");

    const double deta = p.deta();
    std::vector<double> flux(p.nx);
    for (int i = 0; i < p.nx; ++i) {
        double deriv;
        if (p.phase == Phase::plus) {
            const double v0 = u.value(i, p.ny);
            const double d1 =
                (3.0 * v0 - 4.0 * u.value(i, p.ny - 1) + u.value(i, p.ny - 2)) / (2.0 * deta);
            const double d2 =
                (3.0 * v0 - 4.0 * u.value(i, p.ny - 2) + u.value(i, p.ny - 4)) / (4.0 * deta);
            deriv = (4.0 * d1 - d2) / 3.0;
        } else {
            const double v0 = u.value(i, 0);
            const double d1 = (-3.0 * v0 + 4.0 * u.value(i, 1) - u.value(i, 2)) / (2.0 * deta);
            const double d2 = (-3.0 * v0 + 4.0 * u.value(i, 2) - u.value(i, 4)) / (4.0 * deta);
            deriv = (4.0 * d1 - d2) / 3.0;
        }
        const double fg = p.f_gradient[i];
        flux[i] = -std::sqrt(1.0 + fg * fg) * deriv / p.thickness[i];
    }
    return flux;
}

BulkSolution harmonic_measure(const GraphInterface& f, const std::vector<char>& indicator,
                              Phase phase, int ny, const SolveOptions& opt,
                              const SpdMatrix2& A2) {
    if (indicator.size() != static_cast<size_t>(f.nx()))
        throw std::invalid_argument("harmonic_measure: indicator size mismatch");
    bool any = false;
    for (char c : indicator) any = any || c;
    if (!any) throw std::invalid_argument("harmonic_measure: indicator is empty");

    TransformedProblem p = flatten(f, phase, A2, ny);
    for (int i = 0; i < p.nx; ++i) {
        const double v = indicator[i] ? 1.0 : 0.0;
        if (phase == Phase::plus)
            p.dirichlet_top[i] = v;
        else
            p.dirichlet_bottom[i] = v;
    }
    return solve_bulk(p, opt);
}

BulkSolution greens_function(const GraphInterface& f, int source_i, int source_j, Phase phase,
                             int ny, const SolveOptions& opt, const SpdMatrix2& A2) {
    TransformedProblem p = flatten(f, phase, A2, ny);
    if (source_i < 0 || source_i >= p.nx || source_j <= 0 || source_j >= p.ny)
        throw std::invalid_argument("greens_function: source must be strictly interior");
    p.source[p.idx(source_i, source_j)] = 1.0 / (p.dxi() * p.deta());
    return solve_bulk(p, opt);
}

double sample_solution(const BulkSolution& u, double x, double y) {
    const TransformedProblem& p = *u.problem;
    PeriodicGrid g{p.nx, p.period};
    // f at off-grid xi via band-limited interpolation, matching the spectral
    // gradient used to build the coefficients.
    const double fv = trig_interpolate(p.f_samples, p.period, x);
    double eta;
    if (p.phase == Phase::plus)
        eta = y / fv;
    else
        eta = (y - fv) / (p.strip_height - fv);
    if (eta < 0.0 || eta > 1.0)
        throw std::invalid_argument("sample_solution: point outside the phase domain");

    double xi = std::fmod(x, p.period);
    if (xi < 0.0) xi += p.period;
    const double si = xi / p.dxi();
    const double sj = eta / p.deta();
    const int i0 = std::min(static_cast<int>(si), p.nx - 1);
    const int j0 = std::min(static_cast<int>(sj), p.ny - 1);
    const double ti = si - i0;
    const double tj = sj - j0;
    const int i1 = (i0 + 1) % p.nx;
    const double v00 = u.value(i0, j0), v10 = u.value(i1, j0);
    const double v01 = u.value(i0, j0 + 1), v11 = u.value(i1, j0 + 1);
    (void)g;
    return (1 - ti) * (1 - tj) * v00 + ti * (1 - tj) * v10 + (1 - ti) * tj * v01 + ti * tj * v11;
}

PhysicalPoint node_location(const TransformedProblem& p, int i, int j) {
    const double eta = static_cast<double>(j) / p.ny;
    const double x = i * p.dxi();
    if (p.phase == Phase::plus) return {x, eta * p.f_samples[i]};
    return {x, p.f_samples[i] + eta * (p.strip_height - p.f_samples[i])};
}

double node_boundary_distance(const TransformedProblem& p, int i, int j) {
    const PhysicalPoint q = node_location(p, i, j);
    PeriodicGrid g{p.nx, p.period};
    double d_gamma = std::numeric_limits<double>::infinity();
    for (int k = 0; k < p.nx; ++k) {
        const double dx = g.wrap(q.x - k * p.dxi());
        const double dy = q.y - p.f_samples[k];
        d_gamma = std::min(d_gamma, std::hypot(dx, dy));
    }
    const double d_wall = p.phase == Phase::plus ? q.y : p.strip_height - q.y;
    return std::min(d_wall, d_gamma);
}

GrowthReport linear_growth_check(const GraphInterface& f, int x0_index, double s_min,
                                 double s_max, int n_samples, int ny, const SolveOptions& opt) {
    if (!(s_min > 0.0) || !(s_max > s_min))
        throw std::invalid_argument("linear_growth_check: bad ladder bounds");

    TransformedProblem p = flatten(f, Phase::plus, SpdMatrix2::identity(), ny);
    for (int i = 0; i < p.nx; ++i) p.dirichlet_bottom[i] = 1.0;
    BulkSolution u = solve_bulk(p, opt);

    const double x0 = f.node(x0_index);
    const double f0 = f.samples()[x0_index];
    const double fg = f.gradient()[x0_index];
    const double norm = std::sqrt(1.0 + fg * fg);

    GrowthReport rep;
    rep.positive = true;
    for (int k = 0; k < n_samples; ++k) {
        const double s = s_min * std::pow(s_max / s_min, static_cast<double>(k) / (n_samples - 1));
        const double x = x0 + s * fg / norm;
        const double y = f0 - s / norm;
        if (y <= 0.0)
            throw std::invalid_argument("linear_growth_check: ladder leaves the domain");
        const double val = sample_solution(u, x, y);
        rep.s_values.push_back(s);
        rep.ratios.push_back(val / s);
        rep.positive = rep.positive && val > 0.0;
    }
    rep.ratio_min = *std::min_element(rep.ratios.begin(), rep.ratios.end());
    rep.ratio_max = *std::max_element(rep.ratios.begin(), rep.ratios.end());
    return rep;
}

} // namespace helegraph
