#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "helegraph/grid.hpp"

namespace helegraph {

enum class GradientBackend { spectral, centered };

// Dini modulus, restricted to two named families so the summability
// requirement int_0^1 rho(s)/s ds < inf is checkable analytically:
//   holder(beta): rho(s) = s^beta, 0 < beta <= 1
//   log:          rho(s) = 1 / ln(e + 1/s)
struct DiniModulus {
    enum class Kind { holder, log } kind = Kind::holder;
    double beta = 0.5;

    double operator()(double s) const;
    static DiniModulus holder(double beta);
    static DiniModulus log();
    std::string name() const;
};

// Periodic samples of the free-boundary height f on a uniform grid,
// with both gradient backends precomputed.
class GraphInterface {
public:
    GraphInterface() = default;
    GraphInterface(std::vector<double> samples, double period, double strip_height);

    int nx() const { return static_cast<int>(samples_.size()); }
    double period() const { return period_; }
    double strip_height() const { return strip_height_; }
    double dx() const { return period_ / nx(); }
    double node(int j) const { return j * period_ / nx(); }
    PeriodicGrid grid() const { return {nx(), period_}; }

    const std::vector<double>& samples() const { return samples_; }
    const std::vector<double>& gradient(GradientBackend b = GradientBackend::spectral) const {
        return b == GradientBackend::spectral ? grad_spectral_ : grad_centered_;
    }

    double min_value() const;
    double max_value() const;

    GraphInterface with_samples(std::vector<double> samples) const;
    // f + eps * psi on the same grid.
    GraphInterface perturbed(const std::vector<double>& psi, double eps) const;
    // Shift by whole grid cells: g(x) = f(x + shift*dx).
    GraphInterface shifted(int cells) const;

private:
    std::vector<double> samples_;
    double period_ = 0.0;
    double strip_height_ = 0.0;
    std::vector<double> grad_spectral_;
    std::vector<double> grad_centered_;
};

// Validates: length >= 8 and even, all samples finite, P > 0, L > 0.
GraphInterface make_interface(std::vector<double> samples, double period, double strip_height);

// Membership parameters for K(delta, L, m, rho).
struct ClassKParams {
    double delta = 0.2;
    double strip_height = 2.0;
    double lip_bound = 1.0;
    DiniModulus modulus = DiniModulus::holder(0.5);

    void validate() const; // 0 < delta < L/2, m > 0, modulus valid
};

struct ClassKReport {
    bool member = false;
    std::vector<std::string> violations;
    double min_f = 0.0;
    double max_f = 0.0;
    double lip = 0.0;            // discrete Lipschitz constant of f
    double dini_constant = 0.0;  // smallest C with |grad f(x)-grad f(y)| <= C rho(|x-y|)
};

ClassKReport class_k_check(const GraphInterface& f, const ClassKParams& k,
                           GradientBackend backend = GradientBackend::spectral);

enum class SeminormKind { lipschitz, holder, dini };

struct SeminormReport {
    SeminormKind kind = SeminormKind::lipschitz;
    double parameter = 0.0; // holder exponent, unused for lipschitz
    DiniModulus modulus;    // used for dini
    double value = 0.0;
    std::pair<int, int> witness{0, 0};
};

// Discrete sup over all ordered grid pairs with periodic distance.
SeminormReport seminorm(const std::vector<double>& values, double period, SeminormKind kind,
                        double holder_exponent = 0.5,
                        DiniModulus modulus = DiniModulus::holder(0.5));
SeminormReport seminorm(const GraphInterface& f, SeminormKind kind,
                        double holder_exponent = 0.5,
                        DiniModulus modulus = DiniModulus::holder(0.5));

} // namespace helegraph
