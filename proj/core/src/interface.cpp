#include "helegraph/interface.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace helegraph {

double DiniModulus::operator()(double s) const {
    if (s <= 0.0) return 0.0;
    if (kind == Kind::holder) return std::pow(s, beta);
    return 1.0 / std::log(std::exp(1.0) + 1.0 / s);
}

DiniModulus DiniModulus::holder(double beta) {
    if (!(beta > 0.0) || beta > 1.0)
        throw std::invalid_argument("holder modulus requires 0 < beta <= 1");
    return DiniModulus{Kind::holder, beta};
}

DiniModulus DiniModulus::log() { return DiniModulus{Kind::log, 0.0}; }

std::string DiniModulus::name() const {
    if (kind == Kind::holder) return "holder(" + std::to_string(beta) + ")";
    return "log";
}

GraphInterface::GraphInterface(std::vector<double> samples, double period, double strip_height)
    : samples_(std::move(samples)), period_(period), strip_height_(strip_height) {
    grad_spectral_ = spectral_derivative(samples_, period_);
    grad_centered_ = centered_derivative(samples_, period_);
}

double GraphInterface::min_value() const {
    return *std::min_element(samples_.begin(), samples_.end());
}

double GraphInterface::max_value() const {
    return *std::max_element(samples_.begin(), samples_.end());
}

GraphInterface GraphInterface::with_samples(std::vector<double> samples) const {
    return make_interface(std::move(samples), period_, strip_height_);
}

GraphInterface GraphInterface::perturbed(const std::vector<double>& psi, double eps) const {
    if (psi.size() != samples_.size())
        throw std::invalid_argument("perturbation size mismatch");
    std::vector<double> s(samples_);
    for (size_t j = 0; j < s.size(); ++j) s[j] += eps * psi[j];
    return with_samples(std::move(s));
}

GraphInterface GraphInterface::shifted(int cells) const {
    const int n = nx();
    std::vector<double> s(n);
    for (int j = 0; j < n; ++j) s[j] = samples_[((j + cells) % n + n) % n];
    return with_samples(std::move(s));
}

GraphInterface make_interface(std::vector<double> samples, double period, double strip_height) {
    if (samples.size() < 8) throw std::invalid_argument("interface needs at least 8 samples");
    if (samples.size() % 2 != 0) throw std::invalid_argument("interface sample count must be even");
    if (!(period > 0.0)) throw std::invalid_argument("interface period must be positive");
    if (!(strip_height > 0.0)) throw std::invalid_argument("strip height must be positive");
    for (double v : samples)
        if (!std::isfinite(v)) throw std::invalid_argument("interface sample not finite");
    return GraphInterface(std::move(samples), period, strip_height);
}

void ClassKParams::validate() const {
    if (!(delta > 0.0) || !(delta < strip_height / 2))
        throw std::invalid_argument("class K requires 0 < delta < L/2");
    if (!(lip_bound > 0.0)) throw std::invalid_argument("class K requires m > 0");
    (void)modulus(0.5); // construction of a DiniModulus already validated its family
}

ClassKReport class_k_check(const GraphInterface& f, const ClassKParams& k,
                           GradientBackend backend) {
    k.validate();
    if (std::abs(f.strip_height() - k.strip_height) > 1e-12 * std::max(1.0, k.strip_height))
        throw std::invalid_argument("class K strip height does not match interface");

    ClassKReport r;
    r.min_f = f.min_value();
    r.max_f = f.max_value();
    r.lip = seminorm(f, SeminormKind::lipschitz).value;

    const auto& g = f.gradient(backend);
    const PeriodicGrid grid = f.grid();
    double cf = 0.0;
    for (int i = 0; i < grid.n; ++i) {
        for (int j = i + 1; j < grid.n; ++j) {
            const double d = grid.distance(grid.node(i), grid.node(j));
            const double rho = k.modulus(d);
            if (rho > 0.0) cf = std::max(cf, std::abs(g[i] - g[j]) / rho);
        }
    }
    r.dini_constant = cf;

    if (!(r.min_f > k.delta)) r.violations.push_back("f <= delta");
    if (!(r.max_f < k.strip_height - k.delta)) r.violations.push_back("f >= L - delta");
    if (r.lip > k.lip_bound) r.violations.push_back("lipschitz constant exceeds m");
    if (!std::isfinite(cf)) r.violations.push_back("gradient modulus constant not finite");
    r.member = r.violations.empty();
    return r;
}

SeminormReport seminorm(const std::vector<double>& values, double period, SeminormKind kind,
                        double holder_exponent, DiniModulus modulus) {
    if (kind == SeminormKind::holder && (!(holder_exponent > 0.0) || holder_exponent > 1.0))
        throw std::invalid_argument("holder seminorm requires exponent in (0,1]");
    const int n = static_cast<int>(values.size());
    PeriodicGrid grid{n, period};
    SeminormReport r;
    r.kind = kind;
    r.parameter = holder_exponent;
    r.modulus = modulus;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double d = grid.distance(grid.node(i), grid.node(j));
            double denom;
            switch (kind) {
                case SeminormKind::lipschitz: denom = d; break;
                case SeminormKind::holder: denom = std::pow(d, holder_exponent); break;
                default: denom = modulus(d); break;
            }
            if (denom <= 0.0) continue;
            const double q = std::abs(values[i] - values[j]) / denom;
            if (q > r.value) {
                r.value = q;
                r.witness = {i, j};
            }
        }
    }
    return r;
}

SeminormReport seminorm(const GraphInterface& f, SeminormKind kind, double holder_exponent,
                        DiniModulus modulus) {
    return seminorm(f.samples(), f.period(), kind, holder_exponent, modulus);
}

} // namespace helegraph
