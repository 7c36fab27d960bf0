#include "gqd/model.hpp"

#include "gqd/errors.hpp"
#include "gqd/quadrature.hpp"
#include "gqd/state.hpp"

#include <algorithm>
#include <cmath>

namespace gqd {

void ModelParams::validate() const {
    if (!(alpha > 0.0 && alpha < 1.5)) {
        throw ParameterError("alpha must lie in (0, 3/2)");
    }
    if (std::abs(alpha - 0.5) < 1e-12) {
        throw ParameterError("alpha = 1/2 separates the two regimes and is excluded");
    }
    if (!(c1 >= 0.0) || !std::isfinite(c1)) {
        throw ParameterError("c1 must be a finite nonnegative number");
    }
    if (!(mu > 0.0) || !std::isfinite(mu)) {
        throw ParameterError("mu must be positive");
    }
}

namespace model {

namespace {

constexpr quad::Tolerance loop_tol{1e-300, 1e-12, 4000};

// exp(w) - 1 without cancellation for small |w|.
cplx expm1c(cplx w) {
    const double x = w.real();
    const double y = w.imag();
    const double s = std::sin(0.5 * y);
    return {std::expm1(x) * std::cos(y) - 2.0 * s * s, std::exp(x) * std::sin(y)};
}

// log(1 + w) without cancellation for small |w|.
cplx log1pc(cplx w) {
    const double x = w.real();
    const double y = w.imag();
    return {0.5 * std::log1p(2.0 * x + x * x + y * y), std::atan2(y, 1.0 + x)};
}

// Radial integral \int 4 pi k^2 |phi|^2 R(E_k) dk with R decaying like E^-n.
cplx radial_loop(const ModelParams& params, const std::function<cplx(double)>& rational,
                 double decay_in_k, std::initializer_list<cplx> zs) {
    const double two_mu = 2.0 * params.mu;
    double scale = 0.0;
    std::vector<double> breaks;
    for (cplx z : zs) {
        scale = std::max(scale, std::sqrt(two_mu * std::abs(z)));
        if (z.real() > 0.0) {
            breaks.push_back(std::sqrt(two_mu * z.real()));
        }
    }
    double k_lo = 0.25 * scale;
    for (double b : breaks) {
        k_lo = std::min(k_lo, 0.5 * b);
    }
    const double k_hi = 4.0 * scale;
    const double coupling = 4.0 * pi * params.c1 * params.c1;
    const double power = 2.0 - 2.0 * params.alpha;
    auto f = [&](double k) -> cplx {
        return coupling * std::pow(k, power) * rational(k * k / two_mu);
    };
    quad::RadialShape shape{power, decay_in_k, k_lo, k_hi};
    const quad::Result r = quad::integrate_radial(f, shape, loop_tol, breaks);
    if (!r.converged && r.error > 1e-8 * std::abs(r.value)) {
        throw ConvergenceError("loop integral quadrature did not converge");
    }
    return r.value;
}

// (-z1)^q - (-z2)^q, stable when z1 ~ z2 on the same side of the cut.
cplx power_difference(cplx z1, cplx z2, double q) {
    const cplx w1 = -z1;
    const cplx w2 = -z2;
    const bool close = std::abs(z1 - z2) < 0.1 * std::min(std::abs(z1), std::abs(z2));
    const bool same_side = (z1.imag() >= 0.0) == (z2.imag() >= 0.0) ||
                           (z1.real() < 0.0 && z2.real() < 0.0);
    if (close && same_side) {
        const cplx ratio_m1 = (w1 - w2) / w2;
        return specfun::principal_power(w2, q) * expm1c(q * log1pc(ratio_m1));
    }
    return specfun::principal_power(w1, q) - specfun::principal_power(w2, q);
}

} // namespace

void require_off_cut(cplx z, const char* where) {
    if (z.imag() == 0.0 && z.real() >= 0.0) {
        throw DomainError(std::string(where) + ": z lies on the spectrum [0, inf)");
    }
}

double form_factor(double k, const ModelParams& params) {
    if (!(k > 0.0)) {
        throw DomainError("form_factor: k must be positive");
    }
    return params.c1 * std::pow(k, -params.alpha);
}

double loop_prefactor(const ModelParams& params) {
    return 2.0 * pi * pi * params.c1 * params.c1 * std::pow(2.0 * params.mu, 1.5 - params.alpha) /
           std::cos(pi * params.alpha);
}

cplx continued_I1(cplx z, const ModelParams& params) {
    require_off_cut(z, "continued_I1");
    return loop_prefactor(params) * specfun::principal_power(-z, params.p());
}

cplx loop_integral_I1(cplx z, const ModelParams& params, LoopMethod method) {
    if (!(params.alpha > 0.5)) {
        throw ConvergenceError("loop_integral_I1 diverges for alpha <= 1/2");
    }
    require_off_cut(z, "loop_integral_I1");
    if (params.is_free()) {
        return {0.0, 0.0};
    }
    if (method == LoopMethod::ClosedForm) {
        return continued_I1(z, params);
    }
    return radial_loop(params, [z](double e) { return 1.0 / (z - e); }, 2.0 * params.alpha, {z});
}

cplx loop_integral_I2(cplx z, const ModelParams& params, LoopMethod method) {
    require_off_cut(z, "loop_integral_I2");
    if (params.is_free()) {
        return {0.0, 0.0};
    }
    if (method == LoopMethod::ClosedForm) {
        const double p = params.p();
        return loop_prefactor(params) * p * specfun::principal_power(-z, p - 1.0);
    }
    return radial_loop(
        params, [z](double e) { return 1.0 / ((z - e) * (z - e)); }, 2.0 + 2.0 * params.alpha,
        {z});
}

cplx loop_integral_I11(cplx z1, cplx z2, const ModelParams& params, LoopMethod method) {
    require_off_cut(z1, "loop_integral_I11");
    require_off_cut(z2, "loop_integral_I11");
    if (z1 == z2) {
        throw DomainError("loop_integral_I11: coincident arguments (use loop_integral_I2)");
    }
    if (params.is_free()) {
        return {0.0, 0.0};
    }
    if (method == LoopMethod::ClosedForm) {
        // Partial fractions on the continued I1; valid in both regimes.
        return loop_prefactor(params) * power_difference(z1, z2, params.p()) / (z2 - z1);
    }
    return radial_loop(
        params, [z1, z2](double e) { return 1.0 / ((z1 - e) * (z2 - e)); },
        2.0 + 2.0 * params.alpha, {z1, z2});
}

cplx kernel_K(double sigma, const ModelParams& params) {
    if (!(sigma > 0.0)) {
        throw DomainError("kernel_K: duration must be positive");
    }
    if (params.is_free()) {
        return {0.0, 0.0};
    }
    const double s = 1.5 - params.alpha;
    return 2.0 * pi * params.c1 * params.c1 * std::pow(2.0 * params.mu, s) * specfun::gamma(s) *
           specfun::principal_power(cplx(0.0, sigma), -s);
}

OverlapKernel::OverlapKernel(const RadialState& psi, const ModelParams& params)
    : psi_(std::make_shared<const RadialState>(psi)), params_(params) {
    const auto nodes = psi.grid().nodes();
    const auto weights = psi.grid().weights();
    const auto values = psi.values();
    energy_.resize(nodes.size());
    weighted_.resize(nodes.size());
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        const double k = nodes[j];
        energy_[j] = k * k / (2.0 * params.mu);
        weighted_[j] = params.is_free() ? cplx(0.0, 0.0)
                                        : weights[j] * 4.0 * pi * k * k * form_factor(k, params) * values[j];
    }
}

cplx OverlapKernel::operator()(cplx z) const {
    require_off_cut(z, "overlap_g");
    if (params_.is_free()) {
        return {0.0, 0.0};
    }
    const RadialState& psi = *psi_;
    const RadialGrid& grid = psi.grid();
    const auto breaks = grid.breaks();
    const int order = grid.order();
    const double two_mu = 2.0 * params_.mu;

    // 1/(z - E_k) = -2 mu / ((k - kappa)(k + kappa)); kappa approaches the real
    // axis as Im z -> 0 and then needs its pole subtracted on nearby panels.
    const cplx kappa = std::sqrt(two_mu * z);
    const auto& fine = quad::gauss_legendre(2 * order);

    cplx acc{0.0, 0.0};
    for (std::size_t p = 0; p < grid.panel_count(); ++p) {
        const double a = breaks[p];
        const double b = breaks[p + 1];
        const double dist = kappa.real() < a   ? std::abs(kappa - a)
                            : kappa.real() > b ? std::abs(kappa - b)
                                               : std::abs(kappa.imag());
        if (kappa.real() > 0.0 && dist < b - a) {
            auto h = [&](cplx k) {
                const cplx dens = 4.0 * pi * params_.c1 * specfun::principal_power(k, 2.0 - params_.alpha);
                return -two_mu * dens * psi.panel_polynomial(p, k) / (k + kappa);
            };
            const cplx hk = h(kappa);
            const double c = 0.5 * (a + b);
            const double r = 0.5 * (b - a);
            cplx part{0.0, 0.0};
            for (std::size_t i = 0; i < fine.nodes.size(); ++i) {
                const double k = c + r * fine.nodes[i];
                part += fine.weights[i] * (h(cplx(k, 0.0)) - hk) / (k - kappa);
            }
            acc += r * part + hk * (specfun::principal_log(b - kappa) - specfun::principal_log(a - kappa));
            continue;
        }
        for (int i = 0; i < order; ++i) {
            const std::size_t j = p * order + i;
            acc += weighted_[j] / (z - energy_[j]);
        }
    }
    return acc;
}

cplx overlap_g(cplx z, const RadialState& psi, const ModelParams& params) {
    return OverlapKernel(psi, params)(z);
}

} // namespace model
} // namespace gqd
