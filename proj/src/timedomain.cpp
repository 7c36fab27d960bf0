#include "gqd/timedomain.hpp"

#include "gqd/errors.hpp"

#include <cmath>
#include <limits>

namespace gqd {

namespace {

void require_nonlocal(const TimeKernel& kernel, const char* where) {
    if (kernel.regime() != Regime::NonlocalInTime) {
        throw ParameterError(std::string(where) + ": nonlocal regime required");
    }
}

} // namespace

TimeKernel::TimeKernel(ModelParams params, BoundaryData boundary, int n_max)
    : params_(params), boundary_(std::move(boundary)), n_max_(n_max) {
    params_.validate();
    if (n_max_ < 2) {
        throw ParameterError("TimeKernel: n_max must be at least 2");
    }
    if (boundary_.is_local()) {
        delta_ = cplx(0.0, -2.0 * boundary_.lambda());
    } else {
        coeffs_ = asymptotic_coefficients(params_, boundary_.as_nonlocal().b2);
    }
}

cplx TimeKernel::log_coefficient(int n) const {
    constexpr double neg_inf = -std::numeric_limits<double>::infinity();
    if (n < 1 || n > n_max_) {
        throw ParameterError("TimeKernel: coefficient index out of range");
    }
    if (regime() != Regime::NonlocalInTime || coeffs_.b1 == 0.0) {
        return {neg_inf, 0.0};
    }
    // a_n = -i b1 (b2/b1)^(n-1) e^{i pi s_n / 2} / Gamma(s_n)
    const double b1 = coeffs_.b1;
    const double b2 = coeffs_.b2.real();
    if (n > 1 && b2 == 0.0) {
        return {neg_inf, 0.0};
    }
    const double s = exponent(n);
    double log_mag = std::log(std::abs(b1)) - std::lgamma(s);
    double phase = -0.5 * pi + 0.5 * pi * s;
    if (b1 < 0.0) {
        phase += pi;
    }
    if (n > 1) {
        const double r = b2 / b1;
        log_mag += (n - 1) * std::log(std::abs(r));
        if (r < 0.0 && (n - 1) % 2 == 1) {
            phase += pi;
        }
    }
    return {log_mag, phase};
}

cplx TimeKernel::coefficient(int n) const {
    const cplx l = log_coefficient(n);
    if (std::isinf(l.real())) {
        return {0.0, 0.0};
    }
    return std::exp(l);
}

cplx TimeKernel::term(int n, double tau) const {
    if (!(tau > 0.0)) {
        throw DomainError("Ttilde term: tau must be positive");
    }
    const cplx l = log_coefficient(n);
    if (std::isinf(l.real())) {
        return {0.0, 0.0};
    }
    return std::exp(l + (exponent(n) - 1.0) * std::log(tau));
}

cplx f_tau(double tau, const TimeKernel& kernel) {
    if (!(tau > 0.0)) {
        throw DomainError("f_tau: tau must be positive");
    }
    if (kernel.regime() == Regime::Local) {
        return {0.0, 0.0};
    }
    const double p = kernel.params().p();
    return kernel.a1() * std::pow(tau, p - 1.0) + kernel.a2() * std::pow(tau, 2.0 * p - 1.0);
}

cplx causal_f(double tau, const TimeKernel& kernel) {
    if (tau < 0.0) {
        return {0.0, 0.0};
    }
    return f_tau(tau, kernel);
}

SeriesResult ttilde_series(double tau, const TimeKernel& kernel, int n_terms) {
    require_nonlocal(kernel, "ttilde_series");
    if (!(tau > 0.0)) {
        throw DomainError("ttilde_series: tau must be positive");
    }
    if (n_terms < 1 || n_terms > kernel.n_max()) {
        throw ParameterError("ttilde_series: n_terms outside [1, n_max]");
    }
    SeriesResult res;
    cplx last{};
    for (int n = 1; n <= n_terms; ++n) {
        last = kernel.term(n, tau);
        res.value += last;
    }
    res.last_term = std::abs(last);
    res.warning = res.last_term > 1e-10 * std::abs(res.value);
    return res;
}

cplx causal_ttilde(double tau, const TimeKernel& kernel, int n_terms) {
    if (tau < 0.0) {
        return {0.0, 0.0};
    }
    return ttilde_series(tau, kernel, n_terms).value;
}

cplx bridge_ratio(cplx z, const TimeKernel& kernel) {
    require_nonlocal(kernel, "bridge_ratio");
    model::require_off_cut(z, "bridge_ratio");
    const auto& c = kernel.coefficients();
    if (c.b1 == 0.0) {
        return {0.0, 0.0};
    }
    return c.b2 / (c.b1 * specfun::principal_power(-z, kernel.params().p()));
}

cplx laplace_bridge(cplx z, const TimeKernel& kernel, int n_terms) {
    require_nonlocal(kernel, "laplace_bridge");
    model::require_off_cut(z, "laplace_bridge");
    if (z.imag() < 0.0) {
        throw DomainError("laplace_bridge: z must lie in the upper half plane");
    }
    if (n_terms < 1 || n_terms > kernel.n_max()) {
        throw ParameterError("laplace_bridge: n_terms outside [1, n_max]");
    }
    if (std::abs(bridge_ratio(z, kernel)) >= 1.0) {
        throw ConvergenceError("laplace_bridge: |b2| >= |b1 (-z)^(1/2-alpha)|, series diverges");
    }
    const cplx log_w = specfun::principal_log(cplx(0.0, -1.0) * z);
    cplx acc{};
    for (int n = 1; n <= n_terms; ++n) {
        const cplx l = kernel.log_coefficient(n);
        if (std::isinf(l.real())) {
            continue;
        }
        const double s = kernel.exponent(n);
        acc += std::exp(l + std::lgamma(s) - s * log_w);
    }
    return cplx(0.0, 1.0) * acc;
}

cplx f1_transform(cplx z, const TimeKernel& kernel) {
    require_nonlocal(kernel, "f1_transform");
    model::require_off_cut(z, "f1_transform");
    const auto& c = kernel.coefficients();
    const double p = kernel.params().p();
    return c.b1 * specfun::principal_power(-z, -p) + c.b2 * specfun::principal_power(-z, -2.0 * p);
}

} // namespace gqd
