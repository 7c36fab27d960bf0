#pragma once

#include "gqd/amplitude.hpp"

#include <vector>

namespace gqd {

/// Time-domain interaction kernel f(tau) and the series for Ttilde(tau).
///
/// Nonlocal: f(tau) = a1 tau^(-alpha-1/2) + a2 tau^(-2 alpha) and
///   Ttilde(tau) = sum_n a_n tau^(s_n - 1), s_n = n (1/2 - alpha),
///   a_n = a2^(n-1) a1^(2-n) Gamma(1/2-alpha)^(2-n) Gamma(1-2 alpha)^(n-1) / Gamma(s_n).
/// Local: f is -2 i lambda delta(tau), kept as a strength and never sampled.
class TimeKernel {
public:
    TimeKernel(ModelParams params, BoundaryData boundary, int n_max = 400);

    const ModelParams& params() const { return params_; }
    const BoundaryData& boundary() const { return boundary_; }
    Regime regime() const { return params_.regime(); }
    int n_max() const { return n_max_; }

    /// Zero in the local regime.
    const AsymptoticCoefficients& coefficients() const { return coeffs_; }
    cplx a1() const { return coeffs_.a1; }
    cplx a2() const { return coeffs_.a2; }

    /// Strength of the delta(tau) term: -2 i lambda (local), 0 (nonlocal).
    cplx delta_strength() const { return delta_; }

    /// a_n for 1 <= n <= n_max.
    cplx coefficient(int n) const;
    /// s_n = n (1/2 - alpha).
    double exponent(int n) const { return n * params_.p(); }
    /// a_n tau^(s_n - 1).
    cplx term(int n, double tau) const;

private:
    /// log a_n (complex log, so a_n = exp of it); -inf real part when a_n = 0.
    cplx log_coefficient(int n) const;
    friend cplx laplace_bridge(cplx z, const TimeKernel& kernel, int n_terms);

    ModelParams params_;
    BoundaryData boundary_;
    AsymptoticCoefficients coeffs_;
    cplx delta_{};
    int n_max_;
};

/// Regular part of f(tau); DomainError for tau <= 0. Zero in the local regime.
cplx f_tau(double tau, const TimeKernel& kernel);

/// f(tau) for tau > 0 and exactly 0 for tau < 0.
cplx causal_f(double tau, const TimeKernel& kernel);

struct SeriesResult {
    cplx value{};
    /// |last retained term|, the truncation estimate.
    double last_term = 0.0;
    /// last_term > 1e-10 |value|
    bool warning = false;
};

/// Partial sum of the Ttilde series with n_terms terms. Nonlocal only;
/// DomainError for tau <= 0, ParameterError for n_terms outside [1, n_max].
SeriesResult ttilde_series(double tau, const TimeKernel& kernel, int n_terms);

/// Ttilde series for tau > 0 and exactly 0 for tau < 0.
cplx causal_ttilde(double tau, const TimeKernel& kernel, int n_terms);

/// Ratio r = b2 / (b1 (-z)^(1/2-alpha)) of the geometric series behind the bridge.
cplx bridge_ratio(cplx z, const TimeKernel& kernel);

/// i sum_{n<=n_terms} a_n Gamma(s_n) (-i z)^(-s_n). Converges to N(z) with
/// relative error exactly |r|^n_terms. ConvergenceError when |r| >= 1.
cplx laplace_bridge(cplx z, const TimeKernel& kernel, int n_terms);

/// b1 (-z)^(alpha-1/2) + b2 (-z)^(2 alpha-1), the transform of the two-term f.
cplx f1_transform(cplx z, const TimeKernel& kernel);

} // namespace gqd
