#pragma once

#include "gqd/specfun.hpp"

#include <memory>
#include <vector>

namespace gqd {

class RadialState;

enum class Regime { Local, NonlocalInTime };

/// Which route evaluates the momentum-space loop integrals.
enum class LoopMethod { ClosedForm, Quadrature };

/// Parameters of the power-law separable model, units with hbar = 1.
///
/// phi(k) = c1 k^-alpha, E_k = k^2 / (2 mu). c1 == 0 is accepted and means the
/// free theory (no interaction); every amplitude is then identically zero.
struct ModelParams {
    double alpha = 0.25;
    double c1 = 1.0;
    double mu = 0.5;

    /// Throws ParameterError unless 0 < alpha < 3/2, alpha != 1/2, c1 >= 0, mu > 0.
    void validate() const;

    Regime regime() const { return alpha > 0.5 ? Regime::Local : Regime::NonlocalInTime; }
    bool is_free() const { return c1 == 0.0; }

    /// 1/2 - alpha, the exponent that organizes every power law of the model.
    double p() const { return 0.5 - alpha; }

    double energy(double k) const { return k * k / (2.0 * mu); }
};

namespace model {

/// c1 * k^-alpha; DomainError at k <= 0.
double form_factor(double k, const ModelParams& params);

/// Prefactor C of the continued loop integral: I1(z) = C (-z)^(1/2 - alpha),
/// C = 2 pi^2 c1^2 (2 mu)^(3/2 - alpha) / cos(pi alpha).
double loop_prefactor(const ModelParams& params);

/// \int d^3k |phi|^2 / (z - E_k). Requires alpha > 1/2 (ConvergenceError
/// otherwise) and z off [0, inf) (DomainError).
cplx loop_integral_I1(cplx z, const ModelParams& params,
                      LoopMethod method = LoopMethod::ClosedForm);

/// Analytic continuation of I1 in alpha: C (-z)^(1/2 - alpha) for every
/// admissible alpha. For alpha < 1/2 the integral itself diverges but all
/// differences of this function are the convergent subtracted integrals.
cplx continued_I1(cplx z, const ModelParams& params);

/// \int d^3k |phi|^2 / (z - E_k)^2. Note I2 = -dI1/dz.
cplx loop_integral_I2(cplx z, const ModelParams& params,
                      LoopMethod method = LoopMethod::ClosedForm);

/// \int d^3k |phi|^2 / ((z1 - E_k)(z2 - E_k)). DomainError if z1 == z2.
cplx loop_integral_I11(cplx z1, cplx z2, const ModelParams& params,
                       LoopMethod method = LoopMethod::ClosedForm);

/// \int d^3k |phi|^2 exp(-i E_k sigma), as the Abel-regularized limit
/// 2 pi c1^2 (2 mu)^(3/2 - alpha) Gamma(3/2 - alpha) (i sigma)^(alpha - 3/2).
/// DomainError for sigma <= 0.
cplx kernel_K(double sigma, const ModelParams& params);

/// \int d^3k phi(k) psi(k) / (z - E_k) over the state's grid.
cplx overlap_g(cplx z, const RadialState& psi, const ModelParams& params);

/// overlap_g against one state for many z; the weighted density is computed once.
/// Panels close to the pole k = sqrt(2 mu z) get it subtracted analytically.
class OverlapKernel {
public:
    OverlapKernel(const RadialState& psi, const ModelParams& params);
    cplx operator()(cplx z) const;

private:
    std::shared_ptr<const RadialState> psi_;
    ModelParams params_;
    std::vector<double> energy_;
    std::vector<cplx> weighted_;
};

/// Throws DomainError when z lies on the spectrum [0, inf).
void require_off_cut(cplx z, const char* where);

} // namespace model
} // namespace gqd
