#pragma once

#include "gqd/model.hpp"
#include "gqd/specfun.hpp"

#include <memory>
#include <optional>
#include <variant>
#include <vector>

namespace gqd {

/// Reference-point boundary condition t(a) = g_a (local regime only).
struct LocalBoundary {
    double a = -1.0;
    double g_a = 1.0;
};

/// Second asymptotic coefficient b2 (nonlocal regime only).
struct NonlocalBoundary {
    double b2 = 0.0;
};

/// Coefficients of the large-|z| behaviour t(z) ~ b1|z|^(alpha-1/2) + b2|z|^(2 alpha-1)
/// and of the matching kernel f(tau) = a1 tau^(-alpha-1/2) + a2 tau^(-2 alpha).
struct AsymptoticCoefficients {
    double b1 = 0.0;
    cplx b2{};
    cplx a1{};
    cplx a2{};
};

/// Data selecting a unique solution of the amplitude equation.
class BoundaryData {
public:
    using Variant = std::variant<LocalBoundary, NonlocalBoundary>;

    /// Validates the variant against the regime of `params`.
    BoundaryData(const ModelParams& params, Variant data);

    static BoundaryData local(const ModelParams& params, double a, double g_a) {
        return {params, LocalBoundary{a, g_a}};
    }
    static BoundaryData nonlocal(const ModelParams& params, double b2) {
        return {params, NonlocalBoundary{b2}};
    }
    /// Local boundary producing the given separable coupling lambda at reference a.
    static BoundaryData local_from_lambda(const ModelParams& params, double lambda, double a = -1.0);

    const Variant& data() const { return data_; }
    bool is_local() const { return std::holds_alternative<LocalBoundary>(data_); }
    const LocalBoundary& as_local() const { return std::get<LocalBoundary>(data_); }
    const NonlocalBoundary& as_nonlocal() const { return std::get<NonlocalBoundary>(data_); }

    /// b1 (zero in the free theory). Independent of the boundary choice.
    double b1() const { return b1_; }
    /// lambda of the equivalent separable potential (local only, else 0).
    double lambda() const { return lambda_; }

private:
    Variant data_;
    double b1_ = 0.0;
    double lambda_ = 0.0;
};

/// b1 = -(1/2) cos(alpha pi) pi^-2 c1^-2 (2 mu)^(alpha - 3/2); 0 in the free theory.
double b1_coefficient(const ModelParams& params);

/// (b1, b2, a1, a2) for the nonlocal regime. (a1, a2) follow from the term-wise
/// transform i \int_0^inf e^{iz tau} tau^(s-1) dtau = i Gamma(s) (-iz)^(-s):
///   a1 = -i b1 e^{i pi (1/2-alpha)/2} / Gamma(1/2 - alpha)
///   a2 =    b2 e^{-i pi alpha}        / Gamma(1 - 2 alpha)
AsymptoticCoefficients asymptotic_coefficients(const ModelParams& params, double b2);

/// The reduced amplitude t(z) (local) or N(z) (nonlocal) as a memoized evaluator.
///
/// Immutable after construction apart from the memo, which is safe for
/// concurrent readers and idempotent concurrent insertion.
class ReducedAmplitude {
public:
    ReducedAmplitude(ModelParams params, BoundaryData boundary,
                     LoopMethod method = LoopMethod::ClosedForm);

    /// Nonlocal evaluator with an arbitrary complex b2 and no validation. Only
    /// meant for exercising the hermiticity violation detector.
    static ReducedAmplitude unchecked_nonlocal(ModelParams params, cplx b2);

    /// t(z); DomainError on the cut, PoleError at a zero of the denominator.
    cplx operator()(cplx z) const;
    cplx t(cplx z) const { return (*this)(z); }

    const ModelParams& params() const { return params_; }
    const BoundaryData& boundary() const { return *boundary_; }
    Regime regime() const { return params_.regime(); }
    LoopMethod method() const { return method_; }
    double b1() const { return b1_; }
    cplx b2() const { return b2_; }
    double lambda() const { return boundary_ ? boundary_->lambda() : 0.0; }

    /// Real poles of t (bound states) on the negative axis.
    std::vector<double> poles() const;

    /// Evaluation without the memo.
    cplx evaluate(cplx z) const;

private:
    ReducedAmplitude() = default;

    struct Memo;

    ModelParams params_{};
    std::optional<BoundaryData> boundary_;
    LoopMethod method_ = LoopMethod::ClosedForm;
    double b1_ = 0.0;
    cplx b2_{};
    std::shared_ptr<Memo> memo_;
};

/// Closed-form amplitude.
cplx t_closed(cplx z, const ReducedAmplitude& amp);

/// lambda = g_a (1 + g_a I1(a))^-1; PoleError when the bracket vanishes.
double lambda_from_boundary(const ReducedAmplitude& amp);

/// The separable-potential T-matrix coefficient lambda (1 - lambda I1(z))^-1.
cplx separable_t(cplx z, const ModelParams& params, double lambda,
                 LoopMethod method = LoopMethod::ClosedForm);

/// Asymptotic expansion sum_{n=1}^{terms} c_n (-z)^(-n(1/2-alpha)) of the
/// solution of dt/dz = -t^2 I2(z) with leading coefficients c1 = b1, c2 = b2.
/// Higher c_n come from the recurrence the equation imposes on the expansion;
/// terms = 2 is the two-term boundary form b1|z|^(alpha-1/2) + b2|z|^(2alpha-1).
cplx asymptotic_seed(cplx z, const ModelParams& params, double b2, int terms = 2);

struct RiccatiOptions {
    double tolerance = 1e-10;
    /// Minimum allowed distance of the path from the cut and from known poles.
    double clearance = 1e-6;
    int max_steps = 200000;
};

struct RiccatiResult {
    cplx value{};
    int steps = 0;
    int rejected = 0;
};

/// Integrates dt/dz = -t^2 I2(z) along the straight segment z_start -> z_end with
/// an adaptive Dormand-Prince 5(4) pair. StepFailure when the path comes within
/// `clearance` of the cut or of a pole, or when step control collapses.
RiccatiResult riccati_solve(const ReducedAmplitude& amp, cplx z_start, cplx z_end, cplx t_start,
                            const RiccatiOptions& options = {});

/// Chains riccati_solve over consecutive waypoints.
RiccatiResult riccati_solve_path(const ReducedAmplitude& amp, const std::vector<cplx>& waypoints,
                                 cplx t_start, const RiccatiOptions& options = {});

/// Waypoints z_start -> z_start + i h -> z_end + i h -> z_end, keeping the path at
/// height h over the real axis (used when poles or the cut lie nearby).
std::vector<cplx> detour_path(cplx z_start, cplx z_end, double height = 0.5);

struct UnitarityResidual {
    /// t(z1) - t(z2) - (z2 - z1) t(z2) t(z1) I11(z1, z2)
    cplx r{};
    /// t(conj z1) - conj t(z1)
    cplx h{};
    /// max(|t(z1)|, |t(z2)|)
    double scale = 0.0;
};

/// `loops` selects how I11 is evaluated (independently of the amplitude's own method).
UnitarityResidual unitarity_residual(const ReducedAmplitude& amp, cplx z1, cplx z2,
                                     LoopMethod loops = LoopMethod::Quadrature);

/// t(conj z) - conj(t(z)).
cplx hermiticity_residual(const ReducedAmplitude& amp, cplx z);

/// Large-|a| reference value g_a ~ b1|a|^(alpha-1/2) + b2|a|^(2alpha-1).
double reference_value_expansion(const ModelParams& params, double b2, double a);

/// N(z) from the reference-point form g_a (1 + (z-a) g_a I11(z, a))^-1 with the
/// given g_a; I11 by `loops`.
cplx amplitude_from_reference(cplx z, const ModelParams& params, double a, double g_a,
                              LoopMethod loops = LoopMethod::Quadrature);

} // namespace gqd
