#include "gqd/amplitude.hpp"

#include "gqd/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

namespace gqd {

namespace {

constexpr double pole_tolerance = 1e-12;

double local_lambda(const ModelParams& params, const LocalBoundary& lb) {
    if (params.is_free() || lb.g_a == 0.0) {
        return 0.0;
    }
    const cplx i1 = model::loop_integral_I1(cplx(lb.a, 0.0), params);
    const double den = 1.0 + lb.g_a * i1.real();
    if (std::abs(den) < pole_tolerance) {
        throw PoleError("lambda: 1 + g_a I1(a) vanishes");
    }
    return lb.g_a / den;
}

double point_segment_distance(cplx p, cplx a, cplx b) {
    const cplx d = b - a;
    const double len2 = std::norm(d);
    if (len2 == 0.0) {
        return std::abs(p - a);
    }
    const double s = std::clamp(((p - a) * std::conj(d)).real() / len2, 0.0, 1.0);
    return std::abs(p - (a + s * d));
}

double point_cut_distance(cplx p) {
    return p.real() >= 0.0 ? std::abs(p.imag()) : std::abs(p);
}

double segment_cut_distance(cplx a, cplx b) {
    // Crossing of the real axis at x >= 0 means distance 0.
    if ((a.imag() <= 0.0 && b.imag() >= 0.0) || (a.imag() >= 0.0 && b.imag() <= 0.0)) {
        if (a.imag() == b.imag()) {
            if (a.imag() == 0.0 && std::max(a.real(), b.real()) >= 0.0) {
                return 0.0;
            }
        } else {
            const double s = a.imag() / (a.imag() - b.imag());
            const double x = a.real() + s * (b.real() - a.real());
            if (x >= 0.0) {
                return 0.0;
            }
        }
    }
    return std::min({point_cut_distance(a), point_cut_distance(b),
                     point_segment_distance(cplx(0.0, 0.0), a, b)});
}

} // namespace

struct ReducedAmplitude::Memo {
    struct Hash {
        std::size_t operator()(const std::pair<std::uint64_t, std::uint64_t>& k) const {
            return std::hash<std::uint64_t>{}(k.first * 0x9E3779B97F4A7C15ull ^ k.second);
        }
    };
    mutable std::shared_mutex mutex;
    std::unordered_map<std::pair<std::uint64_t, std::uint64_t>, cplx, Hash> values;
};

double b1_coefficient(const ModelParams& params) {
    if (params.is_free()) {
        return 0.0;
    }
    return -0.5 * std::cos(params.alpha * pi) / (pi * pi) / (params.c1 * params.c1) *
           std::pow(2.0 * params.mu, params.alpha - 1.5);
}

AsymptoticCoefficients asymptotic_coefficients(const ModelParams& params, double b2) {
    params.validate();
    if (params.regime() != Regime::NonlocalInTime) {
        throw ParameterError("asymptotic_coefficients: nonlocal regime (alpha < 1/2) required");
    }
    AsymptoticCoefficients c;
    c.b1 = b1_coefficient(params);
    c.b2 = b2;
    if (params.is_free()) {
        c.b2 = 0.0;
        return c;
    }
    const double p = params.p();
    const cplx i(0.0, 1.0);
    c.a1 = -i * c.b1 * std::exp(i * (0.5 * pi * p)) / specfun::gamma(p);
    c.a2 = b2 * std::exp(-i * (pi * params.alpha)) / specfun::gamma(2.0 * p);
    return c;
}

BoundaryData::BoundaryData(const ModelParams& params, Variant data) : data_(data) {
    params.validate();
    b1_ = b1_coefficient(params);
    if (const auto* lb = std::get_if<LocalBoundary>(&data_)) {
        if (params.regime() != Regime::Local) {
            throw ParameterError("reference boundary (a, g_a) requires alpha > 1/2");
        }
        if (!(lb->a < 0.0) || !std::isfinite(lb->g_a)) {
            throw ParameterError("reference energy a must be negative and g_a finite");
        }
        lambda_ = local_lambda(params, *lb);
    } else {
        const auto& nb = std::get<NonlocalBoundary>(data_);
        if (params.regime() != Regime::NonlocalInTime) {
            throw ParameterError("asymptotic boundary b2 requires alpha < 1/2");
        }
        if (!std::isfinite(nb.b2)) {
            throw ParameterError("b2 must be finite");
        }
    }
}

BoundaryData BoundaryData::local_from_lambda(const ModelParams& params, double lambda, double a) {
    params.validate();
    if (params.regime() != Regime::Local) {
        throw ParameterError("local_from_lambda requires alpha > 1/2");
    }
    const double i1 = params.is_free() ? 0.0 : model::loop_integral_I1(cplx(a, 0.0), params).real();
    const double den = 1.0 - lambda * i1;
    if (std::abs(den) < pole_tolerance) {
        throw PoleError("local_from_lambda: lambda puts a pole at the reference point");
    }
    return local(params, a, lambda / den);
}

ReducedAmplitude::ReducedAmplitude(ModelParams params, BoundaryData boundary, LoopMethod method)
    : params_(params), boundary_(std::move(boundary)), method_(method),
      memo_(std::make_shared<Memo>()) {
    params_.validate();
    b1_ = boundary_->b1();
    if (!boundary_->is_local()) {
        b2_ = boundary_->as_nonlocal().b2;
    }
}

ReducedAmplitude ReducedAmplitude::unchecked_nonlocal(ModelParams params, cplx b2) {
    params.validate();
    ReducedAmplitude amp;
    amp.params_ = params;
    amp.method_ = LoopMethod::ClosedForm;
    amp.b1_ = b1_coefficient(params);
    amp.b2_ = b2;
    amp.memo_ = std::make_shared<Memo>();
    return amp;
}

cplx ReducedAmplitude::evaluate(cplx z) const {
    model::require_off_cut(z, "reduced amplitude");
    if (params_.is_free()) {
        return {0.0, 0.0};
    }
    if (boundary_ && boundary_->is_local()) {
        const LocalBoundary& lb = boundary_->as_local();
        if (lb.g_a == 0.0) {
            return {0.0, 0.0};
        }
        if (z == cplx(lb.a, 0.0)) {
            return lb.g_a;
        }
        const cplx i11 = model::loop_integral_I11(z, cplx(lb.a, 0.0), params_, method_);
        const cplx den = 1.0 + (z - lb.a) * lb.g_a * i11;
        if (std::abs(den) < pole_tolerance) {
            throw PoleError("t(z): bound-state pole");
        }
        return lb.g_a / den;
    }
    const cplx w = b1_ * specfun::principal_power(-z, params_.p());
    const cplx den = w - b2_;
    if (std::abs(den) < pole_tolerance * std::max(std::abs(w), std::abs(b2_))) {
        throw PoleError("N(z): bound-state pole");
    }
    return b1_ * b1_ / den;
}

cplx ReducedAmplitude::operator()(cplx z) const {
    const auto key = std::make_pair(std::bit_cast<std::uint64_t>(z.real()),
                                    std::bit_cast<std::uint64_t>(z.imag()));
    {
        std::shared_lock lock(memo_->mutex);
        if (auto it = memo_->values.find(key); it != memo_->values.end()) {
            return it->second;
        }
    }
    const cplx value = evaluate(z);
    std::unique_lock lock(memo_->mutex);
    return memo_->values.emplace(key, value).first->second;
}

std::vector<double> ReducedAmplitude::poles() const {
    std::vector<double> out;
    if (params_.is_free()) {
        return out;
    }
    const double p = params_.p();
    if (boundary_ && boundary_->is_local()) {
        const double lambda = boundary_->lambda();
        if (lambda == 0.0) {
            return out;
        }
        // 1 - lambda C (-z)^p = 0
        const double rhs = 1.0 / (lambda * model::loop_prefactor(params_));
        if (rhs > 0.0) {
            out.push_back(-std::pow(rhs, 1.0 / p));
        }
        return out;
    }
    if (b2_.imag() == 0.0 && b1_ != 0.0) {
        const double rhs = b2_.real() / b1_;
        if (rhs > 0.0) {
            out.push_back(-std::pow(rhs, 1.0 / p));
        }
    }
    return out;
}

cplx t_closed(cplx z, const ReducedAmplitude& amp) {
    if (amp.method() == LoopMethod::ClosedForm) {
        return amp(z);
    }
    return ReducedAmplitude(amp.params(), amp.boundary(), LoopMethod::ClosedForm)(z);
}

double lambda_from_boundary(const ReducedAmplitude& amp) {
    if (amp.regime() != Regime::Local) {
        throw ParameterError("lambda is defined in the local regime only");
    }
    return amp.boundary().lambda();
}

cplx separable_t(cplx z, const ModelParams& params, double lambda, LoopMethod method) {
    if (params.is_free() || lambda == 0.0) {
        return {0.0, 0.0};
    }
    const cplx den = 1.0 - lambda * model::loop_integral_I1(z, params, method);
    if (std::abs(den) < pole_tolerance) {
        throw PoleError("separable_t: bound-state pole");
    }
    return lambda / den;
}

cplx asymptotic_seed(cplx z, const ModelParams& params, double b2, int terms) {
    model::require_off_cut(z, "asymptotic_seed");
    if (params.regime() != Regime::NonlocalInTime) {
        throw ParameterError("asymptotic_seed: nonlocal regime required");
    }
    if (terms < 1) {
        throw ParameterError("asymptotic_seed: need at least one term");
    }
    const double b1 = b1_coefficient(params);
    if (b1 == 0.0) {
        return {0.0, 0.0};
    }
    // Substituting t = sum c_n w^n, w = (-z)^-p, into dt/dz = -t^2 I2 gives
    // (n - 2) c_n = (1/b1) sum_{m=2}^{n-1} c_m c_{n+1-m} for n >= 3.
    std::vector<double> c(terms + 1, 0.0);
    c[1] = b1;
    if (terms >= 2) {
        c[2] = b2;
    }
    for (int n = 3; n <= terms; ++n) {
        double s = 0.0;
        for (int m = 2; m <= n - 1; ++m) {
            s += c[m] * c[n + 1 - m];
        }
        c[n] = s / ((n - 2) * b1);
    }
    const cplx w = specfun::principal_power(-z, -params.p());
    cplx acc{0.0, 0.0};
    cplx wn = w;
    for (int n = 1; n <= terms; ++n) {
        acc += c[n] * wn;
        wn *= w;
    }
    return acc;
}

RiccatiResult riccati_solve(const ReducedAmplitude& amp, cplx z_start, cplx z_end, cplx t_start,
                            const RiccatiOptions& options) {
    model::require_off_cut(z_start, "riccati_solve");
    model::require_off_cut(z_end, "riccati_solve");
    if (segment_cut_distance(z_start, z_end) < options.clearance) {
        throw StepFailure("riccati_solve: path touches the cut");
    }
    for (double pole : amp.poles()) {
        if (point_segment_distance(cplx(pole, 0.0), z_start, z_end) < options.clearance) {
            throw StepFailure("riccati_solve: path runs into a pole of t");
        }
    }
    RiccatiResult res;
    res.value = t_start;
    if (t_start == cplx(0.0, 0.0) || z_start == z_end) {
        return res;
    }

    const cplx dz = z_end - z_start;
    const ModelParams& params = amp.params();
    const LoopMethod method = amp.method();
    auto rhs = [&](double s, cplx t) {
        return -t * t * model::loop_integral_I2(z_start + s * dz, params, method) * dz;
    };

    // Dormand-Prince 5(4)
    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                     a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                     a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                     b6 = 11.0 / 84;
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                     e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    double s = 0.0;
    double h = 1e-3;
    cplx t = t_start;
    cplx k1 = rhs(s, t);
    while (s < 1.0) {
        if (res.steps + res.rejected > options.max_steps) {
            throw StepFailure("riccati_solve: step budget exhausted");
        }
        h = std::min(h, 1.0 - s);
        const cplx k2 = rhs(s + c2 * h, t + h * (a21 * k1));
        const cplx k3 = rhs(s + c3 * h, t + h * (a31 * k1 + a32 * k2));
        const cplx k4 = rhs(s + c4 * h, t + h * (a41 * k1 + a42 * k2 + a43 * k3));
        const cplx k5 = rhs(s + c5 * h, t + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        const cplx k6 =
            rhs(s + h, t + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        const cplx t_new = t + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const cplx k7 = rhs(s + h, t_new);
        const cplx err_vec = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        if (!std::isfinite(std::abs(t_new)) || !std::isfinite(std::abs(err_vec))) {
            throw StepFailure("riccati_solve: non-finite state (pole of t on the path?)");
        }
        const double scale = options.tolerance * std::max({std::abs(t), std::abs(t_new), 1e-300});
        const double err = std::abs(err_vec);
        const double ratio = err > 0.0 ? scale / err : 1e10;
        if (err <= scale) {
            s += h;
            t = t_new;
            k1 = k7;
            ++res.steps;
        } else {
            ++res.rejected;
        }
        h *= std::clamp(0.9 * std::pow(ratio, 0.2), 0.2, 5.0);
        if (h < 1e-14 && s < 1.0) {
            throw StepFailure("riccati_solve: step size collapsed");
        }
    }
    res.value = t;
    return res;
}

RiccatiResult riccati_solve_path(const ReducedAmplitude& amp, const std::vector<cplx>& waypoints,
                                 cplx t_start, const RiccatiOptions& options) {
    if (waypoints.size() < 2) {
        throw ParameterError("riccati_solve_path: need at least two waypoints");
    }
    RiccatiResult total;
    total.value = t_start;
    for (std::size_t i = 0; i + 1 < waypoints.size(); ++i) {
        const RiccatiResult leg =
            riccati_solve(amp, waypoints[i], waypoints[i + 1], total.value, options);
        total.value = leg.value;
        total.steps += leg.steps;
        total.rejected += leg.rejected;
    }
    return total;
}

std::vector<cplx> detour_path(cplx z_start, cplx z_end, double height) {
    std::vector<cplx> path{z_start};
    const cplx up_start(z_start.real(), std::max(z_start.imag(), height));
    const cplx up_end(z_end.real(), std::max(z_end.imag(), height));
    if (up_start != z_start) {
        path.push_back(up_start);
    }
    if (up_end != up_start) {
        path.push_back(up_end);
    }
    if (z_end != path.back()) {
        path.push_back(z_end);
    }
    return path;
}

UnitarityResidual unitarity_residual(const ReducedAmplitude& amp, cplx z1, cplx z2,
                                     LoopMethod loops) {
    UnitarityResidual out;
    const cplx t1 = amp(z1);
    const cplx t2 = amp(z2);
    out.scale = std::max(std::abs(t1), std::abs(t2));
    const cplx i11 = model::loop_integral_I11(z1, z2, amp.params(), loops);
    out.r = t1 - t2 - (z2 - z1) * t2 * t1 * i11;
    out.h = hermiticity_residual(amp, z1);
    return out;
}

cplx hermiticity_residual(const ReducedAmplitude& amp, cplx z) {
    return amp(std::conj(z)) - std::conj(amp(z));
}

double reference_value_expansion(const ModelParams& params, double b2, double a) {
    if (!(a < 0.0)) {
        throw DomainError("reference_value_expansion: a must be negative");
    }
    const double b1 = b1_coefficient(params);
    const double p = params.p();
    return b1 * std::pow(-a, -p) + b2 * std::pow(-a, -2.0 * p);
}

cplx amplitude_from_reference(cplx z, const ModelParams& params, double a, double g_a,
                              LoopMethod loops) {
    if (g_a == 0.0 || params.is_free()) {
        return {0.0, 0.0};
    }
    if (z == cplx(a, 0.0)) {
        return g_a;
    }
    const cplx den = 1.0 + (z - a) * g_a * model::loop_integral_I11(z, cplx(a, 0.0), params, loops);
    if (std::abs(den) < pole_tolerance) {
        throw PoleError("amplitude_from_reference: pole");
    }
    return g_a / den;
}

} // namespace gqd
