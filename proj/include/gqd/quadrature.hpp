#pragma once

#include "gqd/specfun.hpp"

#include <functional>
#include <span>
#include <vector>

namespace gqd::quad {

using Integrand = std::function<cplx(double)>;

struct Tolerance {
    double abs = 1e-13;
    double rel = 1e-11;
    int max_intervals = 4000;
};

struct Result {
    cplx value{};
    double error = 0.0;
    int intervals = 0;
    bool converged = true;
};

/// Gauss-Legendre rule on [-1, 1].
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule (cached per n, thread safe).
const GaussLegendre& gauss_legendre(int n);

/// Adaptive 21-point Gauss-Kronrod on [a, b] with global bisection of the
/// worst interval. `breaks` are optional interior points where the integrand
/// is known to be non-smooth or sharply peaked.
Result integrate(const Integrand& f, double a, double b, const Tolerance& tol = {},
                 std::span<const double> breaks = {});

/// Same, throwing ConvergenceError when the budget is exhausted.
cplx integrate_or_throw(const Integrand& f, double a, double b, const Tolerance& tol = {},
                        std::span<const double> breaks = {});

/// Fixed-order Gauss-Legendre on [a, b].
template <class F>
auto fixed_gl(F&& f, double a, double b, const GaussLegendre& rule) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    decltype(f(mid)) acc{};
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
    }
    return acc * half;
}

/// Nodes and complex weights of the n-point Filon-Legendre rule for
/// \int_a^b e^{-i omega x} f(x) dx: f is replaced by its degree n-1 interpolant
/// at the Gauss-Legendre nodes and the oscillatory factor is integrated exactly
/// through the Legendre moments 2 (-i)^l j_l(omega (b-a)/2).
struct OscillatoryPanel {
    std::vector<double> nodes;
    std::vector<cplx> weights;
};

OscillatoryPanel filon_legendre(double a, double b, double omega, int n);

/// Semi-infinite radial integral of a function with power behaviour at both
/// ends: f(k) ~ k^lead near 0 (lead > -1) and |f(k)| ~ k^(-decay) for large k
/// (decay > 1). The near-zero segment [0, k_lo] uses k = k_lo * w^(1/(lead+1)),
/// the tail [k_hi, inf) uses k = k_hi * w^(-1/(decay-1)); both maps make the
/// leading power constant in w. `breaks` lie inside (k_lo, k_hi).
struct RadialShape {
    double lead = 0.0;
    double decay = 2.0;
    double k_lo = 0.5;
    double k_hi = 20.0;
};

Result integrate_radial(const Integrand& f, const RadialShape& shape, const Tolerance& tol = {},
                        std::span<const double> breaks = {});

} // namespace gqd::quad
