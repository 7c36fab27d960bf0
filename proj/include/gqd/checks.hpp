#pragma once

#include "gqd/evolution.hpp"
#include "gqd/timedomain.hpp"
#include "gqd/volterra.hpp"

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace gqd::checks {

inline constexpr double unbounded = std::numeric_limits<double>::infinity();

/// A named number with the closed interval it must fall into.
struct Residual {
    std::string name;
    double value = 0.0;
    double lower = -unbounded;
    double upper = unbounded;

    bool pass() const { return value >= lower && value <= upper; }
};

inline Residual at_most(std::string name, double value, double tol) {
    return {std::move(name), value, -unbounded, tol};
}
inline Residual at_least(std::string name, double value, double tol) {
    return {std::move(name), value, tol, unbounded};
}
inline Residual flag(std::string name, bool ok) { return {std::move(name), ok ? 1.0 : 0.0, 1.0, 1.0}; }

/// Residuals plus the scan points behind them.
struct Report {
    std::string check;
    std::vector<Residual> residuals;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    bool pass() const;
};

struct UnitarityOptions {
    int pairs = 200;
    std::uint64_t seed = 1;
    double x_range = 10.0;
    double y_min = 0.05;
    double y_max = 5.0;
    double tolerance = 1e-7;
    double hermiticity_tolerance = 1e-12;
};

/// r(z1, z2) and the hermiticity residual over random upper-half-plane pairs.
Report unitarity(const ReducedAmplitude& amp, const UnitarityOptions& options = {});

struct RiccatiCheckOptions {
    /// Local: seed from the closed form here. Nonlocal: asymptotic seed.
    double z_start_local = -50.0;
    double z_start_nonlocal = -1e4;
    int seed_terms = 20;
    double tolerance_local = 1e-6;
    double tolerance_nonlocal = 1e-4;
    std::vector<cplx> targets;
};

std::vector<cplx> default_riccati_targets();

/// Riccati integration against the closed form at the targets.
Report riccati(const ReducedAmplitude& amp, const RiccatiCheckOptions& options = {});

struct AIndependenceOptions {
    std::vector<double> a_values{-1e2, -1e3, -1e4};
    std::vector<cplx> z_points{{-2.0, 0.5}, {-0.5, 1.0}, {1.0, 0.5}, {-10.0, 2.0}};
    double tolerance = 1e-4;
    /// Errors below this are rounding and exempt from the monotonicity test.
    double floor = 1e-12;
};

/// Nonlocal: N(z) from the reference form with the large-|a| g_a, against the closed form.
Report a_independence(const ModelParams& params, double b2, const AIndependenceOptions& options = {});

struct BornOptions {
    std::vector<cplx> z_points{{-2.0, 0.0}, {-0.5, 0.3}, {0.5, 0.5}, {3.0, 1.0}, {-10.0, 0.1},
                               {-1.5, 2.0}, {10.0, 0.2}, {0.1, 0.1}, {-5.0, 5.0}, {2.0, 3.0}};
    double equivalence_tolerance = 1e-10;
    double lambda_small = 1e-3;
    cplx z_born{-2.0, 0.5};
    double ratio_target = 8.0;
    double ratio_tolerance = 1.0;
};

/// Local: t from the reference form against the separable T-matrix, and the
/// cubic Born remainder under lambda halving.
Report born(const ReducedAmplitude& amp, const BornOptions& options = {});

struct BridgeOptions {
    int points = 20;
    double x_near = -10.0;
    double x_far = -1e3;
    double shift = 0.1;
    /// Zero picks the smallest count with predicted error below target.
    int n_terms = 0;
    double target = 1e-7;
    double tolerance = 1e-6;
    double far_threshold = 100.0;
    /// Terms at which the geometric rate is compared with |r|^n.
    int rate_terms = 10;
    double rate_tolerance = 1e-3;
};

Report bridge(const TimeKernel& kernel, const BridgeOptions& options = {});

struct VolterraCheckOptions {
    double tau_max = 0.5;
    int m = 400;
    double tau_min = 0.05;
    int series_terms = 20;
    double tolerance = 1e-3;
    /// Required observed order of e(M) / e(2M).
    double min_order = 1.0;
    /// Seeded with the small-tau expansion so refinement is second order for any b2.
    VolterraOptions march = [] {
        VolterraOptions o;
        o.seed_terms = 40;
        return o;
    }();
};

Report volterra(const ModelParams& params, double b2, const VolterraCheckOptions& options = {});

struct PacketSpec {
    double k0 = 1.0;
    double sigma = 0.2;
    PacketGridSpec grid{};
};

struct CompositionOptions {
    double t2 = 2.0;
    double t1 = 1.0;
    double t0 = 0.0;
    PacketSpec packet{};
    ContourSpec contour{};
    double norm_tolerance = 1e-4;
    double tolerance = 5e-4;
};

/// Norm of U(t, t0) psi for t in {t1, t2} and the composition residual.
Report composition(const ReducedAmplitude& amp, const CompositionOptions& options = {});

struct AppendixDCheckOptions {
    std::vector<double> nu{10.0, 30.0, 100.0};
    double gamma0 = 0.1;
    std::vector<double> t{0.5, 1.0, 2.0};
    TimeDomainOptions quadrature{};
    double slope_target = -1.0;
    double slope_tolerance = 0.2;
    /// Nonlocal: variation over magnitude at the largest nu.
    double variation_tolerance = 0.01;
    /// Nonlocal: |max_last / max_first - 1|.
    double magnitude_drift = 0.1;
};

Report appendix_d(const ReducedAmplitude& amp, const AppendixDCheckOptions& options = {});

struct ContinuityCheckOptions {
    std::vector<double> t{1.0, 0.1, 0.01};
    PacketSpec packet{};
    ContourSpec contour{};
};

Report continuity(const ReducedAmplitude& amp, const ContinuityCheckOptions& options = {});

} // namespace gqd::checks
