#include "gqd/checks.hpp"

#include "gqd/errors.hpp"
#include "gqd/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace gqd::checks {

bool Report::pass() const {
    return std::all_of(residuals.begin(), residuals.end(), [](const Residual& r) { return r.pass(); });
}

namespace {

double rel(cplx a, cplx b) {
    const double s = std::abs(b);
    return s > 0.0 ? std::abs(a - b) / s : std::abs(a - b);
}

// values at or below `floor` count as converged
bool strictly_decreasing(const std::vector<double>& v, double floor = -1.0) {
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (!(v[i] < v[i - 1] || v[i] <= floor)) {
            return false;
        }
    }
    return true;
}

RadialState packet(const PacketSpec& spec) {
    return make_gaussian_packet(spec.k0, spec.sigma, spec.grid);
}

} // namespace

Report unitarity(const ReducedAmplitude& amp, const UnitarityOptions& options) {
    Report rep;
    rep.check = "unitarity";
    rep.columns = {"re_z1", "im_z1", "re_z2", "im_z2", "abs_r", "scale", "abs_h"};
    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> ux(-options.x_range, options.x_range);
    std::uniform_real_distribution<double> uy(options.y_min, options.y_max);
    std::vector<std::pair<cplx, cplx>> pairs(static_cast<std::size_t>(options.pairs));
    for (auto& p : pairs) {
        const double x1 = ux(rng), y1 = uy(rng), x2 = ux(rng), y2 = uy(rng);
        p = {cplx(x1, y1), cplx(x2, y2)};
    }
    std::vector<UnitarityResidual> res(pairs.size());
    parallel_for(pairs.size(), [&](std::size_t i) { res[i] = unitarity_residual(amp, pairs[i].first, pairs[i].second); });

    double worst = 0.0, worst_h = 0.0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const double scale = std::max(res[i].scale, 1e-30);
        worst = std::max(worst, std::abs(res[i].r) / scale);
        worst_h = std::max(worst_h, std::abs(res[i].h) / scale);
        rep.rows.push_back({pairs[i].first.real(), pairs[i].first.imag(), pairs[i].second.real(),
                            pairs[i].second.imag(), std::abs(res[i].r), res[i].scale, std::abs(res[i].h)});
    }
    rep.residuals.push_back(at_most("max_rel_unitarity", worst, options.tolerance));
    rep.residuals.push_back(at_most("max_rel_hermiticity", worst_h, options.hermiticity_tolerance));
    return rep;
}

std::vector<cplx> default_riccati_targets() {
    return {{-0.5, 0.0}, {-1.0, 0.0}, {-2.0, 0.0}, {-5.0, 0.0}, {-10.0, 0.0},
            {-3.0, 1.0}, {-1.0, 0.5}, {0.0, 1.0},  {2.0, 0.5},  {5.0, 1.0}};
}

Report riccati(const ReducedAmplitude& amp, const RiccatiCheckOptions& options) {
    Report rep;
    rep.check = "riccati";
    rep.columns = {"re_z", "im_z", "re_ode", "im_ode", "re_closed", "im_closed", "rel_err"};
    const auto targets = options.targets.empty() ? default_riccati_targets() : options.targets;
    const bool local = amp.regime() == Regime::Local;
    const cplx z0 = local ? options.z_start_local : options.z_start_nonlocal;
    const cplx seed = local ? amp(z0) : asymptotic_seed(z0, amp.params(), amp.b2().real(), options.seed_terms);

    std::vector<cplx> ode(targets.size());
    parallel_for(targets.size(), [&](std::size_t i) {
        ode[i] = riccati_solve_path(amp, detour_path(z0, targets[i]), seed).value;
    });
    double worst = 0.0;
    for (std::size_t i = 0; i < targets.size(); ++i) {
        const cplx exact = amp(targets[i]);
        const double e = rel(ode[i], exact);
        worst = std::max(worst, e);
        rep.rows.push_back({targets[i].real(), targets[i].imag(), ode[i].real(), ode[i].imag(), exact.real(),
                            exact.imag(), e});
    }
    rep.residuals.push_back(
        at_most("max_rel_error", worst, local ? options.tolerance_local : options.tolerance_nonlocal));
    return rep;
}

Report a_independence(const ModelParams& params, double b2, const AIndependenceOptions& options) {
    if (params.regime() != Regime::NonlocalInTime) {
        throw ParameterError("a-independence: needs the nonlocal regime");
    }
    Report rep;
    rep.check = "a-independence";
    rep.columns = {"a", "g_a", "max_rel_err"};
    const ReducedAmplitude amp(params, BoundaryData::nonlocal(params, b2));
    std::vector<double> errors;
    for (double a : options.a_values) {
        const double g_a = reference_value_expansion(params, b2, a);
        std::vector<double> e(options.z_points.size());
        parallel_for(e.size(), [&](std::size_t i) {
            const cplx z = options.z_points[i];
            e[i] = rel(amplitude_from_reference(z, params, a, g_a), amp(z));
        });
        const double worst = *std::max_element(e.begin(), e.end());
        errors.push_back(worst);
        rep.rows.push_back({a, g_a, worst});
    }
    rep.residuals.push_back(flag("monotone_in_abs_a", strictly_decreasing(errors, options.floor)));
    rep.residuals.push_back(at_most("final_rel_error", errors.back(), options.tolerance));
    return rep;
}

Report born(const ReducedAmplitude& amp, const BornOptions& options) {
    if (amp.regime() != Regime::Local) {
        throw ParameterError("born: needs the local regime");
    }
    Report rep;
    rep.check = "born";
    rep.columns = {"re_z", "im_z", "rel_equivalence"};
    const ModelParams& params = amp.params();
    const double lambda = lambda_from_boundary(amp);
    double worst = 0.0;
    for (cplx z : options.z_points) {
        const double e = rel(t_closed(z, amp), separable_t(z, params, lambda));
        worst = std::max(worst, e);
        rep.rows.push_back({z.real(), z.imag(), e});
    }
    rep.residuals.push_back(at_most("max_rel_schroedinger_equivalence", worst, options.equivalence_tolerance));

    const double a = amp.boundary().as_local().a;
    auto remainder = [&](double lam) {
        const ReducedAmplitude small(params, BoundaryData::local_from_lambda(params, lam, a));
        const cplx z = options.z_born;
        return std::abs(small(z) - lam - lam * lam * model::loop_integral_I1(z, params));
    };
    const double r1 = remainder(options.lambda_small);
    const double r2 = remainder(0.5 * options.lambda_small);
    rep.residuals.push_back({"born_halving_ratio", r1 / r2, options.ratio_target - options.ratio_tolerance,
                             options.ratio_target + options.ratio_tolerance});
    return rep;
}

Report bridge(const TimeKernel& kernel, const BridgeOptions& options) {
    if (kernel.regime() != Regime::NonlocalInTime) {
        throw ParameterError("bridge: needs the nonlocal regime");
    }
    Report rep;
    rep.check = "bridge";
    rep.columns = {"re_z", "im_z", "abs_ratio", "n_terms", "rel_err", "predicted", "rate_err", "rate_predicted"};
    const ReducedAmplitude amp(kernel.params(), kernel.boundary());
    double worst = 0.0, worst_rate = 0.0;
    int inside = 0;
    const int n = std::max(options.points, 2);
    for (int i = 0; i < n; ++i) {
        // log-spaced along the ray
        const double f = static_cast<double>(i) / (n - 1);
        const double x = options.x_near * std::pow(options.x_far / options.x_near, f);
        const cplx z(x, options.shift);
        const double r = std::abs(bridge_ratio(z, kernel));
        if (r >= 1.0) {
            // outside the region of convergence of the series
            const double nan = std::numeric_limits<double>::quiet_NaN();
            rep.rows.push_back({z.real(), z.imag(), r, 0.0, nan, nan, nan, nan});
            continue;
        }
        ++inside;
        int terms = options.n_terms;
        if (terms <= 0) {
            terms = r > 0.0 ? static_cast<int>(std::ceil(std::log(options.target) / std::log(r))) : 1;
            terms = std::clamp(terms, 1, kernel.n_max());
        }
        const cplx exact = amp(z);
        const double e = rel(laplace_bridge(z, kernel, terms), exact);
        const double predicted = std::pow(r, terms);
        const double e_rate = rel(laplace_bridge(z, kernel, options.rate_terms), exact);
        const double p_rate = std::pow(r, options.rate_terms);
        if (std::abs(z) >= options.far_threshold) {
            worst = std::max(worst, e);
        }
        if (p_rate > 1e-10) {
            worst_rate = std::max(worst_rate, std::abs(e_rate / p_rate - 1.0));
        }
        rep.rows.push_back({z.real(), z.imag(), r, static_cast<double>(terms), e, predicted, e_rate, p_rate});
    }
    rep.residuals.push_back(at_least("points_converging", inside, 1.0));
    rep.residuals.push_back(at_most("max_rel_error_far", worst, options.tolerance));
    rep.residuals.push_back(at_most("geometric_rate_mismatch", worst_rate, options.rate_tolerance));
    return rep;
}

Report volterra(const ModelParams& params, double b2, const VolterraCheckOptions& options) {
    if (params.regime() != Regime::NonlocalInTime) {
        throw ParameterError("volterra: needs the nonlocal regime");
    }
    Report rep;
    rep.check = "volterra";
    rep.columns = {"tau", "re_march", "im_march", "re_series", "im_series", "rel_err"};
    const BoundaryData boundary = BoundaryData::nonlocal(params, b2);
    const TimeKernel kernel(params, boundary);

    auto max_error = [&](const VolterraResult& r, bool record) {
        double worst = 0.0;
        for (std::size_t j = 0; j < r.tau.size(); ++j) {
            if (r.tau[j] < options.tau_min) {
                continue;
            }
            const cplx s = ttilde_series(r.tau[j], kernel, options.series_terms).value;
            const double e = rel(r.f[j], s);
            worst = std::max(worst, e);
            if (record) {
                rep.rows.push_back({r.tau[j], r.f[j].real(), r.f[j].imag(), s.real(), s.imag(), e});
            }
        }
        return worst;
    };

    const auto coarse =
        volterra_march(params, boundary, TimeGrid::graded(params, options.tau_max, options.m), options.march);
    const auto fine =
        volterra_march(params, boundary, TimeGrid::graded(params, options.tau_max, 2 * options.m), options.march);
    const double e1 = max_error(coarse, true);
    const double e2 = max_error(fine, false);
    rep.residuals.push_back(at_most("max_rel_error", e1, options.tolerance));
    const double order = e2 > 0.0 ? std::log2(e1 / e2) : std::numeric_limits<double>::infinity();
    rep.residuals.push_back(at_least("refinement_order", order, options.min_order));
    return rep;
}

Report composition(const ReducedAmplitude& amp, const CompositionOptions& options) {
    if (!(options.t2 >= options.t1 && options.t1 >= options.t0)) {
        throw ParameterError("composition: needs t2 >= t1 >= t0");
    }
    Report rep;
    rep.check = "composition";
    rep.columns = {"t", "norm"};
    const RadialState psi = packet(options.packet);
    const ModelParams& params = amp.params();
    double worst = 0.0;
    for (double t : {options.t1, options.t2}) {
        const double n = evolve(EvolvedState(psi), t, options.t0, amp, options.contour).norm(params);
        worst = std::max(worst, std::abs(n - psi.norm()));
        rep.rows.push_back({t, n});
    }
    rep.residuals.push_back(at_most("max_norm_deviation", worst, options.norm_tolerance));
    const double c = composition_residual(options.t2, options.t1, options.t0, psi, amp, options.contour);
    rep.residuals.push_back(at_most("composition_residual", c, options.tolerance));
    return rep;
}

Report appendix_d(const ReducedAmplitude& amp, const AppendixDCheckOptions& options) {
    Report rep;
    rep.check = "appendix-d";
    rep.columns = {"nu", "t", "re_R", "im_R", "abs_R"};
    const auto probe = appendix_d_probe(options.nu, options.gamma0, options.t, amp, options.quadrature);
    for (const auto& row : probe.rows) {
        rep.rows.push_back({row.nu, row.t, row.value.real(), row.value.imag(), std::abs(row.value)});
    }
    if (amp.regime() == Regime::Local) {
        rep.residuals.push_back({"log_log_slope", probe.slope, options.slope_target - options.slope_tolerance,
                                 options.slope_target + options.slope_tolerance});
    } else {
        std::vector<double> var;
        for (const auto& s : probe.summary) {
            var.push_back(s.variation);
        }
        const auto& first = probe.summary.front();
        const auto& last = probe.summary.back();
        rep.residuals.push_back(flag("variation_decreasing", strictly_decreasing(var)));
        rep.residuals.push_back(at_most("relative_variation_last",
                                        last.max_abs > 0.0 ? last.variation / last.max_abs : unbounded,
                                        options.variation_tolerance));
        rep.residuals.push_back(at_most("magnitude_drift",
                                        first.max_abs > 0.0 ? std::abs(last.max_abs / first.max_abs - 1.0)
                                                            : unbounded,
                                        options.magnitude_drift));
        rep.residuals.push_back(at_least("magnitude_last", last.max_abs, 1e-6));
    }
    return rep;
}

Report continuity(const ReducedAmplitude& amp, const ContinuityCheckOptions& options) {
    Report rep;
    rep.check = "continuity";
    rep.columns = {"t", "re_overlap", "im_overlap", "deviation"};
    const RadialState psi = packet(options.packet);
    const auto rows = continuity_probe(psi, options.t, amp, options.contour);
    std::vector<double> dev;
    for (const auto& r : rows) {
        dev.push_back(r.deviation);
        rep.rows.push_back({r.t, r.overlap.real(), r.overlap.imag(), r.deviation});
    }
    std::vector<double> order = options.t;
    rep.residuals.push_back(flag("times_decreasing", strictly_decreasing(order)));
    rep.residuals.push_back(flag("deviation_decreasing", strictly_decreasing(dev)));
    return rep;
}

} // namespace gqd::checks
