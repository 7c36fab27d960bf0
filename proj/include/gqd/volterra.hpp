#pragma once

#include "gqd/amplitude.hpp"

#include <vector>

namespace gqd {

/// Nodes tau_j = tau_max (j/M)^gamma, j = 1..M, graded toward 0.
struct TimeGrid {
    double tau_max = 0.5;
    double gamma = 4.0;
    int m = 400;
    std::vector<double> nodes;

    /// gamma <= 0 selects max(2, 1/(1/2 - alpha)), which makes tau^(1/2-alpha)
    /// uniform on the grid. ParameterError unless gamma >= 2 and gamma (1/2-alpha) >= 1.
    static TimeGrid graded(const ModelParams& params, double tau_max, int m, double gamma = 0.0);
};

struct VolterraOptions {
    /// Nodes with tau <= seed_fraction * tau_max are pinned to the analytic f(tau).
    double seed_fraction = 0.01;
    /// When positive, pins exactly this many leading nodes instead.
    int seed_nodes = 0;
    /// Terms of the small-tau expansion sum_n a_n tau^(n(1/2-alpha)-1) used on the
    /// pinned nodes. 2 is the interaction kernel f(tau) itself; the mismatch at
    /// the handoff then limits M -> 2M convergence to first order when b2 != 0.
    int seed_terms = 2;
    double iteration_tol = 1e-14;
    int max_iterations = 60;
    int inner_order = 6;
    int outer_order = 8;
};

struct VolterraResult {
    std::vector<double> tau;
    std::vector<cplx> f;
    int seed_nodes = 0;
    /// Terms of the small-tau expansion sum_n a_n tau^(n(1/2-alpha)-1) used on the
    /// pinned nodes. 2 is the interaction kernel f(tau) itself; the mismatch at
    /// the handoff then limits M -> 2M convergence to first order when b2 != 0.
    int seed_terms = 2;
};

/// Marches tau f(tau) = (f * W * f)(tau), W(sigma) = sigma K(sigma), on `grid`.
///
/// f is carried as tau^(p-1) H(rho) with rho = tau^p, p = 1/2 - alpha, and H
/// piecewise linear in rho. The pair convolution f*f is evaluated per node with a
/// substitution that makes both endpoint singularities smooth, and the outer
/// convolution with W uses product weights in rho with a singular map on the
/// last panel. Each node is solved by fixed-point iteration.
VolterraResult volterra_march(const ModelParams& params, const BoundaryData& boundary,
                              const TimeGrid& grid, const VolterraOptions& options = {});

struct VolterraRefinement {
    VolterraResult coarse;
    VolterraResult fine;
    /// max_j |f_M(tau_j) - f_2M(tau_j)| / |f_2M(tau_j)| over the coarse nodes.
    double max_rel_change = 0.0;
};

/// March on M and 2M nodes pinning the same seed interval on both; ConvergenceError if max_rel_change exceeds `tolerance`.
VolterraRefinement volterra_refined(const ModelParams& params, const BoundaryData& boundary,
                                    double tau_max, int m, double tolerance,
                                    const VolterraOptions& options = {});

} // namespace gqd
