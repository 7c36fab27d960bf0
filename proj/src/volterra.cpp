#include "gqd/volterra.hpp"

#include "gqd/errors.hpp"
#include "gqd/quadrature.hpp"
#include "gqd/timedomain.hpp"

#include <algorithm>
#include <cmath>

namespace gqd {

namespace {

class Marcher {
public:
    Marcher(const ModelParams& params, const TimeKernel& kernel, const TimeGrid& grid,
            const VolterraOptions& opt)
        : p_(params.p()), a1_(kernel.a1()), opt_(opt),
          inner_(quad::gauss_legendre(opt.inner_order)),
          outer_(quad::gauss_legendre(opt.outer_order)) {
        for (int n = 1; n <= opt.seed_terms; ++n) {
            seed_.push_back(kernel.coefficient(n));
        }
        kappa_ = params.is_free() ? cplx{} : model::kernel_K(1.0, params);
        tau_.push_back(0.0);
        rho_.push_back(0.0);
        for (double t : grid.nodes) {
            tau_.push_back(t);
            rho_.push_back(std::pow(t, p_));
        }
        h_.assign(tau_.size(), cplx{});
        h_right_.assign(tau_.size(), cplx{});
        qhat_.assign(tau_.size(), cplx{});
        h_[0] = a1_;
        h_right_[0] = a1_;
        const double beta = std::exp(2.0 * std::lgamma(p_) - std::lgamma(2.0 * p_));
        qhat_[0] = a1_ * a1_ * beta;
    }

    VolterraResult run(double tau_max) {
        VolterraResult res;
        const std::size_t n = tau_.size();
        const double seed_limit = opt_.seed_fraction * tau_max;
        for (std::size_t j = 1; j < n; ++j) {
            const bool pinned = opt_.seed_nodes > 0 ? j <= static_cast<std::size_t>(opt_.seed_nodes)
                                                    : tau_[j] <= seed_limit;
            if (pinned) {
                h_[j] = seed_h(rho_[j]);
                h_right_[j] = h_[j];
                qhat_[j] = compute_qhat(j);
                ++res.seed_nodes;
                continue;
            }
            if (j >= 2 && j == static_cast<std::size_t>(res.seed_nodes) + 1) {
                // The pinned seed is not the exact solution, so the marched
                // solution starts with a jump at the last seed node. Its right
                // limit follows from the equation with the seed as history.
                h_right_[j - 1] = outer_integral(j - 1) / rho_[j - 1];
            }
            const cplx slope = j >= 2 ? (h_[j - 1] - h_right_[j - 2]) / (rho_[j - 1] - rho_[j - 2]) : cplx{};
            h_[j] = h_right_[j - 1] + slope * (rho_[j] - rho_[j - 1]);
            h_right_[j] = h_[j];
            bool done = false;
            for (int it = 0; it < opt_.max_iterations; ++it) {
                qhat_[j] = compute_qhat(j);
                const cplx next = outer_integral(j) / rho_[j];
                const double change = std::abs(next - h_[j]);
                h_[j] = next;
                h_right_[j] = next;
                if (change <= opt_.iteration_tol * std::max(std::abs(next), 1e-300)) {
                    done = true;
                    break;
                }
            }
            if (!done) {
                throw ConvergenceError("volterra_march: node iteration did not converge");
            }
            qhat_[j] = compute_qhat(j);
        }
        res.tau.assign(tau_.begin() + 1, tau_.end());
        res.f.resize(n - 1);
        for (std::size_t j = 1; j < n; ++j) {
            res.f[j - 1] = std::pow(tau_[j], p_ - 1.0) * h_[j];
        }
        return res;
    }

private:
    // H on panel k runs from h_right_[k] to h_[k + 1].
    cplx h_at(double rho, std::size_t upto) const {
        if (rho <= 0.0) {
            return h_[0];
        }
        const auto first = rho_.begin();
        const auto last = rho_.begin() + static_cast<std::ptrdiff_t>(upto) + 1;
        auto it = std::upper_bound(first, last, rho);
        std::size_t k = it == first ? 0 : static_cast<std::size_t>(it - first) - 1;
        if (k >= upto) {
            k = upto - 1;
        }
        const double w = (rho - rho_[k]) / (rho_[k + 1] - rho_[k]);
        return h_right_[k] + w * (h_[k + 1] - h_right_[k]);
    }

    cplx f_at(double tau, std::size_t upto) const {
        return std::pow(tau, p_ - 1.0) * h_at(std::pow(tau, p_), upto);
    }

    // Qhat(u) = u^(1-2p) (f*f)(u) at u = tau_j. With s = (u/2) v^(1/p),
    // f(s) ds = (u/2)^p / p H((u/2)^p v) dv.
    cplx compute_qhat(std::size_t j) const {
        const double u = tau_[j];
        const double half_rho = std::pow(0.5 * u, p_);
        std::vector<double> vb{0.0, 1.0};
        for (std::size_t k = 1; k < j && rho_[k] < half_rho; ++k) {
            vb.push_back(rho_[k] / half_rho);
        }
        for (std::size_t k = j; k >= 1 && tau_[k] > 0.5 * u; --k) {
            const double s = u - tau_[k];
            if (s > 0.0) {
                vb.push_back(std::pow(s / (0.5 * u), p_));
            }
        }
        std::sort(vb.begin(), vb.end());
        cplx acc{};
        const auto& gl = inner_;
        for (std::size_t i = 0; i + 1 < vb.size(); ++i) {
            const double lo = vb[i];
            const double hi = vb[i + 1];
            if (hi - lo <= 0.0) {
                continue;
            }
            const double c = 0.5 * (hi + lo);
            const double r = 0.5 * (hi - lo);
            cplx part{};
            for (std::size_t g = 0; g < gl.nodes.size(); ++g) {
                const double v = c + r * gl.nodes[g];
                const double s = 0.5 * u * std::pow(v, 1.0 / p_);
                part += gl.weights[g] * h_at(half_rho * v, j) * f_at(u - s, j);
            }
            acc += r * part;
        }
        const cplx q = 2.0 * half_rho / p_ * acc;
        return std::pow(u, 1.0 - 2.0 * p_) * q;
    }

    // (kappa/p) int_0^{rho_j} (tau_j - rho^(1/p))^(-p) rho Qhat(rho) drho
    cplx outer_integral(std::size_t j) const {
        const double tj = tau_[j];
        const auto& gl = outer_;
        cplx acc{};
        for (std::size_t k = 0; k + 1 < j; ++k) {
            const double lo = rho_[k];
            const double hi = rho_[k + 1];
            const double c = 0.5 * (hi + lo);
            const double r = 0.5 * (hi - lo);
            cplx part{};
            for (std::size_t g = 0; g < gl.nodes.size(); ++g) {
                const double rho = c + r * gl.nodes[g];
                const double w = std::pow(tj - std::pow(rho, 1.0 / p_), -p_) * rho;
                part += gl.weights[g] * w * (qhat_[k] + (rho - lo) / (hi - lo) * (qhat_[k + 1] - qhat_[k]));
            }
            acc += r * part;
        }
        // Last panel: rho = rho_j - d w^(1/(1-p)) absorbs (rho_j - rho)^(-p).
        {
            const double lo = rho_[j - 1];
            const double hi = rho_[j];
            const double d = hi - lo;
            const double e = 1.0 / (1.0 - p_);
            cplx part{};
            for (std::size_t g = 0; g < gl.nodes.size(); ++g) {
                const double w = 0.5 * (1.0 + gl.nodes[g]);
                const double rho = hi - d * std::pow(w, e);
                const double jac = d * e * std::pow(w, p_ * e);
                const double sing = std::pow(tj - std::pow(rho, 1.0 / p_), -p_);
                const cplx qv = qhat_[j - 1] + (rho - lo) / d * (qhat_[j] - qhat_[j - 1]);
                part += 0.5 * gl.weights[g] * jac * sing * rho * qv;
            }
            acc += part;
        }
        return kappa_ / p_ * acc;
    }

    // sum_n a_n rho^(n-1), the seed expansion of tau^(1-p) f.
    cplx seed_h(double rho) const {
        cplx acc{};
        for (auto it = seed_.rbegin(); it != seed_.rend(); ++it) {
            acc = acc * rho + *it;
        }
        return acc;
    }

    double p_;
    cplx a1_;
    std::vector<cplx> seed_;
    cplx kappa_;
    VolterraOptions opt_;
    const quad::GaussLegendre& inner_;
    const quad::GaussLegendre& outer_;
    std::vector<double> tau_;
    std::vector<double> rho_;
    std::vector<cplx> h_;
    std::vector<cplx> h_right_;
    std::vector<cplx> qhat_;
};

} // namespace

TimeGrid TimeGrid::graded(const ModelParams& params, double tau_max, int m, double gamma) {
    params.validate();
    if (params.regime() != Regime::NonlocalInTime) {
        throw ParameterError("TimeGrid: nonlocal regime required");
    }
    if (!(tau_max > 0.0) || m < 4) {
        throw ParameterError("TimeGrid: need tau_max > 0 and at least 4 nodes");
    }
    const double p = params.p();
    if (gamma <= 0.0) {
        gamma = std::max(2.0, 1.0 / p);
    }
    if (gamma < 2.0 || gamma * p < 1.0 - 1e-12) {
        throw ParameterError("TimeGrid: grading exponent must satisfy gamma >= 2 and gamma (1/2-alpha) >= 1");
    }
    TimeGrid g;
    g.tau_max = tau_max;
    g.gamma = gamma;
    g.m = m;
    g.nodes.resize(m);
    for (int j = 1; j <= m; ++j) {
        g.nodes[j - 1] = tau_max * std::pow(static_cast<double>(j) / m, gamma);
    }
    g.nodes.back() = tau_max;
    return g;
}

VolterraResult volterra_march(const ModelParams& params, const BoundaryData& boundary,
                              const TimeGrid& grid, const VolterraOptions& options) {
    params.validate();
    if (params.regime() != Regime::NonlocalInTime || boundary.is_local()) {
        throw ParameterError("volterra_march: nonlocal regime required");
    }
    if (grid.nodes.size() < 4) {
        throw ParameterError("volterra_march: grid too small");
    }
    for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
        if (!(grid.nodes[i] > (i == 0 ? 0.0 : grid.nodes[i - 1]))) {
            throw ParameterError("volterra_march: nodes must be positive and increasing");
        }
    }
    if (options.seed_terms < 1) {
        throw ParameterError("volterra_march: seed_terms must be positive");
    }
    const TimeKernel kernel(params, boundary, std::max(2, options.seed_terms));
    Marcher marcher(params, kernel, grid, options);
    return marcher.run(grid.nodes.back());
}

VolterraRefinement volterra_refined(const ModelParams& params, const BoundaryData& boundary,
                                    double tau_max, int m, double tolerance,
                                    const VolterraOptions& options) {
    VolterraRefinement out;
    const TimeGrid coarse = TimeGrid::graded(params, tau_max, m);
    const TimeGrid fine = TimeGrid::graded(params, tau_max, 2 * m, coarse.gamma);
    VolterraOptions opt = options;
    if (opt.seed_nodes <= 0) {
        opt.seed_nodes = static_cast<int>(std::count_if(coarse.nodes.begin(), coarse.nodes.end(), [&](double t) {
            return t <= options.seed_fraction * tau_max;
        }));
    }
    out.coarse = volterra_march(params, boundary, coarse, opt);
    opt.seed_nodes *= 2;
    out.fine = volterra_march(params, boundary, fine, opt);
    for (std::size_t j = 0; j < out.coarse.f.size(); ++j) {
        const cplx ref = out.fine.f[2 * j + 1];
        const double scale = std::abs(ref);
        if (scale > 0.0) {
            out.max_rel_change = std::max(out.max_rel_change, std::abs(out.coarse.f[j] - ref) / scale);
        }
    }
    if (out.max_rel_change > tolerance) {
        throw ConvergenceError("volterra_refined: M -> 2M changed the solution by more than the tolerance");
    }
    return out;
}

} // namespace gqd
