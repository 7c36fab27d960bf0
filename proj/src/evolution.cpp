#include "gqd/evolution.hpp"

#include "gqd/errors.hpp"
#include "gqd/model.hpp"
#include "gqd/parallel.hpp"
#include "gqd/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gqd {

namespace {

constexpr cplx I{0.0, 1.0};

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) {
        throw ParameterError(std::string(what) + " must be finite");
    }
}

// One sampled point of the contour integral: weight already holds the Filon
// weight of e^{-i x tau} and the growth factor e^{y |tau|}.
struct LineSample {
    cplx z;
    cplx weight;
    cplx value;
};

struct LineProblem {
    double tau = 0.0;
    double y = 1.0;
    // Largest free energy the integrand resolves (1/(z - E) factors).
    double e_hi = 0.0;
    // Integrand has an additional 1/(z - E_k) applied later by the caller.
    bool per_energy = true;
    std::vector<double> anchors;
};

std::vector<LineSample> sample_line(const LineProblem& prob, const ContourSpec& spec,
                                    const std::function<cplx(cplx)>& integrand) {
    const double tau = prob.tau;
    const double y = prob.y;
    const double sign = tau > 0.0 ? 1.0 : -1.0;
    const double growth_factor = std::exp(y * std::abs(tau));
    const int order = spec.order;

    double lo = -10.0 * y;
    for (double a : prob.anchors) {
        lo = std::min(lo, a - 10.0 * y);
    }
    const double hi = spec.energy_span * prob.e_hi + 10.0 * y;
    const double h = spec.panel_fraction * y;

    std::vector<LineSample> out;
    auto add_panel = [&](double a, double b) {
        const auto panel = quad::filon_legendre(a, b, tau, order);
        for (int i = 0; i < order; ++i) {
            out.push_back({cplx(panel.nodes[i], sign * y), growth_factor * panel.weights[i], {}});
        }
    };
    auto evaluate_from = [&](std::size_t first) {
        parallel_for(out.size() - first, [&](std::size_t i) {
            out[first + i].value = integrand(out[first + i].z);
        });
    };

    const int fine = std::max(1, static_cast<int>(std::ceil((hi - lo) / h)));
    const double width = (hi - lo) / fine;
    for (int j = 0; j < fine; ++j) {
        add_panel(lo + j * width, lo + (j + 1) * width);
    }
    evaluate_from(0);

    double peak = 0.0;
    for (const auto& s : out) {
        peak = std::max(peak, std::abs(s.value));
    }
    const double threshold = std::max(spec.abs_tol, spec.rel_tol * growth_factor * peak);
    const double osc = 2.0 / std::abs(tau);

    // March outward on each side until the remainder bound is met.
    for (int side : {1, -1}) {
        double edge = side > 0 ? hi : lo;
        double w = width;
        for (;;) {
            w = std::min(w * (1.0 + spec.growth), std::max(width, spec.growth * std::abs(edge)));
            const double next = edge + side * w;
            if (spec.x_max > 0.0 && std::abs(next) > spec.x_max) {
                throw ToleranceError("contour tail bound not met within x_max");
            }
            if (std::abs(next) > 1e14) {
                throw ToleranceError("contour tail bound not met");
            }
            const std::size_t first = out.size();
            if (side > 0) {
                add_panel(edge, next);
            } else {
                add_panel(next, edge);
            }
            evaluate_from(first);
            edge = next;
            const cplx z_end(edge, sign * y);
            double bound = growth_factor * std::abs(integrand(z_end)) * std::min(std::abs(edge), osc);
            if (prob.per_energy) {
                bound /= side > 0 ? edge - prob.e_hi : -edge;
            }
            if (bound <= threshold) {
                break;
            }
        }
    }
    return out;
}

double max_energy(const RadialGrid& grid, const ModelParams& params) {
    return params.energy(grid.hi());
}

std::vector<double> pole_anchors(const ReducedAmplitude& amp) {
    return amp.poles();
}

// psi(k) multiplied by e^{i E_k s}.
RadialState phased(const RadialState& psi, const ModelParams& params, double s) {
    if (s == 0.0) {
        return psi;
    }
    return psi.multiplied([&](double k) { return std::exp(I * (params.energy(k) * s)); });
}

// Overlap of phi with one wave at source time t_w, in closed form:
// \int d^3k phi^2 S(E) / (z - E) = pref sum_i c_i (I1(z_i) - I1(z)) / (z - z_i).
class WaveOverlap {
public:
    WaveOverlap(const ScatteredWave& wave, const ModelParams& params) : wave_(&wave), params_(params) {
        i1_.reserve(wave.z.size());
        for (cplx zi : wave.z) {
            i1_.push_back(model::continued_I1(zi, params));
        }
    }

    cplx operator()(cplx z) const {
        const cplx i1z = model::continued_I1(z, params_);
        const auto& zs = wave_->z;
        const auto& cs = wave_->c;
        cplx acc{0.0, 0.0};
        for (std::size_t i = 0; i < zs.size(); ++i) {
            const cplx d = z - zs[i];
            if (std::abs(d) < 0.05 * std::abs(z)) {
                acc += cs[i] * (d == cplx(0.0, 0.0) ? model::loop_integral_I2(z, params_)
                                                    : model::loop_integral_I11(zs[i], z, params_));
            } else {
                acc += cs[i] * (i1_[i] - i1z) / d;
            }
        }
        return wave_->pref * acc;
    }

private:
    const ScatteredWave* wave_;
    ModelParams params_;
    std::vector<cplx> i1_;
};

// The wave pref \int dx e^{-i z tau} N(z) G(z) / (z - E) created by U_I(t, t - tau).
ScatteredWave make_wave(const std::function<cplx(cplx)>& overlap, double e_hi, double tau, double t,
                        const ReducedAmplitude& amp, const ContourSpec& contour) {
    LineProblem prob;
    prob.tau = tau;
    prob.y = contour.height(tau);
    prob.e_hi = e_hi;
    prob.anchors = pole_anchors(amp);
    const auto samples = sample_line(prob, contour, [&](cplx z) { return amp(z) * overlap(z); });
    ScatteredWave wave;
    wave.t = t;
    wave.pref = (tau > 0.0 ? 1.0 : -1.0) * I / (2.0 * pi);
    wave.z.reserve(samples.size());
    wave.c.reserve(samples.size());
    for (const auto& s : samples) {
        wave.z.push_back(s.z);
        wave.c.push_back(s.weight * s.value);
    }
    return wave;
}

std::vector<cplx> sample_wave(const ScatteredWave& wave, const RadialGrid& grid, const ModelParams& params) {
    const auto nodes = grid.nodes();
    std::vector<cplx> out(nodes.size());
    parallel_for(nodes.size(), [&](std::size_t j) {
        const double e = params.energy(nodes[j]);
        out[j] = std::exp(I * (e * wave.t)) * model::form_factor(nodes[j], params) * wave.amplitude(e);
    });
    return out;
}

void check_time(double t, const char* what) {
    require_finite(t, what);
}

double mass_beyond(double k0, double sigma, double k_max) {
    auto density = [&](double k) {
        return cplx(k * k * std::exp(-(k - k0) * (k - k0) / (2.0 * sigma * sigma)), 0.0);
    };
    const double lo = std::max(0.0, k0 - 40.0 * sigma);
    const double top = k0 + 40.0 * sigma;
    if (k_max >= top) {
        return 0.0;
    }
    const double total = quad::integrate(density, lo, top).value.real();
    const double out = quad::integrate(density, std::max(k_max, lo), top).value.real();
    return out / total;
}

} // namespace

void ContourSpec::validate() const {
    if (y && !(*y > 0.0)) {
        throw DomainError("contour height y must be > 0");
    }
    if (!(x_max >= 0.0) || !(panel_fraction > 0.0) || !(energy_span >= 1.0) || !(growth > 0.0) || !(abs_tol > 0.0) ||
        !(rel_tol >= 0.0) || order < 2 || order > 40) {
        throw ParameterError("invalid contour specification");
    }
}

double ContourSpec::height(double tau) const {
    validate();
    if (y) {
        return *y;
    }
    return std::min(1.0, 1.0 / std::max(std::abs(tau), 0.1));
}

std::shared_ptr<const RadialGrid> packet_grid(double k0, double sigma, const PacketGridSpec& spec) {
    if (!(k0 > 0.0) || !(sigma > 0.0)) {
        throw ParameterError("packet_grid: k0 and sigma must be > 0");
    }
    if (!(spec.k_max > 0.0) || !(spec.t_max >= 0.0) || !(spec.periods > 0.0) || !(spec.h_min > 0.0) ||
        !(spec.growth > 0.0) || !(spec.mu > 0.0) || spec.order < 2) {
        throw ParameterError("packet_grid: invalid grid spec");
    }
    // 2 mu, since dE/dk = k / mu: one period of e^{-i E t} spans 2 pi mu / (k t).
    const double mu = spec.mu;
    const double core_lo = k0 - 12.0 * sigma;
    const double core_hi = k0 + 12.0 * sigma;
    std::vector<double> breaks{0.0};
    double k = 0.0;
    double prev = spec.h_min;
    while (k < spec.k_max) {
        double w = 0.5 * k + spec.h_min;
        w = std::min(w, prev * (1.0 + spec.growth));
        const bool in_core = k + w > core_lo && k < core_hi;
        if (in_core) {
            w = std::min(w, sigma);
        } else if (k < core_lo && k + w > core_lo) {
            w = core_lo - k;
        }
        if (spec.t_max > 0.0 && k > 0.0) {
            w = std::min(w, spec.periods * 2.0 * pi * mu / (k * spec.t_max));
        }
        w = std::max(w, 1e-12 * (1.0 + k));
        k = std::min(k + w, spec.k_max);
        if (spec.k_max - k < 0.25 * w) {
            k = spec.k_max;
        }
        breaks.push_back(k);
        prev = breaks[breaks.size() - 1] - breaks[breaks.size() - 2];
    }
    return std::make_shared<const RadialGrid>(RadialGrid::from_breaks(std::move(breaks), spec.order));
}

RadialState make_gaussian_packet(double k0, double sigma, std::shared_ptr<const RadialGrid> grid) {
    if (!(k0 > 0.0) || !(sigma > 0.0)) {
        throw ParameterError("make_gaussian_packet: k0 and sigma must be > 0");
    }
    if (mass_beyond(k0, sigma, grid->hi()) > 1e-10) {
        throw ToleranceError("make_gaussian_packet: packet extends beyond the grid");
    }
    std::vector<cplx> values;
    values.reserve(grid->size());
    for (double k : grid->nodes()) {
        values.emplace_back(std::exp(-(k - k0) * (k - k0) / (4.0 * sigma * sigma)), 0.0);
    }
    return RadialState(std::move(grid), std::move(values)).normalized();
}

RadialState make_gaussian_packet(double k0, double sigma, const PacketGridSpec& spec) {
    return make_gaussian_packet(k0, sigma, packet_grid(k0, sigma, spec));
}

std::shared_ptr<const RadialGrid> appendix_d_grid(double nu, double gamma0, const AppendixDGridSpec& spec) {
    if (!(nu > 0.0) || !(gamma0 > 0.0)) {
        throw ParameterError("appendix_d_grid: nu and gamma0 must be > 0");
    }
    if (!(spec.tail_factor > 2.0) || !(spec.peak_resolution > 0.0) || spec.order < 2) {
        throw ParameterError("appendix_d_grid: invalid grid spec");
    }
    const double width = nu * gamma0;
    const double fine = width / spec.peak_resolution;
    const double core_lo = std::max(0.0, nu - 20.0 * width);
    const double core_hi = nu + 20.0 * width;
    const double k_max = nu * spec.tail_factor;
    std::vector<double> breaks{0.0};
    double k = 0.0;
    const double h_min = std::min(fine, 0.01 * nu);
    while (k < k_max) {
        double w;
        if (k < core_lo) {
            w = std::min(0.5 * k + h_min, core_lo - k);
            const double dist = core_lo - k;
            w = std::min(w, std::max(fine, 0.3 * dist));
        } else if (k < core_hi) {
            w = std::min(fine, core_hi - k);
        } else {
            w = std::max(fine, 0.3 * (k - core_hi));
        }
        k = std::min(k + w, k_max);
        breaks.push_back(k);
    }
    return std::make_shared<const RadialGrid>(RadialGrid::from_breaks(std::move(breaks), spec.order));
}

RadialState make_appendix_d_state(double nu, double gamma0, std::shared_ptr<const RadialGrid> grid) {
    if (!(nu > 0.0) || !(gamma0 > 0.0)) {
        throw ParameterError("make_appendix_d_state: nu and gamma0 must be > 0");
    }
    const std::size_t peak = grid->panel_of(nu);
    if (peak == RadialGrid::npos) {
        throw ToleranceError("make_appendix_d_state: grid does not contain the peak");
    }
    const auto br = grid->breaks();
    if (br[peak + 1] - br[peak] > nu * gamma0) {
        throw ToleranceError("make_appendix_d_state: Lorentzian peak is under-resolved");
    }
    const cplx pole(nu, nu * gamma0);
    std::vector<cplx> values;
    values.reserve(grid->size());
    for (double k : grid->nodes()) {
        values.push_back(std::sqrt(nu) / (k * (k - pole)));
    }
    return RadialState(std::move(grid), std::move(values)).normalized();
}

RadialState make_appendix_d_state(double nu, double gamma0, const AppendixDGridSpec& spec) {
    return make_appendix_d_state(nu, gamma0, appendix_d_grid(nu, gamma0, spec));
}

double appendix_d_constant(double nu, double gamma0, const RadialGrid& grid) {
    if (!(nu > 0.0) || !(gamma0 > 0.0)) {
        throw ParameterError("appendix_d_constant: nu and gamma0 must be > 0");
    }
    const cplx pole(nu, nu * gamma0);
    const auto nodes = grid.nodes();
    const auto weights = grid.weights();
    double norm2 = 0.0;
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        norm2 += weights[j] * 4.0 * pi * nu * std::norm(1.0 / (nodes[j] - pole));
    }
    return 1.0 / std::sqrt(norm2);
}

cplx ScatteredWave::amplitude(double energy) const {
    cplx acc{0.0, 0.0};
    for (std::size_t i = 0; i < z.size(); ++i) {
        acc += c[i] / (z[i] - energy);
    }
    return pref * acc;
}

RadialState EvolvedState::sample(const ModelParams& params) const {
    RadialState out = base_;
    auto& v = out.mutable_values();
    for (const auto& w : waves_) {
        const auto s = sample_wave(w, base_.grid(), params);
        for (std::size_t j = 0; j < v.size(); ++j) {
            v[j] += s[j];
        }
    }
    return out;
}

double EvolvedState::norm(const ModelParams& params) const {
    // ||base||^2 + 2 Re sum <base|w> + sum <w'|w>; base vanishes off the grid
    double n2 = base_.norm() * base_.norm();
    std::vector<std::vector<cplx>> sampled;
    for (const auto& w : waves_) {
        sampled.push_back(sample_wave(w, base_.grid(), params));
        n2 += 2.0 * base_.inner(RadialState(base_.grid_ptr(), sampled.back())).real();
    }
    for (std::size_t a = 0; a < waves_.size(); ++a) {
        for (std::size_t b = 0; b < waves_.size(); ++b) {
            const ScatteredWave& wa = waves_[a];
            const ScatteredWave& wb = waves_[b];
            if (wa.t != wb.t) {
                n2 += RadialState(base_.grid_ptr(), sampled[a]).inner(RadialState(base_.grid_ptr(), sampled[b])).real();
                continue;
            }
            // \int phi^2 conj(S_a) S_b = conj(p_a) p_b sum c_bi conj(c_aj) (I1(z_bi) - I1(conj z_aj)) / (conj z_aj - z_bi)
            std::vector<cplx> ia(wa.z.size());
            std::vector<cplx> ib(wb.z.size());
            for (std::size_t j = 0; j < wa.z.size(); ++j) {
                ia[j] = std::conj(model::continued_I1(wa.z[j], params));
            }
            for (std::size_t i = 0; i < wb.z.size(); ++i) {
                ib[i] = model::continued_I1(wb.z[i], params);
            }
            std::vector<cplx> rows(wb.z.size());
            parallel_for(wb.z.size(), [&](std::size_t i) {
                cplx acc{0.0, 0.0};
                for (std::size_t j = 0; j < wa.z.size(); ++j) {
                    const cplx za = std::conj(wa.z[j]);
                    acc += std::conj(wa.c[j]) * (ib[i] - ia[j]) / (za - wb.z[i]);
                }
                rows[i] = wb.c[i] * acc;
            });
            cplx sum{0.0, 0.0};
            for (cplx r : rows) {
                sum += r;
            }
            n2 += (std::conj(wa.pref) * wb.pref * sum).real();
        }
    }
    return std::sqrt(std::max(n2, 0.0));
}

EvolvedState evolve(const EvolvedState& in, double t, double t0, const ReducedAmplitude& amp,
                    const ContourSpec& contour) {
    check_time(t, "t");
    check_time(t0, "t0");
    contour.validate();
    const ModelParams& params = amp.params();
    const double tau = t - t0;
    if (tau == 0.0 || params.is_free()) {
        return in;
    }
    RadialState source = phased(in.base(), params, -t0);
    std::vector<WaveOverlap> exact;
    for (const auto& w : in.waves()) {
        if (w.t == t0) {
            exact.emplace_back(w, params);
            continue;
        }
        const auto s = sample_wave(w, in.base().grid(), params);
        auto& v = source.mutable_values();
        const auto nodes = source.grid().nodes();
        for (std::size_t j = 0; j < v.size(); ++j) {
            v[j] += std::exp(-I * (params.energy(nodes[j]) * t0)) * s[j];
        }
    }
    const model::OverlapKernel grid_part(source, params);
    auto overlap = [&](cplx z) {
        cplx g = grid_part(z);
        for (const auto& e : exact) {
            g += e(z);
        }
        return g;
    };
    EvolvedState out = in;
    out.add(make_wave(overlap, max_energy(in.base().grid(), params), tau, t, amp, contour));
    return out;
}

RadialState apply_evolution(const RadialState& psi, double t, double t0, const ReducedAmplitude& amp,
                            const ContourSpec& contour, Picture picture) {
    check_time(t, "t");
    check_time(t0, "t0");
    contour.validate();
    const ModelParams& params = amp.params();
    if (picture == Picture::Interaction) {
        return evolve(EvolvedState(psi), t, t0, amp, contour).sample(params);
    }
    // U = e^{-i H0 t} U_I e^{i H0 t0}
    const RadialState in = phased(psi, params, t0);
    return phased(evolve(EvolvedState(in), t, t0, amp, contour).sample(params), params, -t);
}

cplx matrix_element_R(const RadialState& psi2, const RadialState& psi1, double t, double t0,
                      const ReducedAmplitude& amp, const ContourSpec& contour) {
    check_time(t, "t");
    check_time(t0, "t0");
    contour.validate();
    const ModelParams& params = amp.params();
    const double tau = t - t0;
    if (tau == 0.0 || params.is_free()) {
        return {0.0, 0.0};
    }
    const RadialState source = phased(psi1, params, -t0);
    std::vector<cplx> conj2(psi2.values().begin(), psi2.values().end());
    for (auto& v : conj2) {
        v = std::conj(v);
    }
    const RadialState bra = phased(RadialState(psi2.grid_ptr(), std::move(conj2)), params, t);
    const model::OverlapKernel bra_overlap(bra, params);
    const model::OverlapKernel ket_overlap(source, params);
    LineProblem prob;
    prob.tau = tau;
    prob.y = contour.height(tau);
    prob.e_hi = std::max(max_energy(psi1.grid(), params), max_energy(psi2.grid(), params));
    prob.anchors = pole_anchors(amp);
    prob.per_energy = false;
    const auto samples = sample_line(prob, contour, [&](cplx z) {
        return amp(z) * bra_overlap(z) * ket_overlap(z);
    });
    cplx acc{0.0, 0.0};
    for (const auto& s : samples) {
        acc += s.weight * s.value;
    }
    return (tau > 0.0 ? 1.0 : -1.0) * I / (2.0 * pi) * acc;
}

double composition_residual(double t2, double t1, double t0, const RadialState& psi,
                            const ReducedAmplitude& amp, const ContourSpec& contour) {
    if (!(t2 >= t1 && t1 >= t0)) {
        throw DomainError("composition_residual: need t2 >= t1 >= t0");
    }
    const ModelParams& params = amp.params();
    const EvolvedState start(psi);
    const EvolvedState two_step = evolve(evolve(start, t1, t0, amp, contour), t2, t1, amp, contour);
    const EvolvedState direct = evolve(start, t2, t0, amp, contour);
    return two_step.sample(params).distance(direct.sample(params));
}

DurationKernel::DurationKernel(const ReducedAmplitude& amp, int n_max) {
    const ModelParams& params = amp.params();
    if (n_max < 1) {
        throw ParameterError("DurationKernel: n_max must be >= 1");
    }
    if (params.is_free()) {
        return;
    }
    const double p = params.p();
    // log c_n as a complex log so that negative c_n carry a phase of pi
    std::vector<cplx> log_c;
    if (params.regime() == Regime::Local) {
        const double lambda = amp.lambda();
        q_ = -p;
        boundary_ = -I * lambda;
        if (lambda == 0.0) {
            return;
        }
        const double lc = lambda * model::loop_prefactor(params);
        for (int n = 1; n <= n_max; ++n) {
            log_c.push_back(specfun::principal_log(cplx(lambda, 0.0)) +
                            static_cast<double>(n) * specfun::principal_log(cplx(lc, 0.0)));
        }
    } else {
        q_ = p;
        const double b1 = amp.b1();
        const cplx b2 = amp.b2();
        const cplx log_b1 = specfun::principal_log(cplx(b1, 0.0));
        if (b2 == cplx(0.0, 0.0)) {
            log_c.push_back(log_b1);
        } else {
            const cplx log_r = specfun::principal_log(b2 / b1);
            for (int n = 1; n <= n_max; ++n) {
                log_c.push_back(log_b1 + static_cast<double>(n - 1) * log_r);
            }
        }
    }
    zero_ = false;
    for (std::size_t i = 0; i < log_c.size(); ++i) {
        const double nq = static_cast<double>(i + 1) * q_;
        log_a_.push_back(log_c[i] + I * (pi * nq / 2.0 - pi / 2.0) - specfun::log_gamma(cplx(nq, 0.0)));
    }
}

cplx DurationKernel::mapped(double L, double w) const {
    if (zero_ || L <= 0.0) {
        return {0.0, 0.0};
    }
    const double log_l = std::log(L);
    const double log_w = w > 0.0 ? std::log(w) : -std::numeric_limits<double>::infinity();
    cplx acc{0.0, 0.0};
    double largest = 0.0;
    for (std::size_t i = 0; i < log_a_.size(); ++i) {
        const double n = static_cast<double>(i + 1);
        cplx log_term = log_a_[i] + n * q_ * log_l;
        if (i > 0) {
            if (w == 0.0) {
                break;
            }
            log_term += (n - 1.0) * log_w;
        }
        const cplx term = std::exp(log_term);
        acc += term;
        largest = std::max(largest, std::abs(term));
        if (i > 8 && std::abs(term) < 1e-17 * std::max(std::abs(acc), largest * 1e-8)) {
            return acc;
        }
    }
    if (log_a_.size() > 1) {
        throw ToleranceError("DurationKernel: series not converged");
    }
    return acc;
}

cplx DurationKernel::regular(double s) const {
    if (!(s > 0.0)) {
        throw DomainError("DurationKernel: s must be > 0");
    }
    // s = L w^(1/q) with w = 1
    return mapped(s, 1.0) / s;
}

FreeOverlap grid_free_overlap(const RadialState& psi, const ModelParams& params) {
    const auto nodes = psi.grid().nodes();
    const auto weights = psi.grid().weights();
    std::vector<double> energy(nodes.size());
    std::vector<cplx> amp(nodes.size());
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        energy[j] = params.energy(nodes[j]);
        amp[j] = params.is_free()
                     ? cplx(0.0, 0.0)
                     : weights[j] * 4.0 * pi * nodes[j] * nodes[j] * model::form_factor(nodes[j], params) *
                           psi.values()[j];
    }
    return [energy = std::move(energy), amp = std::move(amp)](double u) {
        cplx acc{0.0, 0.0};
        for (std::size_t j = 0; j < amp.size(); ++j) {
            acc += amp[j] * std::exp(-I * (energy[j] * u));
        }
        return acc;
    };
}

FreeOverlap appendix_d_free_overlap(double nu, double gamma0, double d, const ModelParams& params) {
    if (!(nu > 0.0) || !(gamma0 > 0.0)) {
        throw ParameterError("appendix_d_free_overlap: nu and gamma0 must be > 0");
    }
    const double alpha = params.alpha;
    const cplx pref = 4.0 * pi * params.c1 * d * std::sqrt(nu) * std::pow(nu, 1.0 - alpha) *
                      std::exp(-I * (pi * (2.0 - alpha) / 4.0));
    const cplx rot = std::exp(-I * (pi / 4.0));
    const cplx pole(1.0, gamma0);
    const double scale = nu * nu / (2.0 * params.mu);
    const auto& rule = quad::gauss_legendre(10);
    return [=, &rule](double u) -> cplx {
        if (!(u > 0.0)) {
            throw DomainError("appendix_d_free_overlap: u must be > 0");
        }
        if (pref == cplx(0.0, 0.0)) {
            return {0.0, 0.0};
        }
        const double T = scale * u;
        // v = e^x; the Gaussian cut sits near v = 1 / sqrt(T)
        const double x_hi = 0.5 * std::log(36.0 / T);
        const double x_lo = std::min(std::log(1e-7), x_hi - 40.0 / (2.0 - alpha));
        const int panels = static_cast<int>(std::ceil((x_hi - x_lo) / 0.5));
        const double h = (x_hi - x_lo) / panels;
        cplx acc{0.0, 0.0};
        for (int j = 0; j < panels; ++j) {
            const double c = x_lo + (j + 0.5) * h;
            for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
                const double x = c + 0.5 * h * rule.nodes[i];
                const double v = std::exp(x);
                acc += rule.weights[i] * std::exp((2.0 - alpha) * x - T * v * v) / (v * rot - pole);
            }
        }
        return pref * acc * (0.5 * h);
    };
}

cplx matrix_element_R_time(const FreeOverlap& beta2, const FreeOverlap& beta1, double t, double t0,
                           const DurationKernel& kernel, const TimeDomainOptions& options) {
    check_time(t, "t");
    check_time(t0, "t0");
    const double T = t - t0;
    if (T < 0.0) {
        throw DomainError("matrix_element_R_time: need t >= t0");
    }
    if (T == 0.0 || kernel.is_zero()) {
        return {0.0, 0.0};
    }
    const double q = kernel.q();
    const quad::Tolerance tol{options.abs_tol, options.rel_tol, 4000};
    const cplx delta = kernel.boundary_weight();
    auto outer = [&](double v) -> cplx {
        const double sigma = T * v * v * v * v;
        const double jac = 4.0 * T * v * v * v;
        if (jac == 0.0) {
            return {0.0, 0.0};
        }
        const double L = T - sigma;
        const cplx b1 = beta1(t0 + sigma);
        cplx inner{0.0, 0.0};
        if (L > 0.0) {
            auto f = [&](double w) {
                const double s = L * std::pow(w, 1.0 / q);
                return kernel.mapped(L, w) * std::conj(beta2(t0 + sigma + s));
            };
            inner = quad::integrate_or_throw(f, 0.0, 1.0, tol) / q;
        }
        if (delta != cplx(0.0, 0.0)) {
            inner += delta * std::conj(beta2(t0 + sigma));
        }
        return jac * b1 * inner;
    };
    return quad::integrate_or_throw(outer, 0.0, 1.0, tol);
}

AppendixDReport appendix_d_probe(const std::vector<double>& nu_list, double gamma0,
                                 const std::vector<double>& t_list, const ReducedAmplitude& amp,
                                 const TimeDomainOptions& options) {
    if (nu_list.empty() || t_list.empty()) {
        throw ParameterError("appendix_d_probe: empty nu or t list");
    }
    const ModelParams& params = amp.params();
    const DurationKernel kernel(amp);
    AppendixDReport report;
    std::vector<double> lx;
    std::vector<double> ly;
    for (double nu : nu_list) {
        const auto grid = appendix_d_grid(nu, gamma0);
        // building the state guards the resolution requirement
        make_appendix_d_state(nu, gamma0, grid);
        const double d = appendix_d_constant(nu, gamma0, *grid);
        const FreeOverlap beta = appendix_d_free_overlap(nu, gamma0, d, params);
        std::vector<cplx> values(t_list.size());
        parallel_for(t_list.size(), [&](std::size_t i) {
            values[i] = t_list[i] == 0.0 ? cplx(0.0, 0.0)
                                         : matrix_element_R_time(beta, beta, t_list[i], 0.0, kernel, options);
        });
        AppendixDSummary sum;
        sum.nu = nu;
        double lo = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < t_list.size(); ++i) {
            report.rows.push_back({nu, t_list[i], values[i]});
            sum.max_abs = std::max(sum.max_abs, std::abs(values[i]));
            lo = std::min(lo, std::abs(values[i]));
        }
        sum.variation = sum.max_abs - lo;
        report.summary.push_back(sum);
        if (sum.max_abs > 0.0) {
            lx.push_back(std::log(nu));
            ly.push_back(std::log(sum.max_abs));
        }
    }
    if (lx.size() < 2) {
        report.slope = std::numeric_limits<double>::quiet_NaN();
    } else {
        const double n = static_cast<double>(lx.size());
        double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
        for (std::size_t i = 0; i < lx.size(); ++i) {
            sx += lx[i];
            sy += ly[i];
            sxx += lx[i] * lx[i];
            sxy += lx[i] * ly[i];
        }
        report.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    }
    return report;
}

std::vector<ContinuityRow> continuity_probe(const RadialState& psi, const std::vector<double>& t_sequence,
                                            const ReducedAmplitude& amp, const ContourSpec& contour) {
    std::vector<ContinuityRow> rows;
    const double n2 = psi.norm() * psi.norm();
    for (double t : t_sequence) {
        if (!(t >= 0.0)) {
            throw DomainError("continuity_probe: times must be >= 0");
        }
        ContinuityRow row;
        row.t = t;
        if (t == 0.0) {
            row.overlap = n2;
        } else {
            const RadialState v = apply_evolution(psi, t, 0.0, amp, contour, Picture::Schroedinger);
            row.overlap = psi.inner(v);
        }
        row.deviation = std::abs(row.overlap - n2);
        rows.push_back(row);
    }
    return rows;
}

} // namespace gqd
