#pragma once

#include "gqd/amplitude.hpp"
#include "gqd/state.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <vector>

namespace gqd {

enum class Picture { Interaction, Schroedinger };

/// The line Im z = y (forward) or Im z = -y (backward in time) carrying the
/// resolvent integral, and how it is discretized.
///
/// The x axis is cut into panels of width panel_fraction * y over the region
/// holding the grid energies, the threshold and the bound-state poles; outside,
/// panel widths grow geometrically until the analytic tail bound drops below
/// tolerance. Each panel integrates e^{-i x tau} exactly (Filon-Legendre).
struct ContourSpec {
    /// Contour height; empty selects min(1, 1 / max(|tau|, 0.1)).
    std::optional<double> y;
    /// Hard limit on |x|; 0 means no limit. ToleranceError when the tail bound
    /// is still above tolerance at x_max.
    double x_max = 0.0;
    double panel_fraction = 1.0;
    /// Fine panels reach energy_span times the largest grid energy. Values above 1
    /// sharpen the coupling of waves across the cut (backward steps acting on
    /// forward-evolved states).
    double energy_span = 1.0;
    double growth = 0.25;
    double abs_tol = 1e-10;
    double rel_tol = 1e-9;
    int order = 12;

    /// DomainError when y <= 0, ParameterError for nonsensical fields.
    void validate() const;
    double height(double tau) const;
};

struct PacketGridSpec {
    double k_max = 30.0;
    int order = 12;
    /// Longest evolution time the grid must resolve (free phase e^{-i E_k t}).
    double t_max = 2.0;
    /// Number of free-phase periods allowed per panel at t_max.
    double periods = 1.0;
    double h_min = 0.02;
    double growth = 0.3;
    /// Reduced mass entering E_k in the phase cap.
    double mu = 0.5;
};

/// Grid for a Gaussian packet: width sigma over k0 +- 12 sigma, graded toward
/// k = 0, panel widths capped by the free phase at t_max, out to k_max.
std::shared_ptr<const RadialGrid> packet_grid(double k0, double sigma, const PacketGridSpec& spec = {});

/// psi(k) ~ exp(-(k - k0)^2 / (4 sigma^2)), normalized on the grid. ToleranceError
/// when more than 1e-10 of the packet mass lies beyond the grid.
RadialState make_gaussian_packet(double k0, double sigma, std::shared_ptr<const RadialGrid> grid);
RadialState make_gaussian_packet(double k0, double sigma, const PacketGridSpec& spec = {});

struct AppendixDGridSpec {
    int order = 12;
    /// The grid ends at nu * tail_factor.
    double tail_factor = 1e8;
    /// Panels per nu * gamma0 across the Lorentzian peak.
    double peak_resolution = 4.0;
};

std::shared_ptr<const RadialGrid> appendix_d_grid(double nu, double gamma0,
                                                  const AppendixDGridSpec& spec = {});

/// psi_nu(k) = nu^(1/2) d / (k (k - nu - i nu gamma0)) with d fixed by unit norm
/// on the grid. ToleranceError when the peak is under-resolved by the grid.
RadialState make_appendix_d_state(double nu, double gamma0, std::shared_ptr<const RadialGrid> grid);
RadialState make_appendix_d_state(double nu, double gamma0, const AppendixDGridSpec& spec = {});

/// d such that psi_nu has unit norm by quadrature on the grid.
double appendix_d_constant(double nu, double gamma0, const RadialGrid& grid);

/// phi(k) e^{i E_k t} pref sum_i c_i / (z_i - E_k): a scattered wave kept in its
/// contour form, so it is known at every k and not only on a grid.
struct ScatteredWave {
    double t = 0.0;
    cplx pref{};
    std::vector<cplx> z;
    std::vector<cplx> c;

    /// pref sum_i c_i / (z_i - E)
    cplx amplitude(double energy) const;
};

/// Interaction-picture state: a grid part plus scattered waves. The waves'
/// large-k tails are not truncated by the grid.
class EvolvedState {
public:
    explicit EvolvedState(RadialState base) : base_(std::move(base)) {}

    const RadialState& base() const { return base_; }
    const std::vector<ScatteredWave>& waves() const { return waves_; }
    void add(ScatteredWave wave) { waves_.push_back(std::move(wave)); }

    /// Values on the grid of base().
    RadialState sample(const ModelParams& params) const;

    /// Norm with wave-wave terms of equal t in closed form (through I1
    /// differences); terms between waves of different t use the grid.
    double norm(const ModelParams& params) const;

private:
    RadialState base_;
    std::vector<ScatteredWave> waves_;
};

/// U_I(t, t0) applied to an evolved state. Waves created at t0 enter the
/// overlap with phi in closed form; other waves are sampled on the grid.
EvolvedState evolve(const EvolvedState& in, double t, double t0, const ReducedAmplitude& amp,
                    const ContourSpec& contour = {});

/// U(t, t0) psi. t < t0 gives the adjoint U(t0, t)^+ (line below the cut).
/// Interaction picture: e^{i H0 t} U e^{-i H0 t0}; Schroedinger picture: U itself.
RadialState apply_evolution(const RadialState& psi, double t, double t0, const ReducedAmplitude& amp,
                            const ContourSpec& contour = {}, Picture picture = Picture::Interaction);

/// <psi2| U_I(t, t0) - 1 |psi1> by one contour integral of N(z) F2(z) G1(z).
cplx matrix_element_R(const RadialState& psi2, const RadialState& psi1, double t, double t0,
                      const ReducedAmplitude& amp, const ContourSpec& contour = {});

/// ||U(t2,t1) U(t1,t0) psi - U(t2,t0) psi|| in the interaction picture, over the
/// grid of psi. The intermediate state keeps its scattered wave exactly.
double composition_residual(double t2, double t1, double t0, const RadialState& psi,
                            const ReducedAmplitude& amp, const ContourSpec& contour = {});

/// Ttilde(s) = w delta(s) + sum_n A_n s^(n q - 1), A_n = -i c_n e^{i pi n q / 2} / Gamma(n q).
///
/// Nonlocal: q = 1/2 - alpha, c_n = b1 (b2/b1)^(n-1), w = 0.
/// Local: q = alpha - 1/2, c_n = lambda (lambda C)^n, and the delta carries
/// lambda; boundary_weight() = -i lambda is its weight on a half line.
class DurationKernel {
public:
    explicit DurationKernel(const ReducedAmplitude& amp, int n_max = 400);

    double q() const { return q_; }
    cplx boundary_weight() const { return boundary_; }
    bool is_zero() const { return zero_; }

    /// Regular part at s > 0. ToleranceError when the series has not
    /// converged by n_max.
    cplx regular(double s) const;

    /// sum_n A_n L^(n q) w^(n-1): the regular part after s = L w^(1/q), including
    /// the Jacobian up to the constant 1/q.
    cplx mapped(double L, double w) const;

private:
    double q_ = 0.5;
    cplx boundary_{};
    bool zero_ = true;
    std::vector<cplx> log_a_;
};

/// beta(u) = <phi| e^{-i H0 u} |psi>.
using FreeOverlap = std::function<cplx(double)>;

/// beta from grid quadrature of the state.
FreeOverlap grid_free_overlap(const RadialState& psi, const ModelParams& params);

/// beta for psi_nu in closed integral form, rotated onto k = w e^{-i pi / 4} so it
/// is a rapidly decaying real integral for every u > 0.
FreeOverlap appendix_d_free_overlap(double nu, double gamma0, double d, const ModelParams& params);

struct TimeDomainOptions {
    double abs_tol = 1e-12;
    double rel_tol = 1e-8;
};

/// <psi2| U_I(t, t0) - 1 |psi1> as the double time integral of
/// conj(beta2(t2)) Ttilde(t2 - t1) beta1(t1) over t0 < t1 < t2 < t.
cplx matrix_element_R_time(const FreeOverlap& beta2, const FreeOverlap& beta1, double t, double t0,
                           const DurationKernel& kernel, const TimeDomainOptions& options = {});

struct AppendixDRow {
    double nu = 0.0;
    double t = 0.0;
    cplx value{};
};

struct AppendixDSummary {
    double nu = 0.0;
    double max_abs = 0.0;
    /// max_t |R| - min_t |R|
    double variation = 0.0;
};

struct AppendixDReport {
    std::vector<AppendixDRow> rows;
    std::vector<AppendixDSummary> summary;
    /// Least-squares slope of log max_abs against log nu (NaN for fewer than two nu).
    double slope = 0.0;
};

/// <psi_nu| R(t, 0) |psi_nu> over the (nu, t) table.
AppendixDReport appendix_d_probe(const std::vector<double>& nu_list, double gamma0,
                                 const std::vector<double>& t_list, const ReducedAmplitude& amp,
                                 const TimeDomainOptions& options = {});

struct ContinuityRow {
    double t = 0.0;
    cplx overlap{};
    /// |<psi|V(t)|psi> - 1|
    double deviation = 0.0;
};

/// <psi| V(t) |psi> with V(t) = e^{-i H0 t} U_I(t, 0) for each t (t >= 0).
std::vector<ContinuityRow> continuity_probe(const RadialState& psi, const std::vector<double>& t_sequence,
                                            const ReducedAmplitude& amp, const ContourSpec& contour = {});

} // namespace gqd
