#pragma once

#include "gqd/specfun.hpp"

#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace gqd {

/// How a RadialState is continued between its nodes.
enum class InterpolationRule {
    /// Degree (order-1) Lagrange polynomial through the Gauss-Legendre nodes of
    /// the enclosing panel; zero outside the grid.
    PanelLagrange,
};

/// Composite Gauss-Legendre grid on [breaks.front(), breaks.back()].
class RadialGrid {
public:
    static RadialGrid from_breaks(std::vector<double> breaks, int order);
    static RadialGrid uniform(double lo, double hi, int panels, int order);

    std::span<const double> nodes() const { return nodes_; }
    /// Plain dk weights (no 4 pi k^2).
    std::span<const double> weights() const { return weights_; }
    std::span<const double> breaks() const { return breaks_; }
    int order() const { return order_; }
    std::size_t size() const { return nodes_.size(); }
    std::size_t panel_count() const { return breaks_.size() - 1; }

    double lo() const { return breaks_.front(); }
    double hi() const { return breaks_.back(); }

    /// Panel index containing k, or npos when outside.
    std::size_t panel_of(double k) const;
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

private:
    std::vector<double> breaks_;
    std::vector<double> nodes_;
    std::vector<double> weights_;
    int order_ = 0;
};

/// s-wave momentum-space state psi(k) sampled on a RadialGrid, measure 4 pi k^2 dk.
class RadialState {
public:
    RadialState(std::shared_ptr<const RadialGrid> grid, std::vector<cplx> values);

    const RadialGrid& grid() const { return *grid_; }
    std::shared_ptr<const RadialGrid> grid_ptr() const { return grid_; }
    std::span<const cplx> values() const { return values_; }
    std::vector<cplx>& mutable_values() { return values_; }
    InterpolationRule rule() const { return InterpolationRule::PanelLagrange; }

    /// sqrt(\int 4 pi k^2 |psi|^2 dk) by grid quadrature.
    double norm() const;
    /// <this|other> on the shared grid; ParameterError if grids differ.
    cplx inner(const RadialState& other) const;
    /// Value of the interpolant at k.
    cplx interpolate(double k) const;
    /// The Lagrange polynomial of one panel, continued to complex k.
    cplx panel_polynomial(std::size_t panel, cplx k) const;

    RadialState scaled(cplx factor) const;
    RadialState normalized() const;
    /// Pointwise multiplication by g(k) on the nodes.
    RadialState multiplied(const std::function<cplx(double)>& g) const;
    /// ||this - other||.
    double distance(const RadialState& other) const;

private:
    std::shared_ptr<const RadialGrid> grid_;
    std::vector<cplx> values_;
};

} // namespace gqd
