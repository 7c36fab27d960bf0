#include "gqd/state.hpp"

#include "gqd/errors.hpp"
#include "gqd/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace gqd {

RadialGrid RadialGrid::from_breaks(std::vector<double> breaks, int order) {
    if (breaks.size() < 2 || order < 1) {
        throw ParameterError("RadialGrid: need at least one panel and order >= 1");
    }
    if (breaks.front() < 0.0 || !std::is_sorted(breaks.begin(), breaks.end()) ||
        std::adjacent_find(breaks.begin(), breaks.end()) != breaks.end()) {
        throw ParameterError("RadialGrid: breaks must be strictly increasing and >= 0");
    }
    RadialGrid g;
    g.breaks_ = std::move(breaks);
    g.order_ = order;
    const auto& rule = quad::gauss_legendre(order);
    g.nodes_.reserve(g.panel_count() * order);
    g.weights_.reserve(g.panel_count() * order);
    for (std::size_t p = 0; p + 1 < g.breaks_.size(); ++p) {
        const double a = g.breaks_[p];
        const double b = g.breaks_[p + 1];
        const double half = 0.5 * (b - a);
        for (int i = 0; i < order; ++i) {
            g.nodes_.push_back(0.5 * (a + b) + half * rule.nodes[i]);
            g.weights_.push_back(half * rule.weights[i]);
        }
    }
    return g;
}

RadialGrid RadialGrid::uniform(double lo, double hi, int panels, int order) {
    if (!(hi > lo) || panels < 1) {
        throw ParameterError("RadialGrid::uniform: empty range");
    }
    std::vector<double> breaks(panels + 1);
    for (int i = 0; i <= panels; ++i) {
        breaks[i] = lo + (hi - lo) * i / panels;
    }
    breaks.back() = hi;
    return from_breaks(std::move(breaks), order);
}

std::size_t RadialGrid::panel_of(double k) const {
    if (k < breaks_.front() || k > breaks_.back()) {
        return npos;
    }
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), k);
    if (it == breaks_.end()) {
        return panel_count() - 1;
    }
    return static_cast<std::size_t>(it - breaks_.begin()) - 1;
}

RadialState::RadialState(std::shared_ptr<const RadialGrid> grid, std::vector<cplx> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (!grid_ || values_.size() != grid_->size()) {
        throw ParameterError("RadialState: value count does not match the grid");
    }
}

double RadialState::norm() const {
    const auto k = grid_->nodes();
    const auto w = grid_->weights();
    double acc = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i) {
        acc += 4.0 * pi * k[i] * k[i] * w[i] * std::norm(values_[i]);
    }
    return std::sqrt(acc);
}

cplx RadialState::inner(const RadialState& other) const {
    if (grid_ != other.grid_ && grid_->size() != other.grid_->size()) {
        throw ParameterError("RadialState::inner: states live on different grids");
    }
    const auto k = grid_->nodes();
    const auto w = grid_->weights();
    cplx acc{0.0, 0.0};
    for (std::size_t i = 0; i < values_.size(); ++i) {
        acc += 4.0 * pi * k[i] * k[i] * w[i] * std::conj(values_[i]) * other.values_[i];
    }
    return acc;
}

cplx RadialState::interpolate(double k) const {
    const std::size_t p = grid_->panel_of(k);
    if (p == RadialGrid::npos) {
        return {0.0, 0.0};
    }
    return panel_polynomial(p, cplx(k, 0.0));
}

cplx RadialState::panel_polynomial(std::size_t panel, cplx k) const {
    const int n = grid_->order();
    const auto nodes = grid_->nodes().subspan(panel * n, n);
    const std::span<const cplx> vals(values_.data() + panel * n, n);
    cplx acc{0.0, 0.0};
    for (int i = 0; i < n; ++i) {
        cplx li = 1.0;
        for (int j = 0; j < n; ++j) {
            if (j != i) {
                li *= (k - nodes[j]) / (nodes[i] - nodes[j]);
            }
        }
        acc += li * vals[i];
    }
    return acc;
}

RadialState RadialState::scaled(cplx factor) const {
    std::vector<cplx> v(values_);
    for (auto& x : v) {
        x *= factor;
    }
    return {grid_, std::move(v)};
}

RadialState RadialState::normalized() const {
    const double n = norm();
    if (!(n > 0.0)) {
        throw DomainError("RadialState::normalized: zero state");
    }
    return scaled(1.0 / n);
}

RadialState RadialState::multiplied(const std::function<cplx(double)>& g) const {
    std::vector<cplx> v(values_);
    const auto k = grid_->nodes();
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] *= g(k[i]);
    }
    return {grid_, std::move(v)};
}

double RadialState::distance(const RadialState& other) const {
    std::vector<cplx> d(values_);
    for (std::size_t i = 0; i < d.size(); ++i) {
        d[i] -= other.values_.at(i);
    }
    return RadialState(grid_, std::move(d)).norm();
}

} // namespace gqd
