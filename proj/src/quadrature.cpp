#include "gqd/quadrature.hpp"

#include "gqd/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <queue>

namespace gqd::quad {

namespace {

// QUADPACK qk21 abscissae/weights.
constexpr std::array<double, 11> xgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr std::array<double, 11> wgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600525478480, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> wg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651146};

struct Panel {
    double a;
    double b;
    cplx value;
    double error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

Panel kronrod21(const Integrand& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const cplx fc = f(c);
    cplx resk = fc * wgk[10];
    cplx resg{0.0, 0.0};
    for (int j = 0; j < 5; ++j) {
        const int jt = 2 * j + 1;
        const double dx = h * xgk[jt];
        const cplx f1 = f(c - dx);
        const cplx f2 = f(c + dx);
        resg += wg[j] * (f1 + f2);
        resk += wgk[jt] * (f1 + f2);
    }
    for (int j = 0; j < 5; ++j) {
        const int jt = 2 * j;
        const double dx = h * xgk[jt];
        resk += wgk[jt] * (f(c - dx) + f(c + dx));
    }
    const cplx value = resk * h;
    const double err = std::abs((resk - resg) * h);
    return {a, b, value, err};
}

GaussLegendre make_gauss_legendre(int n) {
    GaussLegendre rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) {
                p1 = x;
                p0 = 1.0;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) {
                break;
            }
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

} // namespace

const GaussLegendre& gauss_legendre(int n) {
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<GaussLegendre>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[n];
    if (!slot) {
        slot = std::make_unique<GaussLegendre>(make_gauss_legendre(n));
    }
    return *slot;
}

Result integrate(const Integrand& f, double a, double b, const Tolerance& tol,
                 std::span<const double> breaks) {
    std::vector<double> pts{a};
    for (double x : breaks) {
        if (x > a && x < b) {
            pts.push_back(x);
        }
    }
    pts.push_back(b);
    std::sort(pts.begin() + 1, pts.end() - 1);

    std::priority_queue<Panel> heap;
    cplx total{0.0, 0.0};
    double err = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        if (pts[i + 1] <= pts[i]) {
            continue;
        }
        Panel p = kronrod21(f, pts[i], pts[i + 1]);
        total += p.value;
        err += p.error;
        heap.push(p);
    }
    int count = static_cast<int>(heap.size());
    while (err > std::max(tol.abs, tol.rel * std::abs(total)) && count < tol.max_intervals) {
        Panel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            heap.push(worst);
            break;
        }
        Panel left = kronrod21(f, worst.a, mid);
        Panel right = kronrod21(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++count;
    }
    // Re-sum to shed the drift of incremental updates.
    cplx sum{0.0, 0.0};
    double esum = 0.0;
    while (!heap.empty()) {
        sum += heap.top().value;
        esum += heap.top().error;
        heap.pop();
    }
    Result r;
    r.value = sum;
    r.error = esum;
    r.intervals = count;
    r.converged = esum <= std::max(tol.abs, tol.rel * std::abs(sum));
    return r;
}

cplx integrate_or_throw(const Integrand& f, double a, double b, const Tolerance& tol,
                        std::span<const double> breaks) {
    const Result r = integrate(f, a, b, tol, breaks);
    if (!r.converged) {
        throw ConvergenceError("adaptive quadrature did not reach tolerance");
    }
    return r.value;
}

Result integrate_radial(const Integrand& f, const RadialShape& shape, const Tolerance& tol,
                        std::span<const double> breaks) {
    if (!(shape.lead > -1.0) || !(shape.decay > 1.0)) {
        throw ConvergenceError("integrate_radial: integrand not integrable at an endpoint");
    }
    const double k_lo = shape.k_lo;
    const double k_hi = shape.k_hi;

    // k = k_lo * w^m with m = 1/(lead+1): dk = k_lo m w^(m-1) dw.
    const double m0 = 1.0 / (shape.lead + 1.0);
    auto near = [&](double w) -> cplx {
        const double k = k_lo * std::pow(w, m0);
        return f(k) * (k_lo * m0 * std::pow(w, m0 - 1.0));
    };
    // k = k_hi * w^(-q) with q = 1/(decay-1): dk = k_hi q w^(-q-1) dw.
    const double q = 1.0 / (shape.decay - 1.0);
    auto tail = [&](double w) -> cplx {
        const double k = k_hi * std::pow(w, -q);
        return f(k) * (k_hi * q * std::pow(w, -q - 1.0));
    };

    // Each piece gets the full relative budget; absolute budgets are split.
    Tolerance piece = tol;
    piece.abs = tol.abs / 3.0;
    const Result a = integrate(near, 0.0, 1.0, piece);
    const Result b = integrate(f, k_lo, k_hi, piece, breaks);
    const Result c = integrate(tail, 0.0, 1.0, piece);

    Result r;
    r.value = a.value + b.value + c.value;
    r.error = a.error + b.error + c.error;
    r.intervals = a.intervals + b.intervals + c.intervals;
    r.converged = r.error <= std::max(tol.abs, tol.rel * std::abs(r.value)) ||
                  (a.converged && b.converged && c.converged);
    return r;
}

OscillatoryPanel filon_legendre(double a, double b, double omega, int n) {
    const GaussLegendre& gl = gauss_legendre(n);
    const double c = 0.5 * (a + b);
    const double r = 0.5 * (b - a);
    const double w = omega * r;
    const std::vector<double> jl = specfun::spherical_bessel_j(n, std::abs(w));
    // m_l = \int_{-1}^{1} e^{-i w s} P_l(s) ds
    std::vector<cplx> moment(n);
    const cplx unit = w >= 0.0 ? cplx(0.0, -1.0) : cplx(0.0, 1.0);
    cplx ipow{1.0, 0.0};
    for (int l = 0; l < n; ++l) {
        moment[l] = 2.0 * ipow * jl[l];
        ipow *= unit;
    }
    const cplx shift = std::exp(cplx(0.0, -omega * c));
    OscillatoryPanel out;
    out.nodes.resize(n);
    out.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        const double s = gl.nodes[i];
        double p0 = 1.0;
        double p1 = s;
        cplx acc = 0.5 * moment[0];
        if (n > 1) {
            acc += 1.5 * moment[1] * p1;
        }
        for (int l = 1; l + 1 < n; ++l) {
            const double p2 = ((2.0 * l + 1.0) * s * p1 - l * p0) / (l + 1.0);
            p0 = p1;
            p1 = p2;
            acc += (l + 1.5) * moment[l + 1] * p2;
        }
        out.nodes[i] = c + r * s;
        out.weights[i] = r * shift * gl.weights[i] * acc;
    }
    return out;
}

} // namespace gqd::quad
