#include "gqd/errors.hpp"
#include "gqd/timedomain.hpp"
#include "gqd/volterra.hpp"

#include <doctest.h>

using namespace gqd;

namespace {
const ModelParams nonlocal{0.25, 1.0, 0.5};

double max_error(const VolterraResult& r, const TimeKernel& k, double tau_min) {
    double worst = 0.0;
    for (std::size_t j = 0; j < r.tau.size(); ++j) {
        if (r.tau[j] >= tau_min) {
            const cplx s = ttilde_series(r.tau[j], k, 20).value;
            worst = std::max(worst, std::abs(r.f[j] - s) / std::abs(s));
        }
    }
    return worst;
}
} // namespace

TEST_CASE("graded grid") {
    const auto g = TimeGrid::graded(nonlocal, 0.5, 100);
    CHECK(g.nodes.size() == 100);
    CHECK(g.nodes.front() > 0.0);
    CHECK(g.nodes.back() == doctest::Approx(0.5));
    CHECK(g.gamma * nonlocal.p() >= 1.0);
    for (std::size_t j = 1; j < g.nodes.size(); ++j) {
        CHECK(g.nodes[j] > g.nodes[j - 1]);
    }
    CHECK_THROWS_AS(TimeGrid::graded(nonlocal, 0.5, 100, 1.5), ParameterError);
}

TEST_CASE("free theory keeps the seed") {
    const ModelParams free{0.25, 0.0, 0.5};
    const auto r = volterra_march(free, BoundaryData::nonlocal(free, 0.0), TimeGrid::graded(free, 0.5, 50));
    for (cplx f : r.f) {
        CHECK(f == cplx(0.0, 0.0));
    }
}

TEST_CASE("local regime is out of scope") {
    const ModelParams local{1.0, 1.0, 0.5};
    CHECK_THROWS_AS(volterra_march(local, BoundaryData::local(local, -1.0, 1.0), TimeGrid::graded(nonlocal, 0.5, 50)),
                    ParameterError);
}

TEST_CASE("march matches the series") {
    const BoundaryData b = BoundaryData::nonlocal(nonlocal, 0.0);
    const TimeKernel k(nonlocal, b);
    const auto r = volterra_march(nonlocal, b, TimeGrid::graded(nonlocal, 0.5, 400));
    CHECK(max_error(r, k, 0.05) <= 1e-3);
    const auto r2 = volterra_march(nonlocal, b, TimeGrid::graded(nonlocal, 0.5, 800));
    // second order product integration
    CHECK(max_error(r, k, 0.05) / max_error(r2, k, 0.05) > 3.0);
}

TEST_CASE("refinement with b2 != 0") {
    const BoundaryData b = BoundaryData::nonlocal(nonlocal, 0.01);
    VolterraOptions o;
    o.seed_terms = 40;
    double prev = 0.0;
    for (int m : {100, 200, 400}) {
        const auto ref = volterra_refined(nonlocal, b, 0.5, m, 1e-2, o);
        if (prev > 0.0) {
            CHECK(prev / ref.max_rel_change > 3.0);
        }
        prev = ref.max_rel_change;
    }
    CHECK_THROWS_AS(volterra_refined(nonlocal, b, 0.5, 20, 1e-12, o), ConvergenceError);
}

TEST_CASE("marched solution detaches from the seed slowly") {
    const BoundaryData b = BoundaryData::nonlocal(nonlocal, 0.01);
    const TimeKernel k(nonlocal, b);
    VolterraOptions o;
    o.seed_terms = 40;
    const auto r = volterra_march(nonlocal, b, TimeGrid::graded(nonlocal, 0.5, 400), o);
    // (f_T - f) / f -> 0 as tau -> 0
    double prev = 1e300;
    for (double tau : {0.4, 0.1, 0.01, 1e-3}) {
        std::size_t j = 0;
        while (r.tau[j] < tau) {
            ++j;
        }
        const cplx f = f_tau(r.tau[j], k);
        const double d = std::abs(r.f[j] - f) / std::abs(f);
        CHECK(d < prev);
        prev = d;
    }
}
