#include "gqd/errors.hpp"
#include "gqd/timedomain.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace gqd;

namespace {
double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }
const ModelParams local{1.0, 1.0, 0.5};
const ModelParams nonlocal{0.25, 1.0, 0.5};
TimeKernel kernel(double b2) { return TimeKernel(nonlocal, BoundaryData::nonlocal(nonlocal, b2)); }
} // namespace

TEST_CASE("causality") {
    const auto k = kernel(0.1);
    CHECK(causal_f(-0.5, k) == cplx(0.0, 0.0));
    CHECK(causal_ttilde(-1e-9, k, 20) == cplx(0.0, 0.0));
    CHECK_THROWS_AS(f_tau(0.0, k), DomainError);
    CHECK_THROWS_AS(ttilde_series(-1.0, k, 5), DomainError);
}

TEST_CASE("interaction kernel f(tau)") {
    const auto k0 = kernel(0.0);
    for (double tau : {0.1, 1.0, 3.0}) {
        CHECK(rel(f_tau(4 * tau, k0), std::pow(4.0, -0.75) * f_tau(tau, k0)) < 1e-14);
    }
    const auto k = kernel(0.1);
    CHECK(rel(f_tau(1.0, k), k.a1() + k.a2()) < 1e-15);

    const TimeKernel kl(local, BoundaryData::local(local, -1.0, 1.0));
    CHECK(f_tau(1.0, kl) == cplx(0.0, 0.0));
    const double lam = 1.0 / (1.0 - 2 * pi * pi);
    CHECK(std::abs(kl.delta_strength() - cplx(0.0, -2.0 * lam)) < 1e-15);
}

TEST_CASE("series head and coefficients") {
    const auto k = kernel(0.1);
    CHECK(rel(k.coefficient(1), k.a1()) < 1e-14);
    CHECK(rel(k.coefficient(2), k.a2()) < 1e-14);
    for (double tau : {0.05, 0.7}) {
        CHECK(rel(ttilde_series(tau, k, 1).value, k.a1() * std::pow(tau, -0.75)) < 1e-14);
    }
    const auto k0 = kernel(0.0);
    CHECK(ttilde_series(0.3, k0, 2).value == ttilde_series(0.3, k0, 1).value);
    CHECK(k0.coefficient(5) == cplx(0.0, 0.0));
    CHECK_THROWS_AS(ttilde_series(0.3, k, 0), ParameterError);
    CHECK_THROWS_AS(ttilde_series(0.3, k, k.n_max() + 1), ParameterError);
}

TEST_CASE("series term homogeneity") {
    const auto k = kernel(0.1);
    for (int n : {1, 2, 5, 9}) {
        const double s = k.exponent(n);
        CHECK(rel(k.term(n, 2.5 * 0.2), std::pow(2.5, s - 1.0) * k.term(n, 0.2)) < 1e-13);
    }
}

TEST_CASE("series self-convergence") {
    const auto k = kernel(0.01);
    const auto a = ttilde_series(0.5, k, 20);
    const auto b = ttilde_series(0.5, k, 30);
    CHECK(std::abs(a.value - b.value) <= 1e-8 * std::abs(b.value));
    CHECK_FALSE(b.warning);

    // b2 = 0.1: the terms grow like (b2/b1)^n tau^(n/4) / Gamma(n/4) and peak near
    // n ~ 300, so 20 or 30 terms are far from converged and the estimate says so
    const auto w = ttilde_series(0.5, kernel(0.1), 30);
    CHECK(w.warning);
    CHECK(w.last_term > std::abs(w.value));
}

TEST_CASE("Laplace bridge") {
    const ReducedAmplitude n0(nonlocal, BoundaryData::nonlocal(nonlocal, 0.0));
    const auto k0 = kernel(0.0);
    for (cplx z : {cplx(-1.0, 0.0), cplx(-100.0, 5.0), cplx(3.0, 0.5)}) {
        CHECK(rel(laplace_bridge(z, k0, 1), n0(z)) < 1e-10);
    }

    const ReducedAmplitude n1(nonlocal, BoundaryData::nonlocal(nonlocal, 0.1));
    const auto k = kernel(0.1);
    for (cplx z : {cplx(-100.0, 0.0), cplx(-100.0, 5.0)}) {
        const double r = std::abs(bridge_ratio(z, k));
        CHECK(r < 1.0);
        // relative error is |r|^N: 12 terms leave ~0.2 at |z| = 100
        for (int n : {12, 50, 130}) {
            const double e = rel(laplace_bridge(z, k, n), n1(z));
            CHECK(e == doctest::Approx(std::pow(r, n)).epsilon(1e-4));
        }
        const int need = static_cast<int>(std::ceil(std::log(1e-7) / std::log(r)));
        CHECK(rel(laplace_bridge(z, k, need), n1(z)) <= 1e-6);
    }
    CHECK_THROWS_AS(laplace_bridge(cplx(-10.0, 0.0), k, 10), ConvergenceError);
}

TEST_CASE("f1 transform is the two-term Laplace transform of f") {
    const auto k = kernel(0.1);
    const double z = -50.0;
    CHECK(rel(f1_transform(z, k), oracle::laplace_two_term(0.25, k.a1(), k.a2(), z)) < 1e-9);
}
