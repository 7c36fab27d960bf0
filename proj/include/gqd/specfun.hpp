#pragma once

#include <complex>
#include <vector>

namespace gqd {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846264338327950288;

namespace specfun {

/// Principal logarithm with Im Log(w) in (-pi, pi].
///
/// The negative real axis (including a negative signed-zero imaginary part)
/// maps to Im = +pi, so the cut is approached continuously from above.
cplx principal_log(cplx w);

/// exp(s * Log w) on the principal branch. w == 0 returns 0 for Re s > 0 and
/// throws DomainError otherwise.
///
/// Every fractional power in the library routes through here, so the branch
/// convention is fixed in exactly one place.
cplx principal_power(cplx w, cplx s);

/// Log Gamma(z) (principal branch of the Lanczos form). Throws PoleError at
/// nonpositive integers.
cplx log_gamma(cplx z);

/// Gamma(z), relative error ~1e-14 for |z| <= 50. Reflection is used for
/// Re z < 1/2. Throws PoleError at nonpositive integers.
cplx complex_gamma(cplx z);

/// Real-argument convenience wrapper.
double gamma(double x);

/// Spherical Bessel functions j_0(x) .. j_{n-1}(x) for x >= 0. Upward recurrence
/// where it is stable (x > n), Miller's downward recurrence otherwise, and the
/// power series for small x.
std::vector<double> spherical_bessel_j(int n, double x);

} // namespace specfun
} // namespace gqd
