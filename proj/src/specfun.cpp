#include "gqd/specfun.hpp"

#include "gqd/errors.hpp"

#include <array>
#include <cmath>

namespace gqd::specfun {

namespace {

// Lanczos coefficients, g = 607/128, 15 terms (Godfrey).
constexpr double lanczos_g = 607.0 / 128.0;
constexpr std::array<double, 15> lanczos_c = {
    0.99999999999999709182,     57.156235665862923517,      -59.597960355475491248,
    14.136097974741747174,      -0.49191381609762019978,    .33994649984811888699e-4,
    .46523628927048575665e-4,   -.98374475304879564677e-4,  .15808870322491248884e-3,
    -.21026444172410488319e-3,  .21743961811521264320e-3,   -.16431810653676389022e-3,
    .84418223983852743293e-4,   -.26190838401581408670e-4,  .36899182659531622704e-5,
};

bool is_nonpositive_integer(cplx z) {
    return z.imag() == 0.0 && z.real() <= 0.0 && std::nearbyint(z.real()) == z.real();
}

// Valid for Re z >= 1/2.
cplx log_gamma_right(cplx z) {
    const cplx zm = z - 1.0;
    cplx sum = lanczos_c[0];
    for (std::size_t k = 1; k < lanczos_c.size(); ++k) {
        sum += lanczos_c[k] / (zm + static_cast<double>(k));
    }
    const cplx tmp = zm + lanczos_g + 0.5;
    return 0.5 * std::log(2.0 * pi) + (zm + 0.5) * std::log(tmp) - tmp + std::log(sum);
}

} // namespace

cplx principal_log(cplx w) {
    const double re = w.real();
    const double im = w.imag();
    if (im == 0.0 && re < 0.0) {
        return {std::log(-re), pi};
    }
    return std::log(w);
}

cplx principal_power(cplx w, cplx s) {
    if (w == cplx(0.0, 0.0)) {
        if (s.real() > 0.0) {
            return {0.0, 0.0};
        }
        throw DomainError("principal_power: zero base with Re s <= 0");
    }
    if (s == cplx(1.0, 0.0)) {
        return w;
    }
    return std::exp(s * principal_log(w));
}

cplx log_gamma(cplx z) {
    if (is_nonpositive_integer(z)) {
        throw PoleError("gamma: pole at nonpositive integer");
    }
    if (z.real() < 0.5) {
        // Gamma(z) Gamma(1-z) = pi / sin(pi z)
        return std::log(pi) - std::log(std::sin(pi * z)) - log_gamma_right(1.0 - z);
    }
    return log_gamma_right(z);
}

cplx complex_gamma(cplx z) {
    if (is_nonpositive_integer(z)) {
        throw PoleError("gamma: pole at nonpositive integer");
    }
    if (z.real() < 0.5) {
        return pi / (std::sin(pi * z) * std::exp(log_gamma_right(1.0 - z)));
    }
    return std::exp(log_gamma_right(z));
}

double gamma(double x) {
    return complex_gamma(cplx(x, 0.0)).real();
}

std::vector<double> spherical_bessel_j(int n, double x) {
    if (n < 1 || x < 0.0) {
        throw DomainError("spherical_bessel_j: need n >= 1 and x >= 0");
    }
    std::vector<double> j(n, 0.0);
    if (x < 1.0) {
        // x^l / (2l+1)!! times the series in -x^2/2
        double lead = 1.0;
        for (int l = 0; l < n; ++l) {
            if (l > 0) {
                lead *= x / (2.0 * l + 1.0);
            }
            double term = 1.0;
            double sum = 1.0;
            for (int m = 1; m < 40; ++m) {
                term *= -0.5 * x * x / (m * (2.0 * l + 2.0 * m + 1.0));
                sum += term;
                if (std::abs(term) < 1e-17 * std::abs(sum)) {
                    break;
                }
            }
            j[l] = lead * sum;
        }
        return j;
    }
    const double j0 = std::sin(x) / x;
    if (x > n) {
        j[0] = j0;
        if (n > 1) {
            j[1] = std::sin(x) / (x * x) - std::cos(x) / x;
        }
        for (int l = 1; l + 1 < n; ++l) {
            j[l + 1] = (2.0 * l + 1.0) / x * j[l] - j[l - 1];
        }
        return j;
    }
    const int start = n + static_cast<int>(x) + 30;
    std::vector<double> tmp(start + 2, 0.0);
    tmp[start] = 1e-300;
    for (int l = start; l > 0; --l) {
        tmp[l - 1] = (2.0 * l + 1.0) / x * tmp[l] - tmp[l + 1];
        if (std::abs(tmp[l - 1]) > 1e250) {
            for (int m = l - 1; m <= start; ++m) {
                tmp[m] *= 1e-250;
            }
        }
    }
    const double scale = j0 / tmp[0];
    for (int l = 0; l < n; ++l) {
        j[l] = tmp[l] * scale;
    }
    return j;
}

} // namespace gqd::specfun
