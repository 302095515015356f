#pragma once

// Univariate standard normal pdf/cdf/quantile and the bivariate normal cdf.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "parcop/quadrature.hpp"

namespace parcop {

inline double norm_pdf(double x) {
    constexpr double inv_sqrt_2pi = 0.3989422804014326779399;
    return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

inline double norm_cdf(double x) {
    return 0.5 * std::erfc(-x * std::numbers::inv_sqrt2);
}

namespace detail {

template <std::size_t N>
double horner(const std::array<double, N>& c, double r) {
    double acc = c[N - 1];
    for (std::size_t i = N - 1; i-- > 0;) acc = acc * r + c[i];
    return acc;
}

}  // namespace detail

/// Inverse of the standard normal cdf, Wichura's algorithm AS 241 (PPND16),
/// accurate to about 1e-16 relative over (0, 1).
inline double norm_quantile(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("norm_quantile: p must lie strictly in (0,1)");
    static constexpr std::array<double, 8> a{
        3.3871328727963666080e+0, 1.3314166789178437745e+2, 1.9715909503065514427e+3,
        1.3731693765509461125e+4, 4.5921953931549871457e+4, 6.7265770927008700853e+4,
        3.3430575583588128105e+4, 2.5090809287301226727e+3};
    static constexpr std::array<double, 8> b{
        1.0, 4.2313330701600911252e+1, 6.8718700749205790830e+2, 5.3941960214247511077e+3,
        2.1213794301586595867e+4, 3.9307895800092710610e+4, 2.8729085735721942674e+4,
        5.2264952788528545610e+3};
    static constexpr std::array<double, 8> c{
        1.42343711074968357734e+0, 4.63033784615654529590e+0, 5.76949722146069140550e+0,
        3.64784832476320460504e+0, 1.27045825245236838258e+0, 2.41780725177450611770e-1,
        2.27238449892691845833e-2, 7.74545014278341407640e-4};
    static constexpr std::array<double, 8> d{
        1.0, 2.05319162663775882187e+0, 1.67638483018380384940e+0, 6.89767334985100004550e-1,
        1.48103976427480074590e-1, 1.51986665636164571966e-2, 5.47593808499534494600e-4,
        1.05075007164441684324e-9};
    static constexpr std::array<double, 8> e{
        6.65790464350110377720e+0, 5.46378491116411436990e+0, 1.78482653991729133580e+0,
        2.96560571828504891230e-1, 2.65321895265761230930e-2, 1.24266094738807843860e-3,
        2.71155556874348757815e-5, 2.01033439929228813265e-7};
    static constexpr std::array<double, 8> f{
        1.0, 5.99832206555887937690e-1, 1.36929880922735805310e-1, 1.48753612908506148525e-2,
        7.86869131145613259100e-4, 1.84631831751005468180e-5, 1.42151175831644588870e-7,
        2.04426310338993978564e-15};

    const double q = p - 0.5;
    if (std::fabs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        return q * detail::horner(a, r) / detail::horner(b, r);
    }
    double r = q < 0.0 ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double x;
    if (r <= 5.0) {
        r -= 1.6;
        x = detail::horner(c, r) / detail::horner(d, r);
    } else {
        r -= 5.0;
        x = detail::horner(e, r) / detail::horner(f, r);
    }
    return q < 0.0 ? -x : x;
}

namespace detail {

inline const QuadRule& bvn_rule(double abs_rho) {
    static const QuadRule r6 = gauss_legendre_m11(6);
    static const QuadRule r12 = gauss_legendre_m11(12);
    static const QuadRule r20 = gauss_legendre_m11(20);
    if (abs_rho < 0.3) return r6;
    if (abs_rho < 0.75) return r12;
    return r20;
}

/// Upper-orthant probability P(X > dh, Y > dk) for standard bivariate
/// normal with correlation r. Drezner & Wesolowsky (1990) quadrature as
/// refined in Genz (2004) for double precision and |r| near 1.
inline double bvn_upper(double dh, double dk, double r) {
    constexpr double twopi = 2.0 * std::numbers::pi;
    const QuadRule& rule = bvn_rule(std::fabs(r));
    double h = dh;
    double k = dk;
    double hk = h * k;
    double bvn = 0.0;
    if (std::fabs(r) < 0.925) {
        if (std::fabs(r) > 0.0) {
            const double hs = 0.5 * (h * h + k * k);
            const double asr = std::asin(r);
            for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
                const double sn = std::sin(0.5 * asr * (rule.nodes[i] + 1.0));
                bvn += rule.weights[i] * std::exp((sn * hk - hs) / (1.0 - sn * sn));
            }
            bvn *= asr / (2.0 * twopi);
        }
        bvn += norm_cdf(-h) * norm_cdf(-k);
    } else {
        if (r < 0.0) {
            k = -k;
            hk = -hk;
        }
        if (std::fabs(r) < 1.0) {
            const double as = (1.0 - r) * (1.0 + r);
            double a = std::sqrt(as);
            const double bs = (h - k) * (h - k);
            const double cc = (4.0 - hk) / 8.0;
            const double dd = (12.0 - hk) / 16.0;
            double asr = -0.5 * (bs / as + hk);
            if (asr > -100.0)
                bvn = a * std::exp(asr) *
                      (1.0 - cc * (bs - as) * (1.0 - dd * bs / 5.0) / 3.0 + cc * dd * as * as / 5.0);
            if (-hk < 100.0) {
                const double bb = std::sqrt(bs);
                bvn -= std::exp(-0.5 * hk) * std::sqrt(twopi) * norm_cdf(-bb / a) * bb *
                       (1.0 - cc * bs * (1.0 - dd * bs / 5.0) / 3.0);
            }
            a *= 0.5;
            for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
                const double t = a * (rule.nodes[i] + 1.0);
                const double xs = t * t;
                asr = -0.5 * (bs / xs + hk);
                if (asr > -100.0) {
                    const double rs = std::sqrt(1.0 - xs);
                    bvn += a * rule.weights[i] * std::exp(asr) *
                           (std::exp(-hk * (1.0 - rs) / (2.0 * (1.0 + rs))) / rs -
                            (1.0 + cc * xs * (1.0 + dd * xs)));
                }
            }
            bvn = -bvn / twopi;
        }
        if (r > 0.0) {
            bvn += norm_cdf(-std::max(h, k));
        } else {
            bvn = -bvn;
            if (k > h) bvn += norm_cdf(k) - norm_cdf(h);
        }
    }
    return std::clamp(bvn, 0.0, 1.0);
}

}  // namespace detail

/// P(X <= h, Y <= k) for a standard bivariate normal with correlation rho.
inline double bvn_cdf(double h, double k, double rho) {
    if (!(rho >= -1.0 && rho <= 1.0))
        throw std::domain_error("bvn_cdf: correlation must lie in [-1,1]");
    return detail::bvn_upper(-h, -k, rho);
}

}  // namespace parcop
