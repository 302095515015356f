#pragma once

// The three one-parameter bivariate copula families: cdf, log-density,
// analytic derivatives of the log-density in theta and in the arguments,
// and samplers. The closed-form densities and derivatives are obtained by
// differentiating the family cdfs; the algebra is worked through in
// docs/derivations.md and every formula here is cross-checked against
// finite differences in the test suite.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "parcop/normal.hpp"
#include "parcop/pseudo_obs.hpp"
#include "parcop/rng.hpp"

namespace parcop {

enum class CopulaFamily { Gaussian, Frank, Gumbel };

inline constexpr std::string_view family_name(CopulaFamily f) {
    switch (f) {
        case CopulaFamily::Gaussian: return "gaussian";
        case CopulaFamily::Frank: return "frank";
        case CopulaFamily::Gumbel: return "gumbel";
    }
    return "?";
}

inline std::optional<CopulaFamily> family_from_string(std::string_view s) {
    std::string t(s);
    for (char& c : t) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (t == "gaussian" || t == "normal") return CopulaFamily::Gaussian;
    if (t == "frank") return CopulaFamily::Frank;
    if (t == "gumbel") return CopulaFamily::Gumbel;
    return std::nullopt;
}

/// Parameter domains: Gaussian |theta| < 1 (strict, the density needs it),
/// Frank theta != 0 finite, Gumbel theta >= 1.
inline bool theta_in_domain(CopulaFamily f, double theta) {
    if (!std::isfinite(theta)) return false;
    switch (f) {
        case CopulaFamily::Gaussian: return theta > -1.0 && theta < 1.0;
        case CopulaFamily::Frank: return theta != 0.0;
        case CopulaFamily::Gumbel: return theta >= 1.0;
    }
    return false;
}

struct CopulaModel {
    CopulaFamily family;
    double theta;
};

inline void validate_model(const CopulaModel& m) {
    if (!theta_in_domain(m.family, m.theta))
        throw std::domain_error("theta=" + std::to_string(m.theta) +
                                " outside the domain of the " +
                                std::string(family_name(m.family)) + " copula");
}

inline CopulaModel make_model(CopulaFamily f, double theta) {
    CopulaModel m{f, theta};
    validate_model(m);
    return m;
}

/// A point in the open unit square.
struct UnitPair {
    double u1;
    double u2;
};

namespace detail {

// Arguments are accepted on the closed square and clamped to
// [eps, 1-eps]; boundary inputs are thereby evaluated in the limit.
inline constexpr double kUnitEps = 1e-12;
inline constexpr double kLogClip = 700.0;

inline double clamp_unit(double u) {
    if (!(u >= 0.0 && u <= 1.0))
        throw std::domain_error("copula argument must lie in [0,1]");
    return std::clamp(u, kUnitEps, 1.0 - kUnitEps);
}

inline double clip_log(double v) {
    if (std::isnan(v)) return -kLogClip;
    return std::clamp(v, -kLogClip, kLogClip);
}

struct Shc {
    double score;
    double hess;
    double cross1;  // d^2 log c / (dtheta du1)
    double cross2;  // d^2 log c / (dtheta du2)
};

// ---------------------------------------------------------------- Gaussian
// With x = Phi^{-1}(u), y = Phi^{-1}(v) and A = 1 - t^2:
//   log c = -log(A)/2 + (2 t x y - t^2 (x^2+y^2)) / (2A)

inline double gaussian_logpdf(double x, double y, double t) {
    const double a = 1.0 - t * t;
    return -0.5 * std::log(a) + (2.0 * t * x * y - t * t * (x * x + y * y)) / (2.0 * a);
}

inline Shc gaussian_shc(double x, double y, double t) {
    const double a = 1.0 - t * t;
    const double a2 = a * a;
    const double xy = x * y;
    const double ss = x * x + y * y;
    Shc r;
    r.score = t / a + ((1.0 + t * t) * xy - t * ss) / a2;
    r.hess = (1.0 + t * t) / a2 +
             (2.0 * t * (3.0 + t * t) * xy - (1.0 + 3.0 * t * t) * ss) / (a2 * a);
    r.cross1 = ((1.0 + t * t) * y - 2.0 * t * x) / (a2 * norm_pdf(x));
    r.cross2 = ((1.0 + t * t) * x - 2.0 * t * y) / (a2 * norm_pdf(y));
    return r;
}

// ------------------------------------------------------------------- Frank
// For t > 0 write E = e^{-t} - e^{-tu} - e^{-tv} + e^{-t(u+v)}; the density
// is c = t(1-e^{-t}) e^{-t(u+v)} / E^2. Factoring e^{-t*lo} out of E with
// lo = min(u,v) leaves B = expm1(-t(1-lo)) + e^{-t(hi-lo)} expm1(-t*lo),
// a sum of two negative terms, so B carries full relative precision and
// no intermediate can underflow. Negative t is handled by the reflection
// c(u,v;-t) = c(u,1-v;t).

inline double frank_logpdf_pos(double u, double v, double t) {
    const double lo = std::min(u, v);
    const double hi = std::max(u, v);
    const double k2 = -t * (hi - lo);
    const double b = std::expm1(-t * (1.0 - lo)) + std::exp(k2) * std::expm1(-t * lo);
    return std::log(t) + std::log(-std::expm1(-t)) + k2 - 2.0 * std::log(-b);
}

// d^2 log c / (dtheta d(first argument)) for t > 0, given the shared
// bracket values; `shift` = e^{-t(u - lo)}.
inline double frank_cross_first(double u, double v, double t, double shift, double b,
                                double bp) {
    const double em_v = std::expm1(-t * v);
    const double ev = std::exp(-t * v);
    const double eu = -t * shift * em_v;                                // E_u / e^{-t lo}
    const double deu = shift * ((t * u - 1.0) * em_v + t * v * ev);     // dE_u/dt, same scale
    return -1.0 - 2.0 * (deu * b - eu * bp) / (b * b);
}

inline Shc frank_shc_pos(double u, double v, double t) {
    const double lo = std::min(u, v);
    const double hi = std::max(u, v);
    const double e1 = std::exp(-t * (1.0 - lo));
    const double e2 = std::exp(-t * (hi - lo));
    const double e3 = std::exp(-t * lo);
    const double b = std::expm1(-t * (1.0 - lo)) + e2 * std::expm1(-t * lo);
    const double bp = lo - e1 + e2 * (hi - (lo + hi) * e3);
    const double bpp = e1 - lo * lo + e2 * ((lo + hi) * (lo + hi) * e3 - hi * hi);
    const double g = std::exp(-t) / std::expm1(-t);
    Shc r;
    r.score = 1.0 / t - g - (u + v) - 2.0 * bp / b;
    r.hess = -1.0 / (t * t) + g - g * g - 2.0 * (bpp / b - (bp / b) * (bp / b));
    r.cross1 = frank_cross_first(u, v, t, u <= v ? 1.0 : e2, b, bp);
    r.cross2 = frank_cross_first(v, u, t, v <= u ? 1.0 : e2, b, bp);
    return r;
}

inline double frank_cdf_pos(double u, double v, double t) {
    const double lo = std::min(u, v);
    const double hi = std::max(u, v);
    const double k2 = -t * (hi - lo);
    const double b = std::expm1(-t * (1.0 - lo)) + std::exp(k2) * std::expm1(-t * lo);
    // C = lo - (log(-B) - log(-D))/t with D = expm1(-t)
    return lo - (std::log(-b) - std::log(-std::expm1(-t))) / t;
}

// ------------------------------------------------------------------ Gumbel
// With x = -ln u, y = -ln v, S = x^t + y^t and W = S^{1/t}:
//   log c = -W + (t-1)(ln x + ln y) + (x+y) + (1/t - 2) ln S + ln(W + t - 1)
// S is evaluated through exponent shifting so that arbitrarily large t
// cannot overflow.

struct GumbelCore {
    double lx, ly;  // ln x, ln y
    double sum_x;   // x + y
    double lnS;     // ln S
    double w;       // S^{1/t}
    double r;       // S_t / S
    double r2;      // S_tt / S
    double pa, pb;  // x^{t-1}/S, y^{t-1}/S
};

inline GumbelCore gumbel_core(double u, double v, double t) {
    GumbelCore g;
    const double x = -std::log(u);
    const double y = -std::log(v);
    g.lx = std::log(x);
    g.ly = std::log(y);
    g.sum_x = x + y;
    const double a = t * g.lx;
    const double b = t * g.ly;
    const double m = std::max(a, b);
    const double ea = std::exp(a - m);
    const double eb = std::exp(b - m);
    const double s = ea + eb;
    g.lnS = m + std::log(s);
    g.w = std::exp(g.lnS / t);
    g.r = (ea * g.lx + eb * g.ly) / s;
    g.r2 = (ea * g.lx * g.lx + eb * g.ly * g.ly) / s;
    g.pa = std::exp(a - g.lnS) / x;
    g.pb = std::exp(b - g.lnS) / y;
    return g;
}

inline double gumbel_logpdf(double u, double v, double t) {
    const GumbelCore g = gumbel_core(u, v, t);
    return -g.w + (t - 1.0) * (g.lx + g.ly) + g.sum_x + (1.0 / t - 2.0) * g.lnS +
           std::log(g.w + t - 1.0);
}

// d^2 log c / (dtheta d(first argument)); p = x^{t-1}/S for that argument.
inline double gumbel_cross_first(const GumbelCore& g, double t, double p, double lx,
                                 double u, double wt) {
    const double gg = g.w + t - 1.0;
    const double pt = p * (lx - g.r);
    const double x = -std::log(u);
    const double cross_x = -wt * p - g.w * pt + 1.0 / x - 2.0 * p + (1.0 - 2.0 * t) * pt +
                           ((wt * p + g.w * pt) * gg - g.w * p * (wt + 1.0)) / (gg * gg);
    return -cross_x / u;
}

inline Shc gumbel_shc(double u, double v, double t) {
    const GumbelCore g = gumbel_core(u, v, t);
    const double t2 = t * t;
    const double rt = g.r2 - g.r * g.r;            // d(S_t/S)/dt
    const double lnw_t = g.r / t - g.lnS / t2;
    const double wt = g.w * lnw_t;
    const double lnw_tt = rt / t - 2.0 * g.r / t2 + 2.0 * g.lnS / (t2 * t);
    const double wtt = g.w * (lnw_t * lnw_t + lnw_tt);
    const double gg = g.w + t - 1.0;
    Shc r;
    r.score = -wt + g.lx + g.ly - g.lnS / t2 + (1.0 / t - 2.0) * g.r + (wt + 1.0) / gg;
    r.hess = -wtt - 2.0 * g.r / t2 + 2.0 * g.lnS / (t2 * t) + (1.0 / t - 2.0) * rt +
             (wtt * gg - (wt + 1.0) * (wt + 1.0)) / (gg * gg);
    r.cross1 = gumbel_cross_first(g, t, g.pa, g.lx, u, wt);
    r.cross2 = gumbel_cross_first(g, t, g.pb, g.ly, v, wt);
    return r;
}

inline Shc shc(const CopulaModel& m, double u, double v) {
    switch (m.family) {
        case CopulaFamily::Gaussian:
            return gaussian_shc(norm_quantile(u), norm_quantile(v), m.theta);
        case CopulaFamily::Frank: {
            if (m.theta > 0.0) return frank_shc_pos(u, v, m.theta);
            Shc r = frank_shc_pos(u, 1.0 - v, -m.theta);
            return Shc{-r.score, r.hess, -r.cross1, r.cross2};
        }
        case CopulaFamily::Gumbel:
            return gumbel_shc(u, v, m.theta);
    }
    throw std::logic_error("unreachable");
}

}  // namespace detail

/// C(u1, u2; theta). Boundary arguments are evaluated in the limit.
inline double cdf(const CopulaModel& m, UnitPair p) {
    validate_model(m);
    const double u = detail::clamp_unit(p.u1);
    const double v = detail::clamp_unit(p.u2);
    switch (m.family) {
        case CopulaFamily::Gaussian:
            return bvn_cdf(norm_quantile(u), norm_quantile(v), m.theta);
        case CopulaFamily::Frank:
            if (m.theta > 0.0) return detail::frank_cdf_pos(u, v, m.theta);
            return u - detail::frank_cdf_pos(u, 1.0 - v, -m.theta);
        case CopulaFamily::Gumbel: {
            const detail::GumbelCore g = detail::gumbel_core(u, v, m.theta);
            return std::exp(-g.w);
        }
    }
    throw std::logic_error("unreachable");
}

/// log c(u1, u2; theta), clipped to +-700 so corner singularities stay finite.
inline double log_pdf(const CopulaModel& m, UnitPair p) {
    validate_model(m);
    const double u = detail::clamp_unit(p.u1);
    const double v = detail::clamp_unit(p.u2);
    double lp = 0.0;
    switch (m.family) {
        case CopulaFamily::Gaussian:
            lp = detail::gaussian_logpdf(norm_quantile(u), norm_quantile(v), m.theta);
            break;
        case CopulaFamily::Frank:
            lp = m.theta > 0.0 ? detail::frank_logpdf_pos(u, v, m.theta)
                               : detail::frank_logpdf_pos(u, 1.0 - v, -m.theta);
            break;
        case CopulaFamily::Gumbel:
            lp = detail::gumbel_logpdf(u, v, m.theta);
            break;
    }
    return detail::clip_log(lp);
}

inline double pdf(const CopulaModel& m, UnitPair p) { return std::exp(log_pdf(m, p)); }

/// d log c / d theta.
inline double score_theta(const CopulaModel& m, UnitPair p) {
    validate_model(m);
    return detail::shc(m, detail::clamp_unit(p.u1), detail::clamp_unit(p.u2)).score;
}

/// d^2 log c / d theta^2.
inline double hess_theta(const CopulaModel& m, UnitPair p) {
    validate_model(m);
    return detail::shc(m, detail::clamp_unit(p.u1), detail::clamp_unit(p.u2)).hess;
}

/// d^2 log c / (d theta d u_j), margin j in {1, 2}.
inline double cross_score(const CopulaModel& m, UnitPair p, int margin) {
    validate_model(m);
    if (margin != 1 && margin != 2)
        throw std::invalid_argument("cross_score: margin must be 1 or 2");
    const detail::Shc r = detail::shc(m, detail::clamp_unit(p.u1), detail::clamp_unit(p.u2));
    return margin == 1 ? r.cross1 : r.cross2;
}

namespace detail {

inline double clamp_sample(double u) {
    return std::clamp(u, 1e-15, 1.0 - 1e-15);
}

/// Positive stable variate with Laplace transform exp(-s^alpha),
/// 0 < alpha < 1, by the Chambers-Mallows-Stuck / Kanter representation.
inline double positive_stable(double alpha, RngStream& rng) {
    const double theta = 3.14159265358979323846 * rng.uniform01();
    const double w = rng.exponential();
    const double s1 = std::sin(alpha * theta);
    const double s2 = std::sin((1.0 - alpha) * theta);
    const double s = std::sin(theta);
    return std::pow(s2 / w, (1.0 - alpha) / alpha) * s1 / std::pow(s, 1.0 / alpha);
}

}  // namespace detail

/// n i.i.d. draws. Gaussian: correlated normal pair mapped through Phi.
/// Frank: conditional inversion with the closed-form inverse h-function.
/// Gumbel: Marshall-Olkin frailty construction with a positive stable
/// variate of index 1/theta.
inline std::vector<UnitPair> sample(const CopulaModel& m, std::size_t n, RngStream& rng) {
    validate_model(m);
    if (n < 1) throw std::invalid_argument("sample: need n >= 1");
    std::vector<UnitPair> out;
    out.reserve(n);
    switch (m.family) {
        case CopulaFamily::Gaussian: {
            const double t = m.theta;
            const double s = std::sqrt(1.0 - t * t);
            for (std::size_t i = 0; i < n; ++i) {
                const double z1 = rng.normal();
                const double z2 = rng.normal();
                out.push_back({detail::clamp_sample(norm_cdf(z1)),
                               detail::clamp_sample(norm_cdf(t * z1 + s * z2))});
            }
            break;
        }
        case CopulaFamily::Frank: {
            const double t = std::fabs(m.theta);
            const bool flip = m.theta < 0.0;
            const double d = std::expm1(-t);
            for (std::size_t i = 0; i < n; ++i) {
                const double u = rng.uniform01();
                const double w = rng.uniform01();
                const double v =
                    -std::log1p(w * d / (w + (1.0 - w) * std::exp(-t * u))) / t;
                out.push_back({detail::clamp_sample(u),
                               detail::clamp_sample(flip ? 1.0 - v : v)});
            }
            break;
        }
        case CopulaFamily::Gumbel: {
            const double t = m.theta;
            if (t == 1.0) {
                for (std::size_t i = 0; i < n; ++i)
                    out.push_back({rng.uniform01(), rng.uniform01()});
                break;
            }
            const double alpha = 1.0 / t;
            for (std::size_t i = 0; i < n; ++i) {
                const double frailty = detail::positive_stable(alpha, rng);
                const double e1 = rng.exponential();
                const double e2 = rng.exponential();
                out.push_back(
                    {detail::clamp_sample(std::exp(-std::pow(e1 / frailty, alpha))),
                     detail::clamp_sample(std::exp(-std::pow(e2 / frailty, alpha)))});
            }
            break;
        }
    }
    return out;
}

/// Same draws arranged as a two-column data matrix.
inline DataMatrix sample_matrix(const CopulaModel& m, std::size_t n, RngStream& rng) {
    const std::vector<UnitPair> pairs = sample(m, n, rng);
    DataMatrix x;
    x.col1.reserve(n);
    x.col2.reserve(n);
    for (const UnitPair& p : pairs) {
        x.col1.push_back(p.u1);
        x.col2.push_back(p.u2);
    }
    return x;
}

}  // namespace parcop
