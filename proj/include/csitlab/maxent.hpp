#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "csitlab/core.hpp"
#include "csitlab/quadrature.hpp"

namespace csitlab {

/// Smallest attainable constraint level: the uniform density on [-pi, pi)
/// has E[log+ 1/|Theta|] = 1/pi.
inline constexpr double kMinMaxentGamma = 1.0 / std::numbers::pi;

/// Entropy-maximizing density on [-pi, pi) under E[log+ 1/|Theta|] = gamma:
///   f(theta) = c / |theta|^alpha  for |theta| <= 1,   c  for 1 < |theta| <= pi.
struct MaxentSolution {
    double gamma = 0.0;
    double alpha = 0.0;
    double c = 0.0;
    double h_max = 0.0;
    /// |integral f - 1| and |E[log+ 1/|Theta|] - gamma|, both by quadrature.
    double normalization_residual = 0.0;
    double constraint_residual = 0.0;
    /// |closed-form entropy - quadrature entropy|.
    double entropy_residual = 0.0;

    [[nodiscard]] double density(double theta) const {
        const double t = std::abs(theta);
        if (t > kPi) return 0.0;
        return t <= 1.0 ? c * std::pow(t, -alpha) : c;
    }
};

namespace detail {

// With u = 1/(1-alpha): normalization gives c = 1/(2(u + pi - 1)) and the
// constraint reads gamma = u^2/(u + pi - 1), increasing in u.
inline double maxent_constraint(double alpha) {
    const double u = 1.0 / (1.0 - alpha);
    return u * u / (u + kPi - 1.0);
}

}  // namespace detail

/// Solves for (alpha, c) by bisection on alpha, run to full double precision
/// (well inside 1e-10), and verifies both constraints and the entropy by
/// quadrature. The inner piece is integrated after theta = exp(-y), which
/// keeps the theta^-alpha singularity accurate as alpha -> 1.
[[nodiscard]] inline MaxentSolution solve_maxent(double gamma) {
    require(std::isfinite(gamma), "solve_maxent: gamma must be finite");
    if (gamma < kMinMaxentGamma) {
        throw precondition_error("solve_maxent: gamma = " + std::to_string(gamma) +
                                 " is below 1/pi, the smallest value attained by the maximizing family "
                                 "(out of family)");
    }
    double lo = 0.0;
    double hi = 1.0;
    if (detail::maxent_constraint(0.0) >= gamma) {
        hi = 0.0;
    } else {
        while (true) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            (detail::maxent_constraint(mid) < gamma ? lo : hi) = mid;
        }
    }
    MaxentSolution s;
    s.gamma = gamma;
    s.alpha = hi;
    const double u = 1.0 / (1.0 - s.alpha);
    s.c = 1.0 / (2.0 * (u + kPi - 1.0));
    s.h_max = -std::log(s.c) - s.alpha * gamma;

    const double a = s.alpha;
    const double c = s.c;
    const double inner_mass = quadrature::integrate_to_infinity(
        [a](double y) { return std::exp(-(1.0 - a) * y); }, 0.0, 1e-10 * u);
    const double inner_log = quadrature::integrate_to_infinity(
        [a](double y) { return y * std::exp(-(1.0 - a) * y); }, 0.0, 1e-10 * u * u);
    s.normalization_residual = std::abs(2.0 * c * (inner_mass + (kPi - 1.0)) - 1.0);
    s.constraint_residual = std::abs(2.0 * c * inner_log - gamma);
    // -ln f = -ln c - alpha y on the inner piece.
    const double h_quad = 2.0 * c * (-std::log(c) * inner_mass - a * inner_log) - 2.0 * c * (kPi - 1.0) * std::log(c);
    s.entropy_residual = std::abs(h_quad - s.h_max);
    if (s.normalization_residual > 1e-9 || s.constraint_residual > 1e-9) {
        throw integration_error("solve_maxent: constraint residuals exceed 1e-9 at gamma = " + std::to_string(gamma));
    }
    return s;
}

[[nodiscard]] inline double hmax(double gamma) { return solve_maxent(gamma).h_max; }

/// Large-gamma behaviour of hmax: -(gamma - ln gamma - ln 2e).
[[nodiscard]] inline double hmax_asymptote(double gamma) {
    require(gamma > 0.0, "hmax_asymptote: gamma must be > 0");
    return -(gamma - std::log(gamma) - std::log(2.0 * kE));
}

/// Smallest gamma* with -hmax(gamma) >= gamma/(1+delta) for all gamma >= gamma*.
///
/// g(gamma) = -hmax(gamma) - gamma/(1+delta) has g' = alpha(gamma) - 1/(1+delta),
/// and alpha increases with gamma, so g falls then rises and crosses zero once.
/// Found by geometric scan then bisection to a relative width of 1e-12.
[[nodiscard]] inline double m_of_delta(double delta) {
    require(delta > 0.0 && delta <= 10.0, "m_of_delta: delta must be in (0, 10]");
    auto g = [delta](double gamma) { return -hmax(gamma) - gamma / (1.0 + delta); };
    double lo = kMinMaxentGamma;
    double hi = lo;
    while (g(hi) < 0.0) {
        lo = hi;
        hi *= 1.5;
    }
    while (hi - lo > 1e-12 * hi) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) < 0.0 ? lo : hi) = mid;
    }
    return hi;
}

/// max{M(delta), -(1+delta) h_theta}: a bound on E[log+ 1/|Theta|] for any
/// angle law with entropy h_theta.
[[nodiscard]] inline double corollary1_bound(double h_theta, double delta) {
    require(delta > 0.0, "corollary1_bound: delta must be > 0");
    return std::max(m_of_delta(delta), -(1.0 + delta) * h_theta);
}

/// Draws from the maximizing density by inversion: the inner piece has mass
/// 2cu and conditional CDF t^(1-alpha) on (0, 1].
[[nodiscard]] inline double sample_maxent(const MaxentSolution& s, RandomStream& stream) {
    const double u = 1.0 / (1.0 - s.alpha);
    const double sign = stream.uniform() < 0.5 ? -1.0 : 1.0;
    if (stream.uniform() < 2.0 * s.c * u) return sign * std::pow(1.0 - stream.uniform(), u);
    return sign * stream.uniform(1.0, kPi);
}

}  // namespace csitlab
