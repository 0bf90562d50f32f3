#pragma once

// Sum-rate upper bound for the two-antenna fading broadcast channel, its
// pre-log extraction, and the power-allocation gap Delta with a numeric
// worst-case probe.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "csitlab/channel_model.hpp"
#include "csitlab/constants.hpp"
#include "csitlab/core.hpp"
#include "csitlab/inequality_lab.hpp"
#include "csitlab/laws.hpp"

namespace csitlab {

/// Seed of the Monte-Carlo moments used for ring-phase links. Fixed so that
/// term_constants is a deterministic function of the models.
inline constexpr std::uint64_t kBoundMomentSeed = 0xB0D5;

struct BoundReport {
    double snr = 0.0;
    double term_log_a = 0.0;
    double term_log_h = 0.0;
    double term_constants = 0.0;
    /// Standard error of term_constants; zero unless a link uses Monte-Carlo moments.
    double term_constants_se = 0.0;
    double total = 0.0;
    double ratio = 0.0;
};

/// Moments of both links; computed once per model pair and reused across snr.
struct BoundMoments {
    MomentSet a;
    MomentSet h;
};

[[nodiscard]] inline BoundMoments bound_moments(const ChannelConfig& config) {
    RandomStream stream(kBoundMomentSeed);
    RandomStream sa = stream.split(0);
    RandomStream sh = stream.split(1);
    return {model_moments(config.model_a, sa), model_moments(config.model_h, sh)};
}

/// Every snr-independent term of the bound, in nats.
[[nodiscard]] inline std::pair<double, double> bound_constant_terms(const BoundMoments& m) {
    const auto& k = pinned_constants();
    const double value = (4.0 / 3.0) * k.gamma_prime - 3.0 * m.a.err_cond_entropy - 3.0 * m.h.err_cond_entropy +
                         (m.a.log_plus_norm + m.h.log_plus_norm) / 3.0 +
                         2.0 * (m.a.log_plus_inv_norm + m.h.log_plus_inv_norm) / 3.0 +
                         3.0 * std::log(m.a.second_moment) + 3.0 * std::log(m.h.second_moment);
    const double se = std::sqrt(std::pow(m.a.log_plus_norm_se / 3.0, 2) + std::pow(m.h.log_plus_norm_se / 3.0, 2) +
                                std::pow(2.0 * m.a.log_plus_inv_norm_se / 3.0, 2) +
                                std::pow(2.0 * m.h.log_plus_inv_norm_se / 3.0, 2));
    return {value, se};
}

[[nodiscard]] inline BoundReport sum_rate_upper_bound(double snr, const BoundMoments& m) {
    require(std::isfinite(snr) && snr > 0.0, "sum_rate_upper_bound: snr must be > 0");
    BoundReport r;
    r.snr = snr;
    r.term_log_a = std::log1p(m.a.second_moment * snr) / 3.0;
    r.term_log_h = std::log1p(m.h.second_moment * snr) / 3.0;
    std::tie(r.term_constants, r.term_constants_se) = bound_constant_terms(m);
    r.total = r.term_log_a + r.term_log_h + r.term_constants;
    r.ratio = r.total / std::log1p(snr);
    return r;
}

/// The bound at snr = power / noise_var for a memoryless model pair.
[[nodiscard]] inline BoundReport sum_rate_upper_bound(const ChannelConfig& config) {
    config.validate();
    return sum_rate_upper_bound(config.snr(), bound_moments(config));
}

// ---------------------------------------------------------------------------
// Rate curves and pre-log fits
// ---------------------------------------------------------------------------

struct RateCurve {
    std::vector<double> snr_grid;
    std::vector<double> values;
    std::string label;

    void validate() const {
        require(snr_grid.size() == values.size(), "rate curve: grid and values must have equal length");
        for (std::size_t i = 0; i < snr_grid.size(); ++i) {
            require(std::isfinite(snr_grid[i]) && snr_grid[i] > 0.0, "rate curve: snr must be finite and > 0");
            require(i == 0 || snr_grid[i] > snr_grid[i - 1], "rate curve: grid must be strictly increasing");
        }
    }
};

struct PrelogFit {
    double slope = 0.0;
    double intercept = 0.0;
    /// Largest absolute deviation of the fitted points from the line.
    double residual = 0.0;
};

/// Least-squares slope of values against ln(1+snr) over the top half of the
/// grid. Needs at least 4 points spanning at least 3 decades of snr.
[[nodiscard]] inline PrelogFit prelog_fit(const RateCurve& curve) {
    curve.validate();
    const std::size_t n = curve.snr_grid.size();
    require(n >= 4, "prelog_fit: needs at least 4 grid points");
    require(curve.snr_grid.back() / curve.snr_grid.front() >= 1e3 * (1.0 - 1e-12),
            "prelog_fit: grid must span at least 3 decades of snr");
    const std::size_t first = n / 2;
    const auto m = static_cast<double>(n - first);
    double mx = 0.0, my = 0.0;
    for (std::size_t i = first; i < n; ++i) {
        mx += std::log1p(curve.snr_grid[i]);
        my += curve.values[i];
    }
    mx /= m;
    my /= m;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = first; i < n; ++i) {
        const double dx = std::log1p(curve.snr_grid[i]) - mx;
        sxy += dx * (curve.values[i] - my);
        sxx += dx * dx;
    }
    PrelogFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    for (std::size_t i = first; i < n; ++i) {
        const double pred = fit.intercept + fit.slope * std::log1p(curve.snr_grid[i]);
        fit.residual = std::max(fit.residual, std::abs(curve.values[i] - pred));
    }
    return fit;
}

struct BoundSweep {
    std::vector<BoundReport> reports;
    RateCurve totals;
    RateCurve ratios;
    PrelogFit fit;
};

/// Bound over an snr grid spanning at least 4 decades, with the pre-log fit.
[[nodiscard]] inline BoundSweep bound_sweep(const ChannelConfig& config, const std::vector<double>& snr_grid) {
    config.validate();
    require(snr_grid.size() >= 4, "bound_sweep: needs at least 4 grid points");
    RateCurve probe{snr_grid, std::vector<double>(snr_grid.size()), "grid"};
    probe.validate();
    require(snr_grid.back() / snr_grid.front() >= 1e4 * (1.0 - 1e-12),
            "bound_sweep: grid must span at least 4 decades of snr");
    const auto moments = bound_moments(config);
    BoundSweep out;
    out.reports.resize(snr_grid.size());
    parallel_for(snr_grid.size(), [&](std::size_t i) { out.reports[i] = sum_rate_upper_bound(snr_grid[i], moments); });
    out.totals = {snr_grid, {}, "bound-total"};
    out.ratios = {snr_grid, {}, "bound-ratio"};
    for (const auto& r : out.reports) {
        out.totals.values.push_back(r.total);
        out.ratios.values.push_back(r.ratio);
    }
    out.fit = prelog_fit(out.totals);
    return out;
}

/// The two model pairs the pre-log and hierarchy checks run on.
struct NamedConfig {
    std::string label;
    ChannelConfig config;
};

[[nodiscard]] inline std::vector<NamedConfig> canonical_model_pairs() {
    ChannelConfig iid;
    iid.model_a = FadingModel::gaussian_iid(1.0, 0.1);
    iid.model_h = FadingModel::gaussian_iid(1.0, 0.1);
    ChannelConfig mixed;
    mixed.model_a = FadingModel::ring_phase(1.0, 0.1);
    mixed.model_h = FadingModel::gaussian_iid(1.0, 0.1);
    return {{"gaussian-iid/gaussian-iid", iid}, {"ring-phase/gaussian-iid", mixed}};
}

// ---------------------------------------------------------------------------
// Power-allocation gap
// ---------------------------------------------------------------------------

/// Delta = 1/2 E[ln(2 pi e (S^2 p(S) + sigma2))] - 1/2 ln(2 pi e (E[S^2] budget + sigma2))
/// for a per-atom allocation p of a discrete S law with E[p(S)] <= budget.
[[nodiscard]] inline double lemma6_delta(const DiscreteLaw& s_law, const std::vector<double>& allocation,
                                         double budget, double sigma2) {
    s_law.validate();
    require(allocation.size() == s_law.atoms.size(), "lemma6_delta: one allocation entry per atom");
    require(budget >= 0.0 && std::isfinite(budget), "lemma6_delta: budget must be >= 0");
    require(sigma2 > 0.0 && std::isfinite(sigma2), "lemma6_delta: sigma2 must be > 0");
    double used = 0.0;
    for (std::size_t i = 0; i < allocation.size(); ++i) {
        require(allocation[i] >= 0.0 && std::isfinite(allocation[i]), "lemma6_delta: allocation must be >= 0");
        used += s_law.weights[i] * allocation[i];
    }
    if (used > budget * (1.0 + 1e-12) + 1e-300) {
        throw precondition_error("lemma6_delta: allocation uses " + std::to_string(used) +
                                 " which exceeds the power budget " + std::to_string(budget));
    }
    double lhs = 0.0;
    for (std::size_t i = 0; i < allocation.size(); ++i) {
        const double s = s_law.atoms[i];
        lhs += s_law.weights[i] * std::log(s * s * allocation[i] + sigma2);
    }
    return 0.5 * lhs - 0.5 * std::log(s_law.second_moment() * budget + sigma2);
}

/// Water-filling: the exact maximizer, p_i = max(0, nu - sigma2 / s_i^2).
[[nodiscard]] inline std::vector<double> water_filling(const DiscreteLaw& s_law, double budget, double sigma2) {
    s_law.validate();
    const std::size_t n = s_law.atoms.size();
    auto used = [&](double nu) {
        double u = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double g = s_law.atoms[i] * s_law.atoms[i];
            if (g > 0.0) u += s_law.weights[i] * std::max(0.0, nu - sigma2 / g);
        }
        return u;
    };
    double g_max = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        if (s_law.weights[i] > 0.0) g_max = std::max(g_max, s_law.atoms[i] * s_law.atoms[i]);
    require(g_max > 0.0, "water_filling: S must not be identically zero");
    double lo = sigma2 / g_max;
    double hi = lo + 1.0;
    while (used(hi) < budget) hi = lo + 2.0 * (hi - lo);
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (used(mid) < budget ? lo : hi) = mid;
    }
    std::vector<double> p(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double g = s_law.atoms[i] * s_law.atoms[i];
        p[i] = g > 0.0 ? std::max(0.0, hi - sigma2 / g) : 0.0;
    }
    // Rescale away the bisection slack so the budget holds exactly.
    double u = 0.0;
    for (std::size_t i = 0; i < n; ++i) u += s_law.weights[i] * p[i];
    if (u > budget) for (auto& x : p) x *= budget / u;
    return p;
}

struct AllocationProbe {
    std::vector<double> allocation;
    double delta = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
};

namespace detail {

/// Euclidean projection onto {q >= 0, sum q = total}.
inline std::vector<double> project_simplex(std::vector<double> v, double total) {
    std::vector<double> u = v;
    std::sort(u.begin(), u.end(), std::greater<>());
    double acc = 0.0, tau = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        acc += u[i];
        const double t = (acc - total) / static_cast<double>(i + 1);
        if (u[i] - t > 0.0) tau = t;
    }
    for (auto& x : v) x = std::max(0.0, x - tau);
    return v;
}

}  // namespace detail

inline constexpr double kProbeStepTolerance = 1e-8;

/// Maximizes Delta over allocations by projected gradient ascent with Armijo
/// backtracking, in the power masses q_i = w_i p_i (so the budget is a plain
/// simplex). Stops when a step moves q by less than 1e-8 of the budget.
[[nodiscard]] inline AllocationProbe lemma6_probe(const DiscreteLaw& s_law, double budget, double sigma2,
                                                  std::size_t max_iterations = 200000) {
    s_law.validate();
    require(budget > 0.0 && std::isfinite(budget), "lemma6_probe: budget must be > 0");
    require(sigma2 > 0.0, "lemma6_probe: sigma2 must be > 0");
    const std::size_t n = s_law.atoms.size();
    const auto& w = s_law.weights;
    auto to_allocation = [&](const std::vector<double>& q) {
        std::vector<double> p(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) p[i] = w[i] > 0.0 ? q[i] / w[i] : 0.0;
        return p;
    };
    auto objective = [&](const std::vector<double>& q) {
        double f = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (w[i] <= 0.0) continue;
            const double g = s_law.atoms[i] * s_law.atoms[i];
            f += 0.5 * w[i] * std::log(g * q[i] / w[i] + sigma2);
        }
        return f;
    };
    // Start from the constant allocation.
    std::vector<double> q(n);
    for (std::size_t i = 0; i < n; ++i) q[i] = w[i] * budget;
    double f = objective(q);
    double step = budget;
    AllocationProbe out;
    for (out.iterations = 0; out.iterations < max_iterations; ++out.iterations) {
        std::vector<double> grad(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            if (w[i] <= 0.0) continue;
            const double g = s_law.atoms[i] * s_law.atoms[i];
            grad[i] = 0.5 * g / (g * q[i] / w[i] + sigma2);
        }
        step *= 2.0;
        std::vector<double> next;
        double f_next = f;
        double moved = 0.0;
        while (true) {
            std::vector<double> trial(n);
            for (std::size_t i = 0; i < n; ++i) trial[i] = q[i] + step * grad[i];
            next = detail::project_simplex(std::move(trial), budget);
            double ascent = 0.0;
            moved = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                ascent += grad[i] * (next[i] - q[i]);
                moved += (next[i] - q[i]) * (next[i] - q[i]);
            }
            moved = std::sqrt(moved);
            f_next = objective(next);
            if (f_next >= f + 1e-4 * ascent || moved <= kProbeStepTolerance * budget) break;
            step *= 0.5;
        }
        const bool done = moved <= kProbeStepTolerance * budget;
        if (f_next >= f) {
            q = std::move(next);
            f = f_next;
        }
        if (done) {
            out.converged = true;
            break;
        }
    }
    out.allocation = to_allocation(q);
    out.delta = f - 0.5 * std::log(s_law.second_moment() * budget + sigma2);
    return out;
}

inline constexpr std::uint64_t kLemma6SuiteSeed = 0x6A110C;
inline constexpr std::size_t kLemma6Atoms = 64;

struct Lemma6Case {
    DiscreteLaw s_law;
    double budget = 1.0;
    double sigma2 = 1.0;
};

/// 64-atom S laws drawn from a random scale family, with a log-uniform budget.
[[nodiscard]] inline Lemma6Case random_lemma6_case(RandomStream& r) {
    Lemma6Case c;
    c.s_law.atoms.resize(kLemma6Atoms);
    c.s_law.weights = detail::random_weights(kLemma6Atoms, r);
    const double spread = r.uniform(0.1, 3.0);
    const double zero_mass = r.uniform() < 0.3 ? r.uniform(0.0, 0.9) : 0.0;
    for (std::size_t i = 0; i < kLemma6Atoms; ++i)
        c.s_law.atoms[i] = r.uniform() < zero_mass ? 0.0 : std::exp(spread * r.normal());
    c.budget = detail::log_uniform(r, 1e-3, 1e6);
    c.sigma2 = detail::log_uniform(r, 0.1, 10.0);
    return c;
}

/// Gap 1/e - Delta for the probe's best allocation.
[[nodiscard]] inline GapReport lemma6_check(const Lemma6Case& c) {
    const auto probe = lemma6_probe(c.s_law, c.budget, c.sigma2);
    return make_gap("power-allocation", 1.0 / kE, probe.delta, 0.0);
}

[[nodiscard]] inline std::vector<SuiteRow> lemma6_suite(std::size_t trials, std::uint64_t seed = kLemma6SuiteSeed) {
    return detail::run_suite(trials, seed, 1, random_lemma6_case, [](const Lemma6Case& c, const RandomStream&) {
        return std::array<GapReport, 1>{lemma6_check(c)};
    });
}

}  // namespace csitlab
