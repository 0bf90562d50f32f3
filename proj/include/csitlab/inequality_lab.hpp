#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "csitlab/channel_model.hpp"
#include "csitlab/constants.hpp"
#include "csitlab/core.hpp"
#include "csitlab/entropy.hpp"
#include "csitlab/laws.hpp"

namespace csitlab {

enum class CaseMode { closed_form_gaussian, monte_carlo };

[[nodiscard]] inline std::string to_string(CaseMode m) {
    return m == CaseMode::closed_form_gaussian ? "closed-form-gaussian" : "monte-carlo";
}

/// One side-by-side comparison lhs >= rhs, in nats.
struct GapReport {
    std::string label;
    double lhs = 0.0;
    double rhs = 0.0;
    double gap = 0.0;
    double combined_se = 0.0;
    bool pass = false;
};

inline constexpr double kClosedFormSlack = 1e-9;

[[nodiscard]] inline GapReport make_gap(std::string label, double lhs, double rhs, double se) {
    GapReport g;
    g.label = std::move(label);
    g.lhs = lhs;
    g.rhs = rhs;
    g.gap = rhs == -std::numeric_limits<double>::infinity() ? std::numeric_limits<double>::infinity() : lhs - rhs;
    g.combined_se = se;
    g.pass = se == 0.0 ? g.gap >= -kClosedFormSlack : g.gap >= -3.0 * se;
    return g;
}

namespace detail {

inline double quad_sum(std::initializer_list<double> terms) {
    double s = 0.0;
    for (double t : terms) s += t * t;
    return std::sqrt(s);
}

inline double log_plus_inv_abs(double s) {
    return s == 0.0 ? std::numeric_limits<double>::infinity() : log_plus(1.0 / std::abs(s));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Scale-law inequality
// ---------------------------------------------------------------------------

/// h(SX + U | S) against h(TX + U | T) minus the two log+ penalties.
struct Lemma2Case {
    ScalarMixture x = ScalarMixture::gaussian(1.0);
    double noise_var = 1.0;
    DiscreteLaw s_law = DiscreteLaw::point(1.0);
    DiscreteLaw t_law = DiscreteLaw::point(1.0);
    CaseMode mode = CaseMode::closed_form_gaussian;
    std::size_t n_samples = 20000;
};

/// h(aX + U) for one scale atom a; closed form for Gaussian X, else kNN on
/// n_samples draws.
[[nodiscard]] inline EntropyEstimate scaled_entropy(const Lemma2Case& c, double a, RandomStream stream) {
    if (c.mode == CaseMode::closed_form_gaussian) {
        require(c.x.is_gaussian(), "closed-form mode needs a Gaussian signal law");
        return EntropyEstimate::exact(gaussian_entropy(a * a * c.x.variance() + c.noise_var));
    }
    const double noise_sd = std::sqrt(c.noise_var);
    std::vector<double> y(c.n_samples);
    for (auto& v : y) v = a * c.x.sample(stream) + noise_sd * stream.normal();
    KnnOptions opt;
    opt.seed = stream.seed();
    return estimate_entropy_knn(std::span<const double>(y), opt);
}

[[nodiscard]] inline GapReport lemma2_check(const Lemma2Case& c, const RandomStream& stream) {
    c.x.validate();
    c.s_law.validate();
    c.t_law.validate();
    require(c.noise_var > 0.0 && std::isfinite(c.noise_var), "lemma2_check: noise_var must be > 0");

    // Atoms shared between the two laws reuse one estimate, so identical laws cancel exactly.
    std::vector<std::pair<double, EntropyEstimate>> cache;
    auto entropy_at = [&](double a) -> const EntropyEstimate& {
        for (const auto& [atom, est] : cache)
            if (atom == a) return est;
        cache.emplace_back(a, scaled_entropy(c, a, stream.split(cache.size())));
        return cache.back().second;
    };
    double lhs = 0.0, rhs = 0.0, var = 0.0;
    for (std::size_t i = 0; i < c.s_law.atoms.size(); ++i) {
        const double w = c.s_law.weights[i];
        const auto& e = entropy_at(c.s_law.atoms[i]);
        lhs += w * e.value;
        var += w * w * e.std_error * e.std_error;
    }
    for (std::size_t j = 0; j < c.t_law.atoms.size(); ++j) {
        const double w = c.t_law.weights[j];
        const auto& e = entropy_at(c.t_law.atoms[j]);
        rhs += w * e.value;
        var += w * w * e.std_error * e.std_error;
    }
    rhs -= c.t_law.expect([](double t) { return log_plus(std::abs(t)); });
    rhs -= c.s_law.expect(detail::log_plus_inv_abs);
    return make_gap("scale-law", lhs, rhs, std::sqrt(var));
}

// ---------------------------------------------------------------------------
// Directional entropies of a noisy planar pair
// ---------------------------------------------------------------------------

/// (X, Y) with independent N(0, noise_var) noise on each coordinate and an
/// angle law for Theta.
struct Lemma4Case {
    PlaneMixture xy = PlaneMixture::gaussian(Sym2::identity());
    double noise_var = 1.0;
    AngleLaw theta = AngleLaw::uniform();
    CaseMode mode = CaseMode::closed_form_gaussian;
    std::size_t n_samples = 20000;
};

/// h((X+U) cos theta + (Y+V) sin theta). Closed form for Gaussian (X, Y);
/// kNN on n_samples draws otherwise.
[[nodiscard]] inline EntropyEstimate directional_entropy(double theta, const Lemma4Case& c, RandomStream stream) {
    c.xy.validate();
    require(c.noise_var > 0.0, "directional_entropy: noise_var must be > 0");
    const Vec2 v = unit_at(theta);
    if (c.xy.is_gaussian()) return EntropyEstimate::exact(gaussian_entropy(c.xy.covariance().quad(v) + c.noise_var));
    const double noise_sd = std::sqrt(c.noise_var);
    std::vector<double> y(c.n_samples);
    for (auto& s : y) s = dot(v, c.xy.sample(stream)) + noise_sd * stream.normal();
    KnnOptions opt;
    opt.seed = stream.seed();
    return estimate_entropy_knn(std::span<const double>(y), opt);
}

/// inf over phi of E[ln |sin(Theta - phi)|] for an angle law with a density.
/// From ln|sin x| = -ln 2 - sum_k cos(2kx)/k, the objective is
/// -ln 2 - sum_k Re(E[e^{2ik(Theta - phi)}])/k. A wrapped normal has
/// E[e^{2ik Theta}] = e^{2ik mu - 2 k^2 sd^2}, so every term peaks at phi = mu
/// and the infimum is -ln 2 - sum_k e^{-2 k^2 sd^2}/k.
[[nodiscard]] inline double sine_log_infimum(const AngleLaw& law) {
    switch (law.family) {
        case AngleFamily::point: return -std::numeric_limits<double>::infinity();
        case AngleFamily::uniform: return -std::log(2.0);
        case AngleFamily::wrapped_normal: break;
    }
    const double decay = 2.0 * law.sd * law.sd;
    double tail = 0.0;
    for (int k = 1;; ++k) {
        const double term = std::exp(-decay * k * k) / k;
        tail += term;
        if (term < 1e-17 * tail) break;
    }
    return -std::log(2.0) - tail;
}

/// Checks the three lower bounds on the angle-averaged directional entropy:
/// the sine-infimum form, the entropy-threshold form using M(1/2), and the
/// linear-in-h(Theta) form using gamma. Requires Gaussian (X, Y) so that the
/// supremum over directions is exact (largest covariance eigenvalue).
[[nodiscard]] inline std::array<GapReport, 3> lemma4_check(const Lemma4Case& c, const RandomStream& stream) {
    c.xy.validate();
    require(c.xy.is_gaussian(), "lemma4_check: (X, Y) must be jointly Gaussian");
    require(c.noise_var > 0.0 && std::isfinite(c.noise_var), "lemma4_check: noise_var must be > 0");
    const auto& k = pinned_constants();
    const Sym2 cov = c.xy.covariance();
    const double s2 = c.noise_var;
    auto directional = [&](double t) { return gaussian_entropy(cov.quad(unit_at(t)) + s2); };
    const double h_sup = gaussian_entropy(cov.max_eigenvalue() + s2);

    double lhs = 0.0, lhs_se = 0.0, h_theta = 0.0, h_theta_se = 0.0;
    if (c.theta.family == AngleFamily::point) {
        lhs = directional(c.theta.mu);
        h_theta = -std::numeric_limits<double>::infinity();
    } else if (c.mode == CaseMode::closed_form_gaussian) {
        lhs = c.theta.expect(directional);
        h_theta = c.theta.entropy();
    } else {
        RandomStream draws = stream.split(0);
        std::vector<double> angles(c.n_samples), values(c.n_samples);
        for (std::size_t i = 0; i < angles.size(); ++i) {
            angles[i] = c.theta.sample(draws);
            values[i] = directional(angles[i]);
        }
        const auto m = mean_and_se(values);
        lhs = m.mean;
        lhs_se = m.std_error;
        KnnOptions opt;
        opt.seed = stream.split(1).seed();
        const auto h = estimate_entropy_knn(std::span<const double>(angles), opt);
        h_theta = h.value;
        h_theta_se = h.std_error;
    }

    const double common = 0.5 * h_sup + 0.25 * std::log(kTwoPi * kE * s2);
    const double rhs_sine = common + sine_log_infimum(c.theta);
    const double threshold = std::max(k.m_half, -1.5 * h_theta);
    const double rhs_threshold = common - std::log(kPi / 2.0) - 3.0 * threshold;
    const double rhs_linear = 0.5 * h_sup + 0.25 * std::log(s2) + 4.5 * h_theta - k.gamma;

    const double threshold_se = -1.5 * h_theta > k.m_half ? 4.5 * h_theta_se : 0.0;
    return {make_gap("sine-infimum", lhs, rhs_sine, lhs_se),
            make_gap("entropy-threshold", lhs, rhs_threshold, detail::quad_sum({lhs_se, threshold_se})),
            make_gap("entropy-linear", lhs, rhs_linear, detail::quad_sum({lhs_se, 4.5 * h_theta_se}))};
}

/// |J(t1, t2) - J(0, pi/2) - ln|sin(t2 - t1)||, where J is the joint entropy
/// of the two noisy projections, from exact Gaussian log-determinants.
[[nodiscard]] inline double rotation_identity_gap(double theta1, double theta2, const Lemma4Case& c) {
    c.xy.validate();
    require(c.xy.is_gaussian(), "rotation_identity_gap: (X, Y) must be jointly Gaussian");
    require(c.noise_var > 0.0, "rotation_identity_gap: noise_var must be > 0");
    const double sine = std::sin(theta2 - theta1);
    require(std::abs(sine) > 1e-12, "rotation_identity_gap: collinear angles, both sides are -inf");
    const Sym2 noisy = c.xy.covariance() + Sym2::identity(c.noise_var);
    auto joint = [&](double a, double b) { return gaussian_entropy(congruence(unit_at(a), unit_at(b), noisy)); };
    return std::abs(joint(theta1, theta2) - joint(0.0, kPi / 2.0) - std::log(std::abs(sine)));
}

/// |sin xi| - (2/pi) min{|xi|, |xi - pi|, |xi + pi|}; nonnegative on [-pi, pi).
[[nodiscard]] inline double sine_bound_margin(double xi) {
    const double d = std::min({std::abs(xi), std::abs(xi - kPi), std::abs(xi + kPi)});
    return std::abs(std::sin(xi)) - (2.0 / kPi) * d;
}

// ---------------------------------------------------------------------------
// Fading-averaged entropies
// ---------------------------------------------------------------------------

/// Fading laws for A and H, a planar signal law for X and the noise variance.
/// The conditioning variable S is trivial, so the conditional variants
/// coincide with the unconditional ones.
struct Lemma5Case {
    FadingModel a = FadingModel::gaussian_iid(1.0, 0.1);
    FadingModel h = FadingModel::gaussian_iid(1.0, 0.1);
    PlaneMixture x = PlaneMixture::gaussian(Sym2::identity(0.5));
    double noise_var = 1.0;
    CaseMode mode = CaseMode::closed_form_gaussian;
    std::size_t n_outer = 4000;
    std::size_t n_knn = 20000;
};

namespace detail {

/// Entropy terms of one fading law as used by the bounds.
struct FadingTerms {
    double cond_entropy = 0.0;  // h(F^T X + U | F)
    double cond_entropy_se = 0.0;
    double log_plus = 0.0;      // E log+ ||F||
    double log_plus_se = 0.0;
    double log_plus_inv = 0.0;  // E log+ 1/||F||
    double log_plus_inv_se = 0.0;
};

struct PolarTerms {
    double h_theta = 0.0, h_theta_se = 0.0;
    double h_vec = 0.0, h_vec_se = 0.0;
    double h_norm = 0.0, h_norm_se = 0.0;
    double e_log_norm_sq = 0.0, e_log_norm_sq_se = 0.0;
};

inline double composite_variance(const FadingModel& m) { return m.scale() * m.scale() + m.eps() * m.eps(); }

inline FadingTerms closed_form_terms(const FadingModel& m, double p_half, double s2) {
    const double v = composite_variance(m);
    auto rayleigh_pdf = [v](double r) { return r / v * std::exp(-r * r / (2.0 * v)); };
    FadingTerms t;
    t.cond_entropy = quadrature::integrate(
        [&](double r) { return 0.5 * std::log(kTwoPi * kE * (r * r * p_half + s2)) * rayleigh_pdf(r); }, 0.0,
        std::numeric_limits<double>::infinity());
    const auto lp = rayleigh_log_plus_moments(v);
    t.log_plus = lp.log_plus;
    t.log_plus_inv = lp.log_plus_inv;
    return t;
}

inline FadingTerms monte_carlo_terms(const FadingModel& m, const PlaneMixture& x, double s2, std::size_t n,
                                     RandomStream stream) {
    std::vector<double> ent(n), lp(n), lpi(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 f = realize_fading(m, stream).realized();
        ent[i] = mixture_entropy(x.project(f, s2));
        const double r = norm(f);
        lp[i] = log_plus(r);
        lpi[i] = log_plus(1.0 / r);
    }
    const auto e = mean_and_se(ent);
    const auto a = mean_and_se(lp);
    const auto b = mean_and_se(lpi);
    return {e.mean, e.std_error, a.mean, a.std_error, b.mean, b.std_error};
}

}  // namespace detail

/// Checks the four lower bounds on h(A^T X + U | A): the angle-entropy form,
/// its polar-entropy rewrite, the conditional form (identical here, S being
/// trivial) and the Gaussian-relaxed form using only h(A) and E||A||^2.
///
/// Closed-form mode needs gaussian-iid A and H and isotropic Gaussian X; the
/// remaining averages over the Rayleigh norm law are done by quadrature.
/// Monte-Carlo mode averages exact per-draw conditional entropies over
/// n_outer fading draws and estimates h(A), h(||A||), h(Theta_A) by kNN.
[[nodiscard]] inline std::array<GapReport, 4> lemma5_check(const Lemma5Case& c, const RandomStream& stream) {
    c.x.validate();
    require(c.noise_var > 0.0 && std::isfinite(c.noise_var), "lemma5_check: noise_var must be > 0");
    const auto& k = pinned_constants();
    const double s2 = c.noise_var;

    detail::FadingTerms ta, th;
    detail::PolarTerms polar;
    if (c.mode == CaseMode::closed_form_gaussian) {
        require(c.a.family() == FadingFamily::gaussian_iid && c.h.family() == FadingFamily::gaussian_iid,
                "lemma5_check: closed-form mode needs gaussian-iid fading");
        const Sym2 cov = c.x.covariance();
        require(c.x.is_gaussian() && cov.xy == 0.0 && cov.xx == cov.yy,
                "lemma5_check: closed-form mode needs an isotropic Gaussian signal");
        ta = detail::closed_form_terms(c.a, cov.xx, s2);
        th = detail::closed_form_terms(c.h, cov.xx, s2);
        const double v = detail::composite_variance(c.a);
        polar.h_theta = std::log(kTwoPi);
        polar.h_vec = std::log(kTwoPi * kE * v);
        polar.h_norm = 1.0 + 0.5 * std::log(v / 2.0) + kEulerGamma / 2.0;
        polar.e_log_norm_sq = std::log(2.0 * v) - kEulerGamma;
    } else {
        require(c.n_outer >= 100, "lemma5_check: n_outer must be >= 100");
        ta = detail::monte_carlo_terms(c.a, c.x, s2, c.n_outer, stream.split(0));
        th = detail::monte_carlo_terms(c.h, c.x, s2, c.n_outer, stream.split(1));
        RandomStream draws = stream.split(2);
        std::vector<Vec2> samples(c.n_knn);
        for (auto& w : samples) w = realize_fading(c.a, draws).realized();
        KnnOptions opt;
        opt.seed = stream.split(3).seed();
        const auto rep = polar_stats(samples, opt);
        polar = {rep.h_theta.value, rep.h_theta.std_error, rep.h_w.value, rep.h_w.std_error,
                 rep.h_r.value, rep.h_r.std_error, 2.0 * rep.e_log_r, 2.0 * rep.e_log_r_se};
    }

    const double lhs = ta.cond_entropy;
    const double base = 0.5 * th.cond_entropy - 0.5 * th.log_plus - ta.log_plus_inv + 0.25 * std::log(s2) - k.gamma;
    const double base_se = detail::quad_sum({ta.cond_entropy_se, 0.5 * th.cond_entropy_se, 0.5 * th.log_plus_se,
                                             ta.log_plus_inv_se});

    const double polar_angle = polar.h_vec - polar.h_norm - 0.5 * polar.e_log_norm_sq;
    const double polar_se =
        4.5 * detail::quad_sum({polar.h_vec_se, polar.h_norm_se, 0.5 * polar.e_log_norm_sq_se});
    const double second = c.a.second_moment();
    const double relaxed = polar.h_vec - 0.5 * std::log(kTwoPi * kE * second) - 0.5 * std::log(second);

    return {make_gap("angle-entropy", lhs, base + 4.5 * polar.h_theta,
                     detail::quad_sum({base_se, 4.5 * polar.h_theta_se})),
            make_gap("polar-entropy", lhs, base + 4.5 * polar_angle, detail::quad_sum({base_se, polar_se})),
            make_gap("conditional-polar", lhs, base + 4.5 * polar_angle, detail::quad_sum({base_se, polar_se})),
            make_gap("gaussian-relaxed", lhs, base + 4.5 * relaxed,
                     detail::quad_sum({base_se, 4.5 * polar.h_vec_se}))};
}

// ---------------------------------------------------------------------------
// Randomized suites
// ---------------------------------------------------------------------------

inline constexpr std::uint64_t kLemma2SuiteSeed = 0x5CA1E2;
inline constexpr std::uint64_t kLemma4SuiteSeed = 0xD1EC4;
inline constexpr std::uint64_t kLemma5SuiteSeed = 0xFAD5;

namespace detail {

inline std::vector<double> random_weights(std::size_t n, RandomStream& r) {
    std::vector<double> w(n);
    double total = 0.0;
    for (auto& x : w) total += (x = r.uniform(0.2, 1.0));
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) acc += (w[i] /= total);
    w.back() = 1.0 - acc;
    return w;
}

inline double log_uniform(RandomStream& r, double lo, double hi) {
    return std::exp(r.uniform(std::log(lo), std::log(hi)));
}

inline Sym2 random_covariance(RandomStream& r, double lo, double hi) {
    const double a = log_uniform(r, lo, hi);
    const double b = log_uniform(r, lo, hi);
    const double rho = r.uniform(-0.95, 0.95);
    return {a, rho * std::sqrt(a * b), b};
}

}  // namespace detail

/// Gaussian-mixture X with 2-3 components and three-atom scale laws.
[[nodiscard]] inline Lemma2Case random_lemma2_case(RandomStream& r) {
    Lemma2Case c;
    c.mode = CaseMode::monte_carlo;
    const std::size_t n_comp = 2 + r.index(2);
    const auto w = detail::random_weights(n_comp, r);
    c.x.components.clear();
    for (std::size_t i = 0; i < n_comp; ++i) c.x.components.push_back({w[i], r.uniform(-2.0, 2.0), r.uniform(0.2, 1.5)});
    c.noise_var = detail::log_uniform(r, 0.1, 2.0);
    auto scale_law = [&r] {
        DiscreteLaw law;
        law.weights = detail::random_weights(3, r);
        for (int i = 0; i < 3; ++i) law.atoms.push_back((r.uniform() < 0.5 ? -1.0 : 1.0) * detail::log_uniform(r, 0.2, 4.0));
        return law;
    };
    c.s_law = scale_law();
    c.t_law = scale_law();
    return c;
}

/// Correlated Gaussian (X, Y) with a wrapped-normal angle law.
[[nodiscard]] inline Lemma4Case random_lemma4_case(RandomStream& r) {
    Lemma4Case c;
    c.mode = CaseMode::monte_carlo;
    c.xy = PlaneMixture::gaussian(detail::random_covariance(r, 0.1, 5.0));
    c.noise_var = detail::log_uniform(r, 0.05, 2.0);
    const double mu = r.uniform(-kPi, kPi);
    c.theta = AngleLaw::wrapped_normal(mu, detail::log_uniform(r, 0.05, 3.0));
    return c;
}

/// Ring-phase A, gaussian-iid H and a 2-3 component planar mixture X.
[[nodiscard]] inline Lemma5Case random_lemma5_case(RandomStream& r) {
    Lemma5Case c;
    c.mode = CaseMode::monte_carlo;
    c.a = FadingModel::ring_phase(r.uniform(0.3, 2.0), r.uniform(0.05, 0.5));
    c.h = FadingModel::gaussian_iid(r.uniform(0.2, 2.0), r.uniform(0.05, 0.5));
    const std::size_t n_comp = 2 + r.index(2);
    const auto w = detail::random_weights(n_comp, r);
    c.x.components.clear();
    for (std::size_t i = 0; i < n_comp; ++i)
        c.x.components.push_back({w[i], {r.uniform(-1.5, 1.5), r.uniform(-1.5, 1.5)}, detail::random_covariance(r, 0.05, 1.0)});
    c.noise_var = detail::log_uniform(r, 0.1, 2.0);
    return c;
}

struct SuiteRow {
    std::size_t trial = 0;
    GapReport report;
};

namespace detail {

template <class MakeCase, class Check>
std::vector<SuiteRow> run_suite(std::size_t trials, std::uint64_t seed, std::size_t per_trial, MakeCase make,
                                Check check) {
    const RandomStream root(seed);
    std::vector<SuiteRow> rows(trials * per_trial);
    parallel_for(trials, [&](std::size_t t) {
        RandomStream params = root.split(2 * t);
        const auto c = make(params);
        const auto reports = check(c, root.split(2 * t + 1));
        for (std::size_t i = 0; i < per_trial; ++i) rows[t * per_trial + i] = {t, reports[i]};
    });
    return rows;
}

}  // namespace detail

[[nodiscard]] inline std::vector<SuiteRow> lemma2_suite(std::size_t trials, std::uint64_t seed = kLemma2SuiteSeed) {
    return detail::run_suite(trials, seed, 1, random_lemma2_case, [](const Lemma2Case& c, const RandomStream& s) {
        return std::array<GapReport, 1>{lemma2_check(c, s)};
    });
}

[[nodiscard]] inline std::vector<SuiteRow> lemma4_suite(std::size_t trials, std::uint64_t seed = kLemma4SuiteSeed) {
    return detail::run_suite(trials, seed, 3, random_lemma4_case,
                             [](const Lemma4Case& c, const RandomStream& s) { return lemma4_check(c, s); });
}

inline constexpr std::uint64_t kLemma3SuiteSeed = 0x9A1A3;

/// Planar law whose polar decomposition is checked, with the sample count.
struct Lemma3Case {
    PlaneMixture w = PlaneMixture::gaussian(Sym2::identity(1.0));
    std::size_t n_samples = 20000;
};

/// h(Theta) >= h(W) - h(R) - E[ln R], all four terms estimated from one sample.
[[nodiscard]] inline GapReport lemma3_check(const Lemma3Case& c, const RandomStream& stream) {
    c.w.validate();
    RandomStream draws = stream.split(0);
    std::vector<Vec2> samples(c.n_samples);
    for (auto& v : samples) v = c.w.sample(draws);
    KnnOptions opt;
    opt.seed = stream.split(1).seed();
    const auto rep = polar_stats(samples, opt);
    GapReport g = make_gap("polar-entropy", rep.h_theta.value, rep.h_w.value - rep.h_r.value - rep.e_log_r,
                           rep.combined_se);
    if (rep.degenerate_radius) g = make_gap("polar-entropy", rep.h_theta.value, -std::numeric_limits<double>::infinity(),
                                            rep.combined_se);
    return g;
}

/// Correlated Gaussians and 2-3 component planar mixtures.
[[nodiscard]] inline Lemma3Case random_lemma3_case(RandomStream& r) {
    Lemma3Case c;
    const std::size_t n_comp = 1 + r.index(3);
    const auto w = detail::random_weights(n_comp, r);
    c.w.components.clear();
    for (std::size_t i = 0; i < n_comp; ++i)
        c.w.components.push_back({w[i], {r.uniform(-2.0, 2.0), r.uniform(-2.0, 2.0)}, detail::random_covariance(r, 0.05, 2.0)});
    return c;
}

[[nodiscard]] inline std::vector<SuiteRow> lemma3_suite(std::size_t trials, std::uint64_t seed = kLemma3SuiteSeed) {
    return detail::run_suite(trials, seed, 1, random_lemma3_case, [](const Lemma3Case& c, const RandomStream& s) {
        return std::array<GapReport, 1>{lemma3_check(c, s)};
    });
}

[[nodiscard]] inline std::vector<SuiteRow> lemma5_suite(std::size_t trials, std::uint64_t seed = kLemma5SuiteSeed) {
    return detail::run_suite(trials, seed, 4, random_lemma5_case,
                             [](const Lemma5Case& c, const RandomStream& s) { return lemma5_check(c, s); });
}

}  // namespace csitlab
