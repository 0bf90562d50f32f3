#pragma once

// Distribution descriptors used by the inequality checks: discrete scale
// laws, scalar and planar Gaussian mixtures, and angle laws on [-pi, pi).

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "csitlab/core.hpp"
#include "csitlab/quadrature.hpp"

namespace csitlab {

/// Finitely supported law on the real line.
struct DiscreteLaw {
    std::vector<double> atoms;
    std::vector<double> weights;

    [[nodiscard]] static DiscreteLaw point(double at) { return {{at}, {1.0}}; }

    void validate() const {
        require(!atoms.empty() && atoms.size() == weights.size(), "discrete law: atoms and weights must match");
        double total = 0.0;
        for (std::size_t i = 0; i < atoms.size(); ++i) {
            require(std::isfinite(atoms[i]), "discrete law: atoms must be finite");
            require(weights[i] >= 0.0, "discrete law: weights must be nonnegative");
            total += weights[i];
        }
        require(std::abs(total - 1.0) < 1e-12, "discrete law: weights must sum to 1");
    }

    template <class F>
    [[nodiscard]] double expect(F&& f) const {
        double acc = 0.0;
        for (std::size_t i = 0; i < atoms.size(); ++i)
            if (weights[i] > 0.0) acc += weights[i] * f(atoms[i]);
        return acc;
    }

    [[nodiscard]] double second_moment() const {
        return expect([](double s) { return s * s; });
    }
};

struct ScalarComponent {
    double weight = 1.0;
    double mean = 0.0;
    double sd = 1.0;
};

/// Finite Gaussian mixture on the real line; sd = 0 components are atoms.
struct ScalarMixture {
    std::vector<ScalarComponent> components;

    [[nodiscard]] static ScalarMixture gaussian(double variance, double mean = 0.0) {
        require(variance >= 0.0, "gaussian law: variance must be >= 0");
        return {{{1.0, mean, std::sqrt(variance)}}};
    }

    [[nodiscard]] bool is_gaussian() const { return components.size() == 1; }

    [[nodiscard]] double mean() const {
        double m = 0.0;
        for (const auto& c : components) m += c.weight * c.mean;
        return m;
    }

    [[nodiscard]] double variance() const {
        const double m = mean();
        double v = 0.0;
        for (const auto& c : components) v += c.weight * (c.sd * c.sd + (c.mean - m) * (c.mean - m));
        return v;
    }

    /// Law of a X + b Z with Z ~ N(0, 1) independent.
    [[nodiscard]] ScalarMixture affine_plus_noise(double a, double noise_var) const {
        ScalarMixture out;
        out.components.reserve(components.size());
        for (const auto& c : components)
            out.components.push_back({c.weight, a * c.mean, std::sqrt(a * a * c.sd * c.sd + noise_var)});
        return out;
    }

    [[nodiscard]] double density(double x) const {
        double p = 0.0;
        for (const auto& c : components) {
            const double z = (x - c.mean) / c.sd;
            p += c.weight * std::exp(-0.5 * z * z) / (c.sd * std::sqrt(kTwoPi));
        }
        return p;
    }

    double sample(RandomStream& stream) const {
        double u = stream.uniform();
        for (const auto& c : components) {
            if (u < c.weight) return c.mean + c.sd * stream.normal();
            u -= c.weight;
        }
        const auto& last = components.back();
        return last.mean + last.sd * stream.normal();
    }

    void validate() const {
        require(!components.empty(), "mixture: needs at least one component");
        double total = 0.0;
        for (const auto& c : components) {
            require(c.weight >= 0.0 && std::isfinite(c.mean) && std::isfinite(c.sd) && c.sd >= 0.0,
                    "mixture: invalid component");
            total += c.weight;
        }
        require(std::abs(total - 1.0) < 1e-12, "mixture: weights must sum to 1");
    }
};

/// Differential entropy of a Gaussian mixture with all sd > 0, by adaptive
/// quadrature of -p ln p split at the component centres.
[[nodiscard]] inline double mixture_entropy(const ScalarMixture& m) {
    if (m.is_gaussian()) {
        const double sd = m.components.front().sd;
        require(sd > 0.0, "mixture_entropy: degenerate component");
        return 0.5 * std::log(kTwoPi * kE * sd * sd);
    }
    std::vector<double> cuts;
    for (const auto& c : m.components) {
        require(c.sd > 0.0, "mixture_entropy: degenerate component");
        if (c.weight <= 0.0) continue;
        for (double k : {-10.0, -3.0, 0.0, 3.0, 10.0}) cuts.push_back(c.mean + k * c.sd);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    auto integrand = [&m](double x) {
        const double p = m.density(x);
        return p > 0.0 ? -p * std::log(p) : 0.0;
    };
    constexpr double inf = std::numeric_limits<double>::infinity();
    double h = quadrature::integrate(integrand, -inf, cuts.front());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) h += quadrature::integrate(integrand, cuts[i], cuts[i + 1]);
    h += quadrature::integrate(integrand, cuts.back(), inf);
    return h;
}

struct PlaneComponent {
    double weight = 1.0;
    Vec2 mean;
    Sym2 cov;
};

/// Finite Gaussian mixture in the plane; component covariances may be singular.
struct PlaneMixture {
    std::vector<PlaneComponent> components;

    [[nodiscard]] static PlaneMixture gaussian(const Sym2& cov, Vec2 mean = {}) { return {{{1.0, mean, cov}}}; }

    [[nodiscard]] bool is_gaussian() const { return components.size() == 1; }

    [[nodiscard]] Vec2 mean() const {
        Vec2 m;
        for (const auto& c : components) m = m + c.weight * c.mean;
        return m;
    }

    [[nodiscard]] Sym2 covariance() const {
        const Vec2 m = mean();
        Sym2 out;
        for (const auto& c : components) {
            const Vec2 d = c.mean - m;
            out = out + Sym2{c.weight * (c.cov.xx + d.c1 * d.c1), c.weight * (c.cov.xy + d.c1 * d.c2),
                             c.weight * (c.cov.yy + d.c2 * d.c2)};
        }
        return out;
    }

    [[nodiscard]] double second_moment() const {
        double s = 0.0;
        for (const auto& c : components) s += c.weight * (c.cov.trace() + norm_sq(c.mean));
        return s;
    }

    /// Law of v^T X + N(0, noise_var).
    [[nodiscard]] ScalarMixture project(Vec2 v, double noise_var) const {
        ScalarMixture out;
        out.components.reserve(components.size());
        for (const auto& c : components)
            out.components.push_back({c.weight, dot(v, c.mean), std::sqrt(c.cov.quad(v) + noise_var)});
        return out;
    }

    Vec2 sample(RandomStream& stream) const {
        double u = stream.uniform();
        const PlaneComponent* pick = &components.back();
        for (const auto& c : components) {
            if (u < c.weight) {
                pick = &c;
                break;
            }
            u -= c.weight;
        }
        // Cholesky of the 2x2 covariance, tolerating singular matrices.
        const Sym2& s = pick->cov;
        const double l11 = std::sqrt(std::max(0.0, s.xx));
        const double l21 = l11 > 0.0 ? s.xy / l11 : 0.0;
        const double l22 = std::sqrt(std::max(0.0, s.yy - l21 * l21));
        const double z1 = stream.normal();
        const double z2 = stream.normal();
        return pick->mean + Vec2{l11 * z1, l21 * z1 + l22 * z2};
    }

    void validate() const {
        require(!components.empty(), "plane mixture: needs at least one component");
        double total = 0.0;
        for (const auto& c : components) {
            require(c.weight >= 0.0 && c.mean.finite() && c.cov.positive_semidefinite(),
                    "plane mixture: invalid component");
            total += c.weight;
        }
        require(std::abs(total - 1.0) < 1e-12, "plane mixture: weights must sum to 1");
    }
};

/// ln|sin x|, floored so that quadrature nodes rounding onto a zero of sin
/// stay finite; the floor's contribution is far below any tolerance used.
[[nodiscard]] inline double log_abs_sin(double x) { return std::log(std::max(std::abs(std::sin(x)), 1e-300)); }

enum class AngleFamily { uniform, point, wrapped_normal };

/// Law of an angle on [-pi, pi).
struct AngleLaw {
    AngleFamily family = AngleFamily::uniform;
    double mu = 0.0;
    double sd = 0.0;

    [[nodiscard]] static AngleLaw uniform() { return {}; }
    [[nodiscard]] static AngleLaw point(double at) { return {AngleFamily::point, at, 0.0}; }
    [[nodiscard]] static AngleLaw wrapped_normal(double mu, double sd) {
        require(sd > 0.0 && std::isfinite(sd), "wrapped normal: sd must be > 0");
        return {AngleFamily::wrapped_normal, mu, sd};
    }

    [[nodiscard]] bool has_density() const { return family != AngleFamily::point; }

    [[nodiscard]] double density(double theta) const {
        switch (family) {
            case AngleFamily::uniform: return 1.0 / kTwoPi;
            case AngleFamily::point: return 0.0;
            case AngleFamily::wrapped_normal: break;
        }
        const int images = 2 + static_cast<int>(std::ceil(6.0 * sd / kTwoPi));
        const double d = std::remainder(theta - mu, kTwoPi);
        double p = 0.0;
        for (int k = -images; k <= images; ++k) {
            const double z = (d + k * kTwoPi) / sd;
            p += std::exp(-0.5 * z * z);
        }
        return p / (sd * std::sqrt(kTwoPi));
    }

    double sample(RandomStream& stream) const {
        switch (family) {
            case AngleFamily::uniform: return stream.uniform(-kPi, kPi);
            case AngleFamily::point: return wrap(mu);
            case AngleFamily::wrapped_normal: break;
        }
        return wrap(stream.normal(mu, sd));
    }

    /// Reduces an angle to [-pi, pi).
    [[nodiscard]] static double wrap(double theta) {
        const double r = std::remainder(theta, kTwoPi);
        return r >= kPi ? r - kTwoPi : r;
    }

    /// h(Theta) in nats; -inf for a point mass.
    [[nodiscard]] double entropy() const {
        switch (family) {
            case AngleFamily::uniform: return std::log(kTwoPi);
            case AngleFamily::point: return -std::numeric_limits<double>::infinity();
            case AngleFamily::wrapped_normal: break;
        }
        // Centred at mu the density peaks at 0 and is smooth on [-pi, pi].
        const AngleLaw centred{family, 0.0, sd};
        auto integrand = [&](double t) {
            const double p = centred.density(t);
            return p > 0.0 ? -p * std::log(p) : 0.0;
        };
        const double w = std::min(kPi, 12.0 * sd);
        double h = quadrature::integrate(integrand, -w, w);
        if (w < kPi) {
            h += quadrature::integrate(integrand, w, kPi);
            h += quadrature::integrate(integrand, -kPi, -w);
        }
        return h;
    }

    /// E[g(Theta)] against the density, splitting [-pi, pi) at the given
    /// points where g may be singular (tanh-sinh handles integrable log
    /// singularities at interval ends).
    template <class G>
    [[nodiscard]] double expect(G&& g, std::vector<double> singular = {}) const {
        require(has_density(), "angle law: expectation needs a density");
        singular.push_back(-kPi);
        singular.push_back(kPi);
        if (family == AngleFamily::wrapped_normal) {
            for (double k : {-8.0, -2.0, 0.0, 2.0, 8.0})
                if (k * sd < kPi) singular.push_back(wrap(mu + k * sd));
        }
        for (auto& s : singular) s = std::clamp(s, -kPi, kPi);
        std::sort(singular.begin(), singular.end());
        singular.erase(std::unique(singular.begin(), singular.end(),
                                   [](double a, double b) { return b - a < 1e-13; }),
                       singular.end());
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < singular.size(); ++i) {
            acc += quadrature::integrate_singular([&](double t) { return g(t) * density(t); }, singular[i],
                                                  singular[i + 1], 1e-10);
        }
        return acc;
    }
};

}  // namespace csitlab
