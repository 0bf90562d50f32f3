#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "csitlab/core.hpp"
#include "csitlab/quadrature.hpp"

namespace csitlab {

enum class FadingFamily { gaussian_iid, ring_phase };

[[nodiscard]] inline std::string to_string(FadingFamily f) {
    return f == FadingFamily::gaussian_iid ? "gaussian-iid" : "ring-phase";
}

/// Joint law of a (transmitter estimate, estimation error) fading pair.
///
/// gaussian-iid: estimate ~ N(0, s^2 I), error ~ N(0, eps^2 I), independent.
/// ring-phase:   estimate uniform on the circle of radius rho, error ~ N(0, eps^2 I).
///
/// eps > 0 is enforced at construction: it keeps the conditional error
/// entropy finite, which the sum-rate bound needs.
class FadingModel {
public:
    [[nodiscard]] static FadingModel gaussian_iid(double s, double eps) {
        require(std::isfinite(s) && s >= 0.0, "gaussian-iid: estimate std s must be finite and >= 0");
        check_eps(eps);
        return FadingModel(FadingFamily::gaussian_iid, s, eps);
    }

    [[nodiscard]] static FadingModel ring_phase(double rho, double eps) {
        require(std::isfinite(rho) && rho > 0.0, "ring-phase: radius rho must be finite and > 0");
        check_eps(eps);
        return FadingModel(FadingFamily::ring_phase, rho, eps);
    }

    [[nodiscard]] FadingFamily family() const { return family_; }
    /// s for gaussian-iid, rho for ring-phase.
    [[nodiscard]] double scale() const { return scale_; }
    [[nodiscard]] double eps() const { return eps_; }

    /// E[||A||^2] of the composite fading A = estimate + error.
    [[nodiscard]] double second_moment() const {
        return family_ == FadingFamily::gaussian_iid ? 2.0 * (scale_ * scale_ + eps_ * eps_)
                                                     : scale_ * scale_ + 2.0 * eps_ * eps_;
    }

    friend bool operator==(const FadingModel&, const FadingModel&) = default;

private:
    FadingModel(FadingFamily f, double scale, double eps) : family_(f), scale_(scale), eps_(eps) {}

    static void check_eps(double eps) {
        require(std::isfinite(eps) && eps > 0.0,
                "eps must be finite and > 0 (the estimation error needs finite differential entropy)");
    }

    FadingFamily family_;
    double scale_;
    double eps_;
};

/// Broadcast channel parameters: one fading law per receiver, noise
/// variance and average transmit power.
struct ChannelConfig {
    FadingModel model_a = FadingModel::gaussian_iid(1.0, 0.1);  // Terminal Y link
    FadingModel model_h = FadingModel::gaussian_iid(1.0, 0.1);  // Terminal Z link
    double noise_var = 1.0;
    double power = 1.0;

    void validate() const {
        require(std::isfinite(noise_var) && noise_var > 0.0, "noise_var must be > 0");
        require(std::isfinite(power) && power > 0.0, "power must be > 0");
    }
    [[nodiscard]] double snr() const { return power / noise_var; }

    friend bool operator==(const ChannelConfig&, const ChannelConfig&) = default;
};

/// One fading realization split into the transmitter-known estimate and the
/// receiver-only error.
struct FadingDraw {
    Vec2 hat;
    Vec2 err;

    [[nodiscard]] Vec2 realized() const { return hat + err; }
};

[[nodiscard]] inline FadingDraw realize_fading(const FadingModel& model, RandomStream& stream) {
    FadingDraw d;
    if (model.family() == FadingFamily::gaussian_iid) {
        if (model.scale() > 0.0) d.hat = stream.normal2(model.scale());
    } else {
        d.hat = model.scale() * unit_at(stream.uniform(-kPi, kPi));
    }
    d.err = stream.normal2(model.eps());
    return d;
}

/// Scalar channel output fading^T x + N, N ~ N(0, noise_std^2).
[[nodiscard]] inline double receive(Vec2 x, Vec2 fading, double noise_std, RandomStream& stream) {
    require(noise_std > 0.0, "receive: noise_std must be > 0");
    return dot(fading, x) + stream.normal(0.0, noise_std);
}

/// Single-letter moment functionals of a fading law, all in nats.
struct MomentSet {
    double second_moment = 0.0;      // E||A||^2
    double log_plus_norm = 0.0;      // E[log+ ||A||]
    double log_plus_inv_norm = 0.0;  // E[log+ 1/||A||]
    double err_cond_entropy = 0.0;   // h(error | estimates)
    // Zero when the log+ terms come from quadrature.
    double log_plus_norm_se = 0.0;
    double log_plus_inv_norm_se = 0.0;
};

/// E[log+ R] and E[log+ 1/R] for R Rayleigh with per-component variance
/// scale_sq, by adaptive quadrature against the Rayleigh density.
struct LogPlusPair {
    double log_plus = 0.0;
    double log_plus_inv = 0.0;
};

[[nodiscard]] inline LogPlusPair rayleigh_log_plus_moments(double scale_sq) {
    require(scale_sq > 0.0, "rayleigh_log_plus_moments: scale must be > 0");
    auto pdf = [scale_sq](double r) { return r / scale_sq * std::exp(-r * r / (2.0 * scale_sq)); };
    LogPlusPair out;
    out.log_plus = quadrature::integrate([&](double r) { return std::log(r) * pdf(r); }, 1.0,
                                         std::numeric_limits<double>::infinity());
    out.log_plus_inv = quadrature::integrate_singular(
        [&](double r) { return r > 0.0 ? -std::log(r) * pdf(r) : 0.0; }, 0.0, 1.0);
    return out;
}

inline constexpr std::size_t kDefaultMomentSamples = 100000;

[[nodiscard]] inline MomentSet model_moments(const FadingModel& model, RandomStream& stream,
                                             std::size_t n_mc = kDefaultMomentSamples) {
    MomentSet m;
    m.second_moment = model.second_moment();
    // The error is independent of both estimates: h(err | A^, H^) = h(err), a 2-D Gaussian.
    m.err_cond_entropy = std::log(2.0 * kPi * kE * model.eps() * model.eps());

    if (model.family() == FadingFamily::gaussian_iid) {
        const double s = model.scale();
        const auto lp = rayleigh_log_plus_moments(s * s + model.eps() * model.eps());
        m.log_plus_norm = lp.log_plus;
        m.log_plus_inv_norm = lp.log_plus_inv;
        return m;
    }

    require(n_mc >= 10000, "model_moments: Monte-Carlo path needs n_mc >= 1e4");
    std::vector<double> lp(n_mc), lpi(n_mc);
    for (std::size_t i = 0; i < n_mc; ++i) {
        const double r = norm(realize_fading(model, stream).realized());
        lp[i] = log_plus(r);
        lpi[i] = r > 0.0 ? log_plus(1.0 / r) : std::numeric_limits<double>::infinity();
    }
    const auto a = mean_and_se(lp);
    const auto b = mean_and_se(lpi);
    m.log_plus_norm = a.mean;
    m.log_plus_norm_se = a.std_error;
    m.log_plus_inv_norm = b.mean;
    m.log_plus_inv_norm_se = b.std_error;
    return m;
}

}  // namespace csitlab
