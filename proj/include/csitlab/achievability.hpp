#pragma once

// Monte-Carlo achievable sum rates of baseline schemes: zero-forcing from
// estimated or true channels, single-user beamforming and the
// receiver-cooperation benchmark. Real channel, Gaussian signalling,
// interference treated as noise; rates in nats per channel use.

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "csitlab/channel_model.hpp"
#include "csitlab/core.hpp"

namespace csitlab {

enum class SchemeTag { zf_imperfect, zf_perfect, single_user, cooperative };

[[nodiscard]] inline std::string to_string(SchemeTag t) {
    switch (t) {
        case SchemeTag::zf_imperfect: return "zf-imperfect";
        case SchemeTag::zf_perfect: return "zf-perfect";
        case SchemeTag::single_user: return "single-user";
        case SchemeTag::cooperative: return "cooperative";
    }
    return "unknown";
}

[[nodiscard]] inline SchemeTag parse_scheme_tag(const std::string& s) {
    for (auto t : {SchemeTag::zf_imperfect, SchemeTag::zf_perfect, SchemeTag::single_user, SchemeTag::cooperative})
        if (to_string(t) == s) return t;
    throw precondition_error("unknown scheme '" + s + "' (expected zf-imperfect, zf-perfect, single-user or cooperative)");
}

struct Scheme {
    SchemeTag tag = SchemeTag::zf_imperfect;
    /// Fraction of the power given to Terminal Y; single-user ignores it.
    double power_split = 0.5;

    void validate() const {
        require(power_split >= 0.0 && power_split <= 1.0, "scheme: power_split must be in [0, 1]");
    }
};

struct SimResult {
    double snr = 0.0;
    double rate_y = 0.0;
    double rate_z = 0.0;
    double sum_rate = 0.0;
    std::size_t n_mc = 0;
    double std_error = 0.0;
    /// Fraction of draws skipped for degenerate zero-forcing geometry.
    double skipped_fraction = 0.0;
};

inline constexpr double kCollinearSine = 1e-6;
inline constexpr double kMaxSkippedFraction = 0.05;
inline constexpr std::size_t kMinSimDraws = 10000;
inline constexpr std::size_t kDefaultSimChunk = 4096;

/// Unit vectors w_y orthogonal to h_hat with a_hat^T w_y >= 0, and w_z
/// orthogonal to a_hat with h_hat^T w_z >= 0.
[[nodiscard]] inline std::pair<Vec2, Vec2> zf_precoders(Vec2 a_hat, Vec2 h_hat) {
    const double na = norm(a_hat);
    const double nh = norm(h_hat);
    if (!(na > 0.0 && nh > 0.0)) throw geometry_error("zf_precoders: zero channel estimate");
    const double sine = cross(a_hat, h_hat) / (na * nh);
    if (std::abs(sine) < kCollinearSine) {
        throw geometry_error("zf_precoders: near-collinear estimates (|sin| = " + std::to_string(std::abs(sine)) + ")");
    }
    Vec2 wy{-h_hat.c2 / nh, h_hat.c1 / nh};
    if (dot(a_hat, wy) < 0.0) wy = -1.0 * wy;
    Vec2 wz{-a_hat.c2 / na, a_hat.c1 / na};
    if (dot(h_hat, wz) < 0.0) wz = -1.0 * wz;
    return {wy, wz};
}

struct RatePair {
    double y = 0.0;
    double z = 0.0;
};

/// Per-draw rates of a scheme for fading draws a (Terminal Y) and h
/// (Terminal Z), total power and noise variance. Throws geometry_error when
/// zero-forcing or beamforming directions are undefined.
[[nodiscard]] inline RatePair instantaneous_rates(const Scheme& scheme, const FadingDraw& a, const FadingDraw& h,
                                                  double power, double noise_var) {
    const Vec2 av = a.realized();
    const Vec2 hv = h.realized();
    switch (scheme.tag) {
        case SchemeTag::zf_imperfect:
        case SchemeTag::zf_perfect: {
            const auto [wy, wz] = scheme.tag == SchemeTag::zf_imperfect ? zf_precoders(a.hat, h.hat) : zf_precoders(av, hv);
            const double py = scheme.power_split * power;
            const double pz = power - py;
            const double gy = dot(av, wy), iy = dot(av, wz);
            const double gz = dot(hv, wz), iz = dot(hv, wy);
            return {0.5 * std::log1p(gy * gy * py / (iy * iy * pz + noise_var)),
                    0.5 * std::log1p(gz * gz * pz / (iz * iz * py + noise_var))};
        }
        case SchemeTag::single_user: {
            const double n = norm(a.hat);
            if (!(n > 0.0)) throw geometry_error("single-user: zero channel estimate");
            const double g = dot(av, a.hat) / n;
            return {0.5 * std::log1p(g * g * power / noise_var), 0.0};
        }
        case SchemeTag::cooperative: {
            // det(I + c G G^T) = 1 + c (|a|^2 + |h|^2) + c^2 cross(a, h)^2.
            const double c = power / (2.0 * noise_var);
            const double x = cross(av, hv);
            const double total = 0.5 * std::log1p(c * (norm_sq(av) + norm_sq(hv)) + c * c * x * x);
            return {scheme.power_split * total, (1.0 - scheme.power_split) * total};
        }
    }
    return {};
}

/// Averages instantaneous_rates over n_mc fading draws at snr = power/noise_var.
/// Draws are generated in chunks, chunk i from stream.split(i), so results
/// depend only on (stream seed, n_mc, chunk) and not on thread count.
/// Degenerate draws are skipped; more than 5% skipped raises geometry_error.
[[nodiscard]] inline SimResult scheme_sum_rate(const Scheme& scheme, const ChannelConfig& config, double snr,
                                               std::size_t n_mc, const RandomStream& stream,
                                               std::size_t chunk = kDefaultSimChunk) {
    scheme.validate();
    config.validate();
    require(std::isfinite(snr) && snr > 0.0, "scheme_sum_rate: snr must be > 0");
    require(n_mc >= kMinSimDraws, "scheme_sum_rate: n_mc must be >= 1e4");
    require(chunk > 0, "scheme_sum_rate: chunk must be > 0");
    const double power = snr * config.noise_var;
    const std::size_t n_chunks = (n_mc + chunk - 1) / chunk;
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> ry(n_mc, nan), rz(n_mc, nan);
    parallel_for(n_chunks, [&](std::size_t ci) {
        RandomStream s = stream.split(ci);
        const std::size_t end = std::min(n_mc, (ci + 1) * chunk);
        for (std::size_t i = ci * chunk; i < end; ++i) {
            const FadingDraw a = realize_fading(config.model_a, s);
            const FadingDraw h = realize_fading(config.model_h, s);
            try {
                const auto r = instantaneous_rates(scheme, a, h, power, config.noise_var);
                ry[i] = r.y;
                rz[i] = r.z;
            } catch (const geometry_error&) {
            }
        }
    });
    std::vector<double> ky, kz, ks;
    ky.reserve(n_mc);
    kz.reserve(n_mc);
    ks.reserve(n_mc);
    for (std::size_t i = 0; i < n_mc; ++i) {
        if (std::isnan(ry[i])) continue;
        ky.push_back(ry[i]);
        kz.push_back(rz[i]);
        ks.push_back(ry[i] + rz[i]);
    }
    SimResult out;
    out.snr = snr;
    out.n_mc = n_mc;
    out.skipped_fraction = static_cast<double>(n_mc - ks.size()) / static_cast<double>(n_mc);
    if (out.skipped_fraction > kMaxSkippedFraction) {
        throw geometry_error("scheme_sum_rate: " + std::to_string(100.0 * out.skipped_fraction) +
                             "% of draws had degenerate geometry (limit 5%)");
    }
    out.rate_y = mean_and_se(ky).mean;
    out.rate_z = mean_and_se(kz).mean;
    const auto s = mean_and_se(ks);
    out.sum_rate = out.rate_y + out.rate_z;
    out.std_error = s.std_error;
    return out;
}

/// Rates over an snr grid. Every grid point reuses the same draws (common
/// random numbers), which keeps pre-log fits free of point-to-point noise.
[[nodiscard]] inline std::vector<SimResult> scheme_sweep(const Scheme& scheme, const ChannelConfig& config,
                                                         const std::vector<double>& snr_grid, std::size_t n_mc,
                                                         std::uint64_t seed) {
    const RandomStream stream(seed);
    std::vector<SimResult> out;
    out.reserve(snr_grid.size());
    for (double snr : snr_grid) out.push_back(scheme_sum_rate(scheme, config, snr, n_mc, stream));
    return out;
}

}  // namespace csitlab
