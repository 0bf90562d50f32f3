#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <numbers>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace csitlab {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kE = std::numbers::e;
inline constexpr double kEulerGamma = std::numbers::egamma;

/// ln(2*pi*e), the recurring constant of Gaussian entropies.
inline const double kLog2PiE = std::log(2.0 * kPi * kE);

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

/// A caller-supplied argument violates a documented precondition.
class precondition_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Sample set is too degenerate for nearest-neighbour estimation.
class degenerate_sample_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Adaptive quadrature failed to reach its tolerance.
class integration_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Zero-forcing geometry degenerated (near-collinear channel estimates).
class geometry_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline void require(bool condition, const std::string& message) {
    if (!condition) throw precondition_error(message);
}

// ---------------------------------------------------------------------------
// Vec2 / Sym2
// ---------------------------------------------------------------------------

/// A point in the real plane. Houses fading vectors and transmit symbols.
struct Vec2 {
    double c1 = 0.0;
    double c2 = 0.0;

    friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.c1 + b.c1, a.c2 + b.c2}; }
    friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.c1 - b.c1, a.c2 - b.c2}; }
    friend constexpr Vec2 operator*(double s, Vec2 v) { return {s * v.c1, s * v.c2}; }
    friend constexpr bool operator==(Vec2, Vec2) = default;

    [[nodiscard]] bool finite() const { return std::isfinite(c1) && std::isfinite(c2); }
};

[[nodiscard]] constexpr double dot(Vec2 a, Vec2 b) { return a.c1 * b.c1 + a.c2 * b.c2; }
[[nodiscard]] inline double norm(Vec2 v) { return std::hypot(v.c1, v.c2); }
[[nodiscard]] constexpr double norm_sq(Vec2 v) { return dot(v, v); }
/// z-component of the cross product; |cross(a,b)| = |a||b||sin angle|.
[[nodiscard]] constexpr double cross(Vec2 a, Vec2 b) { return a.c1 * b.c2 - a.c2 * b.c1; }
[[nodiscard]] inline double angle_of(Vec2 v) {
    // atan2 returns (-pi, pi]; fold pi onto -pi so the range is [-pi, pi).
    const double t = std::atan2(v.c2, v.c1);
    return t >= kPi ? t - kTwoPi : t;
}
[[nodiscard]] inline Vec2 unit_at(double theta) { return {std::cos(theta), std::sin(theta)}; }

/// Symmetric 2x2 matrix [[xx, xy], [xy, yy]].
struct Sym2 {
    double xx = 0.0;
    double xy = 0.0;
    double yy = 0.0;

    [[nodiscard]] static constexpr Sym2 identity(double v = 1.0) { return {v, 0.0, v}; }
    [[nodiscard]] constexpr double det() const { return xx * yy - xy * xy; }
    [[nodiscard]] constexpr double trace() const { return xx + yy; }
    [[nodiscard]] constexpr bool positive_definite() const { return xx > 0.0 && det() > 0.0; }
    [[nodiscard]] constexpr bool positive_semidefinite() const {
        return xx >= 0.0 && yy >= 0.0 && det() >= 0.0;
    }
    [[nodiscard]] constexpr double quad(Vec2 v) const {
        return xx * v.c1 * v.c1 + 2.0 * xy * v.c1 * v.c2 + yy * v.c2 * v.c2;
    }
    [[nodiscard]] double max_eigenvalue() const {
        const double half_tr = 0.5 * trace();
        return half_tr + std::sqrt(std::max(0.0, half_tr * half_tr - det()));
    }
    friend constexpr Sym2 operator+(Sym2 a, Sym2 b) { return {a.xx + b.xx, a.xy + b.xy, a.yy + b.yy}; }
};

/// Rotates/scales a covariance: M C M^T for the row-stacked matrix [r1; r2].
[[nodiscard]] constexpr Sym2 congruence(Vec2 r1, Vec2 r2, const Sym2& c) {
    const Vec2 c_r1{c.xx * r1.c1 + c.xy * r1.c2, c.xy * r1.c1 + c.yy * r1.c2};
    const Vec2 c_r2{c.xx * r2.c1 + c.xy * r2.c2, c.xy * r2.c1 + c.yy * r2.c2};
    return {dot(r1, c_r1), dot(r1, c_r2), dot(r2, c_r2)};
}

// ---------------------------------------------------------------------------
// Random streams
// ---------------------------------------------------------------------------

[[nodiscard]] constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seeded, splittable random stream. Children derived with split(i) depend
/// only on (parent seed, i), so chunked sampling is reproducible regardless
/// of execution order.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

    [[nodiscard]] std::uint64_t seed() const { return seed_; }

    [[nodiscard]] RandomStream split(std::uint64_t index) const {
        return RandomStream(splitmix64(seed_ ^ splitmix64(index + 0x632BE59BD9B4E019ULL)));
    }

    double normal(double mean = 0.0, double stddev = 1.0) {
        return std::normal_distribution<double>(mean, stddev)(engine_);
    }
    double uniform(double lo = 0.0, double hi = 1.0) {
        return std::uniform_real_distribution<double>(lo, hi)(engine_);
    }
    std::size_t index(std::size_t n) {
        return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
    }
    Vec2 normal2(double stddev) { return {normal(0.0, stddev), normal(0.0, stddev)}; }

    std::mt19937_64& engine() { return engine_; }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

// ---------------------------------------------------------------------------
// Reductions and parallel helpers
// ---------------------------------------------------------------------------

/// Pairwise (cascade) summation; order-fixed, so results are reproducible.
[[nodiscard]] inline double pairwise_sum(std::span<const double> xs) {
    if (xs.size() <= 16) {
        double s = 0.0;
        for (double x : xs) s += x;
        return s;
    }
    const std::size_t half = xs.size() / 2;
    return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

/// Sample mean and standard error of the mean.
struct MeanEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t n = 0;
};

[[nodiscard]] inline MeanEstimate mean_and_se(std::span<const double> xs) {
    MeanEstimate out;
    out.n = xs.size();
    if (xs.empty()) return out;
    out.mean = pairwise_sum(xs) / static_cast<double>(xs.size());
    if (xs.size() < 2) return out;
    std::vector<double> dev(xs.size());
    std::transform(xs.begin(), xs.end(), dev.begin(),
                   [m = out.mean](double x) { return (x - m) * (x - m); });
    const double var = pairwise_sum(dev) / static_cast<double>(xs.size() - 1);
    out.std_error = std::sqrt(var / static_cast<double>(xs.size()));
    return out;
}

/// Runs body(i) for i in [0, n). Work is striped over hardware threads; each
/// index writes only its own output slot, so results do not depend on the
/// thread count.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t workers = std::min(hw, n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::exception_ptr> failures(workers);
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t i = w; i < n; i += workers) body(i);
                } catch (...) {
                    failures[w] = std::current_exception();
                }
            });
        }
    }
    for (const auto& f : failures)
        if (f) std::rethrow_exception(f);
}

[[nodiscard]] inline double log_plus(double x) { return x > 1.0 ? std::log(x) : 0.0; }

[[nodiscard]] inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
[[nodiscard]] inline double linear_to_db(double x) { return 10.0 * std::log10(x); }

}  // namespace csitlab
