#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include <boost/math/special_functions/digamma.hpp>

#include "csitlab/core.hpp"

namespace csitlab {

enum class EntropyMethod { closed_form, knn, histogram };

[[nodiscard]] inline std::string to_string(EntropyMethod m) {
    switch (m) {
        case EntropyMethod::closed_form: return "closed-form";
        case EntropyMethod::knn: return "knn";
        case EntropyMethod::histogram: return "histogram";
    }
    return "?";
}

/// A differential entropy in nats. std_error is zero exactly for closed forms.
struct EntropyEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::size_t n_samples = 0;
    EntropyMethod method = EntropyMethod::closed_form;

    [[nodiscard]] static EntropyEstimate exact(double v) { return {v, 0.0, 0, EntropyMethod::closed_form}; }
};

// ---------------------------------------------------------------------------
// Closed-form Gaussian entropies
// ---------------------------------------------------------------------------

[[nodiscard]] inline double gaussian_entropy(double variance) {
    require(variance > 0.0 && std::isfinite(variance), "gaussian_entropy: variance must be > 0");
    return 0.5 * std::log(2.0 * kPi * kE * variance);
}

[[nodiscard]] inline double gaussian_entropy(const Sym2& covariance) {
    require(covariance.positive_definite(), "gaussian_entropy: covariance must be positive definite");
    return 0.5 * std::log((2.0 * kPi * kE) * (2.0 * kPi * kE) * covariance.det());
}

/// ½ ln((2πe)^dim det C) for a row-major dim x dim covariance, dim in {1, 2}.
[[nodiscard]] inline double gaussian_entropy(int dim, std::span<const double> covariance) {
    require(dim == 1 || dim == 2, "gaussian_entropy: dim must be 1 or 2");
    require(covariance.size() == static_cast<std::size_t>(dim * dim),
            "gaussian_entropy: covariance size does not match dim");
    if (dim == 1) return gaussian_entropy(covariance[0]);
    require(covariance[1] == covariance[2], "gaussian_entropy: covariance must be symmetric");
    return gaussian_entropy(Sym2{covariance[0], covariance[1], covariance[3]});
}

// ---------------------------------------------------------------------------
// Nearest-neighbour (Kozachenko-Leonenko) estimation
// ---------------------------------------------------------------------------

struct KnnOptions {
    int k = 4;
    /// Number of half-sample resamples for the standard error.
    int resamples = 32;
    std::uint64_t seed = 0x4B4E4E5EEDULL;
};

inline constexpr std::size_t kMinKnnSamples = 1000;

namespace detail {

/// Sum of ln(k-th neighbour distance) and the number of zero distances.
struct LogDistanceSum {
    double sum = 0.0;
    std::size_t zeros = 0;
    std::size_t n = 0;
};

inline LogDistanceSum knn_log_distances(std::span<const double> samples, int k) {
    std::vector<double> x(samples.begin(), samples.end());
    std::sort(x.begin(), x.end());
    const std::size_t n = x.size();
    std::vector<double> terms;
    terms.reserve(n);
    LogDistanceSum out;
    out.n = n;
    for (std::size_t i = 0; i < n; ++i) {
        // Merge the left and right neighbour runs until k neighbours are taken.
        std::size_t left = i, right = i;
        double dist = 0.0;
        for (int taken = 0; taken < k; ++taken) {
            const double dl = left > 0 ? x[i] - x[left - 1] : std::numeric_limits<double>::infinity();
            const double dr = right + 1 < n ? x[right + 1] - x[i] : std::numeric_limits<double>::infinity();
            if (dl <= dr) {
                dist = dl;
                --left;
            } else {
                dist = dr;
                ++right;
            }
        }
        if (dist > 0.0) {
            terms.push_back(std::log(dist));
        } else {
            ++out.zeros;
        }
    }
    out.sum = pairwise_sum(terms);
    return out;
}

/// Static 2-d tree over a point set, used for k-th neighbour distances.
class KdTree2 {
public:
    explicit KdTree2(std::span<const Vec2> points) : points_(points.begin(), points.end()), order_(points.size()) {
        std::iota(order_.begin(), order_.end(), std::size_t{0});
        build(0, order_.size(), 0);
    }

    /// Squared distance from points[query] to its k-th nearest other point.
    [[nodiscard]] double kth_distance_sq(std::size_t query, int k) const {
        std::array<double, 64> best{};
        require(k >= 1 && k <= 64, "knn: k must be in [1, 64]");
        std::fill(best.begin(), best.begin() + k, std::numeric_limits<double>::infinity());
        search(0, order_.size(), 0, query, k, best);
        return best[static_cast<std::size_t>(k - 1)];
    }

private:
    static constexpr std::size_t kLeaf = 8;

    static double coord(Vec2 p, int axis) { return axis == 0 ? p.c1 : p.c2; }

    void build(std::size_t lo, std::size_t hi, int depth) {
        if (hi - lo <= kLeaf) return;
        const std::size_t mid = lo + (hi - lo) / 2;
        const int axis = depth % 2;
        std::nth_element(order_.begin() + static_cast<std::ptrdiff_t>(lo),
                         order_.begin() + static_cast<std::ptrdiff_t>(mid),
                         order_.begin() + static_cast<std::ptrdiff_t>(hi),
                         [&](std::size_t a, std::size_t b) {
                             return coord(points_[a], axis) < coord(points_[b], axis);
                         });
        build(lo, mid, depth + 1);
        build(mid + 1, hi, depth + 1);
    }

    void offer(std::size_t candidate, std::size_t query, int k, std::array<double, 64>& best) const {
        if (candidate == query) return;
        const double d = norm_sq(points_[candidate] - points_[query]);
        auto kk = static_cast<std::size_t>(k);
        if (d >= best[kk - 1]) return;
        std::size_t pos = kk - 1;
        while (pos > 0 && best[pos - 1] > d) {
            best[pos] = best[pos - 1];
            --pos;
        }
        best[pos] = d;
    }

    void search(std::size_t lo, std::size_t hi, int depth, std::size_t query, int k,
                std::array<double, 64>& best) const {
        if (hi - lo <= kLeaf) {
            for (std::size_t i = lo; i < hi; ++i) offer(order_[i], query, k, best);
            return;
        }
        const std::size_t mid = lo + (hi - lo) / 2;
        const int axis = depth % 2;
        offer(order_[mid], query, k, best);
        const double diff = coord(points_[query], axis) - coord(points_[order_[mid]], axis);
        const bool go_left_first = diff < 0.0;
        if (go_left_first) {
            search(lo, mid, depth + 1, query, k, best);
            if (diff * diff < best[static_cast<std::size_t>(k - 1)]) search(mid + 1, hi, depth + 1, query, k, best);
        } else {
            search(mid + 1, hi, depth + 1, query, k, best);
            if (diff * diff < best[static_cast<std::size_t>(k - 1)]) search(lo, mid, depth + 1, query, k, best);
        }
    }

    std::vector<Vec2> points_;
    std::vector<std::size_t> order_;
};

inline LogDistanceSum knn_log_distances(std::span<const Vec2> samples, int k) {
    const KdTree2 tree(samples);
    std::vector<double> terms;
    terms.reserve(samples.size());
    LogDistanceSum out;
    out.n = samples.size();
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double d2 = tree.kth_distance_sq(i, k);
        if (d2 > 0.0) {
            terms.push_back(0.5 * std::log(d2));
        } else {
            ++out.zeros;
        }
    }
    out.sum = pairwise_sum(terms);
    return out;
}

template <class T>
constexpr int dimension_of() {
    if constexpr (std::is_same_v<T, Vec2>) {
        return 2;
    } else {
        return 1;
    }
}

/// Kozachenko-Leonenko point estimate:
///   h = psi(N) - psi(k) + ln V_d + (d / N) sum ln rho_k(i),
/// with V_1 = 2 and V_2 = pi the unit-ball volumes.
template <class T>
double kl_estimate(std::span<const T> samples, int k) {
    constexpr int d = dimension_of<T>();
    const auto s = knn_log_distances(samples, k);
    if (static_cast<double>(s.zeros) > 0.01 * static_cast<double>(s.n)) {
        throw degenerate_sample_error("knn entropy: " + std::to_string(s.zeros) + " of " + std::to_string(s.n) +
                                      " points have a zero nearest-neighbour distance");
    }
    const std::size_t used = s.n - s.zeros;
    const double log_unit_ball = d == 1 ? std::log(2.0) : std::log(kPi);
    using boost::math::digamma;
    return digamma(static_cast<double>(used)) - digamma(static_cast<double>(k)) + log_unit_ball +
           d * s.sum / static_cast<double>(used);
}

template <class T>
EntropyEstimate knn_with_resampling(std::span<const T> samples, const KnnOptions& opt) {
    require(samples.size() >= kMinKnnSamples, "knn entropy: needs at least 1000 samples");
    require(opt.k >= 1, "knn entropy: k must be >= 1");
    require(opt.resamples >= 2, "knn entropy: needs at least 2 resamples");

    EntropyEstimate out;
    out.method = EntropyMethod::knn;
    out.n_samples = samples.size();
    out.value = kl_estimate(samples, opt.k);

    // Half-sampling without replacement: for a statistic with variance ~ 1/n,
    // the spread of size-n/2 subsample estimates around their mean matches the
    // standard error of the full-sample estimate. Resampling with replacement
    // is unusable here because duplicated points have zero neighbour distance.
    const std::size_t n = samples.size();
    const std::size_t half = n / 2;
    const RandomStream root(opt.seed);
    std::vector<double> estimates(static_cast<std::size_t>(opt.resamples));
    parallel_for(estimates.size(), [&](std::size_t r) {
        RandomStream stream = root.split(r);
        std::vector<std::size_t> idx(n);
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        for (std::size_t i = 0; i < half; ++i) std::swap(idx[i], idx[i + stream.index(n - i)]);
        std::vector<T> sub(half);
        for (std::size_t i = 0; i < half; ++i) sub[i] = samples[idx[i]];
        estimates[r] = kl_estimate(std::span<const T>(sub), opt.k);
    });
    const double mean = pairwise_sum(estimates) / static_cast<double>(estimates.size());
    double ss = 0.0;
    for (double e : estimates) ss += (e - mean) * (e - mean);
    out.std_error = std::sqrt(ss / static_cast<double>(estimates.size() - 1));
    return out;
}

}  // namespace detail

/// Nearest-neighbour differential entropy of scalar samples, in nats.
[[nodiscard]] inline EntropyEstimate estimate_entropy_knn(std::span<const double> samples,
                                                          const KnnOptions& opt = {}) {
    return detail::knn_with_resampling(samples, opt);
}

/// Nearest-neighbour differential entropy of planar samples, in nats.
[[nodiscard]] inline EntropyEstimate estimate_entropy_knn(std::span<const Vec2> samples,
                                                          const KnnOptions& opt = {}) {
    return detail::knn_with_resampling(samples, opt);
}

/// Plug-in histogram entropy of scalar samples. Kept as a cross-check for the
/// nearest-neighbour estimator; bins = ceil(sqrt(n)) when not given.
[[nodiscard]] inline EntropyEstimate estimate_entropy_histogram(std::span<const double> samples,
                                                                std::size_t bins = 0) {
    require(samples.size() >= kMinKnnSamples, "histogram entropy: needs at least 1000 samples");
    const auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end());
    const double lo = *lo_it;
    const double hi = *hi_it;
    require(hi > lo, "histogram entropy: samples are all identical");
    const std::size_t n = samples.size();
    if (bins == 0) bins = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
    const double width = (hi - lo) / static_cast<double>(bins);
    std::vector<std::size_t> counts(bins, 0);
    for (double x : samples) {
        auto b = static_cast<std::size_t>((x - lo) / width);
        ++counts[std::min(b, bins - 1)];
    }
    // -ln(density) per occupied bin; the estimate is its sample mean and the
    // delta-method standard error is its sample standard deviation / sqrt(n).
    double mean = 0.0, second = 0.0;
    for (std::size_t c : counts) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / static_cast<double>(n);
        const double term = -std::log(p / width);
        mean += p * term;
        second += p * term * term;
    }
    EntropyEstimate out;
    out.method = EntropyMethod::histogram;
    out.n_samples = n;
    out.value = mean;
    out.std_error = std::sqrt(std::max(0.0, second - mean * mean) / static_cast<double>(n));
    return out;
}

// ---------------------------------------------------------------------------
// log+ moments
// ---------------------------------------------------------------------------

struct LogPlusMoments {
    double log_plus = 0.0;      // mean of log+(x)
    double log_plus_inv = 0.0;  // mean of log+(1/x); +inf when any sample is 0
    double log_plus_se = 0.0;
    double log_plus_inv_se = 0.0;
    bool infinite = false;      // a sample was exactly zero
};

[[nodiscard]] inline LogPlusMoments estimate_log_plus_moments(std::span<const double> samples) {
    require(!samples.empty(), "log+ moments: empty sample set");
    std::vector<double> lp(samples.size()), lpi(samples.size());
    LogPlusMoments out;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double x = samples[i];
        require(x >= 0.0, "log+ moments: samples must be nonnegative");
        lp[i] = log_plus(x);
        if (x == 0.0) {
            out.infinite = true;
            lpi[i] = 0.0;
        } else {
            lpi[i] = log_plus(1.0 / x);
        }
    }
    const auto a = mean_and_se(lp);
    const auto b = mean_and_se(lpi);
    out.log_plus = a.mean;
    out.log_plus_se = a.std_error;
    out.log_plus_inv = out.infinite ? std::numeric_limits<double>::infinity() : b.mean;
    out.log_plus_inv_se = out.infinite ? 0.0 : b.std_error;
    return out;
}

// ---------------------------------------------------------------------------
// Polar decomposition
// ---------------------------------------------------------------------------

/// Entropies of a planar vector W and of its magnitude R and phase Theta.
/// Since h(Theta) = h(W) - h(R|Theta) - E[ln R] and conditioning cannot
/// increase entropy, lemma3_gap = h(Theta) - (h(W) - h(R) - E[ln R]) >= 0,
/// with equality iff R and Theta are independent.
///
/// When R is a point mass (samples on a ring) h(R) and h(W) are -inf, the gap
/// is undefined (NaN) and only h_theta and e_log_r carry information.
struct PolarEntropyReport {
    EntropyEstimate h_w;
    EntropyEstimate h_r;
    EntropyEstimate h_theta;
    double e_log_r = 0.0;
    double e_log_r_se = 0.0;
    double lemma3_gap = 0.0;
    double combined_se = 0.0;
    bool degenerate_radius = false;
};

inline constexpr std::size_t kMinPolarSamples = 10000;

[[nodiscard]] inline PolarEntropyReport polar_stats(std::span<const Vec2> samples, const KnnOptions& opt = {}) {
    require(samples.size() >= kMinPolarSamples, "polar_stats: needs at least 1e4 samples");
    std::vector<double> radii(samples.size()), phases(samples.size()), log_r(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double r = norm(samples[i]);
        require(r > 0.0, "polar_stats: sample at the origin has no phase");
        radii[i] = r;
        phases[i] = angle_of(samples[i]);
        log_r[i] = std::log(r);
    }
    PolarEntropyReport rep;
    rep.h_theta = estimate_entropy_knn(std::span<const double>(phases), opt);
    const auto lr = mean_and_se(log_r);
    rep.e_log_r = lr.mean;
    rep.e_log_r_se = lr.std_error;
    try {
        rep.h_r = estimate_entropy_knn(std::span<const double>(radii), opt);
    } catch (const degenerate_sample_error&) {
        constexpr double minus_inf = -std::numeric_limits<double>::infinity();
        rep.degenerate_radius = true;
        rep.h_r = {minus_inf, 0.0, samples.size(), EntropyMethod::knn};
        rep.h_w = rep.h_r;
        rep.lemma3_gap = std::numeric_limits<double>::quiet_NaN();
        rep.combined_se = std::hypot(rep.h_theta.std_error, lr.std_error);
        return rep;
    }
    rep.h_w = estimate_entropy_knn(samples, opt);
    rep.lemma3_gap = rep.h_theta.value - (rep.h_w.value - rep.h_r.value - rep.e_log_r);
    rep.combined_se = std::sqrt(rep.h_w.std_error * rep.h_w.std_error + rep.h_r.std_error * rep.h_r.std_error +
                                rep.h_theta.std_error * rep.h_theta.std_error + lr.std_error * lr.std_error);
    return rep;
}

}  // namespace csitlab
