#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/distributions/rayleigh.hpp>
#include <boost/math/distributions/non_central_chi_squared.hpp>
#include <boost/math/special_functions/expint.hpp>

#include "csitlab/channel_model.hpp"

namespace csitlab {
namespace {

// |mean + N(0, eps^2 I)| is Rice(|mean|, eps); (R/eps)^2 is noncentral chi-squared
// with 2 degrees of freedom and noncentrality (|mean|/eps)^2.
struct RiceLaw {
    double nu;
    double eps;
    boost::math::non_central_chi_squared_distribution<> chi2{2.0, (nu / eps) * (nu / eps)};

    double cdf(double r) const { return boost::math::cdf(chi2, r * r / (eps * eps)); }
    double pdf(double r) const { return boost::math::pdf(chi2, r * r / (eps * eps)) * 2.0 * r / (eps * eps); }
};

// Kolmogorov-Smirnov statistic of a sample against a continuous CDF.
template <class Cdf>
double ks_statistic(std::vector<double> xs, Cdf cdf) {
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = cdf(xs[i]);
        d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
    }
    return d;
}

double two_sample_ks(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
    }
    return d;
}

TEST(FadingModel, RejectsInvalidParameters) {
    EXPECT_THROW((void)FadingModel::gaussian_iid(1.0, 0.0), precondition_error);
    EXPECT_THROW((void)FadingModel::gaussian_iid(1.0, -0.1), precondition_error);
    EXPECT_THROW((void)FadingModel::gaussian_iid(-1.0, 0.1), precondition_error);
    EXPECT_THROW((void)FadingModel::ring_phase(0.0, 0.1), precondition_error);
    EXPECT_THROW((void)FadingModel::ring_phase(1.0, std::nan("")), precondition_error);
    EXPECT_NO_THROW((void)FadingModel::gaussian_iid(0.0, 0.1));
}

TEST(RealizeFading, GaussianSecondMomentsMatchClosedForm) {
    const auto model = FadingModel::gaussian_iid(1.0, 0.1);
    RandomStream stream(11);
    const std::size_t n = 100000;
    std::vector<double> hat_sq(n), err_sq(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto d = realize_fading(model, stream);
        ASSERT_TRUE(d.hat.finite() && d.err.finite());
        hat_sq[i] = norm_sq(d.hat);
        err_sq[i] = norm_sq(d.err);
    }
    const auto h = mean_and_se(hat_sq);
    const auto e = mean_and_se(err_sq);
    EXPECT_NEAR(h.mean, 2.0, 3.0 * h.std_error);
    EXPECT_NEAR(e.mean, 0.02, 3.0 * e.std_error);
}

TEST(RealizeFading, ZeroEstimateScaleGivesZeroEstimate) {
    const auto model = FadingModel::gaussian_iid(0.0, 0.3);
    RandomStream stream(3);
    for (int i = 0; i < 1000; ++i) {
        const auto d = realize_fading(model, stream);
        EXPECT_EQ(d.hat, (Vec2{0.0, 0.0}));
        EXPECT_EQ(d.realized(), d.err);
    }
}

TEST(RealizeFading, RingEstimateHasExactRadius) {
    const auto model = FadingModel::ring_phase(1.0, 1e-6);
    RandomStream stream(5);
    for (int i = 0; i < 10000; ++i) EXPECT_NEAR(norm(realize_fading(model, stream).hat), 1.0, 1e-15);
}

TEST(RealizeFading, DeterministicForEqualSeeds) {
    const auto model = FadingModel::ring_phase(1.5, 0.2);
    RandomStream a(99), b(99);
    for (int i = 0; i < 1000; ++i) {
        const auto da = realize_fading(model, a);
        const auto db = realize_fading(model, b);
        EXPECT_EQ(da.hat, db.hat);
        EXPECT_EQ(da.err, db.err);
    }
    RandomStream c(99);
    EXPECT_EQ(c.split(4).normal(), RandomStream(99).split(4).normal());
    EXPECT_NE(c.split(4).normal(), c.split(5).normal());
}

// hat + err must follow the composite law A.
TEST(RealizeFading, CompositeLawGaussian) {
    const auto model = FadingModel::gaussian_iid(1.0, 0.5);
    const double scale = std::sqrt(1.25);
    const std::size_t n = 100000;
    RandomStream s1(21), s2(22);
    std::vector<double> built_c1(n), direct_c1(n), built_r(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = realize_fading(model, s1).realized();
        built_c1[i] = a.c1;
        built_r[i] = norm(a);
        direct_c1[i] = s2.normal(0.0, scale);
    }
    // Critical values at alpha = 0.001.
    EXPECT_LT(two_sample_ks(built_c1, direct_c1), 1.95 * std::sqrt(2.0 / n));
    const boost::math::rayleigh_distribution<> rayleigh(scale);
    EXPECT_LT(ks_statistic(built_r, [&](double r) { return cdf(rayleigh, r); }), 1.95 / std::sqrt(n));
}

TEST(RealizeFading, CompositeLawRingPhase) {
    const auto model = FadingModel::ring_phase(1.0, 0.3);
    const std::size_t n = 100000;
    RandomStream stream(23);
    std::vector<double> radii(n), phases(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = realize_fading(model, stream).realized();
        radii[i] = norm(a);
        phases[i] = angle_of(a);
    }
    const RiceLaw rice{1.0, 0.3};
    EXPECT_LT(ks_statistic(radii, [&](double r) { return rice.cdf(r); }), 1.95 / std::sqrt(n));
    EXPECT_LT(ks_statistic(phases, [](double t) { return (t + kPi) / kTwoPi; }), 1.95 / std::sqrt(n));
}

TEST(Receive, ZeroInputIsPureNoise) {
    RandomStream stream(8);
    const double sigma = 0.7;
    const std::size_t n = 100000;
    std::vector<double> y(n);
    for (auto& v : y) v = receive({0.0, 0.0}, {3.0, -1.0}, sigma, stream);
    const auto m = mean_and_se(y);
    double ss = 0.0;
    for (double v : y) ss += (v - m.mean) * (v - m.mean);
    const double var = ss / (n - 1);
    const double var_se = sigma * sigma * std::sqrt(2.0 / (n - 1));
    EXPECT_NEAR(var, sigma * sigma, 3.0 * var_se);
}

TEST(Receive, NoiselessInnerProductAndOrthogonality) {
    RandomStream stream(9);
    EXPECT_NEAR(receive({1.0, 0.0}, {2.0, 5.0}, 1e-12, stream), 2.0, 1e-9);

    const std::size_t n = 100000;
    std::vector<double> y(n);
    for (auto& v : y) v = receive({1.0, 1.0}, {1.0, -1.0}, 0.5, stream);
    const auto m = mean_and_se(y);
    EXPECT_NEAR(m.mean, 0.0, 3.0 * m.std_error);
    EXPECT_NEAR(m.std_error * std::sqrt(static_cast<double>(n)), 0.5, 0.01);

    EXPECT_THROW((void)receive({1.0, 0.0}, {1.0, 0.0}, 0.0, stream), precondition_error);
}

TEST(ModelMoments, GaussianClosedForms) {
    RandomStream stream(1);
    const auto m = model_moments(FadingModel::gaussian_iid(1.0, 0.1), stream);
    EXPECT_NEAR(m.second_moment, 2.02, 1e-12);
    EXPECT_NEAR(m.err_cond_entropy, std::log(2.0 * kPi * kE * 0.01), 1e-12);
    EXPECT_NEAR(m.err_cond_entropy, -1.7672931195787459, 1e-12);
    // Frozen from an independent mpmath quadrature at 30 digits.
    EXPECT_NEAR(m.log_plus_norm, 0.282911881798034, 1e-9);
    EXPECT_NEAR(m.log_plus_inv_norm, 0.219970958542244, 1e-9);
    EXPECT_EQ(m.log_plus_norm_se, 0.0);

    EXPECT_NEAR(model_moments(FadingModel::gaussian_iid(1.0, 1.0), stream).second_moment, 4.0, 1e-12);
}

// E[log+ R] = E1(1/(2 sigma^2)) / 2 and E[ln R] = (ln(2 sigma^2) - gamma_E) / 2 for Rayleigh R.
TEST(ModelMoments, RayleighQuadratureMatchesExponentialIntegral) {
    for (double v : {0.05, 0.3, 1.0, 2.0, 9.0}) {
        const auto lp = rayleigh_log_plus_moments(v);
        const double e1 = boost::math::expint(1, 1.0 / (2.0 * v));
        const double e_log = 0.5 * (std::log(2.0 * v) - kEulerGamma);
        EXPECT_NEAR(lp.log_plus, 0.5 * e1, 1e-9) << v;
        EXPECT_NEAR(lp.log_plus_inv, 0.5 * e1 - e_log, 1e-9) << v;
    }
}

TEST(ModelMoments, LogPlusInvMatchesMonteCarlo) {
    RandomStream stream(2024);
    const auto model = FadingModel::gaussian_iid(1.0, 0.1);
    const auto m = model_moments(model, stream);
    const std::size_t n = 1000000;
    std::vector<double> lpi(n);
    for (auto& v : lpi) v = log_plus(1.0 / norm(realize_fading(model, stream).realized()));
    const auto mc = mean_and_se(lpi);
    EXPECT_NEAR(m.log_plus_inv_norm, mc.mean, 3.0 * mc.std_error);
}

TEST(ModelMoments, RingPhaseMonteCarloMatchesRiceQuadrature) {
    const auto model = FadingModel::ring_phase(1.0, 0.1);
    RandomStream stream(77);
    const auto m = model_moments(model, stream);
    EXPECT_NEAR(m.second_moment, 1.02, 1e-12);
    const RiceLaw rice{1.0, 0.1};
    const double lp = quadrature::integrate([&](double r) { return std::log(r) * rice.pdf(r); }, 1.0, 3.0);
    const double lpi = quadrature::integrate([&](double r) { return -std::log(r) * rice.pdf(r); }, 0.2, 1.0);
    EXPECT_GT(m.log_plus_norm_se, 0.0);
    EXPECT_NEAR(m.log_plus_norm, lp, 3.0 * m.log_plus_norm_se);
    EXPECT_NEAR(m.log_plus_inv_norm, lpi, 3.0 * m.log_plus_inv_norm_se);
    EXPECT_THROW((void)model_moments(model, stream, 100), precondition_error);
}

TEST(ModelMoments, FiniteForConstructibleModels) {
    RandomStream params(31);
    for (int trial = 0; trial < 20; ++trial) {
        const double scale = params.uniform(0.0, 3.0);
        const double eps = std::exp(params.uniform(std::log(1e-3), std::log(2.0)));
        const auto model = trial % 2 == 0 ? FadingModel::gaussian_iid(scale, eps)
                                          : FadingModel::ring_phase(scale + 0.01, eps);
        RandomStream stream(trial);
        const auto m = model_moments(model, stream, 20000);
        EXPECT_TRUE(std::isfinite(m.second_moment) && std::isfinite(m.log_plus_norm) &&
                    std::isfinite(m.log_plus_inv_norm) && std::isfinite(m.err_cond_entropy))
            << to_string(model.family()) << " scale=" << scale << " eps=" << eps;
        EXPECT_GE(m.log_plus_norm, 0.0);
        EXPECT_GE(m.log_plus_inv_norm, 0.0);
    }
}

TEST(ModelMoments, DeterministicForEqualSeeds) {
    const auto model = FadingModel::ring_phase(0.8, 0.4);
    RandomStream a(5), b(5);
    const auto ma = model_moments(model, a);
    const auto mb = model_moments(model, b);
    EXPECT_EQ(ma.log_plus_norm, mb.log_plus_norm);
    EXPECT_EQ(ma.log_plus_inv_norm, mb.log_plus_inv_norm);
}

}  // namespace
}  // namespace csitlab
