#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "csitlab/entropy.hpp"
#include "csitlab/maxent.hpp"

namespace csitlab {
namespace {

// Reference values computed independently with mpmath (root finding on the two
// integral constraints, 30 significant digits).
constexpr double kAlphaAt2 = 0.696833553887042;
constexpr double kCAt2 = 0.091909894048761;
constexpr double kHAt2 = 0.993279486610314;
constexpr double kHAt5 = -1.381188154896670;
constexpr double kAlphaAt10 = 0.915346950269936;
constexpr double kHAt10 = -5.824519128081245;
constexpr double kHAt20 = -15.213828162700269;
constexpr double kHAt40 = -34.567069788373388;
constexpr double kMHalf = 13.25481656685325;

TEST(SolveMaxent, UniformAtLowerEdge) {
    const auto s = solve_maxent(1.0 / kPi);
    EXPECT_EQ(s.alpha, 0.0);
    EXPECT_NEAR(s.c, 1.0 / kTwoPi, 1e-15);
    EXPECT_NEAR(s.h_max, 1.8378770664093455, 1e-12);
}

TEST(SolveMaxent, MatchesReferenceSolutions) {
    auto s = solve_maxent(2.0);
    EXPECT_NEAR(s.alpha, kAlphaAt2, 1e-10);
    EXPECT_NEAR(s.c, kCAt2, 1e-10);
    EXPECT_NEAR(s.h_max, kHAt2, 1e-10);
    s = solve_maxent(10.0);
    EXPECT_NEAR(s.alpha, kAlphaAt10, 1e-10);
    EXPECT_NEAR(s.h_max, kHAt10, 1e-9);
    EXPECT_NEAR(hmax(5.0), kHAt5, 1e-9);
    EXPECT_NEAR(hmax(20.0), kHAt20, 1e-9);
    EXPECT_NEAR(hmax(40.0), kHAt40, 1e-9);
}

// u = 1/(1-alpha) solves u^2 - gamma u - gamma (pi - 1) = 0.
TEST(SolveMaxent, AgreesWithQuadraticReduction) {
    for (double g : {0.4, 1.0, 2.0, 7.5, 30.0, 200.0}) {
        const double u = 0.5 * (g + std::sqrt(g * g + 4.0 * g * (kPi - 1.0)));
        const auto s = solve_maxent(g);
        EXPECT_NEAR(s.alpha, 1.0 - 1.0 / u, 1e-10) << g;
        EXPECT_NEAR(s.c, 1.0 / (2.0 * (u + kPi - 1.0)), 1e-12) << g;
    }
}

TEST(SolveMaxent, ResidualsBelowTolerance) {
    for (double g = 1.0 / kPi; g < 100.0; g *= 1.7) {
        const auto s = solve_maxent(g);
        EXPECT_LE(s.normalization_residual, 1e-9) << g;
        EXPECT_LE(s.constraint_residual, 1e-9) << g;
        EXPECT_LE(s.entropy_residual, 1e-9) << g;
        EXPECT_GE(s.alpha, 0.0);
        EXPECT_LT(s.alpha, 1.0);
    }
}

TEST(SolveMaxent, DensityIntegratesToOneOnTheAngleInterval) {
    const auto s = solve_maxent(3.0);
    const double outer = quadrature::integrate([&](double t) { return s.density(t); }, 1.0, kPi);
    const double inner = quadrature::integrate_singular([&](double t) { return s.density(t); }, 0.0, 1.0);
    EXPECT_NEAR(2.0 * (inner + outer), 1.0, 1e-9);
    EXPECT_EQ(s.density(3.5), 0.0);
}

TEST(SolveMaxent, RejectsOutOfFamily) {
    EXPECT_THROW((void)solve_maxent(0.1), precondition_error);
    EXPECT_THROW((void)hmax(0.3), precondition_error);
    EXPECT_THROW((void)solve_maxent(std::nan("")), precondition_error);
}

TEST(Hmax, StrictlyDecreasing) {
    EXPECT_LT(hmax(10.0), hmax(5.0));
    EXPECT_LT(hmax(5.0), hmax(1.0));
    double prev = hmax(1.0 / kPi);
    for (double g = 0.35; g < 60.0; g *= 1.3) {
        const double h = hmax(g);
        EXPECT_LT(h, prev) << g;
        prev = h;
    }
}

TEST(Hmax, AsymptoteValuesAndConvergence) {
    EXPECT_NEAR(hmax_asymptote(10.0), -6.004267726446009, 1e-12);
    EXPECT_NEAR(hmax_asymptote(kE), -(kE - 1.0 - std::log(2.0 * kE)), 1e-15);
    EXPECT_NEAR(hmax_asymptote(kE), -0.02513, 1e-5);
    EXPECT_NEAR(hmax(40.0), hmax_asymptote(40.0), 0.1);
    const double g10 = std::abs(hmax(10.0) - hmax_asymptote(10.0));
    const double g20 = std::abs(hmax(20.0) - hmax_asymptote(20.0));
    const double g40 = std::abs(hmax(40.0) - hmax_asymptote(40.0));
    EXPECT_GT(g10, g20);
    EXPECT_GT(g20, g40);
    EXPECT_NEAR(g40, 0.050904, 1e-6);
    EXPECT_THROW((void)hmax_asymptote(0.0), precondition_error);
}

TEST(SampleMaxent, KnnEntropyMatchesHmax) {
    const auto s = solve_maxent(2.0);
    RandomStream stream(31);
    std::vector<double> x(100000), mag(100000);
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = sample_maxent(s, stream);
        mag[i] = std::abs(x[i]);
    }
    const auto lp = estimate_log_plus_moments(mag);
    EXPECT_NEAR(lp.log_plus_inv, 2.0, 3.0 * lp.log_plus_inv_se);
    EXPECT_NEAR(estimate_entropy_knn(std::span<const double>(x)).value, s.h_max, 0.03);
}

TEST(MOfDelta, PinnedHalfValue) {
    EXPECT_NEAR(m_of_delta(0.5), kMHalf, 1e-9);
    EXPECT_NEAR(m_of_delta(1.0), 7.973553861267535, 1e-9);
    EXPECT_NEAR(m_of_delta(0.1), 64.87315305804749, 1e-8);
}

TEST(MOfDelta, NonincreasingInDelta) {
    double prev = m_of_delta(0.05);
    for (double d : {0.1, 0.25, 0.5, 1.0, 2.0, 5.0, 10.0}) {
        const double m = m_of_delta(d);
        EXPECT_LE(m, prev) << d;
        prev = m;
    }
    EXPECT_NEAR(m_of_delta(10.0), 3.748160190746617, 1e-9);
    EXPECT_THROW((void)m_of_delta(0.0), precondition_error);
    EXPECT_THROW((void)m_of_delta(11.0), precondition_error);
}

TEST(MOfDelta, ThresholdHoldsBeyondAndFailsBefore) {
    const double m = m_of_delta(0.5);
    for (double g : {m, 1.2 * m, 2.0 * m, 10.0 * m}) EXPECT_GE(-hmax(g), 2.0 * g / 3.0 - 1e-9) << g;
    EXPECT_LT(-hmax(0.999 * m), 2.0 * 0.999 * m / 3.0);
}

TEST(Corollary1, BranchesAndEmpiricalBound) {
    const double m = m_of_delta(0.5);
    EXPECT_EQ(corollary1_bound(std::log(kTwoPi), 0.5), m);
    EXPECT_EQ(corollary1_bound(-10.0, 0.5), std::max(m, 15.0));
    EXPECT_EQ(corollary1_bound(-10.0, 0.5), 15.0);

    RandomStream stream(5);
    std::vector<double> mag(100000);
    for (auto& v : mag) v = std::abs(stream.uniform(-kPi, kPi));
    const auto lp = estimate_log_plus_moments(mag);
    EXPECT_NEAR(lp.log_plus_inv, 1.0 / kPi, 3.0 * lp.log_plus_inv_se);
    EXPECT_LE(lp.log_plus_inv, corollary1_bound(std::log(kTwoPi), 0.5));
}

// E[log+ 1/|Theta - a|] with the difference reduced to [-pi, pi), for shifted
// concentrated laws, against the bound at the estimated entropy.
TEST(Corollary1, HoldsForShiftedAngleLaws) {
    RandomStream params(17);
    const double delta = 0.5;
    for (int trial = 0; trial < 10; ++trial) {
        RandomStream stream = params.split(static_cast<std::uint64_t>(trial));
        const double mu = params.uniform(-kPi, kPi);
        const double sd = std::exp(params.uniform(std::log(1e-3), std::log(2.0)));
        const double a = params.uniform(-kPi, kPi);
        std::vector<double> theta(20000), mag(20000);
        for (std::size_t i = 0; i < theta.size(); ++i) {
            theta[i] = std::remainder(stream.normal(mu, sd), kTwoPi);
            mag[i] = std::abs(std::remainder(theta[i] - a, kTwoPi));
        }
        const auto h = estimate_entropy_knn(std::span<const double>(theta));
        const auto lp = estimate_log_plus_moments(mag);
        const double bound_hi = corollary1_bound(h.value - 3.0 * h.std_error, delta);
        EXPECT_LE(lp.log_plus_inv, bound_hi + 3.0 * lp.log_plus_inv_se) << "trial " << trial;
    }
}

}  // namespace
}  // namespace csitlab
