#include "gtk/scoring.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "gtk/error.hpp"
#include "oracles.hpp"

namespace gtk {
namespace {

TEST(IouScore, Examples) {
    EXPECT_DOUBLE_EQ(iou_score({3, 5}, {2, 5}, IouMode::Eq1), 2.0 / 3.0);
    EXPECT_DOUBLE_EQ(iou_score({3, 5}, {2, 5}, IouMode::FrameCount), 1.0);
    EXPECT_EQ(iou_score({0, 2}, {5, 9}, IouMode::Eq1), 0.0);
    EXPECT_EQ(iou_score({0, 2}, {5, 9}, IouMode::FrameCount), 0.0);
}

TEST(IouScore, NoEventScoresOne) {
    EXPECT_EQ(iou_score({0, 31}, SignBoundary::none()), 1.0);
    EXPECT_EQ(iou_score({0, 31}, SignBoundary::none(), IouMode::Eq1), 1.0);
}

TEST(IouScore, FrameCountMatchesOracleExhaustively) {
    constexpr int n = 24;
    for (int ws = 0; ws < n; ++ws)
        for (int we = ws; we < n; ++we)
            for (int ss = 0; ss < n; ++ss)
                for (int se = ss; se < n; ++se)
                    ASSERT_EQ(iou_score({ws, we}, {ss, se}), oracle::frame_count_iou(ws, we, ss, se))
                        << ws << " " << we << " " << ss << " " << se;
}

TEST(IouScore, GrowingOverlapNeverDecreases) {
    for (int ws = 0; ws < 20; ++ws)
        for (int we = ws; we < 20; ++we)
            for (int ss = 0; ss < 20; ++ss)
                for (int se = ss; se + 1 < 20; ++se)
                    for (auto mode : {IouMode::Eq1, IouMode::FrameCount})
                        ASSERT_LE(iou_score({ws, we}, {ss, se}, mode), iou_score({ws, we}, {ss, se + 1}, mode));
}

TEST(IouMode, RoundTripsNames) {
    EXPECT_EQ(iou_mode_from_string("eq1"), IouMode::Eq1);
    EXPECT_EQ(iou_mode_from_string(to_string(IouMode::FrameCount)), IouMode::FrameCount);
    EXPECT_THROW(iou_mode_from_string("frames"), Error);
}

TEST(ScaleScores, Examples) {
    const std::vector<double> s{0.2, 0.8};
    const auto half = scale_scores(s, 0.5, false);
    EXPECT_DOUBLE_EQ(half[0], 0.1);
    EXPECT_DOUBLE_EQ(half[1], 0.4);
    EXPECT_EQ(scale_scores(s, 0.3, true), s);
    EXPECT_EQ(scale_scores(s, 0.0, false), (std::vector<double>{0.0, 0.0}));
}

TEST(ScaleScores, PreservesArgmax) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        std::vector<double> s(7);
        for (double& v : s) v = u(rng);
        const double iou = 0.01 + 0.99 * u(rng);
        const auto scaled = scale_scores(s, iou, false);
        EXPECT_EQ(std::max_element(s.begin(), s.end()) - s.begin(),
                  std::max_element(scaled.begin(), scaled.end()) - scaled.begin());
    }
}

TEST(IouBalancedCe, Examples) {
    EXPECT_EQ(iou_balanced_ce(std::vector<double>{0.0, 1.0}, 1, 0.7), 0.0);
    const double p = std::exp(-1.0);
    EXPECT_NEAR(iou_balanced_ce(std::vector<double>{p, 1.0 - p}, 0, 1.0), 1.0, 1e-15);
    EXPECT_NEAR(iou_balanced_ce(std::vector<double>{0.5, 0.5}, 0, 0.5), 0.5 * std::log(2.0), 1e-15);
    EXPECT_NEAR(0.5 * std::log(2.0), 0.34657, 1e-5);
}

TEST(IouBalancedCe, Errors) {
    try {
        iou_balanced_ce(std::vector<double>{1e-13, 1.0 - 1e-13}, 0, 1.0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::DegenerateProb);
    }
    EXPECT_THROW(iou_balanced_ce(std::vector<double>{0.5, 0.6}, 0, 1.0), Error);
    EXPECT_THROW(iou_balanced_ce(std::vector<double>{0.5, 0.5}, 2, 1.0), Error);
}

TEST(IouBalancedCe, GradientMatchesFiniteDifferences) {
    std::mt19937_64 rng(42);
    std::normal_distribution<double> z(0.0, 1.0);
    std::uniform_real_distribution<double> u(0.05, 1.0);
    constexpr double h = 1e-5;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> logits(10);
        for (double& v : logits) v = z(rng);
        auto p = oracle::softmax(logits);
        for (double& v : p) v = 0.9 * v + 0.1 / 10.0;
        const std::size_t t = std::max_element(p.begin(), p.end()) - p.begin();
        const double iou = u(rng);
        std::vector<double> grad;
        const double loss = iou_balanced_ce(p, t, iou, &grad);
        ASSERT_NEAR(loss, oracle::weighted_ce(p, t, iou), 1e-14);
        for (std::size_t j = 0; j < p.size(); ++j) {
            if (j == t) continue;
            // Directional derivative along e_t - e_j stays on the simplex.
            auto plus = p, minus = p;
            plus[t] += h, plus[j] -= h;
            minus[t] -= h, minus[j] += h;
            const double numeric =
                (oracle::weighted_ce(plus, t, iou) - oracle::weighted_ce(minus, t, iou)) / (2 * h);
            const double analytic = grad[t] - grad[j];
            EXPECT_NEAR(analytic, numeric, 1e-6 * std::fabs(analytic)) << trial << " " << j;
        }
    }
}

TEST(Huber, Examples) {
    EXPECT_EQ(huber({0.3, 0.7}, {0.3, 0.7}), 0.0);
    EXPECT_DOUBLE_EQ(huber({0.5, 0.0}, {0.0, 0.0}, 1.0), 0.125);
    EXPECT_DOUBLE_EQ(huber({2.0, 0.0}, {0.0, 0.0}, 1.0), 1.5);
    EXPECT_THROW(huber({0, 0}, {0, 0}, 0.0), Error);
}

TEST(Huber, MatchesOracle) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-4.0, 4.0), d(0.1, 3.0);
    for (int i = 0; i < 1000; ++i) {
        const double e = u(rng), delta = d(rng);
        EXPECT_NEAR(huber_element(e, delta), oracle::huber(e, delta), 1e-15);
    }
}

TEST(Huber, ContinuousAtDelta) {
    for (double delta : {0.25, 1.0, 2.5}) {
        for (double sign : {-1.0, 1.0}) {
            const double at = sign * delta;
            const double lo = at - 1e-9, hi = at + 1e-9;
            EXPECT_NEAR(huber_element(lo, delta), huber_element(hi, delta), 1e-8);
            EXPECT_NEAR(huber_derivative(lo, delta), huber_derivative(hi, delta), 1e-8);
            EXPECT_NEAR(huber_derivative(at, delta), sign * delta, 1e-12);
        }
    }
}

TEST(Huber, QuadraticAndLinearRegimes) {
    const double delta = 1.0;
    for (double e : {1e-4, 1e-3, 1e-2}) EXPECT_NEAR(huber_element(e, delta) / (0.5 * e * e), 1.0, 1e-12);
    for (double e : {1e2, 1e3, 1e4}) {
        const double slope = (huber_element(e + 1.0, delta) - huber_element(e, delta)) / 1.0;
        EXPECT_NEAR(slope, delta, 1e-9);
    }
}

TEST(RegressionTargets, Examples) {
    EXPECT_EQ(regression_targets({0, 31}, 32), (BoundaryPair{0.0, 1.0}));
    EXPECT_EQ(regression_targets(SignBoundary::none(), 32), (BoundaryPair{0.0, 0.0}));
    const auto t = regression_targets({8, 23}, 32);
    EXPECT_NEAR(t.start, 0.2581, 1e-4);
    EXPECT_NEAR(t.end, 0.7419, 1e-4);
}

TEST(ScoreWindow, WindowLocalTargets) {
    const auto sw = score_window({10, 19}, {12, 30}, IouMode::FrameCount);
    EXPECT_DOUBLE_EQ(sw.iou, 0.8);
    EXPECT_DOUBLE_EQ(sw.target.start, 2.0 / 9.0);
    EXPECT_DOUBLE_EQ(sw.target.end, 1.0);
    const auto none = score_window({0, 9}, {20, 30}, IouMode::FrameCount);
    EXPECT_EQ(none.iou, 0.0);
    EXPECT_EQ(none.target, (BoundaryPair{0.0, 0.0}));
}

}  // namespace
}  // namespace gtk
