#include "jim/errors.hpp"
#include "jim/intensity.hpp"
#include "jim/simulation.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace {

using namespace jim;

TEST(Simulate, HomogeneousCount) {
    const ModelParams p = ModelParams::uniform(1, 2.0, 1.0, 0.0, 0.0, 3.0, 2.0, 1.0, 0.0);
    const PointSequence seq = simulate(p, {.t_start = 0.0, .t_end = 1000.0, .seed = 1});
    EXPECT_NEAR(static_cast<double>(seq.size()), 2000.0, 4.0 * std::sqrt(2000.0));
}

TEST(Simulate, NoImmigrantsNoPoints) {
    const ModelParams p = ModelParams::uniform(2, 0.0, 1.0, 0.5, 0.3, 3.0, 2.0, 1.0, 0.0);
    EXPECT_TRUE(simulate(p, {.t_end = 100.0, .seed = 3}).empty());
}

TEST(Simulate, BranchingRatio) {
    ModelParams p = ModelParams::uniform(2, 0.0, 1.0, 0.0, 0.0, 3.0, 2.0, 1.0, 0.0);
    p.eta[0] = 1.0;
    p.mic(1, 0) = 0.8;
    double c0 = 0.0;
    double c1 = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const std::vector<std::size_t> n = simulate(p, {.t_end = 5000.0, .seed = seed}).channel_counts();
        c0 += static_cast<double>(n[0]);
        c1 += static_cast<double>(n[1]);
    }
    EXPECT_NEAR(c1 / c0, 0.8, 0.8 * 0.15);
}

TEST(Simulate, RateMatchesAverageInfluence) {
    const ModelParams p = ModelParams::uniform(2, 0.3, 1.5, 0.4, 0.1, 3.0, 2.0, 1.0, 0.3);
    const Eigen::VectorXd expected = average_influence(p);
    Eigen::VectorXd rate = Eigen::VectorXd::Zero(2);
    const double window = 5000.0 / expected.minCoeff();
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const std::vector<std::size_t> n = simulate(p, {.t_end = window, .seed = seed}).channel_counts();
        for (int j = 0; j < 2; ++j) rate[j] += static_cast<double>(n[j]) / window / 10.0;
    }
    for (int j = 0; j < 2; ++j) EXPECT_NEAR(rate[j], expected[j], 0.1 * expected[j]);
}

TEST(Simulate, OutputInvariantsAndMarks) {
    const ModelParams p = ModelParams::uniform(3, 0.4, 1.0, 0.3, 0.1, 4.0, 3.0, 1.0, 0.2);
    const PointSequence seq = simulate(p, {.t_start = 10.0, .t_end = 2010.0, .seed = 77});
    double prev = 10.0;
    std::vector<double> sum(3, 0.0);
    std::vector<double> sum_sq(3, 0.0);
    for (const MarkedPoint& m : seq.points()) {
        EXPECT_GT(m.t, prev);
        EXPECT_GE(m.x, 0.0);
        prev = m.t;
        sum[m.d] += m.x;
        sum_sq[m.d] += m.x * m.x;
    }
    EXPECT_LE(prev, 2010.0);
    const std::vector<std::size_t> n = seq.channel_counts();
    for (std::size_t j = 0; j < 3; ++j) {
        const double mean = sum[j] / static_cast<double>(n[j]);
        const double var = sum_sq[j] / static_cast<double>(n[j]) - mean * mean;
        const double se = std::sqrt(var / static_cast<double>(n[j]));
        EXPECT_NEAR(mean, 3.0 / (4.0 - 1.0), 3.0 * se);
    }
}

TEST(Simulate, Reproducible) {
    const ModelParams p = ModelParams::uniform(2, 0.4, 1.0, 0.3, 0.1, 3.0, 2.0, 1.0, 0.2);
    const PointSequence a = simulate(p, {.t_end = 300.0, .seed = 5});
    const PointSequence b = simulate(p, {.t_end = 300.0, .seed = 5});
    const PointSequence c = simulate(p, {.t_end = 300.0, .seed = 6});
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].t, b[i].t);
        EXPECT_EQ(a[i].d, b[i].d);
        EXPECT_EQ(a[i].x, b[i].x);
    }
    EXPECT_FALSE(a.size() == c.size() && a[0].t == c[0].t);
}

TEST(Simulate, Errors) {
    const ModelParams unstable = ModelParams::uniform(2, 0.4, 1.0, 0.6, 0.5, 3.0, 2.0, 1.0, 0.2);
    EXPECT_THROW((void)simulate(unstable, {.t_end = 10.0}), StabilityError);
    const ModelParams busy = ModelParams::uniform(1, 50.0, 1.0, 0.0, 0.0, 3.0, 2.0, 1.0, 0.0);
    EXPECT_THROW((void)simulate(busy, {.t_end = 100.0, .max_points = 100}), NumericalError);
    EXPECT_THROW((void)simulate(busy, {.t_start = 5.0, .t_end = 5.0}), InputError);
}

TEST(Simulate, CompensatorTracksCounts) {
    const ModelParams p = ModelParams::uniform(2, 0.3, 1.0, 0.5, 0.1, 3.0, 2.0, 1.0, 0.1);
    int inside = 0;
    int total = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const PointSequence seq = simulate(p, {.t_end = 500.0, .seed = seed});
        const std::vector<std::size_t> n = seq.channel_counts();
        for (std::size_t j = 0; j < 2; ++j) {
            const double count = static_cast<double>(n[j]);
            inside += std::abs(compensator(p, seq, j) - count) <= 4.0 * std::sqrt(count) ? 1 : 0;
            ++total;
        }
    }
    EXPECT_GE(inside, static_cast<int>(0.95 * total));
}

TEST(Simulate, TimeRescalingPassesKs) {
    const ModelParams p = ModelParams::uniform(2, 0.3, 1.2, 0.5, 0.15, 3.0, 2.0, 1.0, 0.3);
    int passed = 0;
    const int seeds = 20;
    for (int seed = 0; seed < seeds; ++seed) {
        const PointSequence seq = simulate(p, {.t_end = 800.0, .seed = static_cast<std::uint64_t>(seed)});
        const Eigen::MatrixXd comp = compensator_at_points(p, seq);
        bool ok = true;
        for (std::size_t j = 0; j < 2; ++j) {
            std::vector<double> gaps;
            double last = 0.0;
            for (std::size_t i = 0; i < seq.size(); ++i) {
                if (seq[i].d != j) continue;
                gaps.push_back(comp(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) - last);
                last = comp(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            }
            ok = ok && oracle::ks_exponential(gaps) < oracle::ks_critical_5pct(gaps.size());
        }
        passed += ok ? 1 : 0;
    }
    // Two channels per seed, each failing 5% of the time under the null.
    EXPECT_GE(passed, 16);
}

TEST(Simulate, LikelihoodPrefersTruth) {
    const ModelParams truth = ModelParams::uniform(2, 0.3, 1.0, 0.4, 0.1, 3.0, 2.0, 1.0, 0.2);
    int wins = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const PointSequence seq = simulate(truth, {.t_end = 500.0, .seed = static_cast<std::uint64_t>(100 + trial)});
        ModelParams other = truth;
        other.eta *= 1.5;
        other.alpha *= 1.5;
        other.mic *= 1.5;
        other.rho = (other.rho.array() * 1.5).matrix();
        other.mu *= 1.5;
        other.phi *= 1.5;
        other.psi *= 1.5;
        wins += log_likelihood(truth, seq) > log_likelihood(other, seq) ? 1 : 0;
    }
    EXPECT_GE(wins, 45);
}

} // namespace
