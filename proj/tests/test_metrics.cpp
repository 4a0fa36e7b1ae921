#include "jim/errors.hpp"
#include "jim/metrics.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace {

using namespace jim;

TEST(RankByScore, StableOnTies) {
    const std::vector<std::string> labels{"a", "b", "c", "d"};
    const std::vector<double> scores{1.0, 3.0, 1.0, 3.0};
    const RankedList r = rank_by_score(labels, scores);
    EXPECT_EQ(r.items, (std::vector<std::string>{"b", "d", "a", "c"}));
    EXPECT_EQ(r.scores, (std::vector<double>{3.0, 3.0, 1.0, 1.0}));
}

TEST(Accuracy, Basics) {
    EXPECT_DOUBLE_EQ(accuracy_top1({"a", "b", "c"}, {"a", "b", "c"}), 1.0);
    EXPECT_DOUBLE_EQ(accuracy_top1({"a", "b"}, {"c", "d"}), 0.0);
    EXPECT_DOUBLE_EQ(accuracy_top1({"a", "b", "c", "d"}, {"a", "x", "c", "y"}), 0.5);
    EXPECT_THROW((void)accuracy_top1({"a"}, {"a", "b"}), InputError);
}

TEST(Ndcg, HandExample) {
    RankedList predicted;
    predicted.items = {"B", "A", "C"};
    const std::unordered_map<std::string, double> gains{{"A", 3.0}, {"B", 2.0}, {"C", 1.0}};
    const double dcg = 2.0 + 3.0 / std::log2(3.0) + 0.5;
    const double idcg = 3.0 + 2.0 / std::log2(3.0) + 0.5;
    EXPECT_NEAR(ndcg(predicted, gains), dcg / idcg, 1e-15);
    EXPECT_NEAR(ndcg(predicted, gains), 0.9224944, 1e-6);
}

TEST(Ndcg, EdgeCases) {
    RankedList ideal;
    ideal.items = {"A", "B", "C"};
    EXPECT_DOUBLE_EQ(ndcg(ideal, {{"A", 3.0}, {"B", 2.0}, {"C", 1.0}}), 1.0);
    EXPECT_DOUBLE_EQ(ndcg(ideal, {{"A", 0.0}, {"B", 0.0}, {"C", 0.0}}), 1.0);
    RankedList single;
    single.items = {"A"};
    EXPECT_DOUBLE_EQ(ndcg(single, {{"A", 4.0}}), 1.0);
    EXPECT_THROW((void)ndcg(ideal, {{"A", 1.0}}), InputError);
}

TEST(Rbo, HandExample) {
    EXPECT_NEAR(rbo({"A", "B"}, {"B", "A"}, 0.9), 0.09, 1e-12);
    EXPECT_DOUBLE_EQ(rbo({"A", "B"}, {"C", "D"}, 0.9), 0.0);
}

TEST(Rbo, IdenticalListsAtDepth) {
    for (std::size_t depth : {1u, 2u, 5u, 12u}) {
        std::vector<std::string> xs;
        for (std::size_t i = 0; i < depth; ++i) xs.push_back("q" + std::to_string(i));
        for (double p : {0.5, 0.9, 0.98}) {
            EXPECT_NEAR(rbo(xs, xs, p), 1.0 - std::pow(p, static_cast<double>(depth)), 1e-12);
            EXPECT_NEAR(rbo_extrapolated(xs, xs, p), 1.0, 1e-12);
        }
    }
}

TEST(Rbo, ExtrapolatedAgainstDefinition) {
    // For equal-length lists the extrapolated form is
    // X_k/k p^k + (1-p)/p sum_d X_d/d p^d.
    const std::vector<std::string> a{"a", "b", "c", "d", "e"};
    const std::vector<std::string> b{"b", "a", "e", "c", "d"};
    const double p = 0.8;
    const std::vector<double> overlap{0, 2, 2, 3, 5};
    double sum = 0.0;
    for (int d = 1; d <= 5; ++d) sum += overlap[d - 1] / d * std::pow(p, d);
    const double expected = overlap[4] / 5.0 * std::pow(p, 5) + (1 - p) / p * sum;
    EXPECT_NEAR(rbo_extrapolated(a, b, p), expected, 1e-12);
    EXPECT_DOUBLE_EQ(rbo_extrapolated({"a"}, {"b"}, p), 0.0);
}

TEST(Rbo, RejectsDuplicatesAndBadPersistence) {
    EXPECT_THROW((void)rbo({"a", "a"}, {"a", "b"}), InputError);
    EXPECT_THROW((void)rbo({"a"}, {"a"}, 1.0), InputError);
}

TEST(Metrics, OrderOnlyInvariance) {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.0, 10.0);
    const std::vector<std::string> labels{"a", "b", "c", "d", "e", "f"};
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> s(labels.size());
        std::unordered_map<std::string, double> gains;
        for (std::size_t i = 0; i < s.size(); ++i) {
            s[i] = u(rng);
            gains[labels[i]] = std::floor(u(rng));
        }
        std::vector<double> t(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) t[i] = std::exp(0.3 * s[i]) + 5.0;
        const RankedList a = rank_by_score(labels, s);
        const RankedList b = rank_by_score(labels, t);
        EXPECT_DOUBLE_EQ(ndcg(a, gains), ndcg(b, gains));
        const double v = ndcg(a, gains);
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, 1.0);
        const std::vector<std::string> reversed(labels.rbegin(), labels.rend());
        EXPECT_DOUBLE_EQ(rbo(a.items, reversed), rbo(b.items, reversed));
    }
}

TEST(Mrr, Fixtures) {
    const std::vector<double> ones{1.0, 1.0, 1.0};
    const std::vector<double> mixed{1.0, 0.5};
    EXPECT_DOUBLE_EQ(mrr(ones), 1.0);
    EXPECT_DOUBLE_EQ(mrr(mixed), 0.75);
    EXPECT_THROW((void)mrr(std::span<const double>()), InputError);
}

TEST(Wilcoxon, IdenticalSamples) {
    const std::vector<double> a{1, 2, 3, 4, 5, 6, 7};
    const WilcoxonResult r = wilcoxon_signed_rank(a, a);
    EXPECT_EQ(r.statistic, 0.0);
    EXPECT_EQ(r.n, 0u);
    EXPECT_FALSE(r.significant);
}

TEST(Wilcoxon, DominanceIsSignificant) {
    std::vector<double> a;
    std::vector<double> b;
    for (int i = 0; i < 30; ++i) {
        a.push_back(10.0 + i);
        b.push_back(i * 0.5);
    }
    const WilcoxonResult r = wilcoxon_signed_rank(a, b);
    EXPECT_EQ(r.w_minus, 0.0);
    EXPECT_EQ(r.w_plus, 465.0);
    EXPECT_TRUE(r.significant);
}

TEST(Wilcoxon, SmallSamplesNeverSignificant) {
    const std::vector<double> a{5, 6, 7, 8, 9};
    const std::vector<double> b{0, 0, 0, 0, 0};
    EXPECT_FALSE(wilcoxon_signed_rank(a, b).significant);
}

TEST(Wilcoxon, MidranksAndZeroDifferences) {
    const std::vector<double> a{1.0, 2.0, 3.0, 4.0, 5.0};
    const std::vector<double> b{0.0, 3.0, 2.0, 4.0, 3.0};
    // Differences 1, -1, 1, 0, 2: the zero drops out, |1| ties get rank 2.
    const WilcoxonResult r = wilcoxon_signed_rank(a, b);
    EXPECT_EQ(r.n, 4u);
    EXPECT_DOUBLE_EQ(r.w_plus, 2.0 + 2.0 + 4.0);
    EXPECT_DOUBLE_EQ(r.w_minus, 2.0);
}

TEST(Wilcoxon, ExactTableAgreesWithEnumeration) {
    // For each n the critical value c is the largest with
    // P(min(W+, W-) <= c) <= 0.05 under the null.
    for (std::size_t n = 6; n <= 20; ++n) {
        std::vector<double> ranks;
        for (std::size_t r = 1; r <= n; ++r) ranks.push_back(static_cast<double>(r));
        const int c = wilcoxon_critical_value(n);
        EXPECT_LE(oracle::wilcoxon_exact_p(ranks, c), 0.05) << n;
        EXPECT_GT(oracle::wilcoxon_exact_p(ranks, c + 1), 0.05) << n;
    }
}

TEST(Wilcoxon, FixedTenPairSample) {
    const std::vector<double> a{82, 91, 77, 95, 88, 70, 93, 85, 90, 79};
    const std::vector<double> b{75, 80, 78, 81, 70, 72, 79, 74, 76, 71};
    const WilcoxonResult r = wilcoxon_signed_rank(a, b);
    // Differences: 7 11 -1 14 18 -2 14 11 14 8
    std::vector<double> diffs;
    for (std::size_t i = 0; i < a.size(); ++i) diffs.push_back(a[i] - b[i]);
    std::vector<double> ranks(diffs.size());
    for (std::size_t i = 0; i < diffs.size(); ++i) {
        double below = 0.0;
        double equal = 0.0;
        for (double d : diffs) {
            if (std::abs(d) < std::abs(diffs[i])) below += 1.0;
            else if (std::abs(d) == std::abs(diffs[i])) equal += 1.0;
        }
        ranks[i] = below + (equal + 1.0) / 2.0;
    }
    double w_plus = 0.0;
    for (std::size_t i = 0; i < diffs.size(); ++i) w_plus += diffs[i] > 0 ? ranks[i] : 0.0;
    EXPECT_DOUBLE_EQ(r.w_plus, w_plus);
    EXPECT_EQ(r.n, 10u);
    const double p = oracle::wilcoxon_exact_p(ranks, r.statistic);
    EXPECT_EQ(r.significant, p <= 0.05) << "p=" << p;
    EXPECT_TRUE(r.significant);
}

} // namespace
