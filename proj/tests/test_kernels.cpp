#include "jim/errors.hpp"
#include "jim/kernels.hpp"
#include "jim/types.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace {

using namespace jim;

TEST(Decay, ValueAtZeroIsAlpha) {
    EXPECT_DOUBLE_EQ(decay(1.0, 0.0), 1.0);
    EXPECT_DOUBLE_EQ(decay(2.0, 0.0), 2.0);
}

TEST(Decay, OneHourAtUnitRate) {
    EXPECT_NEAR(decay(1.0, 1.0), 0.3678794412, 1e-10);
}

TEST(Decay, IntegratesToOne) {
    for (double alpha : {0.3, 1.0, 4.0}) {
        const double upper = 50.0 / alpha;
        const int panels = 20000;
        const double h = upper / panels;
        double s = decay(alpha, 0.0) + decay(alpha, upper);
        for (int i = 1; i < panels; ++i) s += (i % 2 ? 4.0 : 2.0) * decay(alpha, i * h);
        EXPECT_NEAR(s * h / 3.0, 1.0, 1e-6) << "alpha " << alpha;
    }
}

TEST(Decay, MatchesComplementOfCumulative) {
    for (double alpha : {0.1, 1.0, 7.5}) {
        for (double dt : {0.0, 0.01, 1.0, 3.3, 40.0}) {
            EXPECT_NEAR(decay(alpha, dt), alpha * (1.0 - cumulative_decay(alpha, dt)), 1e-14);
        }
    }
}

TEST(Decay, RejectsBadInput) {
    EXPECT_THROW((void)decay(0.0, 1.0), DomainError);
    EXPECT_THROW((void)decay(1.0, -0.1), DomainError);
    EXPECT_THROW((void)cumulative_decay(-1.0, 1.0), DomainError);
}

TEST(CumulativeDecay, Values) {
    EXPECT_DOUBLE_EQ(cumulative_decay(1.0, 0.0), 0.0);
    EXPECT_NEAR(cumulative_decay(1.0, 2.0), 0.8646647168, 1e-10);
    EXPECT_NEAR(cumulative_decay(0.5, 1e6), 1.0, 1e-15);
}

TEST(Pareto, Values) {
    EXPECT_DOUBLE_EQ(pareto_pdf(3.0, 2.0, 0.0), 1.5);
    EXPECT_DOUBLE_EQ(pareto_pdf(3.0, 2.0, 2.0), 0.09375);
    const double rho = 4.9706;
    const double mu = 3.0197;
    const double x = 2.49;
    EXPECT_NEAR(pareto_pdf(rho, mu, x), rho * std::pow(mu, rho) / std::pow(x + mu, rho + 1.0), 1e-14);
    EXPECT_NEAR(pareto_log_pdf(rho, mu, x), std::log(pareto_pdf(rho, mu, x)), 1e-12);
}

TEST(Pareto, IntegratesToOne) {
    // Log-spaced grid; the sliver below e^lo contributes about f(0) e^lo.
    for (auto [rho, mu] : {std::pair{2.5, 0.5}, std::pair{3.0, 2.0}, std::pair{8.0, 10.0}}) {
        const double lo = -12.0;
        const double hi = std::log(1e12 * mu);
        const int panels = 200000;
        const double h = (hi - lo) / panels;
        auto f = [&](double u) {
            const double x = std::exp(u);
            return pareto_pdf(rho, mu, x) * x;
        };
        double s = f(lo) + f(hi);
        for (int i = 1; i < panels; ++i) s += (i % 2 ? 4.0 : 2.0) * f(lo + i * h);
        const double below = pareto_pdf(rho, mu, 0.0) * std::exp(lo);
        EXPECT_NEAR(s * h / 3.0 + below, 1.0, 1e-6) << rho << " " << mu;
    }
}

TEST(Pareto, SurvivalInverse) {
    EXPECT_DOUBLE_EQ(pareto_from_survival(3.0, 2.0, 1.0), 0.0);
    const double x = pareto_from_survival(4.0, 3.0, 0.25);
    EXPECT_NEAR(std::pow(3.0 / (x + 3.0), 4.0), 0.25, 1e-14);
    EXPECT_THROW((void)pareto_from_survival(4.0, 3.0, 0.0), DomainError);
}

TEST(Pareto, RejectsShapeAtOrBelowTwo) {
    EXPECT_THROW((void)pareto_pdf(2.0, 1.0, 1.0), DomainError);
    EXPECT_THROW((void)pareto_pdf(3.0, 0.0, 1.0), DomainError);
    EXPECT_THROW((void)pareto_pdf(3.0, 1.0, -1.0), DomainError);
}

TEST(Impact, Values) {
    EXPECT_DOUBLE_EQ(impact(3.0, 2.0, 1.0, 0.0, 5.7), 1.0);
    EXPECT_DOUBLE_EQ(impact(3.0, 2.0, 0.0, 1.0, 0.0), 0.0);
    EXPECT_DOUBLE_EQ(impact(3.0, 2.0, 1.0, 1.0, 1.0), 1.0);
    EXPECT_THROW((void)impact(3.0, 2.0, 0.0, 0.0, 1.0), DomainError);
}

TEST(Impact, UnitMeanByQuadrature) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const double rho = 2.2 + 6.0 * u(rng);
        const double mu = 0.1 + 5.0 * u(rng);
        const double phi = u(rng);
        const double psi = 0.05 + u(rng);
        // E[g(X)] = integral over survival s of g(x(s)); midpoint rule in s
        // after the substitution x = mu (s^{-1/rho} - 1).
        const int panels = 400000;
        double mean = 0.0;
        for (int i = 0; i < panels; ++i) {
            const double s = (i + 0.5) / panels;
            mean += impact(rho, mu, phi, psi, pareto_from_survival(rho, mu, s));
        }
        EXPECT_NEAR(mean / panels, 1.0, 2e-3) << rho << " " << mu << " " << phi << " " << psi;
    }
}

TEST(ModelParams, Validation) {
    ModelParams p = ModelParams::uniform(2, 0.3, 1.0, 0.5, 0.1, 3.0, 2.0, 1.0, 0.1);
    EXPECT_NO_THROW(validate_stable(p));
    ModelParams bad = p;
    bad.rho[0] = 2.0 + 0.5 * kRhoMargin;
    EXPECT_THROW(validate(bad), InvalidParameters);
    bad = p;
    bad.phi[1] = 0.0;
    bad.psi[1] = 0.0;
    EXPECT_THROW(validate(bad), InvalidParameters);
    bad = p;
    bad.alpha[0] = 0.0;
    EXPECT_THROW(validate(bad), InvalidParameters);
    bad = p;
    bad.mic(0, 1) = -0.1;
    EXPECT_THROW(validate(bad), InvalidParameters);
    bad = p;
    bad.mic.setConstant(0.6);
    EXPECT_NO_THROW(validate(bad));
    EXPECT_THROW(validate_stable(bad), StabilityError);
}

TEST(PointSequence, Invariants) {
    EXPECT_NO_THROW(PointSequence({{1.0, 0, 0.5}, {2.0, 1, 0.1}}, 0.0, 3.0, 2));
    EXPECT_THROW(PointSequence({{2.0, 0, 0.5}, {2.0, 1, 0.1}}, 0.0, 3.0, 2), InvalidSequence);
    EXPECT_THROW(PointSequence({{1.0, 2, 0.5}}, 0.0, 3.0, 2), InvalidSequence);
    EXPECT_THROW(PointSequence({{4.0, 0, 0.5}}, 0.0, 3.0, 2), InvalidSequence);
    EXPECT_THROW(PointSequence({{1.0, 0, -0.5}}, 0.0, 3.0, 2), InvalidSequence);
    EXPECT_THROW(PointSequence({}, 3.0, 3.0, 1), InvalidSequence);
}

TEST(PointSequence, Truncation) {
    const PointSequence seq({{1.0, 0, 0.5}, {2.0, 1, 0.1}, {2.5, 0, 0.2}}, 0.0, 3.0, 2);
    const PointSequence head = seq.truncated(2.0);
    EXPECT_EQ(head.size(), 1u);
    EXPECT_DOUBLE_EQ(head.t_end(), 2.0);
    EXPECT_EQ(seq.channel_counts(), (std::vector<std::size_t>{2, 1}));
}

} // namespace
