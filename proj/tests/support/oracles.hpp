#pragma once

// Reference implementations used as test oracles. They follow the model
// definitions term by term, without the recursions or closed-form
// shortcuts of the library.

#include "jim/types.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace oracle {

inline double impact(const jim::ModelParams& p, std::size_t d, double x) {
    // E[phi + psi X] under Pareto(rho, mu) is phi + psi mu / (rho - 1).
    const double mean = p.phi[d] + p.psi[d] * p.mu[d] / (p.rho[d] - 1.0);
    return (p.phi[d] + p.psi[d] * x) / mean;
}

// lambda_j(t) = eta_j + sum over points strictly before t.
inline double intensity(const jim::ModelParams& p, const jim::PointSequence& seq, std::size_t j, double t) {
    double total = p.eta[j];
    for (const jim::MarkedPoint& m : seq.points()) {
        if (m.t < t) {
            total += p.mic(j, m.d) * p.alpha[j] * std::exp(-p.alpha[j] * (t - m.t)) * impact(p, m.d, m.x);
        }
    }
    return total;
}

// Composite Simpson integration of lambda_j between consecutive points.
inline double compensator_quadrature(const jim::ModelParams& p, const jim::PointSequence& seq, std::size_t j,
                                     int panels = 2000) {
    std::vector<double> cuts{seq.t_start()};
    for (const jim::MarkedPoint& m : seq.points()) cuts.push_back(m.t);
    cuts.push_back(seq.t_end());
    double total = 0.0;
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
        const double a = cuts[c];
        const double b = cuts[c + 1];
        if (!(b > a)) continue;
        const double h = (b - a) / panels;
        // Evaluate just inside (a, b] so the jump at a is included.
        auto f = [&](double t) { return intensity(p, seq, j, std::max(t, a + 1e-13)); };
        double s = f(a) + f(b);
        for (int i = 1; i < panels; ++i) s += (i % 2 == 1 ? 4.0 : 2.0) * f(a + i * h);
        total += s * h / 3.0;
    }
    return total;
}

inline double log_likelihood(const jim::ModelParams& p, const jim::PointSequence& seq) {
    double ll = 0.0;
    for (const jim::MarkedPoint& m : seq.points()) {
        ll += std::log(intensity(p, seq, m.d, m.t));
        const double rho = p.rho[m.d];
        const double mu = p.mu[m.d];
        ll += std::log(rho) + rho * std::log(mu) - (rho + 1.0) * std::log(m.x + mu);
    }
    for (std::size_t j = 0; j < seq.k(); ++j) {
        double comp = p.eta[j] * seq.window();
        for (const jim::MarkedPoint& m : seq.points()) {
            comp += p.mic(j, m.d) * impact(p, m.d, m.x) * (1.0 - std::exp(-p.alpha[j] * (seq.t_end() - m.t)));
        }
        ll -= comp;
    }
    return ll;
}

// Random valid parameters with Spr(MIC) < 1 guaranteed by row sums < 0.9.
inline jim::ModelParams random_params(std::mt19937_64& rng, std::size_t k) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    jim::ModelParams p = jim::ModelParams::uniform(k, 0.1, 1.0, 0.0, 0.0, 3.0, 1.0, 1.0, 0.0);
    for (std::size_t j = 0; j < k; ++j) {
        p.eta[j] = 0.05 + u(rng);
        p.alpha[j] = 0.2 + 3.0 * u(rng);
        p.rho[j] = 2.1 + 5.0 * u(rng);
        p.mu[j] = 0.2 + 4.0 * u(rng);
        p.phi[j] = u(rng);
        p.psi[j] = u(rng) + (p.phi[j] == 0.0 ? 0.1 : 0.0);
        double row = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            p.mic(j, i) = u(rng);
            row += p.mic(j, i);
        }
        p.mic.row(j) *= 0.85 * u(rng) / std::max(row, 1e-12);
    }
    return p;
}

// Random strictly increasing sequence with n points over [0, horizon].
inline jim::PointSequence random_sequence(std::mt19937_64& rng, std::size_t k, std::size_t n, double horizon) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> times;
    while (times.size() < n) {
        const double t = horizon * u(rng);
        if (t > 0.0) times.push_back(t);
    }
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());
    std::vector<jim::MarkedPoint> pts;
    std::uniform_int_distribution<std::size_t> channel(0, k - 1);
    for (double t : times) pts.push_back({t, channel(rng), 5.0 * u(rng)});
    return {std::move(pts), 0.0, horizon, k};
}

// One-sample Kolmogorov-Smirnov statistic against Exp(1).
inline double ks_exponential(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double cdf = 1.0 - std::exp(-xs[i]);
        d = std::max({d, cdf - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - cdf});
    }
    return d;
}

// Asymptotic 5% critical value for the KS statistic.
inline double ks_critical_5pct(std::size_t n) {
    return 1.3581 / std::sqrt(static_cast<double>(n));
}

// Exact two-sided p-value of min(W+, W-) by enumerating all sign patterns
// of the given ranks (ranks may be midranks).
inline double wilcoxon_exact_p(const std::vector<double>& ranks, double statistic) {
    const std::size_t n = ranks.size();
    const std::uint64_t total = std::uint64_t{1} << n;
    double sum_all = 0.0;
    for (double r : ranks) sum_all += r;
    std::uint64_t extreme = 0;
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        double w_plus = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if ((mask >> i) & 1U) w_plus += ranks[i];
        }
        if (std::min(w_plus, sum_all - w_plus) <= statistic + 1e-9) ++extreme;
    }
    return static_cast<double>(extreme) / static_cast<double>(total);
}

} // namespace oracle
