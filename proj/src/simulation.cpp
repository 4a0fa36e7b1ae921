#include "jim/simulation.hpp"

#include "jim/errors.hpp"
#include "jim/kernels.hpp"
#include "jim/random.hpp"

#include <cmath>
#include <vector>

namespace jim {

namespace {

constexpr double kCollisionNudge = 1e-9;

} // namespace

PointSequence simulate(const ModelParams& params, const SimConfig& config) {
    validate_stable(params);
    if (!(config.t_start >= 0.0 && config.t_start < config.t_end)) {
        throw InputError("simulation window requires 0 <= t_start < t_end");
    }
    const std::size_t k = params.k();
    std::vector<double> scale(k);
    for (std::size_t j = 0; j < k; ++j) {
        scale[j] = impact_scale(params.rho[j], params.mu[j], params.phi[j], params.psi[j]);
    }

    Random rng(config.seed);
    std::vector<MarkedPoint> points;
    std::vector<double> excess(k, 0.0);  // right-limit intensity above eta
    std::vector<double> lambda(k, 0.0);
    double t = config.t_start;

    while (true) {
        // Exponential kernels only decay between arrivals, so the current
        // total intensity bounds it until the next accepted point.
        double bound = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            bound += params.eta[j] + excess[j];
        }
        if (!(bound > 0.0)) {
            break;
        }
        const double candidate = t + rng.exponential(bound);
        if (candidate > config.t_end) {
            break;
        }
        double total = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            excess[j] *= std::exp(-params.alpha[j] * (candidate - t));
            lambda[j] = params.eta[j] + excess[j];
            total += lambda[j];
        }
        t = candidate;
        if (rng.uniform() * bound >= total) {
            continue;
        }

        const double pick = rng.uniform() * total;
        std::size_t d = 0;
        double acc = lambda[0];
        while (d + 1 < k && pick >= acc) {
            ++d;
            acc += lambda[d];
        }
        const double x = pareto_from_survival(params.rho[d], params.mu[d], rng.uniform_open_low());

        double when = t;
        if (!points.empty() && !(when > points.back().t)) {
            when = points.back().t + kCollisionNudge;
        }
        if (when <= 0.0 || when > config.t_end) {
            continue;
        }
        if (points.size() >= config.max_points) {
            throw NumericalError("simulation exceeded max_points");
        }
        points.push_back({when, d, x});

        const double g = scale[d] * (params.phi[d] + params.psi[d] * x);
        for (std::size_t j = 0; j < k; ++j) {
            excess[j] += params.mic(j, d) * g * params.alpha[j];
        }
    }
    return PointSequence(std::move(points), config.t_start, config.t_end, k);
}

} // namespace jim
