#include "jim/intensity.hpp"

#include "jim/errors.hpp"
#include "jim/forecasting.hpp"
#include "jim/kernels.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

namespace jim {

namespace {

constexpr double kLogFloor = 1e-300;
constexpr double kPowerTolerance = 1e-10;
constexpr std::size_t kPowerMaxIters = 500;

void check_compatible(const ModelParams& params, const PointSequence& seq) {
    validate(params);
    if (params.k() != seq.k()) {
        throw InvalidParameters("model has " + std::to_string(params.k()) + " events but the sequence has " +
                                std::to_string(seq.k()));
    }
}

// g_{d_i}(x_i) for every point.
std::vector<double> point_impacts(const ModelParams& params, const PointSequence& seq) {
    const std::size_t k = params.k();
    std::vector<double> scale(k);
    for (std::size_t j = 0; j < k; ++j) {
        scale[j] = impact_scale(params.rho[j], params.mu[j], params.phi[j], params.psi[j]);
    }
    std::vector<double> g(seq.size());
    for (std::size_t i = 0; i < seq.size(); ++i) {
        const MarkedPoint& p = seq[i];
        g[i] = scale[p.d] * (params.phi[p.d] + params.psi[p.d] * p.x);
    }
    return g;
}

// Eigenvalue of largest modulus of a 1x1 or 2x2 matrix.
double dense_spectral_radius(const Eigen::MatrixXd& m) {
    const Eigen::EigenSolver<Eigen::MatrixXd> solver(m, false);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("eigenvalue solver failed for the spectral radius");
    }
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

} // namespace

Eigen::MatrixXd intensity_at_points(const ModelParams& params, const PointSequence& seq) {
    check_compatible(params, seq);
    const std::size_t n = seq.size();
    const std::size_t k = params.k();
    const std::vector<double> g = point_impacts(params, seq);

    Eigen::MatrixXd out(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k));
    Eigen::VectorXd excess = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(k));
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0) {
            const MarkedPoint& prev = seq[i - 1];
            const double dt = seq[i].t - prev.t;
            for (std::size_t j = 0; j < k; ++j) {
                const double a = params.alpha[j];
                excess[j] = (excess[j] + params.mic(j, prev.d) * g[i - 1] * a) * std::exp(-a * dt);
            }
        }
        out.row(static_cast<Eigen::Index>(i)) = (params.eta + excess).transpose();
    }
    return out;
}

Eigen::MatrixXd intensity_brute_force(const ModelParams& params, const PointSequence& seq) {
    check_compatible(params, seq);
    const std::size_t n = seq.size();
    const std::size_t k = params.k();
    const std::vector<double> g = point_impacts(params, seq);

    Eigen::MatrixXd out(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            double sum = params.eta[j];
            for (std::size_t m = 0; m < i; ++m) {
                sum += params.mic(j, seq[m].d) * decay(params.alpha[j], seq[i].t - seq[m].t) * g[m];
            }
            out(i, j) = sum;
        }
    }
    return out;
}

namespace {

// Intensities at sorted query times, merging the point history once.
Eigen::MatrixXd intensities_at_sorted_times(const ModelParams& params, const PointSequence& seq,
                                            const std::vector<double>& times, bool include_at_t) {
    const std::size_t k = params.k();
    const std::vector<double> g = point_impacts(params, seq);
    Eigen::MatrixXd out(static_cast<Eigen::Index>(times.size()), static_cast<Eigen::Index>(k));
    Eigen::VectorXd excess = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(k));
    double now = seq.t_start();
    std::size_t next = 0;
    for (std::size_t q = 0; q < times.size(); ++q) {
        const double tq = times[q];
        while (next < seq.size() && (seq[next].t < tq || (include_at_t && seq[next].t == tq))) {
            const MarkedPoint& p = seq[next];
            for (std::size_t j = 0; j < k; ++j) {
                const double a = params.alpha[j];
                excess[j] = excess[j] * std::exp(-a * (p.t - now)) + params.mic(j, p.d) * g[next] * a;
            }
            now = p.t;
            ++next;
        }
        for (std::size_t j = 0; j < k; ++j) {
            const double dt = std::max(0.0, tq - now);
            out(q, j) = params.eta[j] + excess[j] * std::exp(-params.alpha[j] * dt);
        }
    }
    return out;
}

} // namespace

Eigen::VectorXd intensity_at(const ModelParams& params, const PointSequence& seq, double t, bool include_at_t) {
    check_compatible(params, seq);
    if (t < seq.t_start()) {
        throw DomainError("intensity requested before the observation window");
    }
    return intensities_at_sorted_times(params, seq, {t}, include_at_t).row(0).transpose();
}

double compensator(const ModelParams& params, const PointSequence& seq, std::size_t j) {
    return compensator(params, seq, j, seq.t_end());
}

double compensator(const ModelParams& params, const PointSequence& seq, std::size_t j, double t) {
    check_compatible(params, seq);
    if (j >= params.k()) {
        throw InvalidParameters("event index out of range");
    }
    if (t < seq.t_start()) {
        throw DomainError("compensator requested before the observation window");
    }
    const std::vector<double> g = point_impacts(params, seq);
    double total = params.eta[j] * (t - seq.t_start());
    for (std::size_t i = 0; i < seq.size() && seq[i].t <= t; ++i) {
        total += params.mic(j, seq[i].d) * cumulative_decay(params.alpha[j], t - seq[i].t) * g[i];
    }
    return total;
}

Eigen::MatrixXd compensator_at_points(const ModelParams& params, const PointSequence& seq) {
    check_compatible(params, seq);
    const std::size_t n = seq.size();
    const std::size_t k = params.k();
    const std::vector<double> g = point_impacts(params, seq);

    Eigen::MatrixXd out(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k));
    // mass: total jump mass so far; pending: its part not yet integrated.
    Eigen::VectorXd mass = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(k));
    Eigen::VectorXd pending = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(k));
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0) {
            const MarkedPoint& prev = seq[i - 1];
            const double dt = seq[i].t - prev.t;
            for (std::size_t j = 0; j < k; ++j) {
                const double c = params.mic(j, prev.d) * g[i - 1];
                mass[j] += c;
                pending[j] = (pending[j] + c) * std::exp(-params.alpha[j] * dt);
            }
        }
        for (std::size_t j = 0; j < k; ++j) {
            out(i, j) = params.eta[j] * (seq[i].t - seq.t_start()) + (mass[j] - pending[j]);
        }
    }
    return out;
}

double temporal_log_likelihood(const ModelParams& params, const PointSequence& seq) {
    check_compatible(params, seq);
    const std::size_t k = params.k();
    const std::vector<double> g = point_impacts(params, seq);

    std::vector<double> excess(k, 0.0);
    std::vector<double> mass(k, 0.0);
    double sum_log = 0.0;
    double prev = seq.t_start();
    for (std::size_t i = 0; i < seq.size(); ++i) {
        const MarkedPoint& p = seq[i];
        if (i > 0) {
            const double dt = p.t - prev;
            for (std::size_t j = 0; j < k; ++j) {
                excess[j] *= std::exp(-params.alpha[j] * dt);
            }
        }
        const double lambda = params.eta[p.d] + excess[p.d];
        if (!(lambda > 0.0)) {
            return -std::numeric_limits<double>::infinity();
        }
        sum_log += std::log(std::max(lambda, kLogFloor));
        for (std::size_t j = 0; j < k; ++j) {
            const double c = params.mic(j, p.d) * g[i];
            excess[j] += c * params.alpha[j];
            mass[j] += c;
        }
        prev = p.t;
    }
    double total_comp = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
        const double a = params.alpha[j];
        const double tail = excess[j] * std::exp(-a * (seq.t_end() - prev)) / a;
        total_comp += params.eta[j] * seq.window() + (mass[j] - tail);
    }
    return sum_log - total_comp;
}

double mark_log_likelihood(const ModelParams& params, const PointSequence& seq) {
    check_compatible(params, seq);
    double total = 0.0;
    for (const MarkedPoint& p : seq.points()) {
        total += pareto_log_pdf(params.rho[p.d], params.mu[p.d], p.x);
    }
    return total;
}

double log_likelihood(const ModelParams& params, const PointSequence& seq) {
    const double temporal = temporal_log_likelihood(params, seq);
    if (!std::isfinite(temporal)) {
        return temporal;
    }
    return temporal + mark_log_likelihood(params, seq);
}

double log_likelihood_from(const ModelParams& params, const PointSequence& seq,
                           const Eigen::MatrixXd& point_intensities) {
    check_compatible(params, seq);
    if (point_intensities.rows() != static_cast<Eigen::Index>(seq.size()) ||
        point_intensities.cols() != static_cast<Eigen::Index>(params.k())) {
        throw InvalidParameters("intensity matrix does not match the sequence");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < seq.size(); ++i) {
        const double lambda = point_intensities(i, seq[i].d);
        if (!(lambda > 0.0)) {
            return -std::numeric_limits<double>::infinity();
        }
        total += std::log(std::max(lambda, kLogFloor));
    }
    total += mark_log_likelihood(params, seq);
    for (std::size_t j = 0; j < params.k(); ++j) {
        total -= compensator(params, seq, j);
    }
    return total;
}

double spectral_radius(const Eigen::MatrixXd& mic) {
    if (mic.rows() != mic.cols()) {
        throw InvalidParameters("spectral radius needs a square matrix");
    }
    if (!mic.allFinite() || (mic.array() < 0.0).any()) {
        throw InvalidParameters("spectral radius needs a finite non-negative matrix");
    }
    const Eigen::Index k = mic.rows();
    if (k == 0) {
        return 0.0;
    }
    // Power iteration on MIC + I with Collatz-Wielandt bounds; a dense
    // eigenvalue solve handles matrices where the bounds never meet.
    Eigen::MatrixXd shifted = mic;
    shifted.diagonal().array() += 1.0;
    Eigen::VectorXd v = Eigen::VectorXd::Constant(k, 1.0 / static_cast<double>(k));
    for (std::size_t it = 0; it < kPowerMaxIters; ++it) {
        const Eigen::VectorXd w = shifted * v;
        double lo = std::numeric_limits<double>::infinity();
        double hi = 0.0;
        for (Eigen::Index i = 0; i < k; ++i) {
            if (v[i] > 0.0) {
                const double r = w[i] / v[i];
                lo = std::min(lo, r);
                hi = std::max(hi, r);
            }
        }
        if (hi - lo <= kPowerTolerance * hi) {
            return std::max(0.0, 0.5 * (lo + hi) - 1.0);
        }
        v = w / w.sum();
    }
    return dense_spectral_radius(mic);
}

Eigen::VectorXd average_influence(const ModelParams& params) {
    validate(params);
    const double spr = spectral_radius(params.mic);
    if (!(spr < 1.0)) {
        throw StabilityError("average influence undefined: spectral radius " + std::to_string(spr) + " >= 1");
    }
    const auto k = static_cast<Eigen::Index>(params.k());
    const Eigen::MatrixXd system = Eigen::MatrixXd::Identity(k, k) - params.mic;
    return system.partialPivLu().solve(params.eta);
}

InfluenceSummary influence_summary(const ModelParams& params) {
    InfluenceSummary s;
    s.avg_influence = average_influence(params);
    s.spectral_radius = spectral_radius(params.mic);
    const auto k = static_cast<Eigen::Index>(params.k());
    s.direct_mean = params.mic.diagonal().mean();
    if (k > 1) {
        const double off = params.mic.sum() - params.mic.diagonal().sum();
        s.indirect_mean = off / static_cast<double>(k * (k - 1));
    }
    return s;
}

IntensityTrace intensity_trace(const ModelParams& params, const PointSequence& seq, double grid_step) {
    check_compatible(params, seq);
    if (!(grid_step > 0.0) || !std::isfinite(grid_step)) {
        throw DomainError("grid step must be positive");
    }
    const auto n_grid = static_cast<std::size_t>(std::ceil(seq.window() / grid_step - 1e-9));

    // Merge grid times and point times; grid samples come first on ties.
    std::vector<double> times;
    std::vector<bool> at_point;
    times.reserve(n_grid + seq.size());
    std::size_t p = 0;
    for (std::size_t m = 0; m <= n_grid; ++m) {
        const double tg = m < n_grid ? seq.t_start() + static_cast<double>(m) * grid_step
                                     : std::numeric_limits<double>::infinity();
        while (p < seq.size() && seq[p].t < tg) {
            times.push_back(seq[p].t);
            at_point.push_back(true);
            ++p;
        }
        if (m < n_grid) {
            times.push_back(tg);
            at_point.push_back(false);
        }
    }

    const Eigen::MatrixXd values = intensities_at_sorted_times(params, seq, times, false);
    IntensityTrace trace;
    trace.k = params.k();
    trace.samples.reserve(times.size());
    for (std::size_t r = 0; r < times.size(); ++r) {
        trace.samples.push_back({times[r], values.row(static_cast<Eigen::Index>(r)).transpose(), at_point[r]});
    }
    return trace;
}

void write_trace_csv(std::ostream& out, const IntensityTrace& trace) {
    out << "time";
    for (std::size_t j = 0; j < trace.k; ++j) {
        out << ",event_" << j;
    }
    out << '\n';
    for (const TraceSample& s : trace.samples) {
        out << format_number(s.t, 10);
        for (Eigen::Index j = 0; j < s.lambda.size(); ++j) {
            out << ',' << format_number(s.lambda[j], 10);
        }
        out << '\n';
    }
}

} // namespace jim
