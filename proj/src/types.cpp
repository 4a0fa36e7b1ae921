#include "jim/types.hpp"

#include "jim/errors.hpp"
#include "jim/intensity.hpp"

#include <cmath>
#include <string>

namespace jim {

PointSequence::PointSequence(std::vector<MarkedPoint> points, double t_start, double t_end, std::size_t k)
    : points_(std::move(points)), t_start_(t_start), t_end_(t_end), k_(k) {
    if (k_ == 0) {
        throw InvalidSequence("event count k must be positive");
    }
    if (!std::isfinite(t_start_) || !std::isfinite(t_end_) || !(t_start_ < t_end_)) {
        throw InvalidSequence("observation window requires t_start < t_end");
    }
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const MarkedPoint& p = points_[i];
        if (!std::isfinite(p.t) || p.t <= 0.0) {
            throw InvalidSequence("point " + std::to_string(i) + " has non-positive time");
        }
        if (p.t < t_start_ || p.t > t_end_) {
            throw InvalidSequence("point " + std::to_string(i) + " lies outside the observation window");
        }
        if (i > 0 && !(p.t > points_[i - 1].t)) {
            throw InvalidSequence("points are not strictly increasing in time at index " + std::to_string(i));
        }
        if (p.d >= k_) {
            throw InvalidSequence("point " + std::to_string(i) + " has event index out of range");
        }
        if (!std::isfinite(p.x) || p.x < 0.0) {
            throw InvalidSequence("point " + std::to_string(i) + " has a negative mark");
        }
    }
}

std::vector<std::size_t> PointSequence::channel_counts() const {
    std::vector<std::size_t> counts(k_, 0);
    for (const MarkedPoint& p : points_) {
        ++counts[p.d];
    }
    return counts;
}

PointSequence PointSequence::truncated(double t_cut) const {
    std::vector<MarkedPoint> kept;
    for (const MarkedPoint& p : points_) {
        if (p.t >= t_cut) {
            break;
        }
        kept.push_back(p);
    }
    return PointSequence(std::move(kept), t_start_, t_cut, k_);
}

ModelParams ModelParams::uniform(std::size_t k, double eta, double alpha, double diag, double off, double rho,
                                 double mu, double phi, double psi) {
    const auto n = static_cast<Eigen::Index>(k);
    ModelParams p;
    p.eta = Eigen::VectorXd::Constant(n, eta);
    p.alpha = Eigen::VectorXd::Constant(n, alpha);
    p.mic = Eigen::MatrixXd::Constant(n, n, off);
    p.mic.diagonal().setConstant(diag);
    p.rho = Eigen::VectorXd::Constant(n, rho);
    p.mu = Eigen::VectorXd::Constant(n, mu);
    p.phi = Eigen::VectorXd::Constant(n, phi);
    p.psi = Eigen::VectorXd::Constant(n, psi);
    return p;
}

void validate(const ModelParams& params) {
    const Eigen::Index k = params.eta.size();
    if (k == 0) {
        throw InvalidParameters("model needs at least one event");
    }
    if (params.alpha.size() != k || params.rho.size() != k || params.mu.size() != k || params.phi.size() != k ||
        params.psi.size() != k || params.mic.rows() != k || params.mic.cols() != k) {
        throw InvalidParameters("parameter blocks disagree on the event count");
    }
    const auto fail = [](const std::string& what, Eigen::Index j) {
        throw InvalidParameters(what + " violated for event " + std::to_string(j));
    };
    for (Eigen::Index j = 0; j < k; ++j) {
        if (!std::isfinite(params.eta[j]) || params.eta[j] < 0.0) fail("eta >= 0", j);
        if (!std::isfinite(params.alpha[j]) || params.alpha[j] <= 0.0) fail("alpha > 0", j);
        if (!std::isfinite(params.rho[j]) || !(params.rho[j] - 2.0 > kRhoMargin)) fail("rho > 2", j);
        if (!std::isfinite(params.mu[j]) || params.mu[j] <= 0.0) fail("mu > 0", j);
        if (!std::isfinite(params.phi[j]) || params.phi[j] < 0.0) fail("phi >= 0", j);
        if (!std::isfinite(params.psi[j]) || params.psi[j] < 0.0) fail("psi >= 0", j);
        if (!(params.phi[j] + params.psi[j] > 0.0)) fail("phi + psi > 0", j);
        for (Eigen::Index i = 0; i < k; ++i) {
            if (!std::isfinite(params.mic(j, i)) || params.mic(j, i) < 0.0) fail("mic >= 0", j);
        }
    }
}

void validate_stable(const ModelParams& params) {
    validate(params);
    const double spr = spectral_radius(params.mic);
    if (!(spr < 1.0)) {
        throw StabilityError("spectral radius of MIC is " + std::to_string(spr) + ", must be below 1");
    }
}

} // namespace jim
