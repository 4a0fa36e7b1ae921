#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

namespace jim {

// One influenced query submission: when it arrived, which event triggered
// it and how well its text matches that event.
struct MarkedPoint {
    double t{0.0};      // fractional hours
    std::size_t d{0};   // triggering event index
    double x{0.0};      // intent-match score
};

// Time-ordered marked points observed over [t_start, t_end].
// Construction validates ordering, window membership and event indices.
class PointSequence {
public:
    PointSequence(std::vector<MarkedPoint> points, double t_start, double t_end, std::size_t k);

    [[nodiscard]] std::span<const MarkedPoint> points() const noexcept { return points_; }
    [[nodiscard]] std::size_t size() const noexcept { return points_.size(); }
    [[nodiscard]] bool empty() const noexcept { return points_.empty(); }
    [[nodiscard]] const MarkedPoint& operator[](std::size_t i) const { return points_[i]; }
    [[nodiscard]] double t_start() const noexcept { return t_start_; }
    [[nodiscard]] double t_end() const noexcept { return t_end_; }
    [[nodiscard]] double window() const noexcept { return t_end_ - t_start_; }
    [[nodiscard]] std::size_t k() const noexcept { return k_; }

    // Number of points per triggering event.
    [[nodiscard]] std::vector<std::size_t> channel_counts() const;

    // Points with t < t_cut over the window [t_start, t_cut].
    [[nodiscard]] PointSequence truncated(double t_cut) const;

private:
    std::vector<MarkedPoint> points_;
    double t_start_;
    double t_end_;
    std::size_t k_;
};

// Full parameter set for k events. Rows of `mic` are influenced events,
// columns are triggering events.
struct ModelParams {
    Eigen::VectorXd eta;    // base influence, >= 0
    Eigen::VectorXd alpha;  // decay rate, > 0
    Eigen::MatrixXd mic;    // mutual-influence coefficients, >= 0
    Eigen::VectorXd rho;    // Pareto shape, > 2
    Eigen::VectorXd mu;     // Pareto scale, > 0
    Eigen::VectorXd phi;    // impact offset, >= 0
    Eigen::VectorXd psi;    // impact slope, >= 0

    [[nodiscard]] std::size_t k() const noexcept { return static_cast<std::size_t>(eta.size()); }

    // Every field set to the same per-event value; mic gets `diag` on the
    // diagonal and `off` elsewhere.
    static ModelParams uniform(std::size_t k, double eta, double alpha, double diag, double off,
                               double rho, double mu, double phi, double psi);
};

// Smallest admissible distance of rho above 2.
inline constexpr double kRhoMargin = 1e-6;

// Throws InvalidParameters on shape mismatch or any violated elementwise
// constraint. Stability (spectral radius < 1) is checked separately since
// the finite-window likelihood is defined without it.
void validate(const ModelParams& params);

// validate() plus Spr(mic) < 1; throws StabilityError on the latter.
void validate_stable(const ModelParams& params);

} // namespace jim
