#pragma once

#include "jim/types.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <iosfwd>
#include <vector>

namespace jim {

// Row i holds lambda_j(t_i) for every event j: the left limit at the i-th
// point, i.e. the excitation of points 0..i-1 only. O(n k) recursion.
[[nodiscard]] Eigen::MatrixXd intensity_at_points(const ModelParams& params, const PointSequence& seq);

// Same quantity by direct O(n^2 k) summation over the history.
[[nodiscard]] Eigen::MatrixXd intensity_brute_force(const ModelParams& params, const PointSequence& seq);

// Intensity vector at an arbitrary time t. Points with t_m < t always
// contribute; a point exactly at t contributes only when include_at_t.
[[nodiscard]] Eigen::VectorXd intensity_at(const ModelParams& params, const PointSequence& seq, double t,
                                           bool include_at_t = false);

// Lambda_j(t_end): expected channel-j count over the observation window.
[[nodiscard]] double compensator(const ModelParams& params, const PointSequence& seq, std::size_t j);

// Lambda_j(t) for t_start <= t; only points with t_i <= t contribute.
[[nodiscard]] double compensator(const ModelParams& params, const PointSequence& seq, std::size_t j, double t);

// Row i holds Lambda_j(t_i) for every j.
[[nodiscard]] Eigen::MatrixXd compensator_at_points(const ModelParams& params, const PointSequence& seq);

// sum_i log lambda_{d_i}(t_i) - sum_j Lambda_j(t_end). Returns -infinity
// when a triggering channel has zero intensity at one of its points.
[[nodiscard]] double temporal_log_likelihood(const ModelParams& params, const PointSequence& seq);

// sum_i log f_{d_i}(x_i)
[[nodiscard]] double mark_log_likelihood(const ModelParams& params, const PointSequence& seq);

// Full numeric log-likelihood (temporal + marks). -infinity flags a zero
// intensity at a point rather than throwing.
[[nodiscard]] double log_likelihood(const ModelParams& params, const PointSequence& seq);

// Log-likelihood from precomputed point intensities (rows as returned by
// intensity_at_points or intensity_brute_force); compensators by the
// closed-form sum.
[[nodiscard]] double log_likelihood_from(const ModelParams& params, const PointSequence& seq,
                                         const Eigen::MatrixXd& point_intensities);

// Perron root of a non-negative square matrix.
[[nodiscard]] double spectral_radius(const Eigen::MatrixXd& mic);

// Stationary mean intensity (I - MIC)^{-1} eta. Throws StabilityError when
// Spr(MIC) >= 1.
[[nodiscard]] Eigen::VectorXd average_influence(const ModelParams& params);

struct InfluenceSummary {
    Eigen::VectorXd avg_influence;
    double direct_mean{0.0};    // mean of the MIC diagonal
    double indirect_mean{0.0};  // mean of the off-diagonal entries
    double spectral_radius{0.0};
};

[[nodiscard]] InfluenceSummary influence_summary(const ModelParams& params);

struct TraceSample {
    double t{0.0};
    Eigen::VectorXd lambda;
    bool at_point{false};  // sample taken at an observed point (left limit)
};

// Intensities on the grid t_start + m * step (m = 0, 1, ... while below
// t_end) merged with samples at every observed point, in time order.
struct IntensityTrace {
    std::size_t k{0};
    std::vector<TraceSample> samples;
};

[[nodiscard]] IntensityTrace intensity_trace(const ModelParams& params, const PointSequence& seq, double grid_step);

// CSV with header `time,event_0,...,event_{k-1}`, values in %.10g.
void write_trace_csv(std::ostream& out, const IntensityTrace& trace);

} // namespace jim
