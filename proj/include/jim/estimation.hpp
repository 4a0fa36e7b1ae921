#pragma once

#include "jim/types.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

namespace jim {

// Restrictions that turn the full model into one of its baselines.
struct FitConstraints {
    bool shared_alpha{false};     // JIM-G: a single decay rate
    bool shared_eta{false};
    bool diagonal_mic{false};     // no indirect influence
    bool identity_impact{false};  // phi = 0, g proportional to x

    static FitConstraints jim() { return {}; }
    static FitConstraints jim_g() { return {.shared_alpha = true}; }
    // Independent-influence approximation: shared eta and alpha, diagonal
    // MIC, impact linear in the mark.
    static FitConstraints iim_approx() {
        return {.shared_alpha = true, .shared_eta = true, .diagonal_mic = true, .identity_impact = true};
    }
};

struct FitConfig {
    std::size_t max_iters{20000};
    double tolerance{1e-8};
    std::size_t restarts{3};
    double reg_weight{1.0};
    double stability_margin{0.99};
    bool two_stage{true};
    std::uint64_t seed{0};
    FitConstraints constraints{};
};

struct FitResult {
    ModelParams params;
    double objective{0.0};
    std::size_t iterations{0};
    bool converged{false};
    std::vector<std::pair<std::size_t, double>> trace;
};

// Maximizes the L2-penalized log-likelihood with Nelder-Mead in a
// log-transformed space, followed by `restarts` jittered restarts from the
// best point. Channels with fewer than two points are pinned.
[[nodiscard]] FitResult fit(const PointSequence& seq, const FitConfig& config);

// Stage-one Pareto MLE (rho, mu) for the marks of channel j.
[[nodiscard]] std::pair<double, double> fit_marks(const PointSequence& seq, std::size_t j);
[[nodiscard]] std::pair<double, double> fit_marks(std::span<const double> marks);

inline constexpr double kRhoMax = 500.0;
inline constexpr double kMuMin = 1e-6;
inline constexpr double kMuMax = 1e6;
inline constexpr double kTransformFloor = 1e-10;

// Flattened natural-space parameters in the order eta, alpha, mic
// (row-major), rho, mu, phi, psi.
[[nodiscard]] std::vector<double> flatten(const ModelParams& params);

// Log transform of every slot (rho through log(rho - 2)); values below
// kTransformFloor are floored first.
[[nodiscard]] std::vector<double> transform_to_unconstrained(const ModelParams& params);
[[nodiscard]] ModelParams transform_from_unconstrained(std::span<const double> z, std::size_t k);

// weight * ||v||_2
[[nodiscard]] double regularization_penalty(std::span<const double> v, double weight);

// Quadratic barrier 1e6 (Spr - margin)^2 when Spr exceeds margin, else 0.
[[nodiscard]] double stability_barrier(const ModelParams& params, double margin);

// log L - reg_weight ||Theta|| - barrier. -infinity on likelihood failure.
[[nodiscard]] double penalized_objective(const ModelParams& params, const PointSequence& seq, const FitConfig& config);

// Model file (JSON, 12 significant digits).
void write_model_json(std::ostream& out, const FitResult& result);
[[nodiscard]] FitResult read_model_json(std::istream& in);

} // namespace jim
