#pragma once

#include "jim/types.hpp"

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace jim {

struct SimConfig {
    double t_start{0.0};
    double t_end{1.0};
    std::uint64_t seed{0};
    std::size_t max_points{10'000'000};
};

// Name of the generator behind simulate(); recorded in simulated datasets.
inline constexpr std::string_view kGeneratorName = "mt19937_64";

// Ogata thinning. Deterministic given the seed. Throws StabilityError when
// Spr(MIC) >= 1 and NumericalError when max_points is exceeded.
[[nodiscard]] PointSequence simulate(const ModelParams& params, const SimConfig& config);

} // namespace jim
