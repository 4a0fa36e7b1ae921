#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace jim {

// Seedable 64-bit source whose derived draws do not depend on the standard
// library's distribution implementations.
class Random {
public:
    explicit Random(std::uint64_t seed) : engine_(seed) {}

    // Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform on (0, 1].
    double uniform_open_low() { return 1.0 - uniform(); }

    double exponential(double rate) { return -std::log(uniform_open_low()) / rate; }

    std::uint64_t bits() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

} // namespace jim
