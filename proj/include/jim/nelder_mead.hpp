#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace jim {

struct NelderMeadOptions {
    std::size_t max_iters{20000};
    double tolerance{1e-8};  // relative spread of simplex values
    double reflection{1.0};
    double expansion{2.0};
    double contraction{0.5};
    double shrink{0.5};
    // Called with (iteration, best value) every `report_every` iterations.
    std::function<void(std::size_t, double)> on_progress{};
    std::size_t report_every{100};
};

struct NelderMeadResult {
    std::vector<double> x;
    double value{0.0};
    std::size_t iterations{0};
    std::size_t evaluations{0};
    bool converged{false};
};

// Minimizes f starting from the simplex {x0, x0 + steps[i] e_i}. Non-finite
// values are treated as +infinity. Vertices with equal values keep their
// insertion order.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             const std::vector<double>& x0, const std::vector<double>& steps,
                             const NelderMeadOptions& options = {});

} // namespace jim
