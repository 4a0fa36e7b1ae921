#include "jim/nelder_mead.hpp"

#include "jim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace jim {

namespace {

struct Vertex {
    std::vector<double> x;
    double value;
    std::size_t id;  // insertion order, breaks ties between equal values
};

double sanitize(double v) {
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
}

} // namespace

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             const std::vector<double>& x0, const std::vector<double>& steps,
                             const NelderMeadOptions& options) {
    const std::size_t n = x0.size();
    if (steps.size() != n) {
        throw InvalidParameters("simplex steps must match the dimension");
    }
    NelderMeadResult result;
    std::size_t next_id = 0;
    auto evaluate = [&](const std::vector<double>& x) {
        ++result.evaluations;
        return sanitize(f(x));
    };

    if (n == 0) {
        result.x = x0;
        result.value = evaluate(x0);
        result.converged = true;
        return result;
    }

    std::vector<Vertex> simplex;
    simplex.reserve(n + 1);
    simplex.push_back({x0, evaluate(x0), next_id++});
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> x = x0;
        x[i] += steps[i];
        simplex.push_back({x, evaluate(x), next_id++});
    }

    const auto by_value = [](const Vertex& a, const Vertex& b) {
        if (a.value != b.value) {
            return a.value < b.value;
        }
        return a.id < b.id;
    };

    std::vector<double> centroid(n);
    auto along = [&](const std::vector<double>& from, double scale) {
        // centroid + scale * (from - centroid)
        std::vector<double> p(n);
        for (std::size_t i = 0; i < n; ++i) {
            p[i] = centroid[i] + scale * (from[i] - centroid[i]);
        }
        return p;
    };

    std::size_t iter = 0;
    for (; iter < options.max_iters; ++iter) {
        std::sort(simplex.begin(), simplex.end(), by_value);
        const double best = simplex.front().value;
        const double worst = simplex.back().value;
        if (options.on_progress && options.report_every > 0 && iter % options.report_every == 0) {
            options.on_progress(iter, best);
        }
        if (std::isfinite(worst) && std::abs(worst - best) <= options.tolerance * std::max(1.0, std::abs(best))) {
            result.converged = true;
            break;
        }

        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t v = 0; v < n; ++v) {
            for (std::size_t i = 0; i < n; ++i) {
                centroid[i] += simplex[v].x[i];
            }
        }
        for (double& c : centroid) {
            c /= static_cast<double>(n);
        }

        Vertex& w = simplex.back();
        std::vector<double> xr = along(w.x, -options.reflection);
        const double fr = evaluate(xr);

        if (fr < simplex.front().value) {
            std::vector<double> xe = along(xr, options.expansion);
            const double fe = evaluate(xe);
            if (fe < fr) {
                w = {std::move(xe), fe, next_id++};
            } else {
                w = {std::move(xr), fr, next_id++};
            }
            continue;
        }
        if (fr < simplex[n - 1].value) {
            w = {std::move(xr), fr, next_id++};
            continue;
        }

        bool accepted = false;
        if (fr < w.value) {
            std::vector<double> xc = along(xr, options.contraction);
            const double fc = evaluate(xc);
            if (fc <= fr) {
                w = {std::move(xc), fc, next_id++};
                accepted = true;
            }
        } else {
            std::vector<double> xc = along(w.x, options.contraction);
            const double fc = evaluate(xc);
            if (fc < w.value) {
                w = {std::move(xc), fc, next_id++};
                accepted = true;
            }
        }
        if (!accepted) {
            const std::vector<double> anchor = simplex.front().x;
            for (std::size_t v = 1; v <= n; ++v) {
                for (std::size_t i = 0; i < n; ++i) {
                    simplex[v].x[i] = anchor[i] + options.shrink * (simplex[v].x[i] - anchor[i]);
                }
                simplex[v].value = evaluate(simplex[v].x);
                simplex[v].id = next_id++;
            }
        }
    }

    std::sort(simplex.begin(), simplex.end(), by_value);
    result.x = simplex.front().x;
    result.value = simplex.front().value;
    result.iterations = iter;
    return result;
}

} // namespace jim
