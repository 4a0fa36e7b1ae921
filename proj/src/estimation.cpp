#include "jim/estimation.hpp"

#include "jim/errors.hpp"
#include "jim/forecasting.hpp"
#include "jim/intensity.hpp"
#include "jim/kernels.hpp"
#include "jim/nelder_mead.hpp"
#include "jim/random.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>

namespace jim {

namespace {

constexpr double kRhoMin = 2.0 + 2.0 * kRhoMargin;
constexpr double kBarrierWeight = 1e6;
constexpr double kInitialStep = 0.5;
constexpr std::size_t kProfileGrid = 241;

double floored_log(double v) {
    return std::log(std::max(v, kTransformFloor));
}

enum class Slot { kEta, kEtaShared, kAlpha, kAlphaShared, kMic, kRho, kMu, kPhi, kPsi };

struct Entry {
    Slot slot;
    std::size_t row{0};
    std::size_t col{0};
};

// Maps the optimizer's free vector onto a ModelParams whose remaining
// entries stay at their pinned values.
class Layout {
public:
    Layout(std::vector<std::size_t> active, const FitConstraints& c, bool two_stage) : active_(std::move(active)) {
        if (c.shared_eta) {
            entries_.push_back({Slot::kEtaShared});
        } else {
            for (std::size_t j : active_) entries_.push_back({Slot::kEta, j});
        }
        if (c.shared_alpha) {
            entries_.push_back({Slot::kAlphaShared});
        } else {
            for (std::size_t j : active_) entries_.push_back({Slot::kAlpha, j});
        }
        for (std::size_t j : active_) {
            for (std::size_t i : active_) {
                if (!c.diagonal_mic || i == j) {
                    entries_.push_back({Slot::kMic, j, i});
                }
            }
        }
        if (!two_stage) {
            for (std::size_t j : active_) entries_.push_back({Slot::kRho, j});
            for (std::size_t j : active_) entries_.push_back({Slot::kMu, j});
        }
        if (!c.identity_impact) {
            for (std::size_t j : active_) entries_.push_back({Slot::kPhi, j});
            for (std::size_t j : active_) entries_.push_back({Slot::kPsi, j});
        }
    }

    [[nodiscard]] std::size_t size() const noexcept { return entries_.size(); }

    [[nodiscard]] std::vector<double> extract(const ModelParams& p) const {
        std::vector<double> z;
        z.reserve(entries_.size());
        for (const Entry& e : entries_) {
            switch (e.slot) {
            case Slot::kEta: z.push_back(floored_log(p.eta[e.row])); break;
            case Slot::kEtaShared: z.push_back(floored_log(p.eta[active_.front()])); break;
            case Slot::kAlpha: z.push_back(floored_log(p.alpha[e.row])); break;
            case Slot::kAlphaShared: z.push_back(floored_log(p.alpha[0])); break;
            case Slot::kMic: z.push_back(floored_log(p.mic(e.row, e.col))); break;
            case Slot::kRho: z.push_back(floored_log(p.rho[e.row] - 2.0)); break;
            case Slot::kMu: z.push_back(floored_log(p.mu[e.row])); break;
            case Slot::kPhi: z.push_back(floored_log(p.phi[e.row])); break;
            case Slot::kPsi: z.push_back(floored_log(p.psi[e.row])); break;
            }
        }
        return z;
    }

    void apply(const std::vector<double>& z, ModelParams& p) const {
        for (std::size_t n = 0; n < entries_.size(); ++n) {
            const Entry& e = entries_[n];
            const double v = std::exp(z[n]);
            switch (e.slot) {
            case Slot::kEta: p.eta[e.row] = v; break;
            case Slot::kEtaShared: p.eta.setConstant(v); break;
            case Slot::kAlpha: p.alpha[e.row] = v; break;
            case Slot::kAlphaShared: p.alpha.setConstant(v); break;
            case Slot::kMic: p.mic(e.row, e.col) = v; break;
            case Slot::kRho: p.rho[e.row] = 2.0 + v; break;
            case Slot::kMu: p.mu[e.row] = v; break;
            case Slot::kPhi: p.phi[e.row] = v; break;
            case Slot::kPsi: p.psi[e.row] = v; break;
            }
        }
    }

private:
    std::vector<std::size_t> active_;
    std::vector<Entry> entries_;
};

bool params_valid(const ModelParams& p) {
    try {
        validate(p);
        return true;
    } catch (const InvalidParameters&) {
        return false;
    }
}

// Profile log-likelihood of the Pareto marks at scale mu, with the shape at
// its clamped conditional optimum. Returns (value, rho).
std::pair<double, double> profile_marks(std::span<const double> marks, double mu) {
    const double n = static_cast<double>(marks.size());
    double sum_log1p = 0.0;
    double sum_log = 0.0;
    for (double x : marks) {
        sum_log1p += std::log1p(x / mu);
        sum_log += std::log(x + mu);
    }
    double rho = sum_log1p > 0.0 ? n / sum_log1p : kRhoMax;
    rho = std::clamp(rho, kRhoMin, kRhoMax);
    // n log rho + n rho log mu - (rho + 1) sum log(x + mu)
    const double value = n * std::log(rho) - rho * sum_log1p - sum_log;
    return {value, rho};
}

// Pulls MIC strictly below the stability margin by uniform scaling.
void project_stable(ModelParams& p, double margin) {
    const double spr = spectral_radius(p.mic);
    if (spr >= margin) {
        p.mic *= margin * (1.0 - 1e-6) / spr;
    }
}

} // namespace

std::pair<double, double> fit_marks(std::span<const double> marks) {
    if (marks.size() < 2) {
        throw InsufficientData("mark fit needs at least two marks");
    }
    for (double x : marks) {
        if (!std::isfinite(x) || x < 0.0) {
            throw InputError("marks must be finite and non-negative");
        }
    }
    const double lo = std::log(kMuMin);
    const double hi = std::log(kMuMax);
    const double step = (hi - lo) / static_cast<double>(kProfileGrid - 1);
    std::size_t best = 0;
    double best_value = -std::numeric_limits<double>::infinity();
    for (std::size_t g = 0; g < kProfileGrid; ++g) {
        const double value = profile_marks(marks, std::exp(lo + step * static_cast<double>(g))).first;
        if (value > best_value) {
            best_value = value;
            best = g;
        }
    }
    // Golden-section refinement around the best grid cell.
    double a = std::max(lo, lo + step * (static_cast<double>(best) - 1.0));
    double b = std::min(hi, lo + step * (static_cast<double>(best) + 1.0));
    const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - ratio * (b - a);
    double d = a + ratio * (b - a);
    double fc = profile_marks(marks, std::exp(c)).first;
    double fd = profile_marks(marks, std::exp(d)).first;
    while (b - a > 1e-12) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = profile_marks(marks, std::exp(c)).first;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = profile_marks(marks, std::exp(d)).first;
        }
    }
    double log_mu = 0.5 * (a + b);
    auto [value, rho] = profile_marks(marks, std::exp(log_mu));
    const double grid_mu = lo + step * static_cast<double>(best);
    if (best_value > value) {
        log_mu = grid_mu;
        rho = profile_marks(marks, std::exp(log_mu)).second;
    }
    const double mu = std::clamp(std::exp(log_mu), kMuMin, kMuMax);
    return {rho, mu};
}

std::pair<double, double> fit_marks(const PointSequence& seq, std::size_t j) {
    if (j >= seq.k()) {
        throw InvalidParameters("event index out of range");
    }
    std::vector<double> marks;
    for (const MarkedPoint& p : seq.points()) {
        if (p.d == j) {
            marks.push_back(p.x);
        }
    }
    if (marks.size() < 2) {
        throw InsufficientData("channel " + std::to_string(j) + " has fewer than two points");
    }
    return fit_marks(marks);
}

std::vector<double> flatten(const ModelParams& params) {
    std::vector<double> v;
    const std::size_t k = params.k();
    v.reserve(6 * k + k * k);
    for (std::size_t j = 0; j < k; ++j) v.push_back(params.eta[j]);
    for (std::size_t j = 0; j < k; ++j) v.push_back(params.alpha[j]);
    for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t i = 0; i < k; ++i) v.push_back(params.mic(j, i));
    }
    for (std::size_t j = 0; j < k; ++j) v.push_back(params.rho[j]);
    for (std::size_t j = 0; j < k; ++j) v.push_back(params.mu[j]);
    for (std::size_t j = 0; j < k; ++j) v.push_back(params.phi[j]);
    for (std::size_t j = 0; j < k; ++j) v.push_back(params.psi[j]);
    return v;
}

std::vector<double> transform_to_unconstrained(const ModelParams& params) {
    validate(params);
    std::vector<double> z = flatten(params);
    const std::size_t k = params.k();
    const std::size_t rho_begin = 2 * k + k * k;
    for (std::size_t n = 0; n < z.size(); ++n) {
        const bool is_rho = n >= rho_begin && n < rho_begin + k;
        z[n] = floored_log(is_rho ? z[n] - 2.0 : z[n]);
    }
    return z;
}

ModelParams transform_from_unconstrained(std::span<const double> z, std::size_t k) {
    if (z.size() != 6 * k + k * k) {
        throw InvalidParameters("unconstrained vector has the wrong length");
    }
    const auto n = static_cast<Eigen::Index>(k);
    ModelParams p;
    p.eta.resize(n);
    p.alpha.resize(n);
    p.mic.resize(n, n);
    p.rho.resize(n);
    p.mu.resize(n);
    p.phi.resize(n);
    p.psi.resize(n);
    std::size_t at = 0;
    for (std::size_t j = 0; j < k; ++j) p.eta[j] = std::exp(z[at++]);
    for (std::size_t j = 0; j < k; ++j) p.alpha[j] = std::exp(z[at++]);
    for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t i = 0; i < k; ++i) p.mic(j, i) = std::exp(z[at++]);
    }
    for (std::size_t j = 0; j < k; ++j) p.rho[j] = 2.0 + std::exp(z[at++]);
    for (std::size_t j = 0; j < k; ++j) p.mu[j] = std::exp(z[at++]);
    for (std::size_t j = 0; j < k; ++j) p.phi[j] = std::exp(z[at++]);
    for (std::size_t j = 0; j < k; ++j) p.psi[j] = std::exp(z[at++]);
    return p;
}

double regularization_penalty(std::span<const double> v, double weight) {
    double sq = 0.0;
    for (double x : v) {
        sq += x * x;
    }
    return weight * std::sqrt(sq);
}

double stability_barrier(const ModelParams& params, double margin) {
    const double excess = spectral_radius(params.mic) - margin;
    return excess > 0.0 ? kBarrierWeight * excess * excess : 0.0;
}

double penalized_objective(const ModelParams& params, const PointSequence& seq, const FitConfig& config) {
    const double ll = log_likelihood(params, seq);
    if (!std::isfinite(ll)) {
        return -std::numeric_limits<double>::infinity();
    }
    return ll - regularization_penalty(flatten(params), config.reg_weight) -
           stability_barrier(params, config.stability_margin);
}

FitResult fit(const PointSequence& seq, const FitConfig& config) {
    if (!(config.tolerance > 0.0)) {
        throw InputError("fit tolerance must be positive");
    }
    if (!(config.stability_margin > 0.0 && config.stability_margin < 1.0)) {
        throw InputError("stability margin must lie in (0, 1)");
    }
    if (seq.size() < 2) {
        throw InsufficientData("fit needs at least two points");
    }
    const std::size_t k = seq.k();
    const std::vector<std::size_t> counts = seq.channel_counts();
    const double window = seq.window();
    const FitConstraints& cons = config.constraints;

    std::vector<std::size_t> active;
    for (std::size_t j = 0; j < k; ++j) {
        if (counts[j] >= 2) {
            active.push_back(j);
        }
    }
    if (active.empty()) {
        throw InsufficientData("no channel has two or more points");
    }

    // Initialization; pinned channels keep these values throughout.
    ModelParams init = ModelParams::uniform(k, 0.0, 1.0, 0.3, 0.01, 3.0, 1.0, 1.0, 0.1);
    std::vector<bool> is_active(k, false);
    for (std::size_t j : active) is_active[j] = true;
    double active_total = 0.0;
    for (std::size_t j : active) active_total += static_cast<double>(counts[j]);
    for (std::size_t j = 0; j < k; ++j) {
        if (is_active[j]) {
            init.eta[j] = cons.shared_eta ? 0.5 * active_total / static_cast<double>(active.size()) / window
                                          : 0.5 * static_cast<double>(counts[j]) / window;
            const auto [rho, mu] = fit_marks(seq, j);
            init.rho[j] = rho;
            init.mu[j] = mu;
        } else {
            init.eta[j] = static_cast<double>(counts[j]) / window;
            double mean = 0.0;
            for (const MarkedPoint& p : seq.points()) {
                if (p.d == j) mean += p.x;
            }
            mean = counts[j] > 0 ? mean / static_cast<double>(counts[j]) : 0.0;
            init.mu[j] = mean > 0.0 ? 2.0 * mean : 1.0;
            for (std::size_t i = 0; i < k; ++i) {
                init.mic(j, i) = 0.01;
                init.mic(i, j) = 0.01;
            }
        }
    }
    if (cons.shared_eta) {
        const double shared = init.eta[active.front()];
        init.eta.setConstant(shared);
    }
    if (cons.diagonal_mic) {
        for (std::size_t j = 0; j < k; ++j) {
            for (std::size_t i = 0; i < k; ++i) {
                if (i != j) init.mic(j, i) = 0.0;
            }
        }
    }
    if (cons.identity_impact) {
        init.phi.setZero();
        init.psi.setOnes();
    }
    project_stable(init, config.stability_margin);

    const Layout layout(active, cons, config.two_stage);
    const double frozen_marks = config.two_stage ? mark_log_likelihood(init, seq) : 0.0;

    ModelParams scratch = init;
    auto objective_at = [&](const ModelParams& p) {
        if (!params_valid(p)) {
            return -std::numeric_limits<double>::infinity();
        }
        const double temporal = temporal_log_likelihood(p, seq);
        if (!std::isfinite(temporal)) {
            return -std::numeric_limits<double>::infinity();
        }
        const double marks = config.two_stage ? frozen_marks : mark_log_likelihood(p, seq);
        return temporal + marks - regularization_penalty(flatten(p), config.reg_weight) -
               stability_barrier(p, config.stability_margin);
    };
    auto minimize_me = [&](const std::vector<double>& z) {
        layout.apply(z, scratch);
        return -objective_at(scratch);
    };

    FitResult result;
    std::size_t total_iters = 0;
    NelderMeadOptions options;
    options.max_iters = config.max_iters;
    options.tolerance = config.tolerance;
    options.on_progress = [&](std::size_t it, double best) { result.trace.emplace_back(total_iters + it, -best); };

    const double init_objective = objective_at(init);
    std::vector<double> best_z = layout.extract(init);
    double best_value = -init_objective;
    bool converged = false;

    Random rng(config.seed);
    for (std::size_t run = 0; run <= config.restarts; ++run) {
        std::vector<double> steps(layout.size(), kInitialStep);
        if (run > 0) {
            for (double& s : steps) {
                const double magnitude = kInitialStep * (0.5 + rng.uniform());
                s = rng.uniform() < 0.5 ? -magnitude : magnitude;
            }
        }
        const NelderMeadResult nm = nelder_mead(minimize_me, best_z, steps, options);
        total_iters += nm.iterations;
        converged = nm.converged;
        if (nm.value <= best_value) {
            best_value = nm.value;
            best_z = nm.x;
        }
    }

    ModelParams best = init;
    layout.apply(best_z, best);
    project_stable(best, config.stability_margin);
    double best_objective = objective_at(best);
    if (!(best_objective >= init_objective)) {
        best = init;
        best_objective = init_objective;
    }

    result.params = best;
    result.objective = best_objective;
    result.iterations = total_iters;
    result.converged = converged;
    result.trace.emplace_back(total_iters, best_objective);
    return result;
}

void write_model_json(std::ostream& out, const FitResult& result) {
    const ModelParams& p = result.params;
    const std::size_t k = p.k();
    auto number = [](double v) { return std::isfinite(v) ? format_number(v, 12) : std::string("null"); };
    auto vec = [&](const Eigen::VectorXd& v) {
        std::string s = "[";
        for (Eigen::Index j = 0; j < v.size(); ++j) {
            if (j > 0) s += ", ";
            s += number(v[j]);
        }
        return s + "]";
    };
    out << "{\n";
    out << "  \"k\": " << k << ",\n";
    out << "  \"eta\": " << vec(p.eta) << ",\n";
    out << "  \"alpha\": " << vec(p.alpha) << ",\n";
    out << "  \"mic\": [";
    for (std::size_t j = 0; j < k; ++j) {
        out << (j > 0 ? ", " : "") << vec(p.mic.row(static_cast<Eigen::Index>(j)).transpose());
    }
    out << "],\n";
    out << "  \"rho\": " << vec(p.rho) << ",\n";
    out << "  \"mu\": " << vec(p.mu) << ",\n";
    out << "  \"phi\": " << vec(p.phi) << ",\n";
    out << "  \"psi\": " << vec(p.psi) << ",\n";
    out << "  \"objective\": " << number(result.objective) << ",\n";
    out << "  \"converged\": " << (result.converged ? "true" : "false") << ",\n";
    out << "  \"iterations\": " << result.iterations << "\n";
    out << "}\n";
}

FitResult read_model_json(std::istream& in) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("model file is not valid JSON: ") + e.what());
    }
    try {
        const auto k = doc.at("k").get<std::size_t>();
        const auto n = static_cast<Eigen::Index>(k);
        auto vec = [&](const char* key) {
            const auto values = doc.at(key).get<std::vector<double>>();
            if (values.size() != k) {
                throw InputError(std::string("model field '") + key + "' must have k entries");
            }
            return Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(values.data(), n));
        };
        FitResult r;
        r.params.eta = vec("eta");
        r.params.alpha = vec("alpha");
        r.params.rho = vec("rho");
        r.params.mu = vec("mu");
        r.params.phi = vec("phi");
        r.params.psi = vec("psi");
        const auto rows = doc.at("mic").get<std::vector<std::vector<double>>>();
        if (rows.size() != k) {
            throw InputError("model field 'mic' must have k rows");
        }
        r.params.mic.resize(n, n);
        for (std::size_t j = 0; j < k; ++j) {
            if (rows[j].size() != k) {
                throw InputError("model field 'mic' must be k x k");
            }
            for (std::size_t i = 0; i < k; ++i) r.params.mic(j, i) = rows[j][i];
        }
        const auto& obj = doc.value("objective", nlohmann::json());
        r.objective = obj.is_number() ? obj.get<double>() : -std::numeric_limits<double>::infinity();
        r.converged = doc.value("converged", false);
        r.iterations = doc.value("iterations", std::size_t{0});
        validate(r.params);
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("model file is malformed: ") + e.what());
    } catch (const InvalidParameters& e) {
        throw InputError(std::string("model file holds invalid parameters: ") + e.what());
    }
}

} // namespace jim
