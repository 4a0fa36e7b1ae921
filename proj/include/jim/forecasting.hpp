#pragma once

#include "jim/types.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace jim {

enum class ChannelKind { kEvent, kQuery };

// Counts per (bin, channel) on contiguous bins [origin + b w, origin + (b+1) w).
struct ForecastFrame {
    double bin_width{1.0};
    double origin{0.0};
    Eigen::MatrixXd series;  // bins x channels
    ChannelKind kind{ChannelKind::kEvent};
    std::vector<std::string> labels;

    [[nodiscard]] std::size_t bins() const noexcept { return static_cast<std::size_t>(series.rows()); }
    [[nodiscard]] std::size_t channels() const noexcept { return static_cast<std::size_t>(series.cols()); }
    [[nodiscard]] double bin_start(std::size_t b) const noexcept { return origin + static_cast<double>(b) * bin_width; }
};

[[nodiscard]] std::size_t bin_count_for(const PointSequence& seq, double bin_width);

// Event-level frame; labels default to "0".."k-1".
[[nodiscard]] ForecastFrame bin_counts(const PointSequence& seq, double bin_width,
                                       std::vector<std::string> labels = {});

// Query-level frame over `vocabulary`; points whose text is outside the
// vocabulary are not counted.
[[nodiscard]] ForecastFrame bin_query_counts(const PointSequence& seq, const std::vector<std::string>& texts,
                                             double bin_width, const std::vector<std::string>& vocabulary);

// Distinct texts of points with t < t_cut, sorted lexicographically. With
// top_n > 0 only the most frequent top_n are kept (ties lexicographic).
[[nodiscard]] std::vector<std::string> query_vocabulary(const PointSequence& seq, const std::vector<std::string>& texts,
                                                        double t_cut, std::size_t top_n = 0);

// lambda_j(bin_end_time) including the jump of points at or before it.
[[nodiscard]] Eigen::VectorXd jim_scores(const ModelParams& params, const PointSequence& seq, double bin_end_time);

// Naive frequency: row `bin` predicts bin + 1.
[[nodiscard]] Eigen::VectorXd baseline_nf(const ForecastFrame& frame, std::size_t bin);

// Per-channel OLS AR(p) with intercept, optionally on first differences.
class ArForecaster {
public:
    static ArForecaster fit(const ForecastFrame& frame, std::size_t train_bins, std::size_t order, bool differenced);

    // Prediction for current_bin + 1 from rows <= current_bin, clamped at 0.
    [[nodiscard]] Eigen::VectorXd predict(const ForecastFrame& frame, std::size_t current_bin) const;

    // coefficients.col(c) = [intercept, lag1, ..., lagp] of channel c.
    [[nodiscard]] const Eigen::MatrixXd& coefficients() const noexcept { return coef_; }

private:
    std::size_t order_{0};
    bool differenced_{false};
    Eigen::MatrixXd coef_;
};

// Joint multivariate least squares VAR(p) with intercept.
class VarForecaster {
public:
    static VarForecaster fit(const ForecastFrame& frame, std::size_t train_bins, std::size_t order);
    [[nodiscard]] Eigen::VectorXd predict(const ForecastFrame& frame, std::size_t current_bin) const;

    // (1 + k p) x k: row 0 intercepts, then lag blocks.
    [[nodiscard]] const Eigen::MatrixXd& coefficients() const noexcept { return coef_; }

private:
    std::size_t order_{0};
    Eigen::MatrixXd coef_;
};

// Predictions for target bins train_bins .. bins()-1.
[[nodiscard]] std::vector<Eigen::VectorXd> baseline_ar(const ForecastFrame& frame, std::size_t train_bins,
                                                       std::size_t order, bool differenced);
[[nodiscard]] std::vector<Eigen::VectorXd> baseline_var(const ForecastFrame& frame, std::size_t train_bins,
                                                        std::size_t order);

// score(q) = lambda_{e(q)}(t) * share(q); share is q's decayed occurrence
// count (half-life in hours) over the decayed total of its event. Points
// with t_m <= t count.
[[nodiscard]] std::map<std::string, double> query_level_scores(const ModelParams& params, const PointSequence& seq,
                                                               const std::vector<std::string>& texts, double t,
                                                               double half_life = 24.0);

enum class Method { kNf, kAr, kArd, kVar, kIimApprox, kJim, kJimG, kOracle };

[[nodiscard]] std::string_view method_name(Method method);
[[nodiscard]] std::optional<Method> parse_method(std::string_view name);
[[nodiscard]] bool is_model_method(Method method);

struct ForecastConfig {
    double bin_width{1.0};
    double split_fraction{0.8};
    std::size_t ar_order{3};
    double rbo_p{0.9};
    double half_life{24.0};
    std::size_t query_top_n{0};
};

// First bin of the test span.
[[nodiscard]] std::size_t split_bin(std::size_t bins, double split_fraction);

// One method's per-bin predictions for one task. Target bin b is predicted
// from data before its start.
struct PredictionRun {
    Method method{Method::kNf};
    int task{1};
    std::vector<std::string> labels;
    std::vector<std::size_t> target_bins;
    std::vector<Eigen::VectorXd> predicted;
    std::vector<Eigen::VectorXd> actual;
};

struct TaskData {
    const PointSequence* sequence{nullptr};
    const std::vector<std::string>* texts{nullptr};  // required for tasks 3-5
    std::vector<std::string> event_labels;           // optional
    std::map<Method, ModelParams> models;            // fitted on the training span
    ForecastConfig config{};
};

// Tasks 1-4. Tasks 1/2 are event level, 3/4 query level; the two members of
// each pair share predictions and differ in how they are scored.
[[nodiscard]] PredictionRun run_task(int task, Method method, const TaskData& data);

// Reciprocal rank of `actual` among candidates whose first word equals
// `prefix`, ranked by score descending then lexicographically. 0 when
// `actual` is not a candidate.
[[nodiscard]] double qac_rank(const std::map<std::string, double>& scores, std::string_view prefix,
                              std::string_view actual);

[[nodiscard]] std::string first_word(std::string_view text);

struct QacRun {
    Method method{Method::kNf};
    std::vector<std::size_t> bins;
    std::vector<std::string> queries;
    std::vector<double> reciprocal_ranks;
};

// Task 5 over every test-span query occurrence.
[[nodiscard]] QacRun run_qac(Method method, const TaskData& data);

// Per-bin metric values of a run: task 1/3 "accuracy" (0/1 hits), task 2/4
// "ndcg", "rbo" (extrapolated) and "rbo_base".
struct TaskScores {
    int task{1};
    Method method{Method::kNf};
    std::map<std::string, std::vector<double>> per_bin;
    std::vector<bool> informative;  // actual counts not all zero
};

[[nodiscard]] TaskScores score_run(const PredictionRun& run, double rbo_p);

struct MetricRecord {
    int task{0};
    std::string method;
    std::string metric;
    double value{0.0};
    std::size_t n_bins{0};
};

[[nodiscard]] std::vector<MetricRecord> aggregate(const TaskScores& scores);

void write_predictions_csv_header(std::ostream& out);
void write_predictions_csv(std::ostream& out, const PredictionRun& run);
void write_qac_csv_header(std::ostream& out);
void write_qac_csv(std::ostream& out, const QacRun& run);

// Quotes a CSV field when it contains a comma, quote or newline.
[[nodiscard]] std::string csv_field(std::string_view s);

// %.{digits}g
[[nodiscard]] std::string format_number(double v, int digits);

} // namespace jim
