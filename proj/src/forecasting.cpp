#include "jim/forecasting.hpp"

#include "jim/errors.hpp"
#include "jim/intensity.hpp"
#include "jim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <unordered_map>

namespace jim {

namespace {

constexpr double kRidge = 1e-6;

std::size_t bin_of(double t, const ForecastFrame& frame) {
    const double raw = std::floor((t - frame.origin) / frame.bin_width);
    const auto b = raw < 0.0 ? std::size_t{0} : static_cast<std::size_t>(raw);
    return std::min(b, frame.bins() - 1);
}

// Least squares with a ridge fallback when the design is rank deficient.
Eigen::MatrixXd solve_least_squares(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
    if (qr.rank() == x.cols()) {
        return qr.solve(y);
    }
    Eigen::MatrixXd gram = x.transpose() * x;
    gram.diagonal().array() += kRidge;
    return gram.ldlt().solve(x.transpose() * y);
}

std::vector<std::string> default_labels(std::size_t k) {
    std::vector<std::string> labels;
    for (std::size_t j = 0; j < k; ++j) {
        labels.push_back(std::to_string(j));
    }
    return labels;
}

Eigen::VectorXd clamp_nonnegative(Eigen::VectorXd v) {
    return v.cwiseMax(0.0);
}

std::size_t argmax_first(const Eigen::VectorXd& v) {
    std::size_t best = 0;
    for (Eigen::Index i = 1; i < v.size(); ++i) {
        if (v(i) > v(static_cast<Eigen::Index>(best))) {
            best = static_cast<std::size_t>(i);
        }
    }
    return best;
}

const ModelParams& model_for(Method method, const TaskData& data) {
    const auto it = data.models.find(method);
    if (it == data.models.end()) {
        throw InputError("no fitted model supplied for method " + std::string(method_name(method)));
    }
    if (it->second.k() != data.sequence->k()) {
        throw InputError("model and dataset disagree on the number of events");
    }
    return it->second;
}

const std::vector<std::string>& texts_for(const TaskData& data) {
    if (data.texts == nullptr || data.texts->size() != data.sequence->size()) {
        throw InputError("query-level tasks need one query text per point");
    }
    return *data.texts;
}

std::vector<std::string> truncated_texts(const std::vector<std::string>& texts, const PointSequence& truncated) {
    return {texts.begin(), texts.begin() + static_cast<std::ptrdiff_t>(truncated.size())};
}

Eigen::VectorXd scores_over(const std::map<std::string, double>& scores, const std::vector<std::string>& vocabulary) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(vocabulary.size()));
    for (std::size_t i = 0; i < vocabulary.size(); ++i) {
        const auto it = scores.find(vocabulary[i]);
        if (it != scores.end()) {
            v(static_cast<Eigen::Index>(i)) = it->second;
        }
    }
    return v;
}

// Produces the score vector for each target bin of a frame, given the
// method. Model methods use `model_scores(t)` at the start of the target bin.
template <typename ModelScores>
std::vector<Eigen::VectorXd> predict_bins(Method method, const ForecastFrame& frame, std::size_t train_bins,
                                          const ForecastConfig& config, ModelScores&& model_scores) {
    std::vector<Eigen::VectorXd> out;
    switch (method) {
    case Method::kNf:
        for (std::size_t b = train_bins; b < frame.bins(); ++b) {
            out.push_back(baseline_nf(frame, b - 1));
        }
        return out;
    case Method::kAr:
        return baseline_ar(frame, train_bins, config.ar_order, false);
    case Method::kArd:
        return baseline_ar(frame, train_bins, config.ar_order, true);
    case Method::kVar:
        return baseline_var(frame, train_bins, config.ar_order);
    case Method::kOracle:
        for (std::size_t b = train_bins; b < frame.bins(); ++b) {
            out.push_back(frame.series.row(static_cast<Eigen::Index>(b)).transpose());
        }
        return out;
    case Method::kIimApprox:
    case Method::kJim:
    case Method::kJimG:
        for (std::size_t b = train_bins; b < frame.bins(); ++b) {
            out.push_back(model_scores(frame.bin_start(b)));
        }
        return out;
    }
    throw InputError("unknown method");
}

} // namespace

std::string format_number(double v, int digits) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0.0 ? "inf" : "-inf";
    }
    if (v == 0.0) {
        return "0";
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\n\r") == std::string_view::npos) {
        return std::string(s);
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    out += '"';
    return out;
}

std::size_t bin_count_for(const PointSequence& seq, double bin_width) {
    if (!(bin_width > 0.0) || !std::isfinite(bin_width)) {
        throw InputError("bin width must be positive");
    }
    const double bins = std::ceil(seq.window() / bin_width - 1e-9);
    return std::max<std::size_t>(1, static_cast<std::size_t>(bins));
}

ForecastFrame bin_counts(const PointSequence& seq, double bin_width, std::vector<std::string> labels) {
    if (labels.empty()) {
        labels = default_labels(seq.k());
    }
    if (labels.size() != seq.k()) {
        throw InputError("one label per event channel is required");
    }
    ForecastFrame frame;
    frame.bin_width = bin_width;
    frame.origin = seq.t_start();
    frame.kind = ChannelKind::kEvent;
    frame.labels = std::move(labels);
    frame.series = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(bin_count_for(seq, bin_width)),
                                         static_cast<Eigen::Index>(seq.k()));
    for (const MarkedPoint& p : seq.points()) {
        frame.series(static_cast<Eigen::Index>(bin_of(p.t, frame)), static_cast<Eigen::Index>(p.d)) += 1.0;
    }
    return frame;
}

ForecastFrame bin_query_counts(const PointSequence& seq, const std::vector<std::string>& texts, double bin_width,
                               const std::vector<std::string>& vocabulary) {
    if (texts.size() != seq.size()) {
        throw InputError("one query text per point is required");
    }
    std::unordered_map<std::string, std::size_t> column;
    for (std::size_t i = 0; i < vocabulary.size(); ++i) {
        if (!column.emplace(vocabulary[i], i).second) {
            throw InputError("duplicate query in vocabulary");
        }
    }
    ForecastFrame frame;
    frame.bin_width = bin_width;
    frame.origin = seq.t_start();
    frame.kind = ChannelKind::kQuery;
    frame.labels = vocabulary;
    frame.series = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(bin_count_for(seq, bin_width)),
                                         static_cast<Eigen::Index>(vocabulary.size()));
    for (std::size_t i = 0; i < seq.size(); ++i) {
        const auto it = column.find(texts[i]);
        if (it != column.end()) {
            frame.series(static_cast<Eigen::Index>(bin_of(seq[i].t, frame)), static_cast<Eigen::Index>(it->second)) +=
                1.0;
        }
    }
    return frame;
}

std::vector<std::string> query_vocabulary(const PointSequence& seq, const std::vector<std::string>& texts, double t_cut,
                                          std::size_t top_n) {
    if (texts.size() != seq.size()) {
        throw InputError("one query text per point is required");
    }
    std::map<std::string, std::size_t> counts;
    for (std::size_t i = 0; i < seq.size() && seq[i].t < t_cut; ++i) {
        if (!texts[i].empty()) {
            ++counts[texts[i]];
        }
    }
    std::vector<std::pair<std::string, std::size_t>> entries(counts.begin(), counts.end());
    if (top_n > 0 && entries.size() > top_n) {
        std::stable_sort(entries.begin(), entries.end(),
                         [](const auto& a, const auto& b) { return a.second > b.second; });
        entries.resize(top_n);
        std::sort(entries.begin(), entries.end());
    }
    std::vector<std::string> vocabulary;
    vocabulary.reserve(entries.size());
    for (auto& [text, count] : entries) {
        vocabulary.push_back(std::move(text));
    }
    return vocabulary;
}

Eigen::VectorXd jim_scores(const ModelParams& params, const PointSequence& seq, double bin_end_time) {
    return intensity_at(params, seq, bin_end_time, true);
}

Eigen::VectorXd baseline_nf(const ForecastFrame& frame, std::size_t bin) {
    if (bin >= frame.bins()) {
        throw InputError("bin " + std::to_string(bin) + " is outside the frame");
    }
    return frame.series.row(static_cast<Eigen::Index>(bin)).transpose();
}

ArForecaster ArForecaster::fit(const ForecastFrame& frame, std::size_t train_bins, std::size_t order,
                               bool differenced) {
    if (order == 0) {
        throw InputError("AR order must be positive");
    }
    if (train_bins > frame.bins() || train_bins < order + 2) {
        throw InsufficientData("AR(" + std::to_string(order) + ") needs at least " + std::to_string(order + 2) +
                               " training bins");
    }
    ArForecaster model;
    model.order_ = order;
    model.differenced_ = differenced;
    model.coef_.resize(static_cast<Eigen::Index>(order + 1), static_cast<Eigen::Index>(frame.channels()));

    const auto p = static_cast<Eigen::Index>(order);
    for (Eigen::Index c = 0; c < static_cast<Eigen::Index>(frame.channels()); ++c) {
        Eigen::VectorXd y = frame.series.col(c).head(static_cast<Eigen::Index>(train_bins));
        if (differenced) {
            Eigen::VectorXd z = y.tail(y.size() - 1) - y.head(y.size() - 1);
            y = z;
        }
        const Eigen::Index rows = y.size() - p;
        Eigen::MatrixXd x(rows, p + 1);
        Eigen::VectorXd target(rows);
        for (Eigen::Index r = 0; r < rows; ++r) {
            const Eigen::Index t = r + p;
            x(r, 0) = 1.0;
            for (Eigen::Index lag = 1; lag <= p; ++lag) {
                x(r, lag) = y(t - lag);
            }
            target(r) = y(t);
        }
        model.coef_.col(c) = solve_least_squares(x, target);
    }
    return model;
}

Eigen::VectorXd ArForecaster::predict(const ForecastFrame& frame, std::size_t current_bin) const {
    const std::size_t needed = order_ + (differenced_ ? 1 : 0);
    if (current_bin >= frame.bins() || current_bin + 1 < needed) {
        throw InputError("not enough history before bin " + std::to_string(current_bin));
    }
    const auto p = static_cast<Eigen::Index>(order_);
    const auto cur = static_cast<Eigen::Index>(current_bin);
    Eigen::VectorXd out(static_cast<Eigen::Index>(frame.channels()));
    for (Eigen::Index c = 0; c < out.size(); ++c) {
        auto value_at = [&](Eigen::Index t) {
            return differenced_ ? frame.series(t, c) - frame.series(t - 1, c) : frame.series(t, c);
        };
        double next = coef_(0, c);
        for (Eigen::Index lag = 1; lag <= p; ++lag) {
            next += coef_(lag, c) * value_at(cur + 1 - lag);
        }
        out(c) = differenced_ ? frame.series(cur, c) + next : next;
    }
    return clamp_nonnegative(std::move(out));
}

VarForecaster VarForecaster::fit(const ForecastFrame& frame, std::size_t train_bins, std::size_t order) {
    if (order == 0) {
        throw InputError("VAR order must be positive");
    }
    const std::size_t k = frame.channels();
    if (train_bins > frame.bins() || train_bins < k * order + 2) {
        throw InsufficientData("VAR(" + std::to_string(order) + ") over " + std::to_string(k) +
                               " channels needs at least " + std::to_string(k * order + 2) + " training bins");
    }
    VarForecaster model;
    model.order_ = order;
    const auto p = static_cast<Eigen::Index>(order);
    const auto kk = static_cast<Eigen::Index>(k);
    const Eigen::Index rows = static_cast<Eigen::Index>(train_bins) - p;
    Eigen::MatrixXd x(rows, 1 + kk * p);
    Eigen::MatrixXd y(rows, kk);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const Eigen::Index t = r + p;
        x(r, 0) = 1.0;
        for (Eigen::Index lag = 1; lag <= p; ++lag) {
            x.block(r, 1 + (lag - 1) * kk, 1, kk) = frame.series.row(t - lag);
        }
        y.row(r) = frame.series.row(t);
    }
    model.coef_ = solve_least_squares(x, y);
    return model;
}

Eigen::VectorXd VarForecaster::predict(const ForecastFrame& frame, std::size_t current_bin) const {
    if (current_bin >= frame.bins() || current_bin + 1 < order_) {
        throw InputError("not enough history before bin " + std::to_string(current_bin));
    }
    const auto kk = static_cast<Eigen::Index>(frame.channels());
    const auto cur = static_cast<Eigen::Index>(current_bin);
    Eigen::RowVectorXd row(1 + kk * static_cast<Eigen::Index>(order_));
    row(0) = 1.0;
    for (Eigen::Index lag = 1; lag <= static_cast<Eigen::Index>(order_); ++lag) {
        row.segment(1 + (lag - 1) * kk, kk) = frame.series.row(cur + 1 - lag);
    }
    return clamp_nonnegative((row * coef_).transpose());
}

std::vector<Eigen::VectorXd> baseline_ar(const ForecastFrame& frame, std::size_t train_bins, std::size_t order,
                                         bool differenced) {
    const ArForecaster model = ArForecaster::fit(frame, train_bins, order, differenced);
    std::vector<Eigen::VectorXd> out;
    for (std::size_t b = train_bins; b < frame.bins(); ++b) {
        out.push_back(model.predict(frame, b - 1));
    }
    return out;
}

std::vector<Eigen::VectorXd> baseline_var(const ForecastFrame& frame, std::size_t train_bins, std::size_t order) {
    const VarForecaster model = VarForecaster::fit(frame, train_bins, order);
    std::vector<Eigen::VectorXd> out;
    for (std::size_t b = train_bins; b < frame.bins(); ++b) {
        out.push_back(model.predict(frame, b - 1));
    }
    return out;
}

std::map<std::string, double> query_level_scores(const ModelParams& params, const PointSequence& seq,
                                                 const std::vector<std::string>& texts, double t, double half_life) {
    if (!(half_life > 0.0)) {
        throw InputError("half-life must be positive");
    }
    if (texts.size() != seq.size()) {
        throw InputError("one query text per point is required");
    }
    std::vector<std::map<std::string, double>> decayed(seq.k());
    std::vector<double> totals(seq.k(), 0.0);
    for (std::size_t i = 0; i < seq.size() && seq[i].t <= t; ++i) {
        const double w = std::exp2(-(t - seq[i].t) / half_life);
        decayed[seq[i].d][texts[i]] += w;
        totals[seq[i].d] += w;
    }
    const Eigen::VectorXd lambda = jim_scores(params, seq, t);
    std::map<std::string, double> scores;
    for (std::size_t j = 0; j < seq.k(); ++j) {
        for (const auto& [text, w] : decayed[j]) {
            scores[text] += lambda(static_cast<Eigen::Index>(j)) * w / totals[j];
        }
    }
    return scores;
}

std::string_view method_name(Method method) {
    switch (method) {
    case Method::kNf: return "nf";
    case Method::kAr: return "ar";
    case Method::kArd: return "ard";
    case Method::kVar: return "var";
    case Method::kIimApprox: return "iim_approx";
    case Method::kJim: return "jim";
    case Method::kJimG: return "jim_g";
    case Method::kOracle: return "oracle";
    }
    return "unknown";
}

std::optional<Method> parse_method(std::string_view name) {
    for (Method m : {Method::kNf, Method::kAr, Method::kArd, Method::kVar, Method::kIimApprox, Method::kJim,
                     Method::kJimG, Method::kOracle}) {
        if (name == method_name(m)) {
            return m;
        }
    }
    return std::nullopt;
}

bool is_model_method(Method method) {
    return method == Method::kIimApprox || method == Method::kJim || method == Method::kJimG;
}

std::size_t split_bin(std::size_t bins, double split_fraction) {
    if (!(split_fraction > 0.0 && split_fraction < 1.0)) {
        throw InputError("split fraction must lie in (0, 1)");
    }
    if (bins < 2) {
        throw InsufficientData("at least two bins are needed for a train/test split");
    }
    const auto split = static_cast<std::size_t>(std::floor(split_fraction * static_cast<double>(bins)));
    return std::clamp<std::size_t>(split, 1, bins - 1);
}

PredictionRun run_task(int task, Method method, const TaskData& data) {
    if (task < 1 || task > 4) {
        throw InputError("run_task handles tasks 1-4, got " + std::to_string(task));
    }
    if (data.sequence == nullptr) {
        throw InputError("no sequence supplied");
    }
    const PointSequence& seq = *data.sequence;
    const ForecastConfig& cfg = data.config;
    const std::size_t bins = bin_count_for(seq, cfg.bin_width);
    const std::size_t train = split_bin(bins, cfg.split_fraction);

    PredictionRun run;
    run.method = method;
    run.task = task;
    ForecastFrame frame;
    std::vector<Eigen::VectorXd> predicted;
    if (task <= 2) {
        frame = bin_counts(seq, cfg.bin_width, data.event_labels);
        predicted = predict_bins(method, frame, train, cfg, [&](double t) {
            return jim_scores(model_for(method, data), seq.truncated(t), t);
        });
    } else {
        const std::vector<std::string>& texts = texts_for(data);
        const double t_split = seq.t_start() + static_cast<double>(train) * cfg.bin_width;
        const std::vector<std::string> vocabulary = query_vocabulary(seq, texts, t_split, cfg.query_top_n);
        if (vocabulary.empty()) {
            throw InsufficientData("no query text in the training span");
        }
        frame = bin_query_counts(seq, texts, cfg.bin_width, vocabulary);
        predicted = predict_bins(method, frame, train, cfg, [&](double t) {
            const PointSequence history = seq.truncated(t);
            return scores_over(query_level_scores(model_for(method, data), history, truncated_texts(texts, history),
                                                  t, cfg.half_life),
                               vocabulary);
        });
    }
    run.labels = frame.labels;
    for (std::size_t b = train; b < bins; ++b) {
        run.target_bins.push_back(b);
        run.actual.push_back(frame.series.row(static_cast<Eigen::Index>(b)).transpose());
    }
    run.predicted = std::move(predicted);
    return run;
}

std::string first_word(std::string_view text) {
    const auto begin = text.find_first_not_of(" \t\r\n");
    if (begin == std::string_view::npos) {
        return {};
    }
    const auto end = text.find_first_of(" \t\r\n", begin);
    return std::string(text.substr(begin, end == std::string_view::npos ? std::string_view::npos : end - begin));
}

double qac_rank(const std::map<std::string, double>& scores, std::string_view prefix, std::string_view actual) {
    std::vector<std::pair<std::string_view, double>> candidates;
    for (const auto& [query, score] : scores) {
        if (first_word(query) == prefix) {
            candidates.emplace_back(query, score);
        }
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    for (std::size_t r = 0; r < candidates.size(); ++r) {
        if (candidates[r].first == actual) {
            return 1.0 / static_cast<double>(r + 1);
        }
    }
    return 0.0;
}

QacRun run_qac(Method method, const TaskData& data) {
    if (data.sequence == nullptr) {
        throw InputError("no sequence supplied");
    }
    const PointSequence& seq = *data.sequence;
    const std::vector<std::string>& texts = texts_for(data);
    const ForecastConfig& cfg = data.config;
    const std::size_t bins = bin_count_for(seq, cfg.bin_width);
    const std::size_t train = split_bin(bins, cfg.split_fraction);
    const double t_split = seq.t_start() + static_cast<double>(train) * cfg.bin_width;
    const std::vector<std::string> vocabulary = query_vocabulary(seq, texts, t_split, 0);
    if (vocabulary.empty()) {
        throw InsufficientData("no query text in the training span");
    }
    const ForecastFrame frame = bin_query_counts(seq, texts, cfg.bin_width, vocabulary);
    const std::vector<Eigen::VectorXd> predicted = predict_bins(method, frame, train, cfg, [&](double t) {
        const PointSequence history = seq.truncated(t);
        return scores_over(
            query_level_scores(model_for(method, data), history, truncated_texts(texts, history), t, cfg.half_life),
            vocabulary);
    });

    QacRun run;
    run.method = method;
    std::map<std::string, double> scores;
    std::size_t scored_bin = bins;
    for (std::size_t i = 0; i < seq.size(); ++i) {
        if (seq[i].t < t_split) {
            continue;
        }
        const std::size_t b = bin_of(seq[i].t, frame);
        if (b != scored_bin) {
            scores.clear();
            const Eigen::VectorXd& v = predicted[b - train];
            for (std::size_t q = 0; q < vocabulary.size(); ++q) {
                scores.emplace(vocabulary[q], v(static_cast<Eigen::Index>(q)));
            }
            scored_bin = b;
        }
        run.bins.push_back(b);
        run.queries.push_back(texts[i]);
        run.reciprocal_ranks.push_back(qac_rank(scores, first_word(texts[i]), texts[i]));
    }
    return run;
}

TaskScores score_run(const PredictionRun& run, double rbo_p) {
    TaskScores out;
    out.task = run.task;
    out.method = run.method;
    const bool top1 = run.task == 1 || run.task == 3;
    for (std::size_t i = 0; i < run.predicted.size(); ++i) {
        const Eigen::VectorXd& pred = run.predicted[i];
        const Eigen::VectorXd& actual = run.actual[i];
        out.informative.push_back(actual.sum() > 0.0);
        if (top1) {
            out.per_bin["accuracy"].push_back(argmax_first(pred) == argmax_first(actual) ? 1.0 : 0.0);
            continue;
        }
        const RankedList predicted_list =
            rank_by_score(run.labels, std::span<const double>(pred.data(), static_cast<std::size_t>(pred.size())));
        const RankedList actual_list = rank_by_score(
            run.labels, std::span<const double>(actual.data(), static_cast<std::size_t>(actual.size())));
        std::unordered_map<std::string, double> gains;
        for (std::size_t c = 0; c < run.labels.size(); ++c) {
            gains[run.labels[c]] = actual(static_cast<Eigen::Index>(c));
        }
        out.per_bin["ndcg"].push_back(ndcg(predicted_list, gains));
        out.per_bin["rbo"].push_back(rbo_extrapolated(predicted_list.items, actual_list.items, rbo_p));
        out.per_bin["rbo_base"].push_back(rbo(predicted_list.items, actual_list.items, rbo_p));
    }
    return out;
}

std::vector<MetricRecord> aggregate(const TaskScores& scores) {
    std::vector<MetricRecord> records;
    const std::string method(method_name(scores.method));
    for (const auto& [metric, values] : scores.per_bin) {
        if (values.empty()) {
            continue;
        }
        records.push_back({scores.task, method, metric,
                           std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size()),
                           values.size()});
        double sum = 0.0;
        std::size_t n = 0;
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (scores.informative[i]) {
                sum += values[i];
                ++n;
            }
        }
        if (n > 0) {
            records.push_back({scores.task, method, metric + "_informative", sum / static_cast<double>(n), n});
        }
    }
    return records;
}

void write_predictions_csv_header(std::ostream& out) {
    out << "bin,method,task,channel_or_query,predicted,actual\n";
}

void write_predictions_csv(std::ostream& out, const PredictionRun& run) {
    const std::string method(method_name(run.method));
    for (std::size_t i = 0; i < run.target_bins.size(); ++i) {
        for (std::size_t c = 0; c < run.labels.size(); ++c) {
            const auto ci = static_cast<Eigen::Index>(c);
            out << run.target_bins[i] << ',' << method << ',' << run.task << ',' << csv_field(run.labels[c])
                << ',' << format_number(run.predicted[i](ci), 10) << ',' << format_number(run.actual[i](ci), 10)
                << '\n';
        }
    }
}

void write_qac_csv_header(std::ostream& out) {
    out << "bin,method,query,reciprocal_rank\n";
}

void write_qac_csv(std::ostream& out, const QacRun& run) {
    const std::string method(method_name(run.method));
    for (std::size_t i = 0; i < run.queries.size(); ++i) {
        out << run.bins[i] << ',' << method << ',' << csv_field(run.queries[i]) << ','
            << format_number(run.reciprocal_ranks[i], 10) << '\n';
    }
}

} // namespace jim
