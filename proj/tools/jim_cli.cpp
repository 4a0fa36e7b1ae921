#include "jim/errors.hpp"
#include "jim/estimation.hpp"
#include "jim/forecasting.hpp"
#include "jim/ingestion.hpp"
#include "jim/intensity.hpp"
#include "jim/metrics.hpp"
#include "jim/simulation.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace {

namespace fs = std::filesystem;
using jim::format_number;

// Long option names accept both dashes (command line) and underscores
// (config files).
std::string names(const std::string& dashed) {
    std::string underscored = dashed;
    std::replace(underscored.begin(), underscored.end(), '-', '_');
    if (underscored == dashed) {
        return "--" + dashed;
    }
    return "--" + dashed + ",--" + underscored;
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw jim::InputError("cannot open input file '" + path + "'");
    }
    return in;
}

std::ofstream open_output(const std::string& path) {
    const fs::path parent = fs::path(path).parent_path();
    if (!parent.empty()) {
        std::error_code ec;
        fs::create_directories(parent, ec);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw jim::InputError("cannot open output file '" + path + "'");
    }
    return out;
}

std::string join(const Eigen::VectorXd& v, int digits = 6) {
    std::string s;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        s += (i > 0 ? " " : "") + format_number(v(i), digits);
    }
    return s;
}

jim::LoadedDataset load_dataset(const std::string& path) {
    auto in = open_input(path);
    return jim::read_dataset_jsonl(in);
}

jim::ModelParams load_model(const std::string& path) {
    auto in = open_input(path);
    return jim::read_model_json(in).params;
}

struct FitOptions {
    std::size_t max_iters{20000};
    double tolerance{1e-8};
    std::size_t restarts{3};
    double reg_weight{1.0};
    double stability_margin{0.99};
    bool single_stage{false};

    [[nodiscard]] jim::FitConfig config(std::uint64_t seed, jim::FitConstraints constraints) const {
        jim::FitConfig cfg;
        cfg.max_iters = max_iters;
        cfg.tolerance = tolerance;
        cfg.restarts = restarts;
        cfg.reg_weight = reg_weight;
        cfg.stability_margin = stability_margin;
        cfg.two_stage = !single_stage;
        cfg.seed = seed;
        cfg.constraints = constraints;
        return cfg;
    }
};

void add_fit_options(CLI::App* cmd, FitOptions& fo) {
    cmd->add_option(names("max-iters"), fo.max_iters, "Simplex iteration cap")->check(CLI::PositiveNumber);
    cmd->add_option(names("tolerance"), fo.tolerance, "Simplex spread tolerance")->check(CLI::PositiveNumber);
    cmd->add_option(names("restarts"), fo.restarts, "Jittered restarts");
    cmd->add_option(names("reg-weight"), fo.reg_weight, "Weight of the L2 penalty")->check(CLI::NonNegativeNumber);
    cmd->add_option(names("stability-margin"), fo.stability_margin, "Cap on Spr(MIC)")
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_flag(names("single-stage"), fo.single_stage, "Fit marks jointly with the temporal part");
}

void print_fit_summary(const jim::FitResult& r) {
    const jim::InfluenceSummary s = jim::influence_summary(r.params);
    std::printf("objective: %s\n", format_number(r.objective, 10).c_str());
    std::printf("converged: %s\n", r.converged ? "true" : "false");
    std::printf("iterations: %zu\n", r.iterations);
    std::printf("spectral radius: %s\n", format_number(s.spectral_radius, 6).c_str());
    std::printf("eta: %s\n", join(r.params.eta).c_str());
    std::printf("alpha: %s\n", join(r.params.alpha).c_str());
    std::printf("rho: %s\n", join(r.params.rho).c_str());
    std::printf("mu: %s\n", join(r.params.mu).c_str());
    std::printf("average influence: %s\n", join(s.avg_influence).c_str());
    std::printf("direct influence mean: %s\n", format_number(s.direct_mean, 6).c_str());
    std::printf("indirect influence mean: %s\n", format_number(s.indirect_mean, 6).c_str());
}

// --- build -----------------------------------------------------------------

struct BuildArgs {
    std::string events;
    std::string queries;
    std::string out;
    double threshold{1.25};
    double k1{1.2};
    double b{0.75};
    bool include_body{false};
};

void cmd_build(const BuildArgs& a) {
    auto events_in = open_input(a.events);
    auto queries_in = open_input(a.queries);
    std::vector<jim::EventRecord> events = jim::read_events_jsonl(events_in);
    const std::vector<jim::QueryRecord> queries = jim::read_query_log(queries_in);

    jim::BuildOptions opts;
    opts.threshold = a.threshold;
    opts.k1 = a.k1;
    opts.b = a.b;
    opts.include_body = a.include_body;
    const jim::JointDataset ds = jim::build_joint_dataset(std::move(events), queries, opts);

    auto out = open_output(a.out);
    jim::write_dataset_jsonl(out, ds.sequence, ds.texts);

    std::vector<double> mark_sum(ds.sequence.k(), 0.0);
    for (const jim::MarkedPoint& p : ds.sequence.points()) {
        mark_sum[p.d] += p.x;
    }
    const std::vector<std::size_t> counts = ds.sequence.channel_counts();
    std::printf("channel,event_id,title,queries,avg_similarity\n");
    for (std::size_t j = 0; j < ds.sequence.k(); ++j) {
        const double avg = counts[j] > 0 ? mark_sum[j] / static_cast<double>(counts[j]) : 0.0;
        std::printf("%zu,%lld,%s,%zu,%s\n", j, static_cast<long long>(ds.events[j].id),
                    jim::csv_field(ds.events[j].title).c_str(), counts[j], format_number(avg, 6).c_str());
    }
    std::printf("kept %zu of %zu queries over [%s, %s] hours\n", ds.sequence.size(), queries.size(),
                format_number(ds.sequence.t_start(), 12).c_str(), format_number(ds.sequence.t_end(), 12).c_str());
}

// --- fit -------------------------------------------------------------------

struct FitArgs {
    std::string data;
    std::string out;
    bool shared_alpha{false};
    bool diagonal_mic{false};
    double train_fraction{1.0};
    double bin_width{1.0};
    FitOptions fit;
};

void cmd_fit(const FitArgs& a, std::uint64_t seed) {
    jim::LoadedDataset ds = load_dataset(a.data);
    jim::PointSequence seq = ds.sequence;
    if (a.train_fraction < 1.0) {
        const std::size_t bins = jim::bin_count_for(seq, a.bin_width);
        const std::size_t split = jim::split_bin(bins, a.train_fraction);
        seq = seq.truncated(seq.t_start() + static_cast<double>(split) * a.bin_width);
    }
    jim::FitConstraints constraints = jim::FitConstraints::jim();
    if (a.diagonal_mic) {
        constraints = jim::FitConstraints::iim_approx();
    } else if (a.shared_alpha) {
        constraints = jim::FitConstraints::jim_g();
    }
    const jim::FitResult r = jim::fit(seq, a.fit.config(seed, constraints));
    auto out = open_output(a.out);
    jim::write_model_json(out, r);
    std::printf("fitted %zu points over %zu events\n", seq.size(), seq.k());
    print_fit_summary(r);
}

// --- simulate --------------------------------------------------------------

struct SimulateArgs {
    std::string model;
    std::string out;
    double t_start{0.0};
    double t_end{1000.0};
    std::size_t max_points{10'000'000};
};

void cmd_simulate(const SimulateArgs& a, std::uint64_t seed) {
    const jim::ModelParams params = load_model(a.model);
    jim::SimConfig cfg;
    cfg.t_start = a.t_start;
    cfg.t_end = a.t_end;
    cfg.seed = seed;
    cfg.max_points = a.max_points;
    const jim::PointSequence seq = jim::simulate(params, cfg);
    auto out = open_output(a.out);
    jim::write_dataset_jsonl(out, seq, {},
                             {{"generator", std::string(jim::kGeneratorName)}, {"seed", std::to_string(seed)}});
    std::printf("simulated %zu points over [%s, %s] hours\n", seq.size(), format_number(a.t_start, 12).c_str(),
                format_number(a.t_end, 12).c_str());
}

// --- predict ---------------------------------------------------------------

struct PredictArgs {
    std::string data;
    std::string model_jim;
    std::string model_jim_g;
    std::string model_iim;
    std::string out_dir{"."};
    std::vector<int> tasks{1, 2};
    std::vector<std::string> methods{"nf", "jim"};
    std::vector<std::string> compare;
    jim::ForecastConfig forecast;
    FitOptions fit;
};

jim::Method method_or_throw(const std::string& name) {
    const auto m = jim::parse_method(name);
    if (!m) {
        throw jim::InputError("unknown method '" + name + "'");
    }
    return *m;
}

std::string metrics_json(const std::vector<jim::MetricRecord>& records) {
    std::ostringstream out;
    out << "[\n";
    for (std::size_t i = 0; i < records.size(); ++i) {
        const jim::MetricRecord& r = records[i];
        out << "  {\"task\": " << r.task << ", \"method\": \"" << r.method << "\", \"metric\": \"" << r.metric
            << "\", \"value\": " << format_number(r.value, 10) << ", \"n_bins\": " << r.n_bins << "}"
            << (i + 1 < records.size() ? ",\n" : "\n");
    }
    out << "]\n";
    return out.str();
}

void cmd_predict(const PredictArgs& a, std::uint64_t seed) {
    std::vector<jim::Method> methods;
    for (const std::string& name : a.methods) {
        methods.push_back(method_or_throw(name));
    }
    for (int task : a.tasks) {
        if (task < 1 || task > 5) {
            throw jim::InputError("unknown task " + std::to_string(task));
        }
    }
    if (!a.compare.empty() && a.compare.size() != 2) {
        throw jim::InputError("--compare takes exactly two methods");
    }
    std::vector<jim::Method> compare;
    for (const std::string& name : a.compare) {
        compare.push_back(method_or_throw(name));
        if (std::find(methods.begin(), methods.end(), compare.back()) == methods.end()) {
            methods.push_back(compare.back());
        }
    }

    const jim::LoadedDataset ds = load_dataset(a.data);
    jim::TaskData data;
    data.sequence = &ds.sequence;
    data.texts = &ds.texts;
    data.config = a.forecast;

    const std::map<jim::Method, std::string> model_paths{
        {jim::Method::kJim, a.model_jim}, {jim::Method::kJimG, a.model_jim_g}, {jim::Method::kIimApprox, a.model_iim}};
    const std::size_t bins = jim::bin_count_for(ds.sequence, a.forecast.bin_width);
    const double t_split = ds.sequence.t_start() +
                           static_cast<double>(jim::split_bin(bins, a.forecast.split_fraction)) * a.forecast.bin_width;
    for (jim::Method m : methods) {
        if (!jim::is_model_method(m) || data.models.count(m) != 0) {
            continue;
        }
        const std::string& path = model_paths.at(m);
        if (!path.empty()) {
            data.models.emplace(m, load_model(path));
            continue;
        }
        const jim::FitConstraints constraints = m == jim::Method::kJim    ? jim::FitConstraints::jim()
                                                : m == jim::Method::kJimG ? jim::FitConstraints::jim_g()
                                                                          : jim::FitConstraints::iim_approx();
        std::fprintf(stderr, "fitting %s on the training span\n", std::string(jim::method_name(m)).c_str());
        data.models.emplace(m, jim::fit(ds.sequence.truncated(t_split), a.fit.config(seed, constraints)).params);
    }

    const fs::path dir(a.out_dir);
    auto predictions = open_output((dir / "predictions.csv").string());
    jim::write_predictions_csv_header(predictions);
    std::ofstream qac;
    std::vector<jim::MetricRecord> records;
    std::map<std::pair<int, jim::Method>, jim::TaskScores> scores;
    std::map<jim::Method, std::vector<double>> qac_ranks;

    for (int task : a.tasks) {
        for (jim::Method m : methods) {
            const std::string label = "task " + std::to_string(task) + " " + std::string(jim::method_name(m));
            try {
                if (task == 5) {
                    const jim::QacRun run = jim::run_qac(m, data);
                    if (!qac.is_open()) {
                        qac = open_output((dir / "qac.csv").string());
                        jim::write_qac_csv_header(qac);
                    }
                    jim::write_qac_csv(qac, run);
                    if (!run.reciprocal_ranks.empty()) {
                        records.push_back({5, std::string(jim::method_name(m)), "mrr", jim::mrr(run.reciprocal_ranks),
                                           run.reciprocal_ranks.size()});
                    }
                    qac_ranks[m] = run.reciprocal_ranks;
                    continue;
                }
                const jim::PredictionRun run = jim::run_task(task, m, data);
                jim::write_predictions_csv(predictions, run);
                jim::TaskScores s = jim::score_run(run, a.forecast.rbo_p);
                const std::vector<jim::MetricRecord> agg = jim::aggregate(s);
                records.insert(records.end(), agg.begin(), agg.end());
                scores.emplace(std::make_pair(task, m), std::move(s));
            } catch (const jim::InsufficientData& e) {
                std::fprintf(stderr, "skipping %s: %s\n", label.c_str(), e.what());
            }
        }
    }

    auto metrics = open_output((dir / "metrics.json").string());
    metrics << metrics_json(records);
    std::printf("task,method,metric,value,n_bins\n");
    for (const jim::MetricRecord& r : records) {
        std::printf("%d,%s,%s,%s,%zu\n", r.task, r.method.c_str(), r.metric.c_str(), format_number(r.value, 6).c_str(),
                    r.n_bins);
    }

    if (compare.size() != 2) {
        return;
    }
    std::ostringstream w;
    w << "[\n";
    bool first = true;
    auto emit = [&](int task, const std::string& metric, const std::vector<double>& x, const std::vector<double>& y) {
        const jim::WilcoxonResult r = jim::wilcoxon_signed_rank(x, y);
        w << (first ? "" : ",\n") << "  {\"task\": " << task << ", \"metric\": \"" << metric << "\", \"a\": \""
          << jim::method_name(compare[0]) << "\", \"b\": \"" << jim::method_name(compare[1])
          << "\", \"w_plus\": " << format_number(r.w_plus, 10) << ", \"w_minus\": " << format_number(r.w_minus, 10)
          << ", \"statistic\": " << format_number(r.statistic, 10) << ", \"n\": " << r.n
          << ", \"z\": " << format_number(r.z, 10) << ", \"significant\": " << (r.significant ? "true" : "false")
          << "}";
        first = false;
        std::printf("wilcoxon task %d %s %s vs %s: W=%s n=%zu significant=%s\n", task, metric.c_str(),
                    std::string(jim::method_name(compare[0])).c_str(),
                    std::string(jim::method_name(compare[1])).c_str(), format_number(r.statistic, 6).c_str(), r.n,
                    r.significant ? "yes" : "no");
    };
    for (int task : a.tasks) {
        if (task == 5) {
            if (qac_ranks.count(compare[0]) != 0 && qac_ranks.count(compare[1]) != 0) {
                emit(5, "reciprocal_rank", qac_ranks[compare[0]], qac_ranks[compare[1]]);
            }
            continue;
        }
        const auto sa = scores.find({task, compare[0]});
        const auto sb = scores.find({task, compare[1]});
        if (sa == scores.end() || sb == scores.end()) {
            continue;
        }
        for (const auto& [metric, values] : sa->second.per_bin) {
            emit(task, metric, values, sb->second.per_bin.at(metric));
        }
    }
    w << "\n]\n";
    auto wilcoxon = open_output((dir / "wilcoxon.json").string());
    wilcoxon << w.str();
}

// --- trace -----------------------------------------------------------------

struct TraceArgs {
    std::string model;
    std::string data;
    std::string out;
    std::string counts_out;
    double step{1.0};
};

void cmd_trace(const TraceArgs& a) {
    const jim::ModelParams params = load_model(a.model);
    const jim::LoadedDataset ds = load_dataset(a.data);
    if (params.k() != ds.sequence.k()) {
        throw jim::InputError("model and dataset disagree on the number of events");
    }
    const jim::IntensityTrace trace = jim::intensity_trace(params, ds.sequence, a.step);
    auto out = open_output(a.out);
    jim::write_trace_csv(out, trace);

    const std::string counts_path =
        a.counts_out.empty() ? (fs::path(a.out).parent_path() / "hourly_counts.csv").string() : a.counts_out;
    const jim::ForecastFrame frame = jim::bin_counts(ds.sequence, 1.0);
    auto counts = open_output(counts_path);
    counts << "bin_start";
    for (std::size_t j = 0; j < frame.channels(); ++j) {
        counts << ",event_" << j;
    }
    counts << '\n';
    for (std::size_t b = 0; b < frame.bins(); ++b) {
        counts << format_number(frame.bin_start(b), 12);
        for (std::size_t j = 0; j < frame.channels(); ++j) {
            counts << ',' << format_number(frame.series(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(j)), 12);
        }
        counts << '\n';
    }
    std::printf("wrote %zu trace rows and %zu hourly bins\n", trace.samples.size(), frame.bins());
}

// --- report ----------------------------------------------------------------

struct ReportArgs {
    std::string data;
    std::string model;
    std::string out_dir{"."};
    std::size_t hist_bins{20};
};

void cmd_report(const ReportArgs& a) {
    const jim::LoadedDataset ds = load_dataset(a.data);
    const jim::PointSequence& seq = ds.sequence;
    const fs::path dir(a.out_dir);

    std::vector<std::vector<double>> marks(seq.k());
    for (const jim::MarkedPoint& p : seq.points()) {
        marks[p.d].push_back(p.x);
    }
    auto events = open_output((dir / "events.csv").string());
    events << "channel,queries,mean_mark,first_time,last_time\n";
    for (std::size_t j = 0; j < seq.k(); ++j) {
        double sum = 0.0;
        for (double x : marks[j]) {
            sum += x;
        }
        double first = 0.0;
        double last = 0.0;
        for (const jim::MarkedPoint& p : seq.points()) {
            if (p.d == j) {
                last = p.t;
                if (first == 0.0) {
                    first = p.t;
                }
            }
        }
        const double mean = marks[j].empty() ? 0.0 : sum / static_cast<double>(marks[j].size());
        events << j << ',' << marks[j].size() << ',' << format_number(mean, 10) << ','
               << format_number(first, 12) << ',' << format_number(last, 12) << '\n';
    }

    auto hist = open_output((dir / "mark_histogram.csv").string());
    hist << "channel,bin_low,bin_high,count\n";
    double lo = 0.0;
    double hi = 0.0;
    bool any = false;
    for (const jim::MarkedPoint& p : seq.points()) {
        lo = any ? std::min(lo, p.x) : p.x;
        hi = any ? std::max(hi, p.x) : p.x;
        any = true;
    }
    if (any && a.hist_bins > 0) {
        const double width = hi > lo ? (hi - lo) / static_cast<double>(a.hist_bins) : 1.0;
        for (std::size_t j = 0; j < seq.k(); ++j) {
            std::vector<std::size_t> counts(a.hist_bins, 0);
            for (double x : marks[j]) {
                const auto b = static_cast<std::size_t>((x - lo) / width);
                ++counts[std::min(b, a.hist_bins - 1)];
            }
            for (std::size_t b = 0; b < a.hist_bins; ++b) {
                hist << j << ',' << format_number(lo + static_cast<double>(b) * width, 10) << ','
                     << format_number(lo + static_cast<double>(b + 1) * width, 10) << ',' << counts[b] << '\n';
            }
        }
    }

    if (!a.model.empty()) {
        const jim::ModelParams params = load_model(a.model);
        auto mic = open_output((dir / "mic.csv").string());
        mic << "source";
        for (std::size_t j = 0; j < params.k(); ++j) {
            mic << ",event_" << j;
        }
        mic << '\n';
        for (Eigen::Index r = 0; r < params.mic.rows(); ++r) {
            mic << "event_" << r;
            for (Eigen::Index c = 0; c < params.mic.cols(); ++c) {
                mic << ',' << format_number(params.mic(r, c), 10);
            }
            mic << '\n';
        }
        const jim::InfluenceSummary s = jim::influence_summary(params);
        std::printf("spectral radius: %s\n", format_number(s.spectral_radius, 6).c_str());
        std::printf("average influence: %s\n", join(s.avg_influence).c_str());
    }
    std::printf("%zu points, %zu events, window [%s, %s]\n", seq.size(), seq.k(),
                format_number(seq.t_start(), 12).c_str(), format_number(seq.t_end(), 12).c_str());
}

int exit_code_for(const jim::Error& e) {
    if (dynamic_cast<const jim::EmptyResultError*>(&e) != nullptr) {
        return 4;
    }
    if (dynamic_cast<const jim::StabilityError*>(&e) != nullptr ||
        dynamic_cast<const jim::NumericalError*>(&e) != nullptr) {
        return 3;
    }
    return 2;
}

CLI::App* add_command(CLI::App& app, const std::string& name, const std::string& description) {
    return app.add_subcommand(name, description);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Joint influence model for event and query streams"};
    app.require_subcommand(1);
    app.set_config("--config", "", "TOML file with one [command] section per subcommand; flags take precedence");
    app.allow_config_extras(CLI::config_extras_mode::ignore);
    std::uint64_t seed = 0;

    BuildArgs build;
    CLI::App* build_cmd = add_command(app, "build", "Build the joint event-query dataset");
    build_cmd->add_option(names("events"), build.events, "Events JSONL file")->required();
    build_cmd->add_option(names("queries"), build.queries, "Query log (text<TAB>epoch seconds)")->required();
    build_cmd->add_option(names("out"), build.out, "Output dataset JSONL")->required();
    build_cmd->add_option(names("threshold"), build.threshold, "Minimum similarity for a query to be kept");
    build_cmd->add_option(names("k1"), build.k1, "BM25 k1")->check(CLI::PositiveNumber);
    build_cmd->add_option(names("b"), build.b, "BM25 b")->check(CLI::Range(0.0, 1.0));
    build_cmd->add_flag(names("include-body"), build.include_body, "Use title and body as event terms");

    FitArgs fit;
    CLI::App* fit_cmd = add_command(app, "fit", "Fit the joint influence model");
    fit_cmd->add_option(names("data"), fit.data, "Dataset JSONL")->required();
    fit_cmd->add_option(names("out"), fit.out, "Output model JSON")->required();
    fit_cmd->add_flag(names("shared-alpha"), fit.shared_alpha, "Share one decay rate across events");
    fit_cmd->add_flag(names("diagonal-mic"), fit.diagonal_mic,
                      "Independent-influence approximation: diagonal MIC, shared eta and alpha, linear impact");
    fit_cmd->add_option(names("train-fraction"), fit.train_fraction, "Fit only the leading fraction of bins")
        ->check(CLI::Range(0.0, 1.0));
    fit_cmd->add_option(names("bin-width"), fit.bin_width, "Bin width in hours for --train-fraction")
        ->check(CLI::PositiveNumber);
    add_fit_options(fit_cmd, fit.fit);
    fit_cmd->add_option(names("seed"), seed, "Seed for restart jitter");

    SimulateArgs sim;
    CLI::App* sim_cmd = add_command(app, "simulate", "Simulate a dataset from a model");
    sim_cmd->add_option(names("model"), sim.model, "Model JSON")->required();
    sim_cmd->add_option(names("out"), sim.out, "Output dataset JSONL")->required();
    sim_cmd->add_option(names("t-start"), sim.t_start, "Window start in hours");
    sim_cmd->add_option(names("t-end"), sim.t_end, "Window end in hours");
    sim_cmd->add_option(names("max-points"), sim.max_points, "Abort beyond this many points");
    sim_cmd->add_option(names("seed"), seed, "Random seed");

    PredictArgs pred;
    CLI::App* pred_cmd = add_command(app, "predict", "Run forecasting tasks 1-5");
    pred_cmd->add_option(names("data"), pred.data, "Dataset JSONL")->required();
    pred_cmd->add_option(names("model"), pred.model_jim, "JIM model JSON (fitted on the training span if absent)");
    pred_cmd->add_option(names("model-jim-g"), pred.model_jim_g, "JIM-G model JSON");
    pred_cmd->add_option(names("model-iim"), pred.model_iim, "IIM-approx model JSON");
    pred_cmd->add_option(names("out-dir"), pred.out_dir, "Directory for predictions.csv and metrics.json");
    pred_cmd->add_option(names("tasks"), pred.tasks, "Tasks to run (1-5)")->delimiter(',');
    pred_cmd->add_option(names("methods"), pred.methods, "nf, ar, ard, var, iim_approx, jim, jim_g, oracle")
        ->delimiter(',');
    pred_cmd->add_option(names("compare"), pred.compare, "Two methods for the Wilcoxon signed-rank test")
        ->delimiter(',');
    pred_cmd->add_option(names("bin-width"), pred.forecast.bin_width, "Bin width in hours")
        ->check(CLI::PositiveNumber);
    pred_cmd->add_option(names("split-fraction"), pred.forecast.split_fraction, "Training share of the bins")
        ->check(CLI::Range(0.0, 1.0));
    pred_cmd->add_option(names("ar-order"), pred.forecast.ar_order, "AR/VAR order")->check(CLI::PositiveNumber);
    pred_cmd->add_option(names("rbo-p"), pred.forecast.rbo_p, "RBO persistence")->check(CLI::Range(0.0, 1.0));
    pred_cmd->add_option(names("half-life"), pred.forecast.half_life, "Query share half-life in hours")
        ->check(CLI::PositiveNumber);
    pred_cmd->add_option(names("query-top-n"), pred.forecast.query_top_n, "Limit query-level tasks to the top N");
    add_fit_options(pred_cmd, pred.fit);
    pred_cmd->add_option(names("seed"), seed, "Seed for fitting missing models");

    TraceArgs trace;
    CLI::App* trace_cmd = add_command(app, "trace", "Write the intensity trace and hourly counts");
    trace_cmd->add_option(names("model"), trace.model, "Model JSON")->required();
    trace_cmd->add_option(names("data"), trace.data, "Dataset JSONL")->required();
    trace_cmd->add_option(names("out"), trace.out, "Trace CSV")->required();
    trace_cmd->add_option(names("counts-out"), trace.counts_out, "Hourly counts CSV (next to the trace by default)");
    trace_cmd->add_option(names("step"), trace.step, "Grid step in hours")->check(CLI::PositiveNumber);

    ReportArgs report;
    CLI::App* report_cmd = add_command(app, "report", "Write per-event summaries, MIC and mark histograms");
    report_cmd->add_option(names("data"), report.data, "Dataset JSONL")->required();
    report_cmd->add_option(names("model"), report.model, "Model JSON");
    report_cmd->add_option(names("out-dir"), report.out_dir, "Output directory");
    report_cmd->add_option(names("hist-bins"), report.hist_bins, "Mark histogram bins");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (build_cmd->parsed()) {
            cmd_build(build);
        } else if (fit_cmd->parsed()) {
            cmd_fit(fit, seed);
        } else if (sim_cmd->parsed()) {
            cmd_simulate(sim, seed);
        } else if (pred_cmd->parsed()) {
            cmd_predict(pred, seed);
        } else if (trace_cmd->parsed()) {
            cmd_trace(trace);
        } else if (report_cmd->parsed()) {
            cmd_report(report);
        }
    } catch (const jim::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
