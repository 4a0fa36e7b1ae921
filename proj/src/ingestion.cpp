#include "jim/ingestion.hpp"

#include "jim/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <unordered_set>

namespace jim {

namespace {

constexpr double kSecondsPerHour = 3600.0;
constexpr double kTieNudge = 1e-9;

bool is_token_byte(unsigned char c) {
    return std::isalnum(c) != 0 || c >= 0x80;
}

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    return line;
}

bool blank(const std::string& line) {
    return std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c) != 0; });
}

} // namespace

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    auto flush = [&] {
        if (current.size() >= 2) {
            tokens.push_back(current);
        }
        current.clear();
    };
    for (char ch : text) {
        const auto c = static_cast<unsigned char>(ch);
        if (is_token_byte(c)) {
            current.push_back(c < 0x80 ? static_cast<char>(std::tolower(c)) : ch);
        } else {
            flush();
        }
    }
    flush();
    return tokens;
}

SimilarityConfig make_similarity_config(const std::vector<QueryRecord>& queries, double k1, double b) {
    SimilarityConfig cfg;
    cfg.k1 = k1;
    cfg.b = b;
    std::unordered_map<std::string, std::size_t> df;
    std::size_t total_len = 0;
    for (const QueryRecord& q : queries) {
        const std::vector<std::string> tokens = tokenize(q.text);
        total_len += tokens.size();
        const std::unordered_set<std::string> distinct(tokens.begin(), tokens.end());
        for (const std::string& t : distinct) {
            ++df[t];
        }
    }
    const double n = static_cast<double>(queries.size());
    cfg.avgql = queries.empty() || total_len == 0 ? 1.0 : static_cast<double>(total_len) / n;
    for (const auto& [term, count] : df) {
        cfg.idf[term] = std::log((n + 1.0) / (static_cast<double>(count) + 1.0)) + 1.0;
    }
    return cfg;
}

std::vector<std::string> event_terms(const std::vector<std::string>& tokens) {
    std::vector<std::string> terms;
    std::unordered_set<std::string> seen;
    for (const std::string& t : tokens) {
        if (seen.insert(t).second) {
            terms.push_back(t);
        }
    }
    return terms;
}

std::map<std::string, double> uniform_weights(const std::vector<std::string>& terms) {
    std::map<std::string, double> w;
    for (const std::string& t : terms) {
        w[t] = 1.0 / static_cast<double>(terms.size());
    }
    return w;
}

double similarity(const std::vector<std::string>& event_terms, const std::map<std::string, double>& weights,
                  const std::vector<std::string>& query_terms, const SimilarityConfig& cfg) {
    if (!(cfg.k1 > 0.0) || !(cfg.b >= 0.0 && cfg.b <= 1.0) || !(cfg.avgql > 0.0)) {
        throw InputError("similarity needs k1 > 0, b in [0, 1] and avgql > 0");
    }
    double weight_sum = 0.0;
    for (const std::string& term : event_terms) {
        const auto it = weights.find(term);
        if (it == weights.end() || it->second < 0.0) {
            throw InputError("missing or negative weight for event term '" + term + "'");
        }
        weight_sum += it->second;
    }
    if (!event_terms.empty() && std::abs(weight_sum - 1.0) > 1e-9) {
        throw InputError("event term weights must sum to 1");
    }

    std::unordered_map<std::string, double> tf;
    for (const std::string& t : query_terms) {
        tf[t] += 1.0;
    }
    const double norm = cfg.k1 * (1.0 - cfg.b + cfg.b * static_cast<double>(query_terms.size()) / cfg.avgql);
    double score = 0.0;
    for (const std::string& term : event_terms) {
        const auto f = tf.find(term);
        if (f == tf.end()) {
            continue;
        }
        const auto idf = cfg.idf.find(term);
        const double idf_value = idf == cfg.idf.end() ? 0.0 : idf->second;
        score += weights.at(term) * idf_value * f->second * (cfg.k1 + 1.0) / (f->second + norm);
    }
    return score;
}

JointDataset build_joint_dataset(std::vector<EventRecord> events, const std::vector<QueryRecord>& queries,
                                 const BuildOptions& options) {
    if (events.empty()) {
        throw InputError("no events to score against");
    }
    std::stable_sort(events.begin(), events.end(),
                     [](const EventRecord& a, const EventRecord& b) { return a.id < b.id; });

    const SimilarityConfig cfg = make_similarity_config(queries, options.k1, options.b);
    std::vector<std::vector<std::string>> terms;
    std::vector<std::map<std::string, double>> weights;
    for (const EventRecord& e : events) {
        std::string text = e.title;
        if (options.include_body) {
            text += ' ';
            text += e.body;
        }
        terms.push_back(event_terms(tokenize(text)));
        weights.push_back(uniform_weights(terms.back()));
    }

    struct Kept {
        std::size_t order;
        std::int64_t timestamp;
        std::size_t d;
        double x;
    };
    std::vector<Kept> kept;
    for (std::size_t q = 0; q < queries.size(); ++q) {
        const std::vector<std::string> tokens = tokenize(queries[q].text);
        double best = 0.0;
        std::size_t best_event = 0;
        for (std::size_t e = 0; e < events.size(); ++e) {
            const double s = similarity(terms[e], weights[e], tokens, cfg);
            if (s > best) {
                best = s;
                best_event = e;
            }
        }
        if (best > 0.0 && best >= options.threshold) {
            kept.push_back({q, queries[q].timestamp, best_event, best});
        }
    }
    if (kept.empty()) {
        throw EmptyResultError("no query reaches the similarity threshold");
    }
    std::stable_sort(kept.begin(), kept.end(),
                     [](const Kept& a, const Kept& b) { return a.timestamp < b.timestamp; });

    std::vector<MarkedPoint> points;
    std::vector<std::string> texts;
    points.reserve(kept.size());
    for (const Kept& k : kept) {
        double t = static_cast<double>(k.timestamp) / kSecondsPerHour;
        if (!points.empty() && !(t > points.back().t)) {
            t = points.back().t + kTieNudge;
        }
        points.push_back({t, k.d, k.x});
        texts.push_back(queries[k.order].text);
    }
    const double t_start = std::floor(points.front().t);
    double t_end = std::ceil(points.back().t);
    if (!(t_end > t_start)) {
        t_end = t_start + 1.0;
    }
    PointSequence seq(std::move(points), t_start, t_end, events.size());
    return JointDataset{std::move(events), std::move(seq), std::move(texts)};
}

std::vector<EventRecord> read_events_jsonl(std::istream& in) {
    std::vector<EventRecord> events;
    std::set<std::int64_t> ids;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (blank(line)) {
            continue;
        }
        const std::string where = "events line " + std::to_string(line_no) + ": ";
        try {
            const auto obj = nlohmann::json::parse(line);
            EventRecord e;
            e.id = obj.at("id").get<std::int64_t>();
            e.title = obj.at("title").get<std::string>();
            e.body = obj.value("body", std::string());
            e.timestamp = obj.at("timestamp").get<std::int64_t>();
            if (e.title.empty() || blank(e.title)) {
                throw InputError(where + "empty title");
            }
            if (!ids.insert(e.id).second) {
                throw InputError(where + "duplicate event id " + std::to_string(e.id));
            }
            events.push_back(std::move(e));
        } catch (const nlohmann::json::exception& ex) {
            throw InputError(where + ex.what());
        }
    }
    return events;
}

std::vector<QueryRecord> read_query_log(std::istream& in) {
    std::vector<QueryRecord> queries;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (blank(line)) {
            continue;
        }
        const std::string where = "query log line " + std::to_string(line_no) + ": ";
        const auto tab = line.rfind('\t');
        if (tab == std::string::npos) {
            throw InputError(where + "expected query_text<TAB>epoch_seconds");
        }
        QueryRecord q;
        q.text = line.substr(0, tab);
        const std::string stamp = line.substr(tab + 1);
        if (q.text.empty() || blank(q.text)) {
            throw InputError(where + "empty query text");
        }
        std::size_t used = 0;
        try {
            q.timestamp = std::stoll(stamp, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != stamp.size()) {
            throw InputError(where + "timestamp is not an integer");
        }
        queries.push_back(std::move(q));
    }
    return queries;
}

void write_dataset_jsonl(std::ostream& out, const PointSequence& seq, const std::vector<std::string>& texts,
                         const std::map<std::string, std::string>& extra_header) {
    if (!texts.empty() && texts.size() != seq.size()) {
        throw InvalidSequence("one text per point is required");
    }
    nlohmann::ordered_json header;
    header["k"] = seq.k();
    header["t_start"] = seq.t_start();
    header["t_end"] = seq.t_end();
    for (const auto& [key, value] : extra_header) {
        header[key] = value;
    }
    out << header.dump() << '\n';
    for (std::size_t i = 0; i < seq.size(); ++i) {
        nlohmann::ordered_json row;
        row["t"] = seq[i].t;
        row["d"] = seq[i].d;
        row["x"] = seq[i].x;
        row["text"] = texts.empty() ? std::string() : texts[i];
        out << row.dump() << '\n';
    }
}

LoadedDataset read_dataset_jsonl(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    std::size_t k = 0;
    double t_start = 0.0;
    double t_end = 0.0;
    std::vector<MarkedPoint> points;
    std::vector<std::string> texts;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (blank(line)) {
            continue;
        }
        const std::string where = "dataset line " + std::to_string(line_no) + ": ";
        try {
            const auto obj = nlohmann::json::parse(line);
            if (!have_header) {
                k = obj.at("k").get<std::size_t>();
                t_start = obj.at("t_start").get<double>();
                t_end = obj.at("t_end").get<double>();
                have_header = true;
                continue;
            }
            MarkedPoint p;
            p.t = obj.at("t").get<double>();
            p.d = obj.at("d").get<std::size_t>();
            p.x = obj.at("x").get<double>();
            points.push_back(p);
            texts.push_back(obj.value("text", std::string()));
        } catch (const nlohmann::json::exception& ex) {
            throw InputError(where + ex.what());
        }
    }
    if (!have_header) {
        throw InputError("dataset has no header line");
    }
    try {
        return LoadedDataset{PointSequence(std::move(points), t_start, t_end, k), std::move(texts)};
    } catch (const InvalidSequence& e) {
        throw InputError(std::string("dataset violates sequence invariants: ") + e.what());
    }
}

} // namespace jim
