#pragma once

#include "jim/types.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace jim {

struct EventRecord {
    std::int64_t id{0};
    std::string title;
    std::string body;
    std::int64_t timestamp{0};  // epoch seconds
};

struct QueryRecord {
    std::string text;
    std::int64_t timestamp{0};  // epoch seconds
};

// Parameters of the weighted BM25 variant. The IDF table and average
// query length come from the query corpus (see make_similarity_config).
struct SimilarityConfig {
    double k1{1.2};
    double b{0.75};
    double avgql{1.0};
    std::unordered_map<std::string, double> idf;
};

// Lowercase, split on ASCII non-alphanumerics, drop tokens shorter than two
// bytes. Bytes >= 0x80 stay inside tokens so UTF-8 words survive intact.
[[nodiscard]] std::vector<std::string> tokenize(std::string_view text);

// IDF log((N+1)/(df+1)) + 1 and mean token count over the query corpus.
[[nodiscard]] SimilarityConfig make_similarity_config(const std::vector<QueryRecord>& queries, double k1 = 1.2,
                                                      double b = 0.75);

// Distinct terms in first-appearance order.
[[nodiscard]] std::vector<std::string> event_terms(const std::vector<std::string>& tokens);

// Uniform weights 1/|terms| over distinct terms.
[[nodiscard]] std::map<std::string, double> uniform_weights(const std::vector<std::string>& terms);

// Weighted BM25 score of the query against the (distinct) event terms.
// Throws InputError unless the weights of the event terms sum to 1.
[[nodiscard]] double similarity(const std::vector<std::string>& event_terms,
                                const std::map<std::string, double>& weights,
                                const std::vector<std::string>& query_terms, const SimilarityConfig& cfg);

struct JointDataset {
    std::vector<EventRecord> events;  // index = event channel
    PointSequence sequence;
    std::vector<std::string> texts;   // query text per point
};

struct BuildOptions {
    double threshold{1.25};
    bool include_body{false};  // event terms from title + body
    double k1{1.2};
    double b{0.75};
};

// Scores every query against every event, keeps those whose best score
// reaches the threshold (and is positive), assigns d = argmax (lower event
// id wins ties) and x = the best score. Throws EmptyResultError when nothing
// is kept.
[[nodiscard]] JointDataset build_joint_dataset(std::vector<EventRecord> events, const std::vector<QueryRecord>& queries,
                                               const BuildOptions& options = {});

[[nodiscard]] std::vector<EventRecord> read_events_jsonl(std::istream& in);
[[nodiscard]] std::vector<QueryRecord> read_query_log(std::istream& in);

// Header line {"k","t_start","t_end"} (plus optional extra keys) followed
// by one {"t","d","x","text"} object per point.
void write_dataset_jsonl(std::ostream& out, const PointSequence& seq, const std::vector<std::string>& texts,
                         const std::map<std::string, std::string>& extra_header = {});

struct LoadedDataset {
    PointSequence sequence;
    std::vector<std::string> texts;
};

[[nodiscard]] LoadedDataset read_dataset_jsonl(std::istream& in);

} // namespace jim
