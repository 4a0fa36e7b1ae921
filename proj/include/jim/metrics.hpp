#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace jim {

// Labels in rank order with their (descending) scores.
struct RankedList {
    std::vector<std::string> items;
    std::vector<double> scores;
};

// Sorts labels by score descending; ties keep the order of `labels`.
[[nodiscard]] RankedList rank_by_score(const std::vector<std::string>& labels, std::span<const double> scores);

[[nodiscard]] double accuracy_top1(const std::vector<std::string>& predicted, const std::vector<std::string>& actual);

// Full-list NDCG with raw gains and log2(r+1) discount; 1.0 when every gain
// is zero.
[[nodiscard]] double ndcg(const RankedList& predicted, const std::unordered_map<std::string, double>& gains);

// Base (non-extrapolated) rank-biased overlap truncated at the longer list.
[[nodiscard]] double rbo(const std::vector<std::string>& a, const std::vector<std::string>& b, double p = 0.9);

// Extrapolated RBO; 1.0 for identical lists.
[[nodiscard]] double rbo_extrapolated(const std::vector<std::string>& a, const std::vector<std::string>& b,
                                      double p = 0.9);

[[nodiscard]] double mrr(std::span<const double> reciprocal_ranks);

struct WilcoxonResult {
    double w_plus{0.0};
    double w_minus{0.0};
    double statistic{0.0};  // min(w_plus, w_minus)
    std::size_t n{0};       // non-zero differences
    double z{0.0};          // normal approximation (n > 25 only)
    bool significant{false};
};

// Two-sided signed-rank test at level 0.05.
[[nodiscard]] WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b);

// Two-sided 0.05 critical values of min(W+, W-) for n = 6..25.
[[nodiscard]] int wilcoxon_critical_value(std::size_t n);

} // namespace jim
