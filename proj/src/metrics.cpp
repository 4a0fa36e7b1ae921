#include "jim/metrics.hpp"

#include "jim/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <unordered_set>

namespace jim {

namespace {

constexpr double kNormalCritical = 1.959963984540054;

void check_persistence(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw InputError("RBO persistence must lie in (0, 1)");
    }
}

void check_unique(const std::vector<std::string>& list) {
    std::unordered_set<std::string> seen;
    for (const std::string& s : list) {
        if (!seen.insert(s).second) {
            throw InputError("duplicate label '" + s + "' in ranked list");
        }
    }
}

// overlap[d-1] = |A_d ∩ B_d| for d = 1..max(|a|, |b|), where a prefix longer
// than its list is the whole list.
std::vector<double> prefix_overlaps(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    const std::size_t depth = std::max(a.size(), b.size());
    std::vector<double> overlap(depth, 0.0);
    std::unordered_set<std::string> seen_a;
    std::unordered_set<std::string> seen_b;
    double x = 0.0;
    for (std::size_t d = 0; d < depth; ++d) {
        const std::string* ai = d < a.size() ? &a[d] : nullptr;
        const std::string* bi = d < b.size() ? &b[d] : nullptr;
        if (ai != nullptr && bi != nullptr && *ai == *bi) {
            x += 1.0;
        } else {
            if (ai != nullptr && seen_b.count(*ai) != 0) {
                x += 1.0;
            }
            if (bi != nullptr && seen_a.count(*bi) != 0) {
                x += 1.0;
            }
        }
        if (ai != nullptr) {
            seen_a.insert(*ai);
        }
        if (bi != nullptr) {
            seen_b.insert(*bi);
        }
        overlap[d] = x;
    }
    return overlap;
}

} // namespace

RankedList rank_by_score(const std::vector<std::string>& labels, std::span<const double> scores) {
    if (labels.size() != scores.size()) {
        throw InputError("labels and scores differ in length");
    }
    std::vector<std::size_t> order(labels.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return scores[i] > scores[j]; });
    RankedList out;
    for (std::size_t i : order) {
        out.items.push_back(labels[i]);
        out.scores.push_back(scores[i]);
    }
    return out;
}

double accuracy_top1(const std::vector<std::string>& predicted, const std::vector<std::string>& actual) {
    if (predicted.size() != actual.size()) {
        throw InputError("accuracy needs label sequences of equal length");
    }
    if (predicted.empty()) {
        throw InputError("accuracy of an empty sequence is undefined");
    }
    std::size_t hits = 0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        hits += predicted[i] == actual[i] ? 1 : 0;
    }
    return static_cast<double>(hits) / static_cast<double>(predicted.size());
}

double ndcg(const RankedList& predicted, const std::unordered_map<std::string, double>& gains) {
    check_unique(predicted.items);
    std::vector<double> ordered;
    ordered.reserve(predicted.items.size());
    for (const std::string& item : predicted.items) {
        const auto it = gains.find(item);
        if (it == gains.end()) {
            throw InputError("no gain for label '" + item + "'");
        }
        if (it->second < 0.0) {
            throw InputError("gains must be non-negative");
        }
        ordered.push_back(it->second);
    }
    double dcg = 0.0;
    for (std::size_t r = 0; r < ordered.size(); ++r) {
        dcg += ordered[r] / std::log2(static_cast<double>(r) + 2.0);
    }
    std::sort(ordered.begin(), ordered.end(), std::greater<>());
    double idcg = 0.0;
    for (std::size_t r = 0; r < ordered.size(); ++r) {
        idcg += ordered[r] / std::log2(static_cast<double>(r) + 2.0);
    }
    if (idcg == 0.0) {
        return 1.0;
    }
    return dcg / idcg;
}

double rbo(const std::vector<std::string>& a, const std::vector<std::string>& b, double p) {
    check_persistence(p);
    check_unique(a);
    check_unique(b);
    const std::vector<double> x = prefix_overlaps(a, b);
    double sum = 0.0;
    double weight = 1.0;
    for (std::size_t d = 1; d <= x.size(); ++d) {
        sum += weight * x[d - 1] / static_cast<double>(d);
        weight *= p;
    }
    return (1.0 - p) * sum;
}

double rbo_extrapolated(const std::vector<std::string>& a, const std::vector<std::string>& b, double p) {
    check_persistence(p);
    check_unique(a);
    check_unique(b);
    const std::size_t s = std::min(a.size(), b.size());
    const std::size_t l = std::max(a.size(), b.size());
    if (l == 0) {
        return 1.0;
    }
    if (s == 0) {
        return 0.0;
    }
    const std::vector<double> x = prefix_overlaps(a, b);
    const double xs = x[s - 1];
    const double xl = x[l - 1];
    double sum = 0.0;
    double weight = p;
    for (std::size_t d = 1; d <= l; ++d) {
        const double dd = static_cast<double>(d);
        sum += weight * x[d - 1] / dd;
        if (d > s) {
            sum += weight * xs * static_cast<double>(d - s) / (static_cast<double>(s) * dd);
        }
        weight *= p;
    }
    const double pl = std::pow(p, static_cast<double>(l));
    const double value = (1.0 - p) / p * sum + ((xl - xs) / static_cast<double>(l) + xs / static_cast<double>(s)) * pl;
    return std::clamp(value, 0.0, 1.0);
}

double mrr(std::span<const double> reciprocal_ranks) {
    if (reciprocal_ranks.empty()) {
        throw InputError("MRR of an empty list is undefined");
    }
    return std::accumulate(reciprocal_ranks.begin(), reciprocal_ranks.end(), 0.0) /
           static_cast<double>(reciprocal_ranks.size());
}

int wilcoxon_critical_value(std::size_t n) {
    static constexpr std::array<int, 20> kTable{0,  2,  3,  5,  8,  10, 13, 17, 21, 25,
                                                29, 34, 40, 46, 52, 58, 65, 73, 81, 89};
    if (n < 6 || n > 25) {
        throw InputError("exact Wilcoxon table covers n = 6..25");
    }
    return kTable[n - 6];
}

WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw InputError("Wilcoxon test needs paired samples of equal length");
    }
    std::vector<double> diff;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        if (!std::isfinite(d)) {
            throw InputError("Wilcoxon samples must be finite");
        }
        if (d != 0.0) {
            diff.push_back(d);
        }
    }
    WilcoxonResult result;
    result.n = diff.size();
    if (diff.empty()) {
        return result;
    }

    std::vector<std::size_t> order(diff.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return std::abs(diff[i]) < std::abs(diff[j]); });
    std::vector<double> rank(diff.size());
    double tie_term = 0.0;
    for (std::size_t start = 0; start < order.size();) {
        std::size_t end = start + 1;
        while (end < order.size() && std::abs(diff[order[end]]) == std::abs(diff[order[start]])) {
            ++end;
        }
        const double mid = 0.5 * static_cast<double>(start + 1 + end);
        for (std::size_t m = start; m < end; ++m) {
            rank[order[m]] = mid;
        }
        const double t = static_cast<double>(end - start);
        tie_term += t * t * t - t;
        start = end;
    }
    for (std::size_t i = 0; i < diff.size(); ++i) {
        (diff[i] > 0.0 ? result.w_plus : result.w_minus) += rank[i];
    }
    result.statistic = std::min(result.w_plus, result.w_minus);

    const double n = static_cast<double>(result.n);
    if (result.n < 6) {
        return result;
    }
    if (result.n <= 25) {
        result.significant = result.statistic <= static_cast<double>(wilcoxon_critical_value(result.n));
        return result;
    }
    const double mean = n * (n + 1.0) / 4.0;
    const double var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - tie_term / 48.0;
    if (var > 0.0) {
        result.z = std::max(std::abs(result.w_plus - mean) - 0.5, 0.0) / std::sqrt(var);
    }
    result.significant = result.z > kNormalCritical;
    return result;
}

} // namespace jim
