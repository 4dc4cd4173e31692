#include "chatprobe/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "chatprobe/errors.hpp"

namespace chatprobe::metrics {

std::string to_string(ConsolidatedLabel label) {
    return label == ConsolidatedLabel::B_plus ? "B+" : "NB-";
}

ConsolidatedLabel consolidate_label(const LabelCounts& counts, ConsolidationRule rule) {
    if (counts.nb < 0 || counts.pb < 0 || counts.b < 0) {
        throw UsageError("label counts must be nonnegative");
    }
    if (counts.total() == 0) {
        throw UsageError("cannot consolidate a turn with zero annotator labels");
    }
    if (rule == ConsolidationRule::combined_counts) {
        return counts.b + counts.pb > counts.nb ? ConsolidatedLabel::B_plus
                                                : ConsolidatedLabel::NB_minus;
    }
    // plurality: NB wins ties; PB and B both map to breakdown, so only the
    // NB count matters against the larger of the two.
    int best_breakdown = std::max(counts.pb, counts.b);
    return best_breakdown > counts.nb ? ConsolidatedLabel::B_plus : ConsolidatedLabel::NB_minus;
}

DetectionMetrics detection_metrics(const std::vector<ConsolidatedLabel>& predictions,
                                   const std::vector<ConsolidatedLabel>& gold) {
    if (predictions.size() != gold.size()) {
        throw UsageError("detection_metrics: prediction/gold length mismatch (" +
                         std::to_string(predictions.size()) + " vs " +
                         std::to_string(gold.size()) + ")");
    }
    if (predictions.empty()) {
        throw UsageError("detection_metrics: need at least one labeled turn");
    }
    DetectionMetrics m;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        bool pred_pos = predictions[i] == ConsolidatedLabel::B_plus;
        bool gold_pos = gold[i] == ConsolidatedLabel::B_plus;
        if (pred_pos && gold_pos) ++m.tp;
        else if (pred_pos && !gold_pos) ++m.fp;
        else if (!pred_pos && gold_pos) ++m.fn;
        else ++m.tn;
    }
    const double n = static_cast<double>(predictions.size());
    m.accuracy = static_cast<double>(m.tp + m.tn) / n;
    if (m.tp + m.fp > 0) {
        m.precision = static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fp);
    } else {
        m.precision_defined = false;
    }
    if (m.tp + m.fn > 0) {
        m.recall = static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fn);
    } else {
        m.recall_defined = false;
    }
    m.f1 = (m.precision + m.recall) > 0.0
               ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
               : 0.0;
    return m;
}

double turn_error_type_f1(const ErrorTypeSet& predicted, const ErrorTypeSet& gold) {
    if (predicted.empty() && gold.empty()) return 1.0;
    if (predicted.empty() || gold.empty()) return 0.0;
    std::size_t overlap = 0;
    for (const auto& key : predicted) overlap += gold.count(key);
    if (overlap == 0) return 0.0;
    double precision = static_cast<double>(overlap) / static_cast<double>(predicted.size());
    double recall = static_cast<double>(overlap) / static_cast<double>(gold.size());
    return 2.0 * precision * recall / (precision + recall);
}

ErrorTypeMetrics error_type_metrics(const std::vector<ErrorTypeSet>& predicted,
                                    const std::vector<ErrorTypeSet>& gold) {
    if (predicted.size() != gold.size()) {
        throw UsageError("error_type_metrics: prediction/gold length mismatch");
    }
    if (predicted.empty()) {
        throw UsageError("error_type_metrics: need at least one turn");
    }
    ErrorTypeMetrics m;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        const auto& p = predicted[i];
        const auto& g = gold[i];
        bool exact = p == g;
        bool superset = std::includes(p.begin(), p.end(), g.begin(), g.end());
        bool partial = std::any_of(g.begin(), g.end(),
                                   [&](const std::string& key) { return p.count(key) > 0; });
        m.em += exact ? 1.0 : 0.0;
        m.sm += superset ? 1.0 : 0.0;
        m.pm += partial ? 1.0 : 0.0;
        m.avg_f1 += turn_error_type_f1(p, g);
    }
    const double n = static_cast<double>(predicted.size());
    m.em /= n;
    m.sm /= n;
    m.pm /= n;
    m.avg_f1 /= n;
    return m;
}

std::vector<double> fractional_ranks(const std::vector<double>& values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        // Positions i..j share a value; assign the average 1-based rank.
        double rank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
        i = j + 1;
    }
    return ranks;
}

namespace {

double pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
    const double n = static_cast<double>(xs.size());
    double mean_x = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    double mean_y = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double cov = 0.0, var_x = 0.0, var_y = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double dx = xs[i] - mean_x;
        double dy = ys[i] - mean_y;
        cov += dx * dy;
        var_x += dx * dx;
        var_y += dy * dy;
    }
    if (var_x == 0.0 || var_y == 0.0) {
        throw UsageError("spearman: correlation undefined for constant input");
    }
    return cov / std::sqrt(var_x * var_y);
}

} // namespace

double spearman(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size()) throw UsageError("spearman: length mismatch");
    if (xs.size() < 2) throw UsageError("spearman: need at least two points");
    return pearson(fractional_ranks(xs), fractional_ranks(ys));
}

namespace {

constexpr double kMtldThreshold = 0.72;

// One MTLD pass; returns the (possibly fractional) factor count.
double mtld_pass_factors(const std::vector<std::string>& tokens, bool backward) {
    double factors = 0.0;
    std::unordered_set<std::string> types;
    std::size_t count = 0;
    const std::size_t n = tokens.size();
    for (std::size_t i = 0; i < n; ++i) {
        const std::string& token = tokens[backward ? n - 1 - i : i];
        types.insert(token);
        ++count;
        double ttr = static_cast<double>(types.size()) / static_cast<double>(count);
        if (ttr < kMtldThreshold) {
            factors += 1.0;
            types.clear();
            count = 0;
        }
    }
    if (count > 0) {
        double ttr = static_cast<double>(types.size()) / static_cast<double>(count);
        factors += (1.0 - ttr) / (1.0 - kMtldThreshold);
    }
    return factors;
}

} // namespace

MtldResult mtld(const std::vector<std::string>& tokens) {
    if (tokens.empty()) throw UsageError("mtld: empty token list");
    const double n = static_cast<double>(tokens.size());
    MtldResult result;
    double total = 0.0;
    for (bool backward : {false, true}) {
        double factors = mtld_pass_factors(tokens, backward);
        if (factors == 0.0) {
            result.unsaturated = true;
            total += n;
        } else {
            total += n / factors;
        }
    }
    result.value = total / 2.0;
    return result;
}

RunAggregate aggregate_runs(const std::vector<double>& per_run_values) {
    if (per_run_values.empty()) throw UsageError("aggregate_runs: need at least one run");
    RunAggregate agg;
    const double n = static_cast<double>(per_run_values.size());
    agg.mean = std::accumulate(per_run_values.begin(), per_run_values.end(), 0.0) / n;
    if (per_run_values.size() > 1) {
        double ss = 0.0;
        for (double v : per_run_values) ss += (v - agg.mean) * (v - agg.mean);
        agg.stddev = std::sqrt(ss / (n - 1.0));
    }
    return agg;
}

double median(std::vector<double> values) {
    if (values.empty()) throw UsageError("median: empty input");
    std::sort(values.begin(), values.end());
    std::size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

Quartiles quartiles(std::vector<double> values) {
    if (values.empty()) throw UsageError("quartiles: empty input");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    std::vector<double> lower, upper;
    if (n % 2 == 1) {
        // Tukey hinges: the median joins both halves.
        lower.assign(values.begin(), values.begin() + n / 2 + 1);
        upper.assign(values.begin() + n / 2, values.end());
    } else {
        lower.assign(values.begin(), values.begin() + n / 2);
        upper.assign(values.begin() + n / 2, values.end());
    }
    return Quartiles{median(std::move(lower)), median(std::move(upper))};
}

int max_turns_from_human_data(const std::vector<int>& user_turn_counts) {
    if (user_turn_counts.empty()) {
        throw UsageError("max_turns_from_human_data: empty input");
    }
    for (int count : user_turn_counts) {
        if (count < 1) throw UsageError("max_turns_from_human_data: counts must be positive");
    }
    std::vector<double> values(user_turn_counts.begin(), user_turn_counts.end());
    Quartiles q = quartiles(values);
    double iqr = q.q3 - q.q1;
    double low_fence = q.q1 - 1.5 * iqr;
    double high_fence = q.q3 + 1.5 * iqr;
    int best = 0;
    bool any = false;
    for (int count : user_turn_counts) {
        if (count >= low_fence && count <= high_fence) {
            best = std::max(best, count);
            any = true;
        }
    }
    if (!any) throw UsageError("max_turns_from_human_data: every value was fenced out");
    return best;
}

std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> tokens;
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        while (i < n && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        std::size_t start = i;
        while (i < n && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        if (i == start) continue;
        std::size_t begin = start, end = i;
        while (begin < end && std::ispunct(static_cast<unsigned char>(text[begin]))) ++begin;
        while (end > begin && std::ispunct(static_cast<unsigned char>(text[end - 1]))) --end;
        if (begin == end) continue;
        std::string token = text.substr(begin, end - begin);
        std::transform(token.begin(), token.end(), token.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        tokens.push_back(std::move(token));
    }
    return tokens;
}

int word_count(const std::string& text) { return static_cast<int>(tokenize(text).size()); }

} // namespace chatprobe::metrics
