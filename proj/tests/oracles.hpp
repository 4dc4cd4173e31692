// Reference implementations written independently of the library so metric
// outputs can be cross-checked. Deliberately naive: quadratic scans, explicit
// index arithmetic, no shared helpers with core.

#pragma once

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace oracle {

struct VoteCounts {
    int nb = 0;
    int pb = 0;
    int b = 0;
};

inline bool combined_counts_breakdown(const VoteCounts& votes) {
    return votes.b + votes.pb > votes.nb;
}

inline bool plurality_breakdown(const VoteCounts& votes) {
    return (votes.pb > votes.nb) || (votes.b > votes.nb);
}

struct Detection {
    long tp = 0, fp = 0, fn = 0, tn = 0;
    double accuracy = 0.0, precision = 0.0, recall = 0.0, f1 = 0.0;
};

inline Detection detection(const std::vector<bool>& predicted, const std::vector<bool>& gold) {
    Detection d;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        if (predicted[i] && gold[i]) d.tp++;
        if (predicted[i] && !gold[i]) d.fp++;
        if (!predicted[i] && gold[i]) d.fn++;
        if (!predicted[i] && !gold[i]) d.tn++;
    }
    d.accuracy = double(d.tp + d.tn) / double(predicted.size());
    d.precision = (d.tp + d.fp) ? double(d.tp) / double(d.tp + d.fp) : 0.0;
    d.recall = (d.tp + d.fn) ? double(d.tp) / double(d.tp + d.fn) : 0.0;
    d.f1 = (d.precision + d.recall) > 0 ? 2 * d.precision * d.recall / (d.precision + d.recall)
                                        : 0.0;
    return d;
}

using Set = std::set<std::string>;

struct SetMatch {
    double em = 0.0, sm = 0.0, pm = 0.0, avg_f1 = 0.0;
};

inline SetMatch set_match(const std::vector<Set>& predicted, const std::vector<Set>& gold) {
    SetMatch result;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        std::vector<std::string> common;
        std::set_intersection(predicted[i].begin(), predicted[i].end(), gold[i].begin(),
                              gold[i].end(), std::back_inserter(common));
        if (predicted[i] == gold[i]) result.em += 1;
        bool superset = true;
        for (const auto& key : gold[i])
            if (!predicted[i].count(key)) superset = false;
        if (superset) result.sm += 1;
        if (!common.empty()) result.pm += 1;

        double f1;
        if (predicted[i].empty() && gold[i].empty()) {
            f1 = 1.0;
        } else if (predicted[i].empty() || gold[i].empty() || common.empty()) {
            f1 = 0.0;
        } else {
            double p = double(common.size()) / double(predicted[i].size());
            double r = double(common.size()) / double(gold[i].size());
            f1 = 2 * p * r / (p + r);
        }
        result.avg_f1 += f1;
    }
    double n = double(predicted.size());
    result.em /= n;
    result.sm /= n;
    result.pm /= n;
    result.avg_f1 /= n;
    return result;
}

// Valid only for tie-free inputs: rho = 1 - 6 sum(d^2) / (n (n^2 - 1)).
inline double spearman_rank_formula(const std::vector<double>& xs,
                                    const std::vector<double>& ys) {
    const std::size_t n = xs.size();
    auto rank_of = [n](const std::vector<double>& values, std::size_t index) {
        double rank = 1.0;
        for (std::size_t j = 0; j < n; ++j)
            if (values[j] < values[index]) rank += 1.0;
        return rank;
    };
    double sum_d2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double d = rank_of(xs, i) - rank_of(ys, i);
        sum_d2 += d * d;
    }
    return 1.0 - 6.0 * sum_d2 / (double(n) * (double(n) * double(n) - 1.0));
}

// Tie-aware: average ranks, then the Pearson formula expanded directly.
inline double spearman_tie_aware(const std::vector<double>& xs, const std::vector<double>& ys) {
    const std::size_t n = xs.size();
    auto average_rank = [n](const std::vector<double>& values, std::size_t index) {
        double below = 0.0, equal = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (values[j] < values[index]) below += 1.0;
            if (values[j] == values[index]) equal += 1.0;
        }
        // ranks below+1 .. below+equal share this value; use their midpoint
        return below + (equal + 1.0) / 2.0;
    };
    std::vector<double> rx(n), ry(n);
    for (std::size_t i = 0; i < n; ++i) {
        rx[i] = average_rank(xs, i);
        ry[i] = average_rank(ys, i);
    }
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += rx[i];
        sy += ry[i];
        sxx += rx[i] * rx[i];
        syy += ry[i] * ry[i];
        sxy += rx[i] * ry[i];
    }
    double num = double(n) * sxy - sx * sy;
    double den = std::sqrt(double(n) * sxx - sx * sx) * std::sqrt(double(n) * syy - sy * sy);
    if (den == 0.0) throw std::runtime_error("oracle: constant ranks");
    return num / den;
}

// Direct transcription of the MTLD procedure: factor counting with running
// TTR recomputed from scratch over the current window.
inline double mtld_pass(const std::vector<std::string>& sequence) {
    double factors = 0.0;
    std::size_t start = 0;
    const std::size_t n = sequence.size();
    for (std::size_t i = 0; i < n; ++i) {
        std::set<std::string> window_types(sequence.begin() + long(start),
                                           sequence.begin() + long(i) + 1);
        double ttr = double(window_types.size()) / double(i - start + 1);
        if (ttr < 0.72) {
            factors += 1.0;
            start = i + 1;
        }
    }
    if (start < n) {
        std::set<std::string> window_types(sequence.begin() + long(start), sequence.end());
        double ttr = double(window_types.size()) / double(n - start);
        factors += (1.0 - ttr) / (1.0 - 0.72);
    }
    return factors;
}

struct MtldReference {
    double value = 0.0;
    bool unsaturated = false;
};

inline MtldReference mtld_bidirectional(const std::vector<std::string>& tokens) {
    MtldReference result;
    const std::vector<std::string> reversed(tokens.rbegin(), tokens.rend());
    double total = 0.0;
    for (const auto* sequence : {&tokens, &reversed}) {
        double factors = mtld_pass(*sequence);
        if (factors == 0.0) {
            result.unsaturated = true;
            total += double(tokens.size());
        } else {
            total += double(tokens.size()) / factors;
        }
    }
    result.value = total / 2.0;
    return result;
}

// Median of sorted[lo..hi] by index arithmetic (inclusive bounds).
inline double slice_median(const std::vector<double>& sorted, std::size_t lo, std::size_t hi) {
    std::size_t len = hi - lo + 1;
    if (len % 2 == 1) return sorted[lo + len / 2];
    return (sorted[lo + len / 2 - 1] + sorted[lo + len / 2]) / 2.0;
}

// Tukey hinges: odd-length input keeps the median in both halves.
inline int fenced_max(std::vector<int> counts) {
    std::vector<double> sorted(counts.begin(), counts.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    double q1, q3;
    if (n % 2 == 1) {
        q1 = slice_median(sorted, 0, n / 2);
        q3 = slice_median(sorted, n / 2, n - 1);
    } else {
        q1 = slice_median(sorted, 0, n / 2 - 1);
        q3 = slice_median(sorted, n / 2, n - 1);
    }
    double iqr = q3 - q1;
    int best = -1;
    for (int count : counts) {
        if (double(count) >= q1 - 1.5 * iqr && double(count) <= q3 + 1.5 * iqr)
            best = std::max(best, count);
    }
    if (best < 0) throw std::runtime_error("oracle: all values fenced out");
    return best;
}

struct MeanStd {
    double mean = 0.0;
    double stddev = 0.0;
};

inline MeanStd mean_std(const std::vector<double>& values) {
    MeanStd out;
    for (double v : values) out.mean += v;
    out.mean /= double(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - out.mean) * (v - out.mean);
        out.stddev = std::sqrt(ss / double(values.size() - 1));
    }
    return out;
}

} // namespace oracle
