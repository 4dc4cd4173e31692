// Deterministic metric kernels: label consolidation, detection metrics,
// error-type set metrics, Spearman correlation, MTLD lexical diversity,
// run aggregation and outlier-fenced turn budgets. All functions are pure;
// identical inputs give bit-identical outputs.

#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "chatprobe/types.hpp"

namespace chatprobe::metrics {

enum class ConsolidatedLabel { B_plus, NB_minus };

std::string to_string(ConsolidatedLabel label);

struct LabelCounts {
    int nb = 0;
    int pb = 0;
    int b = 0;

    int total() const { return nb + pb + b; }
};

// How three-way annotator votes collapse into the binary label.
// combined_counts: breakdown iff count(B) + count(PB) > count(NB), ties are
// conservative (NB-). plurality: the single most-voted label decides, with
// NB winning ties.
enum class ConsolidationRule { combined_counts, plurality };

ConsolidatedLabel consolidate_label(const LabelCounts& counts,
                                    ConsolidationRule rule = ConsolidationRule::combined_counts);

struct DetectionMetrics {
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    long tp = 0, fp = 0, fn = 0, tn = 0;
    // Set when a positive denominator was empty and the metric defaulted to 0.
    bool precision_defined = true;
    bool recall_defined = true;
};

// Standard binary classification metrics with B+ as the positive class.
DetectionMetrics detection_metrics(const std::vector<ConsolidatedLabel>& predictions,
                                   const std::vector<ConsolidatedLabel>& gold);

using ErrorTypeSet = std::set<std::string>;

struct ErrorTypeMetrics {
    double em = 0.0;     // fraction of turns with exact set match
    double sm = 0.0;     // fraction where predicted is a superset of gold
    double pm = 0.0;     // fraction with nonempty intersection
    double avg_f1 = 0.0; // mean over turns of the per-turn set F1
};

// Set metrics over gold-breakdown turns (gold sets are expected nonempty).
// Per-turn F1 is the harmonic mean of set precision and recall; it is 0 when
// either set is empty, except that two empty sets count as 1 for totality.
ErrorTypeMetrics error_type_metrics(const std::vector<ErrorTypeSet>& predicted,
                                    const std::vector<ErrorTypeSet>& gold);

double turn_error_type_f1(const ErrorTypeSet& predicted, const ErrorTypeSet& gold);

// Spearman rank correlation: Pearson correlation of average-fractional ranks
// (ties receive averaged ranks). Throws UsageError on length mismatch, fewer
// than two points, or an all-constant side.
double spearman(const std::vector<double>& xs, const std::vector<double>& ys);

// Average-fractional ranks (1-based, ties averaged).
std::vector<double> fractional_ranks(const std::vector<double>& values);

struct MtldResult {
    double value = 0.0;
    // True when a pass never completed a factor (very short all-unique text);
    // the value then falls back to the token count.
    bool unsaturated = false;
};

// Bidirectional MTLD (McCarthy & Jarvis): mean of a forward and a backward
// pass. A pass accumulates factors every time the running type-token ratio
// drops below 0.72 and closes with a partial factor (1 - TTR) / (1 - 0.72).
// Pass value = token count / factor count. Throws UsageError on empty input.
MtldResult mtld(const std::vector<std::string>& tokens);

struct RunAggregate {
    double mean = 0.0;
    double stddev = 0.0; // sample standard deviation (n-1); 0 for a single run
};

RunAggregate aggregate_runs(const std::vector<double>& per_run_values);

// Largest user-turn count after dropping outliers beyond 1.5 * IQR from the
// quartiles (Tukey hinges: halves include the median for odd-length input).
int max_turns_from_human_data(const std::vector<int>& user_turn_counts);

struct Quartiles {
    double q1 = 0.0;
    double q3 = 0.0;
};

Quartiles quartiles(std::vector<double> values);

double median(std::vector<double> values);

// Frozen word tokenizer used for UTL/STL/MTLD: lowercase, split on
// whitespace, strip leading and trailing punctuation, drop empties. Only
// meaningful for whitespace-delimited languages.
std::vector<std::string> tokenize(const std::string& text);

// Number of tokens `tokenize` yields.
int word_count(const std::string& text);

} // namespace chatprobe::metrics
