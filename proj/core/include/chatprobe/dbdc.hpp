// Evaluation harness over externally annotated breakdown corpora in the
// DBDC distribution layout: corpus loading, gold-label consolidation,
// detector runs with a resumable prediction cache, and metric reports.

#pragma once

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "chatprobe/detector.hpp"
#include "chatprobe/metrics.hpp"
#include "chatprobe/types.hpp"

namespace chatprobe {

enum class CorpusLanguage { en, ja };

std::string to_string(CorpusLanguage language);
CorpusLanguage corpus_language_from_string(const std::string& text);

struct AnnotatedTurn {
    int turn_index = 0; // source index, 0-based
    Role role = Role::system;
    std::string text;
    std::vector<AnnotatorLabel> annotations;
    // Present only in the error-type corpus: normalized union over annotators.
    std::optional<metrics::ErrorTypeSet> gold_error_types;
};

struct AnnotatedDialogue {
    std::string dialogue_id;
    std::vector<AnnotatedTurn> turns;
};

struct DbdcCorpus {
    std::string corpus_id; // directory stem; keys the prediction cache
    CorpusLanguage language = CorpusLanguage::en;
    std::vector<AnnotatedDialogue> dialogues;
};

// Recursively loads every *.json under path (one document per dialogue,
// lexicographic order). Source label symbols map O -> NB, T -> PB, X -> B.
// Throws ParseError naming the file on malformed documents or unknown
// symbols.
DbdcCorpus load_dbdc_corpus(const std::filesystem::path& path, CorpusLanguage language);

AnnotatedDialogue parse_dbdc_dialogue(const nlohmann::json& doc, const std::string& source_name);

struct CorpusSummary {
    int dialogue_count = 0;
    int system_turn_count = 0; // annotated system turns only
    long annotation_count = 0; // individual annotator votes
    // Shares of individual votes.
    double nb_share = 0.0;
    double pb_share = 0.0;
    double b_share = 0.0;
    // Shares of consolidated per-turn labels.
    double b_plus_share = 0.0;
    double nb_minus_share = 0.0;
};

CorpusSummary summarize_corpus(
    const DbdcCorpus& corpus,
    metrics::ConsolidationRule rule = metrics::ConsolidationRule::combined_counts);

metrics::LabelCounts count_labels(const AnnotatedTurn& turn);

// Append-only JSONL store of per-turn detector outputs so interrupted
// evaluations resume without re-querying. Keyed by corpus, dialogue, turn,
// detector mode and model; the four-way mode/model comparison shares nothing.
class PredictionCache {
  public:
    // An empty path keeps the cache in memory only.
    explicit PredictionCache(std::filesystem::path file = {});

    std::optional<BreakdownAnnotation> lookup(const std::string& corpus_id,
                                              const std::string& dialogue_id, int turn_index,
                                              DetectorMode mode, const std::string& model) const;
    void store(const std::string& corpus_id, const std::string& dialogue_id, int turn_index,
               DetectorMode mode, const std::string& model, const BreakdownAnnotation& annotation);

    std::size_t size() const;

  private:
    std::filesystem::path file_;
    mutable std::mutex mutex_;
    std::map<std::string, BreakdownAnnotation> entries_;
};

struct EvaluateOptions {
    DetectorMode mode = DetectorMode::extended_taxonomy;
    std::string model;
    metrics::ConsolidationRule rule = metrics::ConsolidationRule::combined_counts;
    PredictionCache* cache = nullptr; // optional resume store
    TranscriptLog* transcript = nullptr;
    // Injectable for reproducible reports; empty -> current UTC time.
    std::string timestamp;
};

struct DetectionEvaluation {
    std::string corpus_id;
    DetectorMode mode = DetectorMode::extended_taxonomy;
    std::string model;
    std::string timestamp;
    metrics::DetectionMetrics metrics;
    int evaluated_turns = 0; // turns contributing to the metrics
    int cached_turns = 0;    // of those, served from the cache
    int skipped_turns = 0;   // gateway failures after retries, excluded
};

DetectionEvaluation evaluate_detection(const DbdcCorpus& corpus, const EvaluateOptions& options,
                                       Backend& backend);

struct ErrorTypeEvaluation {
    std::string corpus_id;
    std::string model;
    std::string timestamp;
    metrics::ErrorTypeMetrics metrics;
    double mean_predicted_size = 0.0;
    double mean_gold_size = 0.0;
    int evaluated_turns = 0;
    int cached_turns = 0;
    int skipped_turns = 0;
    // Gold-breakdown turns whose comparison set emptied out (see below).
    int excluded_turns = 0;
};

// Runs the extended-taxonomy detector over gold-breakdown turns that carry
// gold error types. "ignore_expectation" is absent from the source taxonomy,
// so it is removed from both sides before comparison; turns whose gold set
// empties are excluded and counted.
ErrorTypeEvaluation evaluate_error_types(const DbdcCorpus& corpus, const EvaluateOptions& options,
                                         Backend& backend);

nlohmann::json detection_evaluation_to_json(const DetectionEvaluation& evaluation);
nlohmann::json error_type_evaluation_to_json(const ErrorTypeEvaluation& evaluation);
nlohmann::json corpus_summary_to_json(const CorpusSummary& summary);

// Single-row table in Model | System | Accuracy | Precision | Recall | F1
// Score order.
std::string render_detection_text(const DetectionEvaluation& evaluation);
std::string render_error_type_text(const ErrorTypeEvaluation& evaluation);

std::string current_utc_timestamp();

} // namespace chatprobe
