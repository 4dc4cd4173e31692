#include "chatprobe/dbdc.hpp"

#include <algorithm>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include "chatprobe/errors.hpp"
#include "chatprobe/serialization.hpp"
#include "chatprobe/taxonomy.hpp"

namespace chatprobe {

using nlohmann::json;

std::string to_string(CorpusLanguage language) {
    return language == CorpusLanguage::en ? "en" : "ja";
}

CorpusLanguage corpus_language_from_string(const std::string& text) {
    if (text == "en") return CorpusLanguage::en;
    if (text == "ja") return CorpusLanguage::ja;
    throw ValidationError("language", "expected en or ja, got \"" + text + "\"");
}

namespace {

AnnotatorLabel label_from_symbol(const std::string& symbol, const std::string& source_name) {
    if (symbol == "O") return AnnotatorLabel::NB;
    if (symbol == "T") return AnnotatorLabel::PB;
    if (symbol == "X") return AnnotatorLabel::B;
    throw ParseError(source_name, "unknown breakdown symbol \"" + symbol + "\"");
}

} // namespace

AnnotatedDialogue parse_dbdc_dialogue(const json& doc, const std::string& source_name) {
    if (!doc.is_object() || !doc.contains("turns") || !doc["turns"].is_array())
        throw ParseError(source_name, "expected an object with a turns array");

    AnnotatedDialogue dialogue;
    dialogue.dialogue_id = doc.value("dialogue-id", "");
    if (dialogue.dialogue_id.empty())
        throw ParseError(source_name, "missing dialogue-id");

    for (const auto& raw : doc["turns"]) {
        if (!raw.is_object() || !raw.contains("speaker") || !raw.contains("utterance"))
            throw ParseError(source_name, "turn missing speaker or utterance");

        AnnotatedTurn turn;
        turn.turn_index = raw.value("turn-index", static_cast<int>(dialogue.turns.size()));
        const std::string speaker = raw["speaker"].get<std::string>();
        if (speaker == "S")
            turn.role = Role::system;
        else if (speaker == "U")
            turn.role = Role::user;
        else
            throw ParseError(source_name, "unknown speaker \"" + speaker + "\"");
        turn.text = raw["utterance"].get<std::string>();

        bool saw_error_category = false;
        metrics::ErrorTypeSet gold;
        if (raw.contains("annotations")) {
            if (!raw["annotations"].is_array())
                throw ParseError(source_name, "annotations must be an array");
            for (const auto& annotation : raw["annotations"]) {
                if (!annotation.is_object() || !annotation.contains("breakdown"))
                    throw ParseError(source_name, "annotation missing breakdown symbol");
                turn.annotations.push_back(
                    label_from_symbol(annotation["breakdown"].get<std::string>(), source_name));
                if (annotation.contains("error_category") &&
                    !annotation["error_category"].is_null()) {
                    saw_error_category = true;
                    for (const auto& category : annotation["error_category"]) {
                        const std::string value = category.get<std::string>();
                        auto key = normalize_error_category(value);
                        if (!key)
                            throw ParseError(source_name,
                                             "unknown error category \"" + value + "\"");
                        gold.insert(*key);
                    }
                }
            }
        }
        if (saw_error_category) turn.gold_error_types = std::move(gold);
        dialogue.turns.push_back(std::move(turn));
    }
    return dialogue;
}

DbdcCorpus load_dbdc_corpus(const std::filesystem::path& path, CorpusLanguage language) {
    if (!std::filesystem::exists(path))
        throw ParseError(path.string(), "corpus path does not exist");

    std::vector<std::filesystem::path> files;
    if (std::filesystem::is_regular_file(path)) {
        files.push_back(path);
    } else {
        for (const auto& entry : std::filesystem::recursive_directory_iterator(path))
            if (entry.is_regular_file() && entry.path().extension() == ".json")
                files.push_back(entry.path());
        std::sort(files.begin(), files.end());
    }
    if (files.empty()) throw ParseError(path.string(), "no .json dialogue files found");

    DbdcCorpus corpus;
    corpus.corpus_id = std::filesystem::is_regular_file(path) ? path.stem().string()
                                                              : path.filename().string();
    if (corpus.corpus_id.empty()) corpus.corpus_id = "corpus";
    corpus.language = language;
    for (const auto& file : files) {
        json doc;
        try {
            doc = load_json(file.string());
        } catch (const std::exception& e) {
            throw ParseError(file.string(), e.what());
        }
        corpus.dialogues.push_back(parse_dbdc_dialogue(doc, file.string()));
    }
    return corpus;
}

metrics::LabelCounts count_labels(const AnnotatedTurn& turn) {
    metrics::LabelCounts counts;
    for (auto label : turn.annotations) {
        switch (label) {
        case AnnotatorLabel::NB: ++counts.nb; break;
        case AnnotatorLabel::PB: ++counts.pb; break;
        case AnnotatorLabel::B: ++counts.b; break;
        }
    }
    return counts;
}

CorpusSummary summarize_corpus(const DbdcCorpus& corpus, metrics::ConsolidationRule rule) {
    CorpusSummary summary;
    summary.dialogue_count = static_cast<int>(corpus.dialogues.size());
    long nb = 0, pb = 0, b = 0, b_plus = 0;
    for (const auto& dialogue : corpus.dialogues) {
        for (const auto& turn : dialogue.turns) {
            if (turn.role != Role::system || turn.annotations.empty()) continue;
            ++summary.system_turn_count;
            auto counts = count_labels(turn);
            nb += counts.nb;
            pb += counts.pb;
            b += counts.b;
            if (metrics::consolidate_label(counts, rule) == metrics::ConsolidatedLabel::B_plus)
                ++b_plus;
        }
    }
    summary.annotation_count = nb + pb + b;
    if (summary.annotation_count > 0) {
        const double total = static_cast<double>(summary.annotation_count);
        summary.nb_share = static_cast<double>(nb) / total;
        summary.pb_share = static_cast<double>(pb) / total;
        summary.b_share = static_cast<double>(b) / total;
    }
    if (summary.system_turn_count > 0) {
        summary.b_plus_share =
            static_cast<double>(b_plus) / static_cast<double>(summary.system_turn_count);
        summary.nb_minus_share = 1.0 - summary.b_plus_share;
    }
    return summary;
}

namespace {

std::string cache_key(const std::string& corpus_id, const std::string& dialogue_id,
                      int turn_index, DetectorMode mode, const std::string& model) {
    std::string key = corpus_id;
    key += '\x1f';
    key += dialogue_id;
    key += '\x1f';
    key += std::to_string(turn_index);
    key += '\x1f';
    key += to_string(mode);
    key += '\x1f';
    key += model;
    return key;
}

} // namespace

PredictionCache::PredictionCache(std::filesystem::path file) : file_(std::move(file)) {
    if (file_.empty() || !std::filesystem::exists(file_)) return;
    std::ifstream in(file_);
    if (!in) throw ParseError(file_.string(), "cannot open prediction cache");
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json entry;
        try {
            entry = json::parse(line);
            entries_[cache_key(entry.at("corpus_id").get<std::string>(),
                               entry.at("dialogue_id").get<std::string>(),
                               entry.at("turn_index").get<int>(),
                               detector_mode_from_string(entry.at("mode").get<std::string>()),
                               entry.at("model").get<std::string>())] =
                annotation_from_json(entry.at("annotation"));
        } catch (const std::exception& e) {
            throw ParseError(file_.string(),
                             "bad cache line " + std::to_string(line_no) + ": " + e.what());
        }
    }
}

std::optional<BreakdownAnnotation> PredictionCache::lookup(const std::string& corpus_id,
                                                           const std::string& dialogue_id,
                                                           int turn_index, DetectorMode mode,
                                                           const std::string& model) const {
    std::lock_guard lock(mutex_);
    auto it = entries_.find(cache_key(corpus_id, dialogue_id, turn_index, mode, model));
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

void PredictionCache::store(const std::string& corpus_id, const std::string& dialogue_id,
                            int turn_index, DetectorMode mode, const std::string& model,
                            const BreakdownAnnotation& annotation) {
    std::lock_guard lock(mutex_);
    entries_[cache_key(corpus_id, dialogue_id, turn_index, mode, model)] = annotation;
    if (file_.empty()) return;
    if (file_.has_parent_path()) std::filesystem::create_directories(file_.parent_path());
    std::ofstream out(file_, std::ios::app);
    if (!out) throw ParseError(file_.string(), "cannot append to prediction cache");
    out << json{{"corpus_id", corpus_id},
                {"dialogue_id", dialogue_id},
                {"turn_index", turn_index},
                {"mode", to_string(mode)},
                {"model", model},
                {"annotation", annotation_to_json(annotation)}}
               .dump()
        << "\n";
}

std::size_t PredictionCache::size() const {
    std::lock_guard lock(mutex_);
    return entries_.size();
}

std::string current_utc_timestamp() {
    std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buffer[32];
    std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buffer;
}

namespace {

struct TurnPrediction {
    bool ok = false;
    bool from_cache = false;
    BreakdownAnnotation annotation;
};

TurnPrediction predict_turn(const DbdcCorpus& corpus, const AnnotatedDialogue& dialogue,
                            const AnnotatedTurn& turn, const std::vector<Turn>& history,
                            const EvaluateOptions& options, Backend& backend) {
    TurnPrediction out;
    if (options.cache) {
        auto cached = options.cache->lookup(corpus.corpus_id, dialogue.dialogue_id,
                                            turn.turn_index, options.mode, options.model);
        if (cached) {
            out.ok = true;
            out.from_cache = true;
            out.annotation = std::move(*cached);
            return out;
        }
    }
    DetectorOptions detector;
    detector.mode = options.mode;
    detector.model = options.model;
    detector.transcript = options.transcript;
    try {
        out.annotation = detect_breakdown(history, turn.text, backend, detector);
        out.ok = true;
    } catch (const std::exception&) {
        return out;
    }
    if (options.cache)
        options.cache->store(corpus.corpus_id, dialogue.dialogue_id, turn.turn_index,
                             options.mode, options.model, out.annotation);
    return out;
}

} // namespace

DetectionEvaluation evaluate_detection(const DbdcCorpus& corpus, const EvaluateOptions& options,
                                       Backend& backend) {
    DetectionEvaluation report;
    report.corpus_id = corpus.corpus_id;
    report.mode = options.mode;
    report.model = options.model.empty() ? kDefaultModel : options.model;
    report.timestamp = options.timestamp.empty() ? current_utc_timestamp() : options.timestamp;

    EvaluateOptions effective = options;
    effective.model = report.model;

    std::vector<metrics::ConsolidatedLabel> predictions;
    std::vector<metrics::ConsolidatedLabel> gold;

    for (const auto& dialogue : corpus.dialogues) {
        std::vector<Turn> history;
        for (const auto& turn : dialogue.turns) {
            history.push_back(Turn{static_cast<int>(history.size()) + 1, turn.role, turn.text});
            if (turn.role != Role::system || turn.annotations.empty()) continue;

            auto prediction = predict_turn(corpus, dialogue, turn, history, effective, backend);
            if (!prediction.ok) {
                ++report.skipped_turns;
                continue;
            }
            if (prediction.from_cache) ++report.cached_turns;
            predictions.push_back(prediction.annotation.decision == BreakdownDecision::breakdown
                                      ? metrics::ConsolidatedLabel::B_plus
                                      : metrics::ConsolidatedLabel::NB_minus);
            gold.push_back(metrics::consolidate_label(count_labels(turn), options.rule));
        }
    }

    report.evaluated_turns = static_cast<int>(predictions.size());
    report.metrics = metrics::detection_metrics(predictions, gold);
    return report;
}

ErrorTypeEvaluation evaluate_error_types(const DbdcCorpus& corpus, const EvaluateOptions& options,
                                         Backend& backend) {
    ErrorTypeEvaluation report;
    report.corpus_id = corpus.corpus_id;
    report.model = options.model.empty() ? kDefaultModel : options.model;
    report.timestamp = options.timestamp.empty() ? current_utc_timestamp() : options.timestamp;

    EvaluateOptions effective = options;
    effective.mode = DetectorMode::extended_taxonomy;
    effective.model = report.model;

    // Absent from the source taxonomy, so never compared.
    static const std::string kExcluded = "ignore_expectation";

    std::vector<metrics::ErrorTypeSet> predicted;
    std::vector<metrics::ErrorTypeSet> gold;
    double predicted_size_sum = 0.0;
    double gold_size_sum = 0.0;

    for (const auto& dialogue : corpus.dialogues) {
        std::vector<Turn> history;
        for (const auto& turn : dialogue.turns) {
            history.push_back(Turn{static_cast<int>(history.size()) + 1, turn.role, turn.text});
            if (turn.role != Role::system || !turn.gold_error_types) continue;
            if (metrics::consolidate_label(count_labels(turn), options.rule) !=
                metrics::ConsolidatedLabel::B_plus)
                continue;

            metrics::ErrorTypeSet gold_set = *turn.gold_error_types;
            gold_set.erase(kExcluded);
            if (gold_set.empty()) {
                ++report.excluded_turns;
                continue;
            }

            auto prediction = predict_turn(corpus, dialogue, turn, history, effective, backend);
            if (!prediction.ok) {
                ++report.skipped_turns;
                continue;
            }
            if (prediction.from_cache) ++report.cached_turns;

            metrics::ErrorTypeSet predicted_set(prediction.annotation.error_types.begin(),
                                                prediction.annotation.error_types.end());
            predicted_set.erase(kExcluded);
            predicted_size_sum += static_cast<double>(predicted_set.size());
            gold_size_sum += static_cast<double>(gold_set.size());
            predicted.push_back(std::move(predicted_set));
            gold.push_back(std::move(gold_set));
        }
    }

    report.evaluated_turns = static_cast<int>(predicted.size());
    if (report.evaluated_turns > 0) {
        report.mean_predicted_size = predicted_size_sum / report.evaluated_turns;
        report.mean_gold_size = gold_size_sum / report.evaluated_turns;
        report.metrics = metrics::error_type_metrics(predicted, gold);
    }
    return report;
}

json corpus_summary_to_json(const CorpusSummary& summary) {
    return json{{"dialogue_count", summary.dialogue_count},
                {"system_turn_count", summary.system_turn_count},
                {"annotation_count", summary.annotation_count},
                {"nb_share", summary.nb_share},
                {"pb_share", summary.pb_share},
                {"b_share", summary.b_share},
                {"b_plus_share", summary.b_plus_share},
                {"nb_minus_share", summary.nb_minus_share}};
}

json detection_evaluation_to_json(const DetectionEvaluation& evaluation) {
    return json{{"corpus_id", evaluation.corpus_id},
                {"mode", to_string(evaluation.mode)},
                {"model", evaluation.model},
                {"timestamp", evaluation.timestamp},
                {"accuracy", evaluation.metrics.accuracy},
                {"precision", evaluation.metrics.precision},
                {"recall", evaluation.metrics.recall},
                {"f1", evaluation.metrics.f1},
                {"tp", evaluation.metrics.tp},
                {"fp", evaluation.metrics.fp},
                {"fn", evaluation.metrics.fn},
                {"tn", evaluation.metrics.tn},
                {"evaluated_turns", evaluation.evaluated_turns},
                {"cached_turns", evaluation.cached_turns},
                {"skipped_turns", evaluation.skipped_turns}};
}

json error_type_evaluation_to_json(const ErrorTypeEvaluation& evaluation) {
    return json{{"corpus_id", evaluation.corpus_id},
                {"model", evaluation.model},
                {"timestamp", evaluation.timestamp},
                {"em", evaluation.metrics.em},
                {"sm", evaluation.metrics.sm},
                {"pm", evaluation.metrics.pm},
                {"avg_f1", evaluation.metrics.avg_f1},
                {"mean_predicted_size", evaluation.mean_predicted_size},
                {"mean_gold_size", evaluation.mean_gold_size},
                {"evaluated_turns", evaluation.evaluated_turns},
                {"cached_turns", evaluation.cached_turns},
                {"skipped_turns", evaluation.skipped_turns},
                {"excluded_turns", evaluation.excluded_turns}};
}

namespace {

std::string fixed3(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.3f", value);
    return buffer;
}

std::string aligned_rows(const std::vector<std::string>& headers,
                         const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> widths(headers.size());
    for (std::size_t i = 0; i < headers.size(); ++i) widths[i] = headers[i].size();
    for (const auto& row : rows)
        for (std::size_t i = 0; i < row.size(); ++i) widths[i] = std::max(widths[i], row[i].size());

    auto render = [&](const std::vector<std::string>& cells) {
        std::string line;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            line += cells[i];
            if (i + 1 < cells.size()) line.append(widths[i] - cells[i].size() + 2, ' ');
        }
        return line;
    };

    std::size_t total = 0;
    for (std::size_t i = 0; i < widths.size(); ++i) total += widths[i] + (i + 1 < widths.size() ? 2 : 0);

    std::string out = render(headers) + "\n" + std::string(total, '-') + "\n";
    for (const auto& row : rows) out += render(row) + "\n";
    return out;
}

} // namespace

std::string render_detection_text(const DetectionEvaluation& evaluation) {
    std::ostringstream out;
    out << "Breakdown detection on " << evaluation.corpus_id << " (" << evaluation.evaluated_turns
        << " system turns";
    if (evaluation.cached_turns > 0) out << ", " << evaluation.cached_turns << " cached";
    if (evaluation.skipped_turns > 0) out << ", " << evaluation.skipped_turns << " skipped";
    out << ")\n";
    out << aligned_rows({"Model", "System", "Accuracy", "Precision", "Recall", "F1 Score"},
                        {{evaluation.model, to_string(evaluation.mode),
                          fixed3(evaluation.metrics.accuracy), fixed3(evaluation.metrics.precision),
                          fixed3(evaluation.metrics.recall), fixed3(evaluation.metrics.f1)}});
    return out.str();
}

std::string render_error_type_text(const ErrorTypeEvaluation& evaluation) {
    std::ostringstream out;
    out << "Error type classification on " << evaluation.corpus_id << " ("
        << evaluation.evaluated_turns << " breakdown turns";
    if (evaluation.cached_turns > 0) out << ", " << evaluation.cached_turns << " cached";
    if (evaluation.skipped_turns > 0) out << ", " << evaluation.skipped_turns << " skipped";
    if (evaluation.excluded_turns > 0) out << ", " << evaluation.excluded_turns << " excluded";
    out << ")\n";
    out << aligned_rows({"Metric", "Score"}, {{"Exact Match (EM)", fixed3(evaluation.metrics.em)},
                                              {"Superset Match (SM)", fixed3(evaluation.metrics.sm)},
                                              {"Partial Match (PM)", fixed3(evaluation.metrics.pm)},
                                              {"Average F1", fixed3(evaluation.metrics.avg_f1)}});
    char sizes[96];
    std::snprintf(sizes, sizeof(sizes), "Mean error types per turn: predicted %.2f, gold %.2f\n",
                  evaluation.mean_predicted_size, evaluation.mean_gold_size);
    out << sizes;
    return out.str();
}

} // namespace chatprobe
