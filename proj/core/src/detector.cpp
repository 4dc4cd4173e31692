#include "chatprobe/detector.hpp"

#include <algorithm>
#include <cctype>

#include "chatprobe/prompts.hpp"
#include "chatprobe/serialization.hpp"
#include "chatprobe/taxonomy.hpp"

namespace chatprobe {

std::string to_string(DetectorMode mode) {
    switch (mode) {
    case DetectorMode::extended_taxonomy: return "extended_taxonomy";
    case DetectorMode::ghassel_zero_shot: return "ghassel_zero_shot";
    }
    throw UsageError("unknown detector mode");
}

DetectorMode detector_mode_from_string(const std::string& text) {
    if (text == "extended_taxonomy") return DetectorMode::extended_taxonomy;
    if (text == "ghassel_zero_shot") return DetectorMode::ghassel_zero_shot;
    throw ValidationError("detector_mode", "unknown mode \"" + text + "\"");
}

std::vector<ChatMessage> render_detector_prompt(const std::vector<Turn>& history,
                                                const std::string& last_bot_utterance,
                                                const ChatbotConfig* config, DetectorMode mode) {
    if (history.empty()) throw UsageError("detector needs at least the target turn");
    const Turn& target = history.back();
    if (target.role != Role::system || target.text != last_bot_utterance) {
        throw UsageError("last_bot_utterance must be the final system turn of the history");
    }
    const std::string history_block = prompts::render_chat_history(history, "USER");
    if (mode == DetectorMode::ghassel_zero_shot) {
        const std::string text =
            prompts::interpolate(prompts::kGhasselTemplate,
                                 {
                                     {"chat_history_str", history_block},
                                     {"last_bot_utterance", last_bot_utterance},
                                 });
        return {{MessageRole::user, text}};
    }
    const std::string info =
        config ? prompts::render_chatbot_info(*config) : prompts::neutral_chatbot_info();
    const std::string system_text =
        prompts::interpolate(prompts::kDetectorSystemTemplate,
                             {
                                 {"breakdown_taxonomy", render_taxonomy_block()},
                                 {"chatbot_info", info},
                             });
    const std::string user_text =
        prompts::interpolate(prompts::kDetectorUserTemplate,
                             {
                                 {"chat_history_str", history_block},
                                 {"last_bot_utterance", last_bot_utterance},
                             });
    return {{MessageRole::system, system_text}, {MessageRole::user, user_text}};
}

nlohmann::json detector_output_schema() {
    return {
        {"type", "object"},
        {"properties",
         {
             {"reasoning", {{"type", "string"}}},
             {"decision",
              {{"type", "string"},
               {"enum", nlohmann::json::array({"breakdown", "non_breakdown"})}}},
             {"score", {{"type", "number"}}},
             {"error_types", {{"type", "array"}, {"items", {{"type", "string"}}}}},
         }},
        {"required", nlohmann::json::array({"reasoning", "decision", "score", "error_types"})},
        {"additionalProperties", false},
    };
}

namespace {

// Semantic checks beyond the output shape; violations earn one corrective
// retry before failing the turn.
std::string semantic_violation(const BreakdownAnnotation& annotation, DetectorMode mode) {
    if (annotation.score < 0.0 || annotation.score > 1.0) {
        return "score " + std::to_string(annotation.score) + " outside [0, 1]";
    }
    for (const auto& key : annotation.error_types) {
        if (!is_known_error_type(key)) return "unknown error type \"" + key + "\"";
    }
    if (mode == DetectorMode::extended_taxonomy) {
        const bool breakdown = annotation.decision == BreakdownDecision::breakdown;
        if (breakdown && annotation.error_types.empty()) {
            return "breakdown without error types";
        }
        if (!breakdown && !annotation.error_types.empty()) {
            return "non_breakdown with error types";
        }
    }
    return "";
}

BreakdownAnnotation annotation_from_extended(const nlohmann::json& value, int turn_index) {
    BreakdownAnnotation annotation;
    annotation.turn_index = turn_index;
    annotation.reasoning = value.at("reasoning").get<std::string>();
    annotation.decision = breakdown_decision_from_string(value.at("decision").get<std::string>());
    annotation.score = value.at("score").get<double>();
    annotation.error_types = value.at("error_types").get<std::vector<std::string>>();
    std::sort(annotation.error_types.begin(), annotation.error_types.end());
    annotation.error_types.erase(
        std::unique(annotation.error_types.begin(), annotation.error_types.end()),
        annotation.error_types.end());
    return annotation;
}

// Baseline-mode output: a JSON object (or singleton list) with reasoning,
// decision "BREAKDOWN"/"NON-BREAKDOWN", and score.
BreakdownAnnotation annotation_from_ghassel(const nlohmann::json& parsed, int turn_index) {
    const nlohmann::json* object = &parsed;
    if (parsed.is_array()) {
        if (parsed.empty()) throw MalformedOutput("empty result list");
        object = &parsed.front();
    }
    if (!object->is_object()) throw MalformedOutput("result is not an object");
    if (!object->contains("reasoning") || !object->contains("decision") ||
        !object->contains("score")) {
        throw MalformedOutput("result lacks reasoning/decision/score");
    }
    BreakdownAnnotation annotation;
    annotation.turn_index = turn_index;
    annotation.reasoning = object->at("reasoning").get<std::string>();
    std::string decision = object->at("decision").get<std::string>();
    std::transform(decision.begin(), decision.end(), decision.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    if (decision == "BREAKDOWN") {
        annotation.decision = BreakdownDecision::breakdown;
    } else if (decision == "NON-BREAKDOWN") {
        annotation.decision = BreakdownDecision::non_breakdown;
    } else {
        throw MalformedOutput("decision \"" + decision + "\" is neither BREAKDOWN nor NON-BREAKDOWN");
    }
    if (object->at("score").is_number()) {
        annotation.score = object->at("score").get<double>();
    } else if (object->at("score").is_string()) {
        try {
            annotation.score = std::stod(object->at("score").get<std::string>());
        } catch (const std::exception&) {
            throw MalformedOutput("score is not numeric");
        }
    } else {
        throw MalformedOutput("score is not numeric");
    }
    return annotation;
}

} // namespace

BreakdownAnnotation detect_breakdown(const std::vector<Turn>& history,
                                     const std::string& last_bot_utterance, Backend& backend,
                                     const DetectorOptions& options) {
    const int turn_index = history.back().index;
    CompletionRequest request;
    request.model = options.model;
    request.temperature = kJudgeTemperature;
    request.messages =
        render_detector_prompt(history, last_bot_utterance, options.config, options.mode);

    CompletionOptions completion_options;
    completion_options.transcript = options.transcript;

    auto complete_once = [&]() -> BreakdownAnnotation {
        if (options.mode == DetectorMode::ghassel_zero_shot) {
            const auto completion = complete_with_parser(
                request, backend,
                [&](const std::string& raw) {
                    nlohmann::json parsed = parse_model_json(raw);
                    // Shape errors throw MalformedOutput here so the gateway
                    // retries them like any other malformed completion.
                    annotation_from_ghassel(parsed, turn_index);
                    return parsed;
                },
                completion_options);
            return annotation_from_ghassel(completion.value, turn_index);
        }
        CompletionRequest structured = request;
        structured.output_schema = detector_output_schema();
        structured.schema_name = "breakdown_annotation";
        const auto completion = complete_structured(structured, backend, completion_options);
        return annotation_from_extended(completion.value, turn_index);
    };

    BreakdownAnnotation annotation = complete_once();
    std::string violation = semantic_violation(annotation, options.mode);
    if (!violation.empty()) {
        annotation = complete_once();
        violation = semantic_violation(annotation, options.mode);
        if (!violation.empty()) {
            throw StructuredOutputError("detector output invalid after corrective retry: " +
                                            violation,
                                        "", 2);
        }
    }
    validate_annotation(annotation,
                        options.mode == DetectorMode::extended_taxonomy);
    return annotation;
}

bool DialogueAnnotations::has_breakdown() const {
    return std::any_of(annotations.begin(), annotations.end(), [](const BreakdownAnnotation& a) {
        return a.decision == BreakdownDecision::breakdown;
    });
}

DialogueAnnotations annotate_dialogue(const Dialogue& dialogue, Backend& backend,
                                      const DetectorOptions& options) {
    if (dialogue.system_turn_count() == 0) {
        throw UsageError("dialogue has no system turns to annotate");
    }
    DialogueAnnotations result;
    result.dialogue_id = dialogue.dialogue_id;
    result.mode = options.mode;
    result.model = options.model;

    std::vector<Turn> window;
    for (const auto& turn : dialogue.turns) {
        window.push_back(turn);
        if (turn.role != Role::system) continue;
        try {
            result.annotations.push_back(detect_breakdown(window, turn.text, backend, options));
        } catch (const std::exception& e) {
            result.failures.push_back({turn.index, e.what()});
        }
    }
    return result;
}

nlohmann::json dialogue_annotations_to_json(const DialogueAnnotations& annotations) {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& annotation : annotations.annotations) {
        entries.push_back(annotation_to_json(annotation));
    }
    nlohmann::json failures = nlohmann::json::array();
    for (const auto& failure : annotations.failures) {
        failures.push_back({{"turn_index", failure.turn_index}, {"error", failure.error}});
    }
    return {
        {"dialogue_id", annotations.dialogue_id},
        {"detector_mode", to_string(annotations.mode)},
        {"model", annotations.model},
        {"annotations", std::move(entries)},
        {"failed_turns", std::move(failures)},
    };
}

DialogueAnnotations dialogue_annotations_from_json(const nlohmann::json& value) {
    DialogueAnnotations result;
    result.dialogue_id = value.at("dialogue_id").get<std::string>();
    result.mode = detector_mode_from_string(value.at("detector_mode").get<std::string>());
    result.model = value.at("model").get<std::string>();
    for (const auto& entry : value.at("annotations")) {
        result.annotations.push_back(annotation_from_json(entry));
    }
    if (value.contains("failed_turns")) {
        for (const auto& entry : value["failed_turns"]) {
            result.failures.push_back(
                {entry.at("turn_index").get<int>(), entry.at("error").get<std::string>()});
        }
    }
    return result;
}

} // namespace chatprobe
