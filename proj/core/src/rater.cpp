#include "chatprobe/rater.hpp"

#include <algorithm>

#include "chatprobe/prompts.hpp"

namespace chatprobe {

std::vector<RatingDimension> select_dimensions(ChatbotType type) {
    return rating_dimensions(type);
}

std::vector<ChatMessage> render_rating_prompt(const Dialogue& dialogue,
                                              const ChatbotConfig* config,
                                              const std::vector<RatingDimension>& dimensions) {
    if (dialogue.turns.empty()) throw UsageError("cannot rate an empty dialogue");
    if (dimensions.empty()) throw UsageError("no rating dimensions requested");
    const std::string info =
        config ? prompts::render_chatbot_info(*config) : prompts::neutral_chatbot_info();
    const std::string system_text =
        prompts::interpolate(prompts::kRaterSystemTemplate,
                             {
                                 {"chatbot_info", info},
                                 {"rating_dimensions", render_dimension_lines(dimensions)},
                             });
    const std::string user_text = prompts::interpolate(
        prompts::kRaterUserTemplate,
        {{"chat_history_str", prompts::render_chat_history(dialogue.turns, "USER")}});
    return {{MessageRole::system, system_text}, {MessageRole::user, user_text}};
}

nlohmann::json rating_output_schema() {
    nlohmann::json entry = {
        {"type", "object"},
        {"properties",
         {
             {"key", {{"type", "string"}}},
             {"reasoning", {{"type", "string"}}},
             {"rating", {{"type", "integer"}}},
         }},
        {"required", nlohmann::json::array({"key", "reasoning", "rating"})},
        {"additionalProperties", false},
    };
    return {
        {"type", "object"},
        {"properties", {{"ratings", {{"type", "array"}, {"items", entry}}}}},
        {"required", nlohmann::json::array({"ratings"})},
        {"additionalProperties", false},
    };
}

namespace {

DialogueRating rating_from_output(const nlohmann::json& value) {
    DialogueRating rating;
    for (const auto& entry : value.at("ratings")) {
        rating.entries.push_back({entry.at("key").get<std::string>(),
                                  entry.at("reasoning").get<std::string>(),
                                  entry.at("rating").get<int>()});
    }
    return rating;
}

// Returned keys must exactly match the requested dimensions and every
// rating must lie in 1..5; violations earn one corrective retry.
std::string semantic_violation(const DialogueRating& rating,
                               const std::vector<RatingDimension>& dimensions) {
    for (const auto& entry : rating.entries) {
        if (entry.rating < 1 || entry.rating > 5) {
            return "rating " + std::to_string(entry.rating) + " for \"" + entry.dimension_key +
                   "\" outside 1..5";
        }
    }
    for (const auto& dimension : dimensions) {
        if (!rating.find(dimension.key)) return "missing dimension \"" + dimension.key + "\"";
    }
    for (const auto& entry : rating.entries) {
        const bool requested =
            std::any_of(dimensions.begin(), dimensions.end(),
                        [&](const RatingDimension& d) { return d.key == entry.dimension_key; });
        if (!requested) return "unrequested dimension \"" + entry.dimension_key + "\"";
    }
    if (rating.entries.size() != dimensions.size()) return "duplicate dimension entries";
    return "";
}

} // namespace

DialogueRating rate_dialogue(const Dialogue& dialogue, Backend& backend,
                             const RaterOptions& options) {
    const ChatbotType type =
        options.config ? options.config->chatbot_type : options.fallback_type;
    const std::vector<RatingDimension> dimensions = select_dimensions(type);

    CompletionRequest request;
    request.model = options.model;
    request.temperature = kJudgeTemperature;
    request.messages = render_rating_prompt(dialogue, options.config, dimensions);
    request.output_schema = rating_output_schema();
    request.schema_name = "dialogue_rating";

    CompletionOptions completion_options;
    completion_options.transcript = options.transcript;

    auto complete_once = [&]() {
        const auto completion = complete_structured(request, backend, completion_options);
        return rating_from_output(completion.value);
    };

    DialogueRating rating = complete_once();
    std::string violation = semantic_violation(rating, dimensions);
    if (!violation.empty()) {
        rating = complete_once();
        violation = semantic_violation(rating, dimensions);
        if (!violation.empty()) {
            throw StructuredOutputError(
                "rating output invalid after corrective retry: " + violation, "", 2);
        }
    }
    validate_rating(rating);
    return rating;
}

} // namespace chatprobe
