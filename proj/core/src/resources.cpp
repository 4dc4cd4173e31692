// Registry text is frozen: downstream annotations store these keys and
// golden prompt files embed these descriptions. Edit only with a version bump.

#include "chatprobe/taxonomy.hpp"

#include <algorithm>
#include <cctype>

#include "chatprobe/errors.hpp"

namespace chatprobe {

const char* const kResourceVersion = "2025.1";

const std::vector<ErrorType>& error_taxonomy() {
    static const std::vector<ErrorType> registry = {
        // Conversational types (integrated chat-oriented taxonomy).
        {"uninterpretable", "Uninterpretable",
         "The utterance is not understandable; it is empty, fragmentary, or contains no recognizable words.",
         ErrorCategory::conversational},
        {"grammatical_error", "Grammatical error",
         "The utterance is ungrammatical or lacks elements necessary for it to be a well-formed sentence.",
         ErrorCategory::conversational},
        {"semantic_error", "Semantic error",
         "The combination of words in the utterance is semantically invalid, describing something that cannot hold.",
         ErrorCategory::conversational},
        {"wrong_information", "Wrong information",
         "The utterance states information that is clearly factually incorrect.",
         ErrorCategory::conversational},
        {"ignore_question", "Ignore question",
         "The utterance ignores a question the user asked.", ErrorCategory::conversational},
        {"ignore_request", "Ignore request",
         "The utterance ignores a request the user made.", ErrorCategory::conversational},
        {"ignore_proposal", "Ignore proposal",
         "The utterance ignores a proposal or offer the user made.", ErrorCategory::conversational},
        {"ignore_greeting", "Ignore greeting",
         "The utterance ignores a greeting from the user.", ErrorCategory::conversational},
        {"ignore_expectation", "Ignore expectation",
         "The utterance fails to provide the content that the user's previous utterance naturally expects.",
         ErrorCategory::conversational},
        {"unclear_intention", "Unclear intention",
         "The utterance relates to the topic but its conversational intent is unclear.",
         ErrorCategory::conversational},
        {"topic_transition_error", "Topic transition error",
         "The utterance abruptly switches to a different topic without reason or connection.",
         ErrorCategory::conversational},
        {"lack_of_information", "Lack of information",
         "The utterance omits information needed to understand it, such as a subject, object, or referent.",
         ErrorCategory::conversational},
        {"self_contradiction", "Self-contradiction",
         "The utterance contradicts something the chatbot itself said earlier.",
         ErrorCategory::conversational},
        {"contradiction", "Contradiction",
         "The utterance contradicts or disregards something the user said earlier.",
         ErrorCategory::conversational},
        {"repetition", "Repetition",
         "The utterance repeats content the chatbot already expressed, adding nothing new.",
         ErrorCategory::conversational},
        {"lack_of_sociality", "Lack of sociality",
         "The utterance is rude, offensive, or otherwise lacks common courtesy toward the user.",
         ErrorCategory::conversational},
        {"lack_of_common_sense", "Lack of common sense",
         "The utterance contradicts widely shared knowledge about the world.",
         ErrorCategory::conversational},
        // Task-success impairments.
        {"task_performance_failure", "Task performance failure",
         "The chatbot fails to perform the task the user requested or performs it incorrectly.",
         ErrorCategory::task_success},
        {"information_update_failure", "Information update failure",
         "The chatbot fails to incorporate information the user corrected or newly provided.",
         ErrorCategory::task_success},
        {"clarification_failure", "Clarification failure",
         "The chatbot fails to ask for clarification although the user's input is ambiguous or incomplete.",
         ErrorCategory::task_success},
        // Efficiency issues.
        {"redundancy", "Redundancy",
         "The utterance asks for information the user already provided.", ErrorCategory::efficiency},
        {"lack_of_brevity", "Lack of brevity",
         "The utterance is unnecessarily long-winded for the information it conveys.",
         ErrorCategory::efficiency},
        {"lack_of_clarity", "Lack of clarity",
         "The utterance is phrased so vaguely or confusingly that the user cannot act on it.",
         ErrorCategory::efficiency},
        // Domain handling problems.
        {"failure_to_recognize_out_of_domain", "Failure to recognize out-of-domain request",
         "The chatbot does not recognize that the user's request is outside the domain it supports.",
         ErrorCategory::domain_handling},
        {"failure_to_communicate_out_of_domain", "Failure to communicate out-of-domain request",
         "The chatbot does not tell the user that the request is outside its supported domain.",
         ErrorCategory::domain_handling},
        {"failure_to_resolve_out_of_domain", "Failure to resolve out-of-domain request",
         "The chatbot neither redirects nor offers an alternative for a request outside its supported domain.",
         ErrorCategory::domain_handling},
    };
    return registry;
}

const ErrorType* find_error_type(const std::string& key) {
    for (const auto& type : error_taxonomy()) {
        if (type.key == key) return &type;
    }
    return nullptr;
}

bool is_known_error_type(const std::string& key) {
    return find_error_type(key) != nullptr;
}

std::string render_taxonomy_block() {
    std::string block;
    for (const auto& type : error_taxonomy()) {
        block += "- " + type.display_name + ": " + type.description + "\n";
    }
    if (!block.empty()) block.pop_back();
    return block;
}

std::optional<std::string> normalize_error_category(const std::string& raw) {
    // Lowercase, collapse non-alphanumeric runs to single underscores.
    std::string key;
    bool pending_separator = false;
    for (char c : raw) {
        if (std::isalnum(static_cast<unsigned char>(c))) {
            if (pending_separator && !key.empty()) key += '_';
            pending_separator = false;
            key += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        } else {
            pending_separator = true;
        }
    }
    if (is_known_error_type(key)) return key;
    return std::nullopt;
}

const std::vector<RatingDimension>& rating_dimensions(ChatbotType type) {
    static const std::vector<RatingDimension> task_oriented = {
        {"task_success", "Task success",
         "How well did the chatbot accomplish the tasks the user brought to the conversation?"},
        {"efficiency", "Efficiency",
         "How efficiently did the chatbot handle the conversation, without unnecessary turns, repetitions, or detours?"},
        {"appropriateness", "Appropriateness",
         "How appropriate were the chatbot's responses in the given context?"},
        {"naturalness", "Naturalness",
         "How natural and human-like did the chatbot's responses feel?"},
        {"overall", "Overall", "How well did the chatbot perform in this conversation?"},
    };
    static const std::vector<RatingDimension> conversational = {
        {"appropriateness", "Appropriateness",
         "How appropriate were the chatbot's responses in the given context?"},
        {"naturalness", "Naturalness",
         "How natural and human-like did the chatbot's responses feel?"},
        {"coherence", "Coherence",
         "How coherent and logically connected were the chatbot's responses across the conversation?"},
        {"likability", "Likability",
         "How likable and pleasant was the chatbot as a conversation partner?"},
        {"informativeness", "Informativeness",
         "How informative and substantive were the chatbot's contributions to the conversation?"},
        {"overall", "Overall", "How well did the chatbot perform in this conversation?"},
    };
    switch (type) {
    case ChatbotType::task_oriented: return task_oriented;
    case ChatbotType::conversational: return conversational;
    }
    throw UsageError("unknown chatbot type");
}

std::string render_dimension_lines(const std::vector<RatingDimension>& dimensions) {
    std::string block;
    for (const auto& dimension : dimensions) {
        block +=
            "- " + dimension.display_name + " (key=" + dimension.key + "): " + dimension.question + "\n";
    }
    if (!block.empty()) block.pop_back();
    return block;
}

} // namespace chatprobe
