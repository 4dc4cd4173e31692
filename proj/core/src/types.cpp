#include "chatprobe/types.hpp"

#include <algorithm>
#include <set>

namespace chatprobe {

std::string to_string(ChatbotType type) {
    return type == ChatbotType::task_oriented ? "task-oriented" : "conversational";
}

ChatbotType chatbot_type_from_string(const std::string& text) {
    if (text == "task-oriented") return ChatbotType::task_oriented;
    if (text == "conversational") return ChatbotType::conversational;
    throw ValidationError("type", "unknown chatbot type \"" + text + "\"");
}

void validate_config(const ChatbotConfig& config) {
    if (config.id.empty()) throw ValidationError("id", "must be nonempty");
    if (!is_filesystem_safe(config.id)) {
        throw ValidationError("id", "must be filesystem-safe (letters, digits, '-', '_')");
    }
    if (config.name.empty()) throw ValidationError("name", "must be nonempty");
    if (config.description.empty()) throw ValidationError("description", "must be nonempty");
    if (config.interaction_method.empty()) {
        throw ValidationError("interaction_method", "must be nonempty");
    }
    if (config.task.empty()) throw ValidationError("task", "must be nonempty");
    if (config.typical_user_turn_length.empty()) {
        throw ValidationError("typical_user_turn_length", "must be nonempty");
    }
    if (config.max_user_turn_length.empty()) {
        throw ValidationError("max_user_turn_length", "must be nonempty");
    }
    if (config.max_user_turns < 1) {
        throw ValidationError("max_user_turns", "must be >= 1");
    }
}

std::string to_string(PersonaType type) {
    return type == PersonaType::standard ? "standard" : "challenging";
}

PersonaType persona_type_from_string(const std::string& text) {
    if (text == "standard") return PersonaType::standard;
    if (text == "challenging") return PersonaType::challenging;
    throw ValidationError("type", "unknown persona type \"" + text + "\"");
}

std::string to_string(TraitLevel level) {
    switch (level) {
        case TraitLevel::low: return "low";
        case TraitLevel::medium: return "medium";
        case TraitLevel::high: return "high";
    }
    return "medium";
}

TraitLevel trait_level_from_string(const std::string& text) {
    if (text == "low") return TraitLevel::low;
    if (text == "medium") return TraitLevel::medium;
    if (text == "high") return TraitLevel::high;
    throw ValidationError("personality", "trait level must be low, medium or high, got \"" +
                                             text + "\"");
}

const std::vector<std::string>& big_five_keys() {
    static const std::vector<std::string> keys = {
        "openness", "conscientiousness", "extraversion", "agreeableness", "neuroticism",
    };
    return keys;
}

void validate_persona(const Persona& persona) {
    if (persona.persona_id.empty()) throw ValidationError("persona_id", "must be nonempty");
    if (!is_filesystem_safe(persona.persona_id)) {
        throw ValidationError("persona_id", "must be filesystem-safe");
    }
    if (persona.name.empty()) throw ValidationError("name", "must be nonempty");
    for (const auto& key : big_five_keys()) {
        if (persona.personality.find(key) == persona.personality.end()) {
            throw ValidationError("personality", "missing Big Five trait \"" + key + "\"");
        }
    }
    for (const auto& [key, level] : persona.personality) {
        (void)level;
        if (std::find(big_five_keys().begin(), big_five_keys().end(), key) ==
            big_five_keys().end()) {
            throw ValidationError("personality", "unknown trait \"" + key + "\"");
        }
    }
}

std::string to_string(Role role) { return role == Role::user ? "user" : "system"; }

Role role_from_string(const std::string& text) {
    if (text == "user") return Role::user;
    if (text == "system") return Role::system;
    throw ValidationError("role", "unknown role \"" + text + "\"");
}

std::string to_string(Termination termination) {
    switch (termination) {
        case Termination::user_ended: return "user_ended";
        case Termination::max_turns_reached: return "max_turns_reached";
        case Termination::chatbot_crashed: return "chatbot_crashed";
        case Termination::error: return "error";
    }
    return "error";
}

Termination termination_from_string(const std::string& text) {
    if (text == "user_ended") return Termination::user_ended;
    if (text == "max_turns_reached") return Termination::max_turns_reached;
    if (text == "chatbot_crashed") return Termination::chatbot_crashed;
    if (text == "error") return Termination::error;
    throw ValidationError("termination", "unknown termination \"" + text + "\"");
}

std::string to_string(CrashCause cause) {
    switch (cause) {
        case CrashCause::transport_error: return "transport_error";
        case CrashCause::invalid_response: return "invalid_response";
        case CrashCause::timeout: return "timeout";
        case CrashCause::remote_exception: return "remote_exception";
    }
    return "transport_error";
}

CrashCause crash_cause_from_string(const std::string& text) {
    if (text == "transport_error") return CrashCause::transport_error;
    if (text == "invalid_response") return CrashCause::invalid_response;
    if (text == "timeout") return CrashCause::timeout;
    if (text == "remote_exception") return CrashCause::remote_exception;
    throw ValidationError("cause", "unknown crash cause \"" + text + "\"");
}

Dialogue Dialogue::validated(Dialogue dialogue) {
    validate_dialogue(dialogue);
    return dialogue;
}

int Dialogue::user_turn_count() const {
    return static_cast<int>(
        std::count_if(turns.begin(), turns.end(), [](const Turn& t) { return t.role == Role::user; }));
}

int Dialogue::system_turn_count() const {
    return static_cast<int>(std::count_if(turns.begin(), turns.end(),
                                          [](const Turn& t) { return t.role == Role::system; }));
}

void validate_dialogue(const Dialogue& dialogue) {
    if (dialogue.dialogue_id.empty()) throw ValidationError("dialogue_id", "must be nonempty");
    for (std::size_t i = 0; i < dialogue.turns.size(); ++i) {
        const Turn& turn = dialogue.turns[i];
        if (turn.index != static_cast<int>(i) + 1) {
            throw ValidationError("turns", "turn indices must be 1-based and contiguous, got " +
                                               std::to_string(turn.index) + " at position " +
                                               std::to_string(i));
        }
        if (turn.text.empty()) {
            throw ValidationError("turns", "turn " + std::to_string(turn.index) +
                                               " has empty text");
        }
        if (i > 0 && dialogue.turns[i - 1].role == turn.role) {
            throw ValidationError("turns", "turns must strictly alternate roles; turn " +
                                               std::to_string(turn.index) + " repeats " +
                                               to_string(turn.role));
        }
    }
    if (dialogue.crash_report && dialogue.termination != Termination::chatbot_crashed) {
        throw ValidationError("crash_report",
                              "only dialogues terminated by chatbot_crashed carry a crash report");
    }
    if (dialogue.termination == Termination::chatbot_crashed && !dialogue.crash_report) {
        throw ValidationError("crash_report", "crashed dialogue is missing its crash report");
    }
}

void validate_dialogue_budget(const Dialogue& dialogue, const ChatbotConfig& config) {
    if (dialogue.user_turn_count() > config.max_user_turns) {
        throw ValidationError("turns", "dialogue has " + std::to_string(dialogue.user_turn_count()) +
                                           " user turns, budget is " +
                                           std::to_string(config.max_user_turns));
    }
}

std::string to_string(ErrorCategory category) {
    switch (category) {
        case ErrorCategory::conversational: return "conversational";
        case ErrorCategory::task_success: return "task_success";
        case ErrorCategory::efficiency: return "efficiency";
        case ErrorCategory::domain_handling: return "domain_handling";
    }
    return "conversational";
}

std::string to_string(BreakdownDecision decision) {
    return decision == BreakdownDecision::breakdown ? "breakdown" : "non_breakdown";
}

BreakdownDecision breakdown_decision_from_string(const std::string& text) {
    if (text == "breakdown") return BreakdownDecision::breakdown;
    if (text == "non_breakdown") return BreakdownDecision::non_breakdown;
    throw ValidationError("decision", "unknown breakdown decision \"" + text + "\"");
}

void validate_annotation(const BreakdownAnnotation& annotation, bool require_error_types) {
    if (annotation.turn_index < 1) throw ValidationError("turn_index", "must be positive");
    if (annotation.score < 0.0 || annotation.score > 1.0) {
        throw ValidationError("score", "must be in [0, 1], got " + std::to_string(annotation.score));
    }
    if (annotation.decision == BreakdownDecision::non_breakdown &&
        !annotation.error_types.empty()) {
        throw ValidationError("error_types", "non_breakdown must not carry error types");
    }
    if (require_error_types && annotation.decision == BreakdownDecision::breakdown &&
        annotation.error_types.empty()) {
        throw ValidationError("error_types", "breakdown must carry at least one error type");
    }
    std::set<std::string> seen;
    for (const auto& key : annotation.error_types) {
        if (!seen.insert(key).second) {
            throw ValidationError("error_types", "duplicate error type \"" + key + "\"");
        }
    }
}

const DimensionRating* DialogueRating::find(const std::string& key) const {
    for (const auto& entry : entries) {
        if (entry.dimension_key == key) return &entry;
    }
    return nullptr;
}

void validate_rating(const DialogueRating& rating) {
    if (!rating.find("overall")) {
        throw ValidationError("entries", "rating must include the \"overall\" dimension");
    }
    std::set<std::string> seen;
    for (const auto& entry : rating.entries) {
        if (entry.rating < 1 || entry.rating > 5) {
            throw ValidationError("rating", "dimension \"" + entry.dimension_key +
                                                "\" must be rated 1..5, got " +
                                                std::to_string(entry.rating));
        }
        if (!seen.insert(entry.dimension_key).second) {
            throw ValidationError("entries",
                                  "duplicate dimension \"" + entry.dimension_key + "\"");
        }
    }
}

std::string to_string(AnnotatorLabel label) {
    switch (label) {
        case AnnotatorLabel::NB: return "NB";
        case AnnotatorLabel::PB: return "PB";
        case AnnotatorLabel::B: return "B";
    }
    return "NB";
}

AnnotatorLabel annotator_label_from_string(const std::string& text) {
    if (text == "NB") return AnnotatorLabel::NB;
    if (text == "PB") return AnnotatorLabel::PB;
    if (text == "B") return AnnotatorLabel::B;
    throw ValidationError("label", "unknown annotator label \"" + text + "\"");
}

bool is_filesystem_safe(const std::string& id) {
    if (id.empty()) return false;
    for (char c : id) {
        bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                  c == '-' || c == '_' || c == '.';
        if (!ok) return false;
    }
    return id != "." && id != "..";
}

std::string make_dialogue_id(const std::string& chatbot_id, const std::string& persona_id,
                             int run, int seq) {
    return chatbot_id + "_" + persona_id + "_" + std::to_string(run) + "_" + std::to_string(seq);
}

} // namespace chatprobe
