// Shared domain types for chatbot testing campaigns: target-system
// configuration, user personas, dialogues, breakdown annotations and ratings.
// All types are plain immutable values; construct through the validating
// factories (or call the validate_* functions at system boundaries) so that
// malformed data is rejected where it enters, not discovered downstream.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "chatprobe/errors.hpp"

namespace chatprobe {

enum class ChatbotType { task_oriented, conversational };

std::string to_string(ChatbotType type);
ChatbotType chatbot_type_from_string(const std::string& text);

// Declarative description of the dialogue system under test. Mirrors the
// on-disk YAML layout: an `id`, a `chatbot_info` block and a
// `user_simulation_config` block.
struct ChatbotConfig {
    std::string id; // nonempty, filesystem-safe
    std::string name;
    std::string description;
    std::string interaction_method;
    ChatbotType chatbot_type = ChatbotType::task_oriented;
    std::string task;
    std::vector<std::string> constraints;
    std::vector<std::string> known_limitations;
    std::vector<std::string> available_languages;
    // Turn-length budgets are kept as human-readable text ("10 words"):
    // the prompts interpolate them verbatim. Word counts are only measured
    // by the statistics module, never enforced on the simulator.
    std::string typical_user_turn_length;
    std::string max_user_turn_length;
    int max_user_turns = 1; // >= 1
    // Whether the target system opens the conversation with a greeting.
    bool chatbot_speaks_first = true;

    bool operator==(const ChatbotConfig&) const = default;
};

// Throws ValidationError naming the offending field.
void validate_config(const ChatbotConfig& config);

enum class PersonaType { standard, challenging };

std::string to_string(PersonaType type);
PersonaType persona_type_from_string(const std::string& text);

enum class TraitLevel { low, medium, high };

std::string to_string(TraitLevel level);
TraitLevel trait_level_from_string(const std::string& text);

// The five Big Five trait keys, in canonical order.
const std::vector<std::string>& big_five_keys();

// A generated or hand-written user profile driving one simulated user.
struct Persona {
    std::string persona_id;
    PersonaType persona_type = PersonaType::standard;
    std::string name;
    std::string gender;
    int age = 0;
    std::vector<std::string> background_info;
    std::map<std::string, TraitLevel> personality; // exactly the Big Five keys
    std::vector<std::string> interaction_style;
    std::string task;

    bool operator==(const Persona&) const = default;
};

// Throws ValidationError if a Big Five key is missing or an unknown trait
// key is present.
void validate_persona(const Persona& persona);

enum class Role { user, system };

std::string to_string(Role role);
Role role_from_string(const std::string& text);

struct Turn {
    int index = 0; // 1-based, contiguous across both roles
    Role role = Role::user;
    std::string text; // nonempty; a crashed system turn is absent, not empty

    bool operator==(const Turn&) const = default;
};

enum class Termination { user_ended, max_turns_reached, chatbot_crashed, error };

std::string to_string(Termination termination);
Termination termination_from_string(const std::string& text);

enum class CrashCause { transport_error, invalid_response, timeout, remote_exception };

std::string to_string(CrashCause cause);
CrashCause crash_cause_from_string(const std::string& text);

// Why a dialogue ended in `chatbot_crashed`. turn_index is the 1-based
// ordinal of the system turn that failed, counting the greeting.
struct CrashReport {
    int turn_index = 1;
    CrashCause cause = CrashCause::transport_error;
    std::string detail;

    bool operator==(const CrashReport&) const = default;
};

// An ordered transcript between one persona and the target system.
struct Dialogue {
    std::string dialogue_id;
    std::string chatbot_id;
    std::optional<std::string> persona_id;
    std::vector<Turn> turns;
    Termination termination = Termination::user_ended;
    std::optional<std::string> error_detail;
    std::optional<CrashReport> crash_report;

    bool operator==(const Dialogue&) const = default;

    // Validating factory: rejects broken turn alternation or indices.
    static Dialogue validated(Dialogue dialogue);

    int user_turn_count() const;
    int system_turn_count() const;
};

// Structural checks: strict role alternation (either role may start),
// 1-based contiguous indices, nonempty turn text, crash report only on
// crashed dialogues. Throws ValidationError.
void validate_dialogue(const Dialogue& dialogue);

// Budget check against a config; separate from the structural validation
// because corpora loaded for offline analysis have no config.
void validate_dialogue_budget(const Dialogue& dialogue, const ChatbotConfig& config);

enum class ErrorCategory { conversational, task_success, efficiency, domain_handling };

std::string to_string(ErrorCategory category);

// One entry of the breakdown error taxonomy.
struct ErrorType {
    std::string key;
    std::string display_name;
    std::string description;
    ErrorCategory category = ErrorCategory::conversational;

    bool operator==(const ErrorType&) const = default;
};

enum class BreakdownDecision { breakdown, non_breakdown };

std::string to_string(BreakdownDecision decision);
BreakdownDecision breakdown_decision_from_string(const std::string& text);

// Per-system-turn verdict of the breakdown detector.
struct BreakdownAnnotation {
    int turn_index = 1; // 1-based dialogue turn index of the annotated system turn
    std::string reasoning;
    BreakdownDecision decision = BreakdownDecision::non_breakdown;
    double score = 1.0;                   // 0 = complete breakdown, 1 = seamless flow
    std::vector<std::string> error_types; // sorted, de-duplicated taxonomy keys

    bool operator==(const BreakdownAnnotation&) const = default;
};

// Base invariants: score in [0,1], non_breakdown implies no error types,
// positive turn index. When require_error_types is set (extended-taxonomy
// detector mode) a breakdown must also carry at least one error type; the
// ghassel zero-shot mode produces decisions without error types.
void validate_annotation(const BreakdownAnnotation& annotation, bool require_error_types = true);

struct DimensionRating {
    std::string dimension_key;
    std::string reasoning;
    int rating = 1; // integer 1..5

    bool operator==(const DimensionRating&) const = default;
};

// Multi-dimension 1-5 rating for a finished dialogue; always carries the
// "overall" dimension.
struct DialogueRating {
    std::vector<DimensionRating> entries;

    bool operator==(const DialogueRating&) const = default;

    const DimensionRating* find(const std::string& key) const;
};

void validate_rating(const DialogueRating& rating);

// Three-way annotator label from breakdown-detection corpora.
enum class AnnotatorLabel { NB, PB, B };

std::string to_string(AnnotatorLabel label);
AnnotatorLabel annotator_label_from_string(const std::string& text);

// True when the string is usable as a file-name component.
bool is_filesystem_safe(const std::string& id);

// Reproducible dialogue id: "<chatbot_id>_<persona_id>_<run>_<seq>".
std::string make_dialogue_id(const std::string& chatbot_id, const std::string& persona_id,
                             int run, int seq);

} // namespace chatprobe
