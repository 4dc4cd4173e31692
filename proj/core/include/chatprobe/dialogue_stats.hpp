// Campaign-level statistics over simulated dialogues: realism proxies
// (turn counts, turn lengths, lexical diversity) and error-elicitation
// measures (breakdown counts, ratings, crashes).

#pragma once

#include <optional>
#include <vector>

#include "chatprobe/detector.hpp"
#include "chatprobe/types.hpp"

namespace chatprobe {

struct DialogueStatistics {
    double st_per_d = 0.0;   // mean system turns per dialogue
    double median_utl = 0.0; // median user-turn length in words, turns pooled
    double median_stl = 0.0; // median system-turn length in words, turns pooled
    double user_mtld = 0.0;  // over the concatenated user token stream
    double system_mtld = 0.0;
    // Set when the corresponding token stream never saturated a full factor
    // (the value then equals the token count and overstates diversity).
    bool user_mtld_unsaturated = false;
    bool system_mtld_unsaturated = false;

    bool operator==(const DialogueStatistics&) const = default;
};

// Turns with no tokens on one side leave that side's medians/MTLD at 0.
DialogueStatistics dialogue_statistics(const std::vector<Dialogue>& dialogues);

struct BreakdownStatistics {
    long d_with_b = 0;  // dialogues containing >= 1 breakdown annotation
    long total_b = 0;   // breakdown-annotated system turns
    double b_per_st = 0.0; // total_b / completed system turns
    long unique_b = 0;  // distinct error-type keys across all annotations
    std::optional<double> avg_rating; // mean "overall" rating; absent when unrated
    long c_crash = 0;   // dialogues with termination chatbot_crashed

    bool operator==(const BreakdownStatistics&) const = default;
};

// One dialogue with its analysis artifacts; annotations may be absent when
// only rating ran.
struct AnalyzedDialogue {
    Dialogue dialogue;
    std::optional<DialogueAnnotations> annotations;
    std::optional<DialogueRating> rating;
};

BreakdownStatistics breakdown_statistics(const std::vector<AnalyzedDialogue>& dialogues);

// Leading integer of a budget text such as "38 words"; nullopt when the
// text does not start with a number.
std::optional<int> parse_word_budget(const std::string& budget);

// The max_user_turn_length budget is advisory (prompt-enforced only), so
// violations are counted and reported rather than truncated.
struct BudgetViolations {
    long over_length_user_turns = 0;
    int longest_user_turn_words = 0;

    bool operator==(const BudgetViolations&) const = default;
};

BudgetViolations budget_violations(const std::vector<Dialogue>& dialogues,
                                   const ChatbotConfig& config);

} // namespace chatprobe
