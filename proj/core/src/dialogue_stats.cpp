#include "chatprobe/dialogue_stats.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <string>

#include "chatprobe/metrics.hpp"

namespace chatprobe {

DialogueStatistics dialogue_statistics(const std::vector<Dialogue>& dialogues) {
    DialogueStatistics stats;
    if (dialogues.empty()) return stats;

    long system_turns = 0;
    std::vector<double> user_lengths;
    std::vector<double> system_lengths;
    std::vector<std::string> user_stream;
    std::vector<std::string> system_stream;

    for (const auto& dialogue : dialogues) {
        for (const auto& turn : dialogue.turns) {
            auto tokens = metrics::tokenize(turn.text);
            if (turn.role == Role::user) {
                user_lengths.push_back(static_cast<double>(tokens.size()));
                user_stream.insert(user_stream.end(), tokens.begin(), tokens.end());
            } else {
                ++system_turns;
                system_lengths.push_back(static_cast<double>(tokens.size()));
                system_stream.insert(system_stream.end(), tokens.begin(), tokens.end());
            }
        }
    }

    stats.st_per_d = static_cast<double>(system_turns) / static_cast<double>(dialogues.size());
    stats.median_utl = user_lengths.empty() ? 0.0 : metrics::median(user_lengths);
    stats.median_stl = system_lengths.empty() ? 0.0 : metrics::median(system_lengths);

    if (!user_stream.empty()) {
        auto mtld = metrics::mtld(user_stream);
        stats.user_mtld = mtld.value;
        stats.user_mtld_unsaturated = mtld.unsaturated;
    }
    if (!system_stream.empty()) {
        auto mtld = metrics::mtld(system_stream);
        stats.system_mtld = mtld.value;
        stats.system_mtld_unsaturated = mtld.unsaturated;
    }
    return stats;
}

BreakdownStatistics breakdown_statistics(const std::vector<AnalyzedDialogue>& dialogues) {
    BreakdownStatistics stats;
    long system_turns = 0;
    std::set<std::string> error_keys;
    double rating_sum = 0.0;
    long rating_count = 0;

    for (const auto& entry : dialogues) {
        system_turns += static_cast<long>(entry.dialogue.system_turn_count());
        if (entry.dialogue.termination == Termination::chatbot_crashed) ++stats.c_crash;

        if (entry.annotations) {
            long breakdowns = 0;
            for (const auto& annotation : entry.annotations->annotations) {
                if (annotation.decision == BreakdownDecision::breakdown) {
                    ++breakdowns;
                    for (const auto& key : annotation.error_types) error_keys.insert(key);
                }
            }
            stats.total_b += breakdowns;
            if (breakdowns > 0) ++stats.d_with_b;
        }
        if (entry.rating) {
            if (const auto* overall = entry.rating->find("overall")) {
                rating_sum += static_cast<double>(overall->rating);
                ++rating_count;
            }
        }
    }

    stats.unique_b = static_cast<long>(error_keys.size());
    if (system_turns > 0)
        stats.b_per_st = static_cast<double>(stats.total_b) / static_cast<double>(system_turns);
    if (rating_count > 0) stats.avg_rating = rating_sum / static_cast<double>(rating_count);
    return stats;
}

std::optional<int> parse_word_budget(const std::string& budget) {
    std::size_t i = 0;
    while (i < budget.size() && std::isspace(static_cast<unsigned char>(budget[i]))) ++i;
    std::size_t start = i;
    while (i < budget.size() && std::isdigit(static_cast<unsigned char>(budget[i]))) ++i;
    if (i == start) return std::nullopt;
    return std::stoi(budget.substr(start, i - start));
}

BudgetViolations budget_violations(const std::vector<Dialogue>& dialogues,
                                   const ChatbotConfig& config) {
    BudgetViolations out;
    auto budget = parse_word_budget(config.max_user_turn_length);
    for (const auto& dialogue : dialogues) {
        for (const auto& turn : dialogue.turns) {
            if (turn.role != Role::user) continue;
            const int words = static_cast<int>(metrics::tokenize(turn.text).size());
            out.longest_user_turn_words = std::max(out.longest_user_turn_words, words);
            if (budget && words > *budget) ++out.over_length_user_turns;
        }
    }
    return out;
}

} // namespace chatprobe
