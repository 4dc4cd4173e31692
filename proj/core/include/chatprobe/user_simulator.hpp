// Persona-based user simulation: generates the next user turn in character,
// honors the user-turn budget, and ends the dialogue on the END_CONVERSATION
// sentinel. run_dialogue drives one full conversation against a session;
// run_campaign fans out over personas and repeated runs.

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "chatprobe/connector.hpp"
#include "chatprobe/gateway.hpp"
#include "chatprobe/types.hpp"

namespace chatprobe {

// The literal token the simulator is instructed to write to end a dialogue.
inline constexpr const char* kEndConversationSentinel = "END_CONVERSATION";

// Per-dialogue simulation budgets, copied from the config's
// user_simulation_config block.
struct SimulationBudget {
    int max_user_turns = 1;
    std::string typical_user_turn_length;
    std::string max_user_turn_length;

    static SimulationBudget from_config(const ChatbotConfig& config) {
        return {config.max_user_turns, config.typical_user_turn_length,
                config.max_user_turn_length};
    }
};

// System prompt with chatbot info, persona profile and length budgets; user
// prompt with the numbered history ending in the "{turn_number}. YOU:" cue.
// turn_number is the global 1-based index of the turn being generated.
std::vector<ChatMessage> build_simulator_prompt(const ChatbotConfig& config,
                                                const Persona& persona,
                                                const std::vector<Turn>& history,
                                                int turn_number);

struct UserMove {
    bool end_conversation = false;
    std::string text; // nonempty iff end_conversation is false
};

struct SimulatorOptions {
    std::string model = kDefaultModel;
    TranscriptLog* transcript = nullptr;
};

// Generates the next user turn. A completion containing the sentinel ends
// the conversation; the remainder of that turn is discarded, so the sentinel
// never reaches persisted text.
UserMove next_user_turn(const ChatbotConfig& config, const Persona& persona,
                        const std::vector<Turn>& history, Backend& backend,
                        const SimulatorOptions& options = {});

// Drives one conversation to completion. Session crashes and gateway
// failures are captured in the returned Dialogue (termination
// chatbot_crashed / error), never thrown.
Dialogue run_dialogue(const ChatbotConfig& config, const Persona& persona,
                      ChatbotSession& session, Backend& backend, const std::string& dialogue_id,
                      const SimulatorOptions& options = {});

struct CampaignResult {
    // runs[i] holds the dialogues of run i+1, one per persona, in order.
    std::vector<std::vector<Dialogue>> runs;

    std::size_t dialogue_count() const {
        std::size_t n = 0;
        for (const auto& run : runs) n += run.size();
        return n;
    }
};

struct RunCampaignOptions {
    std::string model = kDefaultModel;
    // Dialogues within a run execute concurrently up to this cap. Keep 1 for
    // shared scripted backends, whose consumption order must stay stable.
    int workers = 1;
    // Optional per-dialogue transcript log, fetched before the dialogue runs.
    std::function<TranscriptLog*(int run, const std::string& dialogue_id)> transcript_for;
    // Called with each finished dialogue before the campaign aggregates, in
    // deterministic (run, persona) order.
    std::function<void(int run, const Dialogue&)> on_dialogue;
};

CampaignResult run_campaign(const ChatbotConfig& config, const std::vector<Persona>& personas,
                            int runs, Backend& backend, SessionFactory& sessions,
                            const RunCampaignOptions& options = {});

} // namespace chatprobe
