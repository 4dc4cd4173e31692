#include "chatprobe/user_simulator.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "chatprobe/prompts.hpp"

namespace chatprobe {

std::vector<ChatMessage> build_simulator_prompt(const ChatbotConfig& config,
                                                const Persona& persona,
                                                const std::vector<Turn>& history,
                                                int turn_number) {
    if (turn_number != static_cast<int>(history.size()) + 1) {
        throw UsageError("turn_number must be the next turn index");
    }
    const std::string persona_type = to_string(persona.persona_type);
    const std::string system_text = prompts::interpolate(
        prompts::kSimulatorSystemTemplate,
        {
            {"persona_type", persona_type},
            {"chatbot_info", prompts::render_chatbot_info(config)},
            {"persona_profile", prompts::render_persona_profile(persona)},
            {"typical_user_turn_length", config.typical_user_turn_length},
            {"max_turn_length", config.max_user_turn_length},
        });
    const std::string user_text = prompts::interpolate(
        prompts::kSimulatorUserTemplate,
        {
            {"chat_history", prompts::render_chat_history(history, "YOU")},
            {"turn_number", std::to_string(turn_number)},
        });
    return {{MessageRole::system, system_text}, {MessageRole::user, user_text}};
}

namespace {

std::string trim_copy(const std::string& text) {
    const char* ws = " \t\r\n";
    auto begin = text.find_first_not_of(ws);
    auto end = text.find_last_not_of(ws);
    return begin == std::string::npos ? std::string() : text.substr(begin, end - begin + 1);
}

} // namespace

UserMove next_user_turn(const ChatbotConfig& config, const Persona& persona,
                        const std::vector<Turn>& history, Backend& backend,
                        const SimulatorOptions& options) {
    CompletionRequest request;
    request.model = options.model;
    request.temperature = kSimulationTemperature;
    request.messages =
        build_simulator_prompt(config, persona, history, static_cast<int>(history.size()) + 1);

    const auto completion = complete_with_parser(
        request, backend,
        [](const std::string& raw) -> nlohmann::json {
            const std::string text = trim_copy(raw);
            if (text.empty()) throw MalformedOutput("empty user turn");
            return nlohmann::json(text);
        },
        {3, options.transcript});

    std::string text = completion.value.get<std::string>();
    if (text.find(kEndConversationSentinel) != std::string::npos) {
        return {true, ""};
    }
    // Models sometimes mirror the quoted history lines; strip one layer.
    if (text.size() >= 2 && text.front() == '"' && text.back() == '"') {
        text = trim_copy(text.substr(1, text.size() - 2));
        if (text.empty()) return {true, ""};
    }
    return {false, text};
}

Dialogue run_dialogue(const ChatbotConfig& config, const Persona& persona,
                      ChatbotSession& session, Backend& backend, const std::string& dialogue_id,
                      const SimulatorOptions& options) {
    Dialogue dialogue;
    dialogue.dialogue_id = dialogue_id;
    dialogue.chatbot_id = config.id;
    dialogue.persona_id = persona.persona_id;

    int next_index = 1;
    int system_ordinal = 0; // system turns attempted, greeting included

    auto crash_out = [&](const CrashReport& report) {
        dialogue.termination = Termination::chatbot_crashed;
        dialogue.crash_report = report;
        return Dialogue::validated(std::move(dialogue));
    };

    try {
        system_ordinal = config.chatbot_speaks_first ? 1 : 0;
        std::optional<std::string> greeting;
        try {
            greeting = session.open();
        } catch (const ConnectorError& e) {
            return crash_out({system_ordinal > 0 ? system_ordinal : 1, e.cause(), e.what()});
        }
        if (config.chatbot_speaks_first) {
            if (!greeting) {
                return crash_out(
                    {1, CrashCause::invalid_response, "expected a greeting, none arrived"});
            }
            dialogue.turns.push_back({next_index++, Role::system, *greeting});
        }

        for (;;) {
            if (dialogue.user_turn_count() >= config.max_user_turns) {
                dialogue.termination = Termination::max_turns_reached;
                break;
            }
            UserMove move = next_user_turn(config, persona, dialogue.turns, backend, options);
            if (move.end_conversation) {
                dialogue.termination = Termination::user_ended;
                break;
            }
            dialogue.turns.push_back({next_index++, Role::user, move.text});

            ++system_ordinal;
            ExchangeResult result = exchange_turn(session, move.text, system_ordinal);
            if (result.crash) return crash_out(*result.crash);
            dialogue.turns.push_back({next_index++, Role::system, *result.system_text});
        }
    } catch (const std::exception& e) {
        // Gateway and unexpected failures: keep the transcript so far.
        dialogue.termination = Termination::error;
        dialogue.error_detail = e.what();
    }
    return Dialogue::validated(std::move(dialogue));
}

CampaignResult run_campaign(const ChatbotConfig& config, const std::vector<Persona>& personas,
                            int runs, Backend& backend, SessionFactory& sessions,
                            const RunCampaignOptions& options) {
    if (personas.empty()) throw UsageError("no personas to simulate");
    if (runs < 1) throw UsageError("runs must be at least 1");
    const int workers = std::max(1, options.workers);

    CampaignResult result;
    result.runs.resize(static_cast<std::size_t>(runs));
    SimulatorOptions simulator_options;
    simulator_options.model = options.model;

    for (int run = 1; run <= runs; ++run) {
        auto& dialogues = result.runs[static_cast<std::size_t>(run - 1)];
        dialogues.resize(personas.size());

        auto simulate_one = [&](std::size_t seq) {
            const Persona& persona = personas[seq];
            const std::string dialogue_id =
                make_dialogue_id(config.id, persona.persona_id, run, static_cast<int>(seq) + 1);
            SimulatorOptions per_dialogue = simulator_options;
            if (options.transcript_for) {
                per_dialogue.transcript = options.transcript_for(run, dialogue_id);
            }
            Dialogue dialogue;
            try {
                auto session = sessions.create(dialogue_id);
                dialogue = run_dialogue(config, persona, *session, backend, dialogue_id,
                                        per_dialogue);
                session->close();
            } catch (const std::exception& e) {
                dialogue.dialogue_id = dialogue_id;
                dialogue.chatbot_id = config.id;
                dialogue.persona_id = persona.persona_id;
                dialogue.termination = Termination::error;
                dialogue.error_detail = e.what();
            }
            dialogues[seq] = std::move(dialogue);
        };

        if (workers == 1) {
            for (std::size_t seq = 0; seq < personas.size(); ++seq) simulate_one(seq);
        } else {
            std::atomic<std::size_t> cursor{0};
            std::vector<std::thread> pool;
            const std::size_t pool_size =
                std::min<std::size_t>(static_cast<std::size_t>(workers), personas.size());
            for (std::size_t i = 0; i < pool_size; ++i) {
                pool.emplace_back([&] {
                    for (;;) {
                        const std::size_t seq = cursor.fetch_add(1);
                        if (seq >= personas.size()) return;
                        simulate_one(seq);
                    }
                });
            }
            for (auto& worker : pool) worker.join();
        }

        if (options.on_dialogue) {
            for (const auto& dialogue : dialogues) options.on_dialogue(run, dialogue);
        }
    }
    return result;
}

} // namespace chatprobe
