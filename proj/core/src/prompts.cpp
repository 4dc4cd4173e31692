// Template text is frozen verbatim, including line breaks and punctuation
// (and the "must designed" wording in the persona prompt); golden tests pin
// the exact bytes. Edit only with a version bump.

#include "chatprobe/prompts.hpp"

#include <cctype>

#include "chatprobe/errors.hpp"

namespace chatprobe::prompts {

const char* const kTemplateVersion = "2025.1";

const char* const kDetectorSystemTemplate =
    R"TPL(# Role
You are an expert in identifying dialogue breakdowns in conversations between a chatbot and a user. You are given a dialogue context and the latest chatbot utterance to analyse.

# Breakdown Definition
A dialogue breakdown is any response of the chatbot that makes it difficult for the user to continue the conversation (smoothly).

## Breakdown Taxonomy
When evaluating the chatbot's response, consider the following breakdown types, which represent common disruptions:
{breakdown_taxonomy}
{chatbot_info}
# Task
Identify whether the latest chatbot utterance leads to a dialogue breakdown. If a breakdown is detected, classify it according to the breakdown taxonomy above.
Additionally, provide a score ranging from 0 to 1, where 0 indicates a complete breakdown and 1 indicates a seamless conversation.
If a breakdown is detected, provide a list of all fitting breakdown types.

Think step by step and provide a reason for your decision.)TPL";

const char* const kDetectorUserTemplate =
    R"TPL(# Dialogue Context
{chat_history_str}

# Latest Chatbot Utterance to Analyse
{last_bot_utterance}

# Your Analysis)TPL";

const char* const kGhasselTemplate =
    R"TPL(Assume you are an expert in dialogue analysis. You are presented with a series of conversations between a bot and a user. Your primary task is to scrutinize the latest bot utterance for potential dialogue breakdown.
Dialogue breakdown is characterized by incoherence, irrelevance, or any disruption that significantly hampers the flow of the conversation, making it challenging for the user to continue the conversation smoothly.

Analyze the latest bot utterance and determine whether there is a dialogue breakdown or non-breakdown. Briefly justify your reasoning and provide a score ranging from 0 to 1, where 0 indicates a complete breakdown and 1 indicates a seamless conversation.

Include your decision as either "decision: BREAKDOWN" or "decision: NON-BREAKDOWN".

Here is the conversation segment for analysis:
"
**Dialogue**
{chat_history_str}

**Determine if the following bot utterance leads to a dialogue breakdown:**
{last_bot_utterance}
"

Please output your response in JSON format as a list of objects. For each bot's last utterance, provide a JSON object with the fields: 'reasoning', 'decision', and 'score'. Format each object as follows:

    "reasoning": "Your explanation here",
    "decision": "BREAKDOWN" or "NON-BREAKDOWN",
    "score": Your score here

Ensure each object is separated by a comma and the list ends with a closing square bracket.)TPL";

const char* const kRaterSystemTemplate =
    R"TPL(# Role
You are an expert in evaluating dialogue systems. You are given a conversation to rate and are asked to rate the chatbot's performance in this conversation.
{chatbot_info}

# Task
Rate the chatbot's performance in the following dimensions on a scale from 1 to 5, where 1 is the worst and 5 is the best:
{rating_dimensions}

Think step by step and provide a reason for the rating of each dimension considering the guidelines below.

## General Evaluation Policy (Strict Human-Like)
- Be **strict, realistic, and detailed**, like a critical human evaluator.
- **Compare your scores to human ratings** (if provided) to calibrate accurately.
- **Do not overlook small flaws**: awkward phrasing, unnatural tone, vague wording, poor formatting, or robotic repetition - all should reduce the score for the respective dimension.

## Score Meanings (General Guidance for All Dimensions)
- **5 - Excellent:** Near-perfect. Smooth, natural, and accurate. No noticeable issues. Fully aligned with human expectations.
- **4 - Good:** Generally solid, but minor issues exist (e.g., slightly robotic wording, small tone/grammar issues, or missed nuance).
- **3 - Acceptable:** Noticeable problems (e.g., awkward responses, confusion, clumsy error recovery, slightly incorrect or incomplete answers). Still functional.
- **2 - Poor:** Multiple problems in the dialogue flow, accuracy, or tone. May include failed understanding, missing confirmations, or disjointed logic.
- **1 - Very Poor:** Fails to meet user needs. Confusing, error-filled, or totally off-task.

Note: While these definitions apply broadly, some dimensions may demand additional interpretation (e.g., "fluency" versus "task success"). Always apply the scoring scale according to the intent of that specific dimension.)TPL";

const char* const kRaterUserTemplate =
    R"TPL(# Conversation to Rate
{chat_history_str}

# Your Expert Rating)TPL";

const char* const kPersonaGenerationTemplate =
    R"TPL(# Role
You are a dialogue system developer tasked with generating diverse user personas for a given chatbot.

# Task
Generate {num_personas} diverse {persona_type} user personas for the following chatbot:
{chatbot_info}

{persona_type_description}

Each user persona will be used to automatically simulate a conversation with the chatbot and must designed to act as human-like as possible.
You must write the descriptions in the 2nd person, i.e., directly address the actor of the persona with "you".)TPL";

const char* const kStandardPersonaDescription =
    R"TPL(Standard user personas should be as close to normal human users as possible with respect to demographics, personality and behavior. They should be designed to act as realistic and human-like as possible.)TPL";

const char* const kChallengingPersonaDescription =
    R"TPL(Challenging user personas test the limits of the chatbot. They should be designed to act human-like but may be more challenging for the chatbot to interact with.
Examples of challenging behaviors include:
- Being impolite, impatient, frustrated, vague or sarcastic.
- Struggling with language, technology or understanding the chatbot.
- Questioning the chatbot, modifying previous input or trying to take control of the conversation.
- Giving contradictory responses, misinterpreting the chatbot's suggestions, or deliberately testing the chatbot's patience by asking repetitive or irrelevant questions.
- Having multiple goals or tasks in mind or frequently changing the intent.)TPL";

const char* const kSimulatorSystemTemplate =
    R"TPL(# Role
You play the role of a {persona_type} human user interacting with a chatbot.

You are interacting with a chatbot that has the following characteristics:
{chatbot_info}

You act as the following {persona_type} user persona in your conversation with the chatbot:
{persona_profile}

# Task
Complete the next turn in the conversation based on your persona.

## Task Guidelines
- Complete the turn as human-like as possible.
- Always stick to your persona. You are trying to pass the Turing test by acting as the human persona.
- Keep your answer around {typical_user_turn_length}. Use longer or shorter answers if your persona would do so in the given situation.
- If the chatbot indicates that the conversation is over, if there is no progress in the conversation or if the conversation can not be continued realistically, end the conversation by writing "END_CONVERSATION".
- You must always keep your response below {max_turn_length} in length.)TPL";

const char* const kSimulatorUserTemplate =
    R"TPL(# Conversation
{chat_history}
{turn_number}. YOU:)TPL";

namespace {

bool placeholder_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
}

} // namespace

std::string interpolate(const std::string& tmpl,
                        const std::map<std::string, std::string>& values) {
    std::string out;
    out.reserve(tmpl.size());
    std::size_t pos = 0;
    while (pos < tmpl.size()) {
        char c = tmpl[pos];
        if (c != '{') {
            out += c;
            ++pos;
            continue;
        }
        std::size_t end = pos + 1;
        while (end < tmpl.size() && placeholder_char(tmpl[end])) ++end;
        if (end == pos + 1 || end >= tmpl.size() || tmpl[end] != '}') {
            out += c;
            ++pos;
            continue;
        }
        const std::string name = tmpl.substr(pos + 1, end - pos - 1);
        auto it = values.find(name);
        if (it == values.end()) {
            throw UsageError("no value for placeholder {" + name + "}");
        }
        out += it->second;
        pos = end + 1;
    }
    return out;
}

std::string render_chatbot_info(const ChatbotConfig& config) {
    std::string block = "# Chatbot Information\n";
    block += "name: " + config.name + "\n";
    block += "description: " + config.description + "\n";
    block += "interaction_method: " + config.interaction_method + "\n";
    block += "type: " + to_string(config.chatbot_type) + "\n";
    block += "task: " + config.task;
    auto append_list = [&block](const char* key, const std::vector<std::string>& items) {
        if (items.empty()) return;
        block += std::string("\n") + key + ":";
        for (const auto& item : items) block += "\n- " + item;
    };
    append_list("constraints", config.constraints);
    append_list("known_limitations", config.known_limitations);
    append_list("available_languages", config.available_languages);
    return block;
}

std::string neutral_chatbot_info() {
    return "# Chatbot Information\nNo further information about the chatbot is available.";
}

std::string render_persona_profile(const Persona& persona) {
    std::string block;
    block += "name: " + persona.name + "\n";
    block += "gender: " + persona.gender + "\n";
    block += "age: " + std::to_string(persona.age) + "\n";
    block += "background_info:";
    for (const auto& line : persona.background_info) block += "\n- " + line;
    block += "\npersonality:";
    for (const auto& key : big_five_keys()) {
        auto it = persona.personality.find(key);
        if (it == persona.personality.end()) {
            throw ValidationError("personality", "missing trait \"" + key + "\"");
        }
        block += "\n  " + key + ": " + to_string(it->second);
    }
    block += "\ninteraction_style:";
    for (const auto& line : persona.interaction_style) block += "\n- " + line;
    block += "\ntask: " + persona.task;
    return block;
}

std::string render_chat_history(const std::vector<Turn>& turns, const std::string& user_label) {
    std::string out;
    for (const auto& turn : turns) {
        if (!out.empty()) out += "\n";
        const std::string label = turn.role == Role::user ? user_label : "CHATBOT";
        out += std::to_string(turn.index) + ". " + label + ": \"" + turn.text + "\"";
    }
    return out;
}

} // namespace chatprobe::prompts
