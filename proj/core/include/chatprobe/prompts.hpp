// Versioned prompt templates and their rendering helpers. Templates are
// frozen byte-for-byte (golden tests pin them); interpolation is pure text
// substitution of {name} placeholders, never recursive.

#pragma once

#include <map>
#include <string>
#include <vector>

#include "chatprobe/types.hpp"

namespace chatprobe::prompts {

extern const char* const kTemplateVersion;

extern const char* const kDetectorSystemTemplate;
extern const char* const kDetectorUserTemplate;
// Zero-shot baseline detection prompt; a single user message.
extern const char* const kGhasselTemplate;
extern const char* const kRaterSystemTemplate;
extern const char* const kRaterUserTemplate;
// Persona generation; a single user message.
extern const char* const kPersonaGenerationTemplate;
extern const char* const kStandardPersonaDescription;
extern const char* const kChallengingPersonaDescription;
extern const char* const kSimulatorSystemTemplate;
extern const char* const kSimulatorUserTemplate;

// Replaces each {name} with values.at(name) in one left-to-right pass;
// substituted text is never rescanned. Unknown placeholders throw UsageError.
// Braces not forming a [a-z0-9_]+ placeholder pass through untouched.
std::string interpolate(const std::string& tmpl,
                        const std::map<std::string, std::string>& values);

// "# Chatbot Information" block built from the config; list fields are
// omitted when empty.
std::string render_chatbot_info(const ChatbotConfig& config);

// Stand-in info block for corpora recorded without a config.
std::string neutral_chatbot_info();

// Persona profile block for the simulator system prompt: profile fields plus
// the task, traits in canonical Big Five order.
std::string render_persona_profile(const Persona& persona);

// Numbered transcript lines, `<index>. <ROLE>: "<text>"`, newline-joined.
// user_label is "USER" for judge prompts and "YOU" for the simulator, which
// addresses the model in second person.
std::string render_chat_history(const std::vector<Turn>& turns, const std::string& user_label);

} // namespace chatprobe::prompts
