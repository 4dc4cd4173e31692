// On-disk formats: configs and personas as YAML in the documented layouts,
// dialogues/annotations/ratings as JSON. Emitters are hand-rolled so the
// YAML byte layout is stable; parsing goes through yaml-cpp.

#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "chatprobe/types.hpp"

namespace chatprobe {

ChatbotConfig parse_config_yaml(const std::string& text, const std::string& origin = "<config>");
ChatbotConfig load_config(const std::string& path);
std::string config_to_yaml(const ChatbotConfig& config);

Persona parse_persona_yaml(const std::string& text, const std::string& origin = "<persona>");
Persona load_persona(const std::string& path);
std::string persona_to_yaml(const Persona& persona);

// JSON mirrors of the YAML documents, used inside campaign manifests.
nlohmann::json config_to_json(const ChatbotConfig& config);
ChatbotConfig config_from_json(const nlohmann::json& value);

nlohmann::json persona_to_json(const Persona& persona);
Persona persona_from_json(const nlohmann::json& value);

nlohmann::json turn_to_json(const Turn& turn);
Turn turn_from_json(const nlohmann::json& value);

nlohmann::json dialogue_to_json(const Dialogue& dialogue);
Dialogue dialogue_from_json(const nlohmann::json& value);

nlohmann::json annotation_to_json(const BreakdownAnnotation& annotation);
BreakdownAnnotation annotation_from_json(const nlohmann::json& value);

nlohmann::json rating_to_json(const DialogueRating& rating);
DialogueRating rating_from_json(const nlohmann::json& value);

// Whole-file helpers. Writes go through a temp file in the target directory
// followed by a rename, so readers never observe partial content.
std::string read_file(const std::string& path);
void write_file_atomic(const std::string& path, const std::string& content);

nlohmann::json load_json(const std::string& path);
// Two-space indented dump with trailing newline, written atomically.
void save_json_atomic(const std::string& path, const nlohmann::json& value);

// YAML scalar in the emitted style: plain when unambiguous, double-quoted
// otherwise (always quoted when starting with a non-letter, so "10 words"
// keeps its quotes).
std::string yaml_scalar(const std::string& value);

} // namespace chatprobe
