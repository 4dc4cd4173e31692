#include "chatprobe/serialization.hpp"

#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "chatprobe/errors.hpp"

namespace chatprobe {

namespace {

std::string yaml_field(const YAML::Node& node, const char* key, const std::string& origin) {
    if (!node[key]) throw ValidationError(key, "missing in " + origin);
    try {
        return node[key].as<std::string>();
    } catch (const YAML::Exception&) {
        throw ValidationError(key, "not a scalar in " + origin);
    }
}

std::vector<std::string> yaml_string_list(const YAML::Node& node, const char* key,
                                          const std::string& origin) {
    std::vector<std::string> items;
    if (!node[key]) return items;
    const YAML::Node list = node[key];
    if (!list.IsSequence()) throw ValidationError(key, "not a list in " + origin);
    for (const auto& item : list) items.push_back(item.as<std::string>());
    return items;
}

YAML::Node parse_yaml_root(const std::string& text, const std::string& origin) {
    try {
        YAML::Node root = YAML::Load(text);
        if (!root.IsMap()) throw ParseError(origin, "top level is not a mapping");
        return root;
    } catch (const YAML::Exception& e) {
        throw ParseError(origin, e.what());
    }
}

} // namespace

ChatbotConfig parse_config_yaml(const std::string& text, const std::string& origin) {
    const YAML::Node root = parse_yaml_root(text, origin);
    ChatbotConfig config;
    config.id = yaml_field(root, "id", origin);
    const YAML::Node info = root["chatbot_info"];
    if (!info || !info.IsMap()) throw ValidationError("chatbot_info", "missing in " + origin);
    config.name = yaml_field(info, "name", origin);
    config.description = yaml_field(info, "description", origin);
    config.interaction_method = yaml_field(info, "interaction_method", origin);
    config.chatbot_type = chatbot_type_from_string(yaml_field(info, "type", origin));
    config.task = yaml_field(info, "task", origin);
    config.constraints = yaml_string_list(info, "constraints", origin);
    config.known_limitations = yaml_string_list(info, "known_limitations", origin);
    config.available_languages = yaml_string_list(info, "available_languages", origin);
    if (info["chatbot_speaks_first"]) {
        config.chatbot_speaks_first = info["chatbot_speaks_first"].as<bool>();
    }
    const YAML::Node sim = root["user_simulation_config"];
    if (!sim || !sim.IsMap()) {
        throw ValidationError("user_simulation_config", "missing in " + origin);
    }
    config.typical_user_turn_length = yaml_field(sim, "typical_user_turn_length", origin);
    config.max_user_turn_length = yaml_field(sim, "max_user_turn_length", origin);
    if (!sim["max_user_turns"]) throw ValidationError("max_user_turns", "missing in " + origin);
    try {
        config.max_user_turns = sim["max_user_turns"].as<int>();
    } catch (const YAML::Exception&) {
        throw ValidationError("max_user_turns", "not an integer in " + origin);
    }
    validate_config(config);
    return config;
}

ChatbotConfig load_config(const std::string& path) {
    return parse_config_yaml(read_file(path), path);
}

std::string yaml_scalar(const std::string& value) {
    bool quote = value.empty();
    if (!value.empty()) {
        const char first = value.front();
        if (!std::isalpha(static_cast<unsigned char>(first))) quote = true;
        if (std::isspace(static_cast<unsigned char>(value.back()))) quote = true;
    }
    static const std::vector<std::string> keywords = {"true", "false", "yes",  "no",
                                                      "on",   "off",   "null", "~"};
    for (const auto& keyword : keywords) {
        if (value == keyword) quote = true;
    }
    for (std::size_t i = 0; i < value.size() && !quote; ++i) {
        const char c = value[i];
        if (c == '\n' || c == '\t' || c == '"') quote = true;
        if (c == '#' && i > 0 && value[i - 1] == ' ') quote = true;
        if (c == ':' && (i + 1 == value.size() || value[i + 1] == ' ')) quote = true;
    }
    if (!quote) return value;
    std::string out = "\"";
    for (char c : value) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        default: out += c;
        }
    }
    out += "\"";
    return out;
}

std::string config_to_yaml(const ChatbotConfig& config) {
    std::ostringstream out;
    out << "id: " << yaml_scalar(config.id) << "\n";
    out << "chatbot_info:\n";
    out << "  name: " << yaml_scalar(config.name) << "\n";
    out << "  description: " << yaml_scalar(config.description) << "\n";
    out << "  interaction_method: " << yaml_scalar(config.interaction_method) << "\n";
    out << "  type: " << to_string(config.chatbot_type) << "\n";
    out << "  task: " << yaml_scalar(config.task) << "\n";
    auto emit_list = [&out](const char* key, const std::vector<std::string>& items) {
        if (items.empty()) return;
        out << "  " << key << ":\n";
        for (const auto& item : items) out << "    - " << yaml_scalar(item) << "\n";
    };
    emit_list("constraints", config.constraints);
    emit_list("known_limitations", config.known_limitations);
    emit_list("available_languages", config.available_languages);
    if (!config.chatbot_speaks_first) out << "  chatbot_speaks_first: false\n";
    out << "user_simulation_config:\n";
    out << "  typical_user_turn_length: " << yaml_scalar(config.typical_user_turn_length) << "\n";
    out << "  max_user_turn_length: " << yaml_scalar(config.max_user_turn_length) << "\n";
    out << "  max_user_turns: " << config.max_user_turns << "\n";
    return out.str();
}

Persona parse_persona_yaml(const std::string& text, const std::string& origin) {
    const YAML::Node root = parse_yaml_root(text, origin);
    Persona persona;
    persona.persona_id = yaml_field(root, "persona_id", origin);
    persona.persona_type = persona_type_from_string(yaml_field(root, "type", origin));
    const YAML::Node profile = root["profile"];
    if (!profile || !profile.IsMap()) throw ValidationError("profile", "missing in " + origin);
    persona.name = yaml_field(profile, "name", origin);
    persona.gender = yaml_field(profile, "gender", origin);
    if (!profile["age"]) throw ValidationError("age", "missing in " + origin);
    try {
        persona.age = profile["age"].as<int>();
    } catch (const YAML::Exception&) {
        throw ValidationError("age", "not an integer in " + origin);
    }
    persona.background_info = yaml_string_list(profile, "background_info", origin);
    const YAML::Node personality = profile["personality"];
    if (!personality || !personality.IsMap()) {
        throw ValidationError("personality", "missing in " + origin);
    }
    for (const auto& entry : personality) {
        persona.personality[entry.first.as<std::string>()] =
            trait_level_from_string(entry.second.as<std::string>());
    }
    persona.interaction_style = yaml_string_list(profile, "interaction_style", origin);
    persona.task = yaml_field(root, "task", origin);
    validate_persona(persona);
    return persona;
}

Persona load_persona(const std::string& path) {
    return parse_persona_yaml(read_file(path), path);
}

std::string persona_to_yaml(const Persona& persona) {
    std::ostringstream out;
    out << "persona_id: " << yaml_scalar(persona.persona_id) << "\n";
    out << "type: " << to_string(persona.persona_type) << "\n";
    out << "profile:\n";
    out << "  name: " << yaml_scalar(persona.name) << "\n";
    out << "  gender: " << yaml_scalar(persona.gender) << "\n";
    out << "  age: " << persona.age << "\n";
    out << "  background_info:\n";
    for (const auto& line : persona.background_info) out << "  - " << yaml_scalar(line) << "\n";
    out << "  personality:\n";
    for (const auto& key : big_five_keys()) {
        auto it = persona.personality.find(key);
        if (it == persona.personality.end()) {
            throw ValidationError("personality", "missing trait \"" + key + "\"");
        }
        out << "    " << key << ": " << to_string(it->second) << "\n";
    }
    out << "  interaction_style:\n";
    for (const auto& line : persona.interaction_style) out << "  - " << yaml_scalar(line) << "\n";
    out << "task: " << yaml_scalar(persona.task) << "\n";
    return out.str();
}

nlohmann::json config_to_json(const ChatbotConfig& config) {
    return {
        {"id", config.id},
        {"chatbot_info",
         {{"name", config.name},
          {"description", config.description},
          {"interaction_method", config.interaction_method},
          {"type", to_string(config.chatbot_type)},
          {"task", config.task},
          {"constraints", config.constraints},
          {"known_limitations", config.known_limitations},
          {"available_languages", config.available_languages},
          {"chatbot_speaks_first", config.chatbot_speaks_first}}},
        {"user_simulation_config",
         {{"typical_user_turn_length", config.typical_user_turn_length},
          {"max_user_turn_length", config.max_user_turn_length},
          {"max_user_turns", config.max_user_turns}}},
    };
}

ChatbotConfig config_from_json(const nlohmann::json& value) {
    ChatbotConfig config;
    config.id = value.at("id").get<std::string>();
    const auto& info = value.at("chatbot_info");
    config.name = info.at("name").get<std::string>();
    config.description = info.at("description").get<std::string>();
    config.interaction_method = info.at("interaction_method").get<std::string>();
    config.chatbot_type = chatbot_type_from_string(info.at("type").get<std::string>());
    config.task = info.at("task").get<std::string>();
    config.constraints = info.value("constraints", std::vector<std::string>{});
    config.known_limitations = info.value("known_limitations", std::vector<std::string>{});
    config.available_languages = info.value("available_languages", std::vector<std::string>{});
    config.chatbot_speaks_first = info.value("chatbot_speaks_first", true);
    const auto& sim = value.at("user_simulation_config");
    config.typical_user_turn_length = sim.at("typical_user_turn_length").get<std::string>();
    config.max_user_turn_length = sim.at("max_user_turn_length").get<std::string>();
    config.max_user_turns = sim.at("max_user_turns").get<int>();
    validate_config(config);
    return config;
}

nlohmann::json persona_to_json(const Persona& persona) {
    nlohmann::json personality = nlohmann::json::object();
    for (const auto& [key, level] : persona.personality) personality[key] = to_string(level);
    return {
        {"persona_id", persona.persona_id},
        {"type", to_string(persona.persona_type)},
        {"profile",
         {{"name", persona.name},
          {"gender", persona.gender},
          {"age", persona.age},
          {"background_info", persona.background_info},
          {"personality", std::move(personality)},
          {"interaction_style", persona.interaction_style}}},
        {"task", persona.task},
    };
}

Persona persona_from_json(const nlohmann::json& value) {
    Persona persona;
    persona.persona_id = value.at("persona_id").get<std::string>();
    persona.persona_type = persona_type_from_string(value.at("type").get<std::string>());
    const auto& profile = value.at("profile");
    persona.name = profile.at("name").get<std::string>();
    persona.gender = profile.at("gender").get<std::string>();
    persona.age = profile.at("age").get<int>();
    persona.background_info = profile.at("background_info").get<std::vector<std::string>>();
    for (const auto& [key, level] : profile.at("personality").items()) {
        persona.personality[key] = trait_level_from_string(level.get<std::string>());
    }
    persona.interaction_style = profile.at("interaction_style").get<std::vector<std::string>>();
    persona.task = value.at("task").get<std::string>();
    validate_persona(persona);
    return persona;
}

nlohmann::json turn_to_json(const Turn& turn) {
    return {{"index", turn.index}, {"role", to_string(turn.role)}, {"text", turn.text}};
}

Turn turn_from_json(const nlohmann::json& value) {
    Turn turn;
    turn.index = value.at("index").get<int>();
    turn.role = role_from_string(value.at("role").get<std::string>());
    turn.text = value.at("text").get<std::string>();
    return turn;
}

nlohmann::json dialogue_to_json(const Dialogue& dialogue) {
    nlohmann::json turns = nlohmann::json::array();
    for (const auto& turn : dialogue.turns) turns.push_back(turn_to_json(turn));
    nlohmann::json value = {
        {"dialogue_id", dialogue.dialogue_id},
        {"chatbot_id", dialogue.chatbot_id},
        {"termination", to_string(dialogue.termination)},
        {"turns", std::move(turns)},
    };
    if (dialogue.persona_id) value["persona_id"] = *dialogue.persona_id;
    if (dialogue.error_detail) value["error_detail"] = *dialogue.error_detail;
    if (dialogue.crash_report) {
        value["crash_report"] = {
            {"turn_index", dialogue.crash_report->turn_index},
            {"cause", to_string(dialogue.crash_report->cause)},
            {"detail", dialogue.crash_report->detail},
        };
    }
    return value;
}

Dialogue dialogue_from_json(const nlohmann::json& value) {
    Dialogue dialogue;
    dialogue.dialogue_id = value.at("dialogue_id").get<std::string>();
    dialogue.chatbot_id = value.at("chatbot_id").get<std::string>();
    if (value.contains("persona_id")) dialogue.persona_id = value["persona_id"].get<std::string>();
    dialogue.termination = termination_from_string(value.at("termination").get<std::string>());
    if (value.contains("error_detail")) {
        dialogue.error_detail = value["error_detail"].get<std::string>();
    }
    if (value.contains("crash_report")) {
        const auto& report = value["crash_report"];
        dialogue.crash_report =
            CrashReport{report.at("turn_index").get<int>(),
                        crash_cause_from_string(report.at("cause").get<std::string>()),
                        report.at("detail").get<std::string>()};
    }
    for (const auto& turn : value.at("turns")) dialogue.turns.push_back(turn_from_json(turn));
    validate_dialogue(dialogue);
    return dialogue;
}

nlohmann::json annotation_to_json(const BreakdownAnnotation& annotation) {
    return {
        {"turn_index", annotation.turn_index},
        {"reasoning", annotation.reasoning},
        {"decision", to_string(annotation.decision)},
        {"score", annotation.score},
        {"error_types", annotation.error_types},
    };
}

BreakdownAnnotation annotation_from_json(const nlohmann::json& value) {
    BreakdownAnnotation annotation;
    annotation.turn_index = value.at("turn_index").get<int>();
    annotation.reasoning = value.at("reasoning").get<std::string>();
    annotation.decision = breakdown_decision_from_string(value.at("decision").get<std::string>());
    annotation.score = value.at("score").get<double>();
    annotation.error_types = value.at("error_types").get<std::vector<std::string>>();
    validate_annotation(annotation, /*require_error_types=*/false);
    return annotation;
}

nlohmann::json rating_to_json(const DialogueRating& rating) {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& entry : rating.entries) {
        entries.push_back({{"key", entry.dimension_key},
                           {"reasoning", entry.reasoning},
                           {"rating", entry.rating}});
    }
    return {{"ratings", std::move(entries)}};
}

DialogueRating rating_from_json(const nlohmann::json& value) {
    DialogueRating rating;
    for (const auto& entry : value.at("ratings")) {
        rating.entries.push_back({entry.at("key").get<std::string>(),
                                  entry.at("reasoning").get<std::string>(),
                                  entry.at("rating").get<int>()});
    }
    validate_rating(rating);
    return rating;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path, "cannot open file");
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    fs::path temp = target;
    temp += ".tmp";
    {
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        if (!out) throw UsageError("cannot write " + temp.string());
        out << content;
        out.flush();
        if (!out) throw UsageError("short write to " + temp.string());
    }
    fs::rename(temp, target);
}

nlohmann::json load_json(const std::string& path) {
    try {
        return nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path, e.what());
    }
}

void save_json_atomic(const std::string& path, const nlohmann::json& value) {
    write_file_atomic(path, value.dump(2) + "\n");
}

} // namespace chatprobe
