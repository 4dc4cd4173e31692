#include "chatprobe/persona_generator.hpp"

#include <iomanip>
#include <sstream>

#include "chatprobe/prompts.hpp"

namespace chatprobe {

std::vector<ChatMessage> build_persona_prompt(const ChatbotConfig& config, int num_personas,
                                              PersonaType type) {
    if (num_personas < 1) throw UsageError("num_personas must be at least 1");
    validate_config(config);
    const std::string description = type == PersonaType::standard
                                        ? prompts::kStandardPersonaDescription
                                        : prompts::kChallengingPersonaDescription;
    const std::string text = prompts::interpolate(
        prompts::kPersonaGenerationTemplate,
        {
            {"num_personas", std::to_string(num_personas)},
            {"persona_type", to_string(type)},
            {"chatbot_info", prompts::render_chatbot_info(config)},
            {"persona_type_description", description},
        });
    return {{MessageRole::user, text}};
}

nlohmann::json persona_batch_schema() {
    const nlohmann::json trait = {{"type", "string"},
                                  {"enum", nlohmann::json::array({"low", "medium", "high"})}};
    nlohmann::json persona = {
        {"type", "object"},
        {"properties",
         {
             {"name", {{"type", "string"}}},
             {"gender", {{"type", "string"}}},
             {"age", {{"type", "integer"}}},
             {"background_info", {{"type", "array"}, {"items", {{"type", "string"}}}}},
             {"personality",
              {{"type", "object"}, {"additionalProperties", trait}}},
             {"interaction_style", {{"type", "array"}, {"items", {{"type", "string"}}}}},
             {"task", {{"type", "string"}}},
         }},
        {"required", nlohmann::json::array({"name", "gender", "age", "background_info",
                                            "personality", "interaction_style", "task"})},
        {"additionalProperties", false},
    };
    return {
        {"type", "object"},
        {"properties", {{"personas", {{"type", "array"}, {"items", persona}}}}},
        {"required", nlohmann::json::array({"personas"})},
        {"additionalProperties", false},
    };
}

std::vector<Persona> generate_personas(const ChatbotConfig& config, int num_personas,
                                       PersonaType type, Backend& backend,
                                       const PersonaGeneratorOptions& options) {
    CompletionRequest request;
    request.model = options.model;
    request.temperature = kSimulationTemperature;
    request.messages = build_persona_prompt(config, num_personas, type);
    request.output_schema = persona_batch_schema();
    request.schema_name = "persona_batch";

    CompletionOptions completion_options;
    completion_options.transcript = options.transcript;
    const auto completion = complete_structured(request, backend, completion_options);

    const auto& batch = completion.value.at("personas");
    if (static_cast<int>(batch.size()) != num_personas) {
        throw ValidationError("personas", "expected " + std::to_string(num_personas) +
                                              " personas, model produced " +
                                              std::to_string(batch.size()));
    }
    std::vector<Persona> personas;
    for (const auto& entry : batch) {
        Persona persona;
        std::ostringstream id;
        id << "generated_" << to_string(type) << "_persona_" << std::setw(2) << std::setfill('0')
           << (options.first_index + static_cast<int>(personas.size()));
        persona.persona_id = id.str();
        persona.persona_type = type;
        persona.name = entry.at("name").get<std::string>();
        persona.gender = entry.at("gender").get<std::string>();
        persona.age = entry.at("age").get<int>();
        persona.background_info = entry.at("background_info").get<std::vector<std::string>>();
        for (const auto& [key, level] : entry.at("personality").items()) {
            persona.personality[key] = trait_level_from_string(level.get<std::string>());
        }
        persona.interaction_style = entry.at("interaction_style").get<std::vector<std::string>>();
        persona.task = entry.at("task").get<std::string>();
        validate_persona(persona);
        personas.push_back(std::move(persona));
    }
    return personas;
}

} // namespace chatprobe
