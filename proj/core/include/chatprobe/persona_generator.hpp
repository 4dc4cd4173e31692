// Persona generation: one batch request at temperature 1, parsed into
// validated Persona values with ids assigned by the framework.

#pragma once

#include <string>
#include <vector>

#include "chatprobe/gateway.hpp"
#include "chatprobe/types.hpp"

namespace chatprobe {

// Single user message; the type description matches the requested kind.
std::vector<ChatMessage> build_persona_prompt(const ChatbotConfig& config, int num_personas,
                                              PersonaType type);

// Structured-output shape for a persona batch: the Persona profile fields
// under a top-level "personas" list. Trait levels are schema-enforced;
// trait-key completeness is checked by validate_persona afterwards.
nlohmann::json persona_batch_schema();

struct PersonaGeneratorOptions {
    std::string model = kDefaultModel;
    TranscriptLog* transcript = nullptr;
    // First index used for "generated_<type>_persona_NN" ids (two digits).
    int first_index = 1;
};

// Returns exactly num_personas validated personas carrying the requested
// type. Wrong batch size or an invalid persona raises ValidationError;
// malformed output is retried by the gateway.
std::vector<Persona> generate_personas(const ChatbotConfig& config, int num_personas,
                                       PersonaType type, Backend& backend,
                                       const PersonaGeneratorOptions& options = {});

} // namespace chatprobe
