// Multi-dimension 1-5 dialogue rating with the strict calibrated rubric.
// Dimension sets are keyed to the chatbot type; "overall" is always present
// and always model-produced, never derived.

#pragma once

#include <string>
#include <vector>

#include "chatprobe/gateway.hpp"
#include "chatprobe/taxonomy.hpp"
#include "chatprobe/types.hpp"

namespace chatprobe {

// The fixed dimension list for a chatbot type, overall last.
std::vector<RatingDimension> select_dimensions(ChatbotType type);

// config may be null for corpora recorded without one; dimensions then
// follow the explicitly requested type.
std::vector<ChatMessage> render_rating_prompt(const Dialogue& dialogue,
                                              const ChatbotConfig* config,
                                              const std::vector<RatingDimension>& dimensions);

// Structured-output shape: one entry per dimension with reasoning and an
// integer rating. Range and key completeness are semantic checks with one
// corrective retry.
nlohmann::json rating_output_schema();

struct RaterOptions {
    std::string model = kDefaultModel;
    const ChatbotConfig* config = nullptr;
    // Used when config is null.
    ChatbotType fallback_type = ChatbotType::conversational;
    TranscriptLog* transcript = nullptr;
};

DialogueRating rate_dialogue(const Dialogue& dialogue, Backend& backend,
                             const RaterOptions& options = {});

} // namespace chatprobe
