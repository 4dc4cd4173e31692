// Breakdown detection over system turns. Two prompt modes: the primary one
// interpolates the full error taxonomy and chatbot info and asks for error
// types; the zero-shot baseline mode reproduces the earlier plain prompt and
// yields decisions and scores only.

#pragma once

#include <string>
#include <vector>

#include "chatprobe/gateway.hpp"
#include "chatprobe/types.hpp"

namespace chatprobe {

enum class DetectorMode { extended_taxonomy, ghassel_zero_shot };

std::string to_string(DetectorMode mode);
DetectorMode detector_mode_from_string(const std::string& text);

struct DetectorOptions {
    DetectorMode mode = DetectorMode::extended_taxonomy;
    std::string model = kDefaultModel;
    // Target-system description shown to the judge; null for corpora
    // recorded without one (a neutral block is rendered instead).
    const ChatbotConfig* config = nullptr;
    TranscriptLog* transcript = nullptr;
};

// history carries every turn the judge may see, ending with the target
// system turn; last_bot_utterance is that turn's text, passed separately
// because the prompt quotes it on its own.
std::vector<ChatMessage> render_detector_prompt(const std::vector<Turn>& history,
                                                const std::string& last_bot_utterance,
                                                const ChatbotConfig* config, DetectorMode mode);

// Structured-output shape for extended mode. Score bounds and error-type
// keys are semantic checks (one corrective retry), not schema constraints.
nlohmann::json detector_output_schema();

BreakdownAnnotation detect_breakdown(const std::vector<Turn>& history,
                                     const std::string& last_bot_utterance, Backend& backend,
                                     const DetectorOptions& options = {});

struct AnnotationFailure {
    int turn_index = 0;
    std::string error;

    bool operator==(const AnnotationFailure&) const = default;
};

// One detector pass over a dialogue: an annotation per completed system
// turn, gaps recorded instead of aborting the dialogue.
struct DialogueAnnotations {
    std::string dialogue_id;
    DetectorMode mode = DetectorMode::extended_taxonomy;
    std::string model;
    std::vector<BreakdownAnnotation> annotations; // ordered by turn index
    std::vector<AnnotationFailure> failures;

    bool has_breakdown() const;
};

DialogueAnnotations annotate_dialogue(const Dialogue& dialogue, Backend& backend,
                                      const DetectorOptions& options = {});

nlohmann::json dialogue_annotations_to_json(const DialogueAnnotations& annotations);
DialogueAnnotations dialogue_annotations_from_json(const nlohmann::json& value);

} // namespace chatprobe
