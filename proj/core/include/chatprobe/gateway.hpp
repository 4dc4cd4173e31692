// Provider-agnostic chat-completion access. Every module that needs a model
// goes through a Backend; swapping the backend never changes module behavior
// given identical raw responses. The scripted backend drives deterministic
// tests, the recording/replay pair makes live sessions reproducible.

#pragma once

#include <chrono>
#include <condition_variable>
#include <deque>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "chatprobe/errors.hpp"

namespace chatprobe {

enum class MessageRole { system, user, assistant };

std::string to_string(MessageRole role);
MessageRole message_role_from_string(const std::string& text);

struct ChatMessage {
    MessageRole role = MessageRole::user;
    std::string content; // nonempty

    bool operator==(const ChatMessage&) const = default;
};

// Detector/rater requests run at temperature 0, simulator/persona requests
// at temperature 1.
constexpr double kJudgeTemperature = 0.0;
constexpr double kSimulationTemperature = 1.0;

// Default model for every module; the detector additionally accepts the
// older model for baseline comparisons. Both configurable per invocation.
inline constexpr const char* kDefaultModel = "gpt-4o-2024-08-06";
inline constexpr const char* kLegacyModel = "gpt-3.5-turbo-0125";

struct CompletionRequest {
    std::string model;
    double temperature = 0.0;
    std::vector<ChatMessage> messages;
    std::optional<nlohmann::json> output_schema; // JSON Schema for structured output
    // Provider-facing name of the schema (OpenAI requires one).
    std::string schema_name = "response";

    bool operator==(const CompletionRequest&) const = default;
};

nlohmann::json request_to_json(const CompletionRequest& request);
CompletionRequest request_from_json(const nlohmann::json& value);

// Stable fingerprint of a request (FNV-1a over the canonical JSON dump);
// keys recorded sessions for replay.
std::string request_fingerprint(const CompletionRequest& request);

class Backend {
public:
    virtual ~Backend() = default;

    // Returns the raw completion text. Throws GatewayError on transport
    // failure; retryable errors are transient.
    virtual std::string execute(const CompletionRequest& request) = 0;

    // Identifier recorded in manifests and reports ("scripted", "live:...").
    virtual std::string descriptor() const = 0;
};

// Deterministic mock: consumes canned responses in order and remembers the
// requests it saw. Serializes internally, safe to share across workers.
class ScriptedBackend : public Backend {
public:
    ScriptedBackend() = default;
    explicit ScriptedBackend(std::vector<std::string> responses);

    void push_response(std::string response);

    std::string execute(const CompletionRequest& request) override;
    std::string descriptor() const override { return "scripted"; }

    std::vector<CompletionRequest> seen_requests() const;
    std::size_t remaining() const;

private:
    mutable std::mutex mutex_;
    std::deque<std::string> responses_;
    std::vector<CompletionRequest> seen_;
};

// Wraps a live backend and appends {fingerprint, request, response} JSON
// lines to a session file as calls complete.
class RecordingBackend : public Backend {
public:
    RecordingBackend(Backend& inner, const std::string& session_path);

    std::string execute(const CompletionRequest& request) override;
    std::string descriptor() const override { return "record:" + inner_.descriptor(); }

private:
    Backend& inner_;
    std::mutex mutex_;
    std::ofstream out_;
};

// Replays a recorded session: responses are matched by request fingerprint
// and consumed in recording order within each fingerprint bucket.
class ReplayBackend : public Backend {
public:
    explicit ReplayBackend(const std::string& session_path);

    std::string execute(const CompletionRequest& request) override;
    std::string descriptor() const override { return "replay"; }

    std::size_t remaining() const;

private:
    mutable std::mutex mutex_;
    std::map<std::string, std::deque<std::string>> responses_;
};

// Decorator enforcing an in-flight cap and a minimum delay between request
// starts, the backend-level rate limit for live providers.
class RateLimitedBackend : public Backend {
public:
    RateLimitedBackend(Backend& inner, int max_in_flight, std::chrono::milliseconds min_delay);

    std::string execute(const CompletionRequest& request) override;
    std::string descriptor() const override { return inner_.descriptor(); }

private:
    Backend& inner_;
    int max_in_flight_;
    std::chrono::milliseconds min_delay_;
    std::mutex mutex_;
    std::condition_variable cv_;
    int in_flight_ = 0;
    std::chrono::steady_clock::time_point last_start_{};
};

// Append-only audit log of every request/response pair, one JSON object per
// line. Campaigns keep one per dialogue.
class TranscriptLog {
public:
    explicit TranscriptLog(const std::string& path);

    void append(const CompletionRequest& request, const std::string& response, int attempt);

private:
    std::mutex mutex_;
    std::ofstream out_;
};

struct CompletionOptions {
    int max_attempts = 3; // total attempts on malformed structured output
    TranscriptLog* transcript = nullptr;
};

struct StructuredCompletion {
    nlohmann::json value;
    std::string raw;   // raw text of the accepted completion
    int attempts = 1;  // backend calls made (retry count = attempts - 1)
};

// Parser used by complete_with_parser: turns raw text into a JSON value or
// throws to signal a malformed completion worth retrying.
class MalformedOutput : public std::runtime_error {
public:
    explicit MalformedOutput(const std::string& message) : std::runtime_error(message) {}
};

using OutputParser = std::function<nlohmann::json(const std::string& raw)>;

// Sends the identical request until the parser accepts the completion or
// max_attempts is exhausted, then throws StructuredOutputError carrying the
// last raw text. Transport errors propagate as GatewayError.
StructuredCompletion complete_with_parser(const CompletionRequest& request, Backend& backend,
                                          const OutputParser& parser,
                                          const CompletionOptions& options = {});

// complete_with_parser specialised to "parse JSON, validate output_schema".
StructuredCompletion complete_structured(const CompletionRequest& request, Backend& backend,
                                         const CompletionOptions& options = {});

// Parses raw model output as JSON, tolerating Markdown code fences.
nlohmann::json parse_model_json(const std::string& raw);

} // namespace chatprobe
