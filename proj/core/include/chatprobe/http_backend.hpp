// Live backend speaking the OpenAI-compatible chat-completions protocol.
// Kept in its own translation unit; everything else depends only on Backend.

#pragma once

#include <memory>
#include <string>

#include "chatprobe/gateway.hpp"

namespace chatprobe {

struct LiveBackendConfig {
    // Scheme + host (+ optional port), e.g. "https://api.openai.com" or
    // "http://127.0.0.1:8089" for a compatible local server.
    std::string base_url = "https://api.openai.com";
    std::string completions_path = "/v1/chat/completions";
    // Bearer token; when empty, read from api_key_env at construction.
    std::string api_key;
    std::string api_key_env = "OPENAI_API_KEY";
    int timeout_seconds = 120;
};

class HttpBackend : public Backend {
public:
    explicit HttpBackend(LiveBackendConfig config);
    ~HttpBackend() override;

    std::string execute(const CompletionRequest& request) override;
    std::string descriptor() const override;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Request body in wire format; exposed for protocol tests.
nlohmann::json openai_request_body(const CompletionRequest& request);

} // namespace chatprobe
