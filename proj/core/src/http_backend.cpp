#include "chatprobe/http_backend.hpp"

#include <cstdlib>

#include <httplib.h>

namespace chatprobe {

nlohmann::json openai_request_body(const CompletionRequest& request) {
    nlohmann::json messages = nlohmann::json::array();
    for (const auto& message : request.messages) {
        messages.push_back({{"role", to_string(message.role)}, {"content", message.content}});
    }
    nlohmann::json body = {
        {"model", request.model},
        {"temperature", request.temperature},
        {"messages", std::move(messages)},
    };
    if (request.output_schema) {
        body["response_format"] = {
            {"type", "json_schema"},
            {"json_schema",
             {{"name", request.schema_name}, {"strict", true}, {"schema", *request.output_schema}}},
        };
    }
    return body;
}

struct HttpBackend::Impl {
    LiveBackendConfig config;
    httplib::Client client;

    explicit Impl(LiveBackendConfig cfg) : config(std::move(cfg)), client(config.base_url) {
        client.set_connection_timeout(config.timeout_seconds, 0);
        client.set_read_timeout(config.timeout_seconds, 0);
        client.set_write_timeout(config.timeout_seconds, 0);
    }
};

HttpBackend::HttpBackend(LiveBackendConfig config) {
    if (config.api_key.empty() && !config.api_key_env.empty()) {
        if (const char* key = std::getenv(config.api_key_env.c_str())) config.api_key = key;
    }
    impl_ = std::make_unique<Impl>(std::move(config));
}

HttpBackend::~HttpBackend() = default;

std::string HttpBackend::descriptor() const {
    return "live:" + impl_->config.base_url;
}

std::string HttpBackend::execute(const CompletionRequest& request) {
    httplib::Headers headers;
    if (!impl_->config.api_key.empty()) {
        headers.emplace("Authorization", "Bearer " + impl_->config.api_key);
    }
    const std::string body = openai_request_body(request).dump();
    auto result =
        impl_->client.Post(impl_->config.completions_path, headers, body, "application/json");
    if (!result) {
        throw GatewayError("chat-completions request failed: " + httplib::to_string(result.error()),
                           /*retryable=*/true);
    }
    if (result->status != 200) {
        const bool retryable =
            result->status == 408 || result->status == 429 || result->status >= 500;
        throw GatewayError("chat-completions request returned HTTP " +
                               std::to_string(result->status) + ": " + result->body.substr(0, 400),
                           retryable);
    }
    nlohmann::json payload;
    try {
        payload = nlohmann::json::parse(result->body);
    } catch (const nlohmann::json::exception& e) {
        throw GatewayError(std::string("chat-completions response is not JSON: ") + e.what(),
                           /*retryable=*/false);
    }
    try {
        return payload.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const nlohmann::json::exception&) {
        throw GatewayError("chat-completions response lacks choices[0].message.content",
                           /*retryable=*/false);
    }
}

} // namespace chatprobe
