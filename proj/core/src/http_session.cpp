#include <httplib.h>
#include <json.hpp>

#include "chatprobe/connector.hpp"

namespace chatprobe {

namespace {

class HttpChatbotSession : public ChatbotSession {
public:
    HttpChatbotSession(HttpConnectorConfig config, std::string session_id)
        : config_(std::move(config)), session_id_(std::move(session_id)),
          client_(config_.base_url) {
        client_.set_connection_timeout(config_.timeout_seconds, 0);
        client_.set_read_timeout(config_.timeout_seconds, 0);
        client_.set_write_timeout(config_.timeout_seconds, 0);
    }

protected:
    std::optional<std::string> do_open() override {
        if (!config_.speaks_first) return std::nullopt;
        // The wire contract has no dedicated greeting call; an empty
        // user_message asks the target to open the conversation.
        return post_message("");
    }

    std::string do_send(const std::string& user_text) override { return post_message(user_text); }

private:
    std::string post_message(const std::string& user_text) {
        httplib::Headers headers;
        for (const auto& [key, value] : config_.headers) headers.emplace(key, value);
        const nlohmann::json body = {{"session_id", session_id_}, {"user_message", user_text}};
        auto result = client_.Post(config_.endpoint_path, headers, body.dump(), "application/json");
        if (!result) {
            const auto cause = result.error() == httplib::Error::ConnectionTimeout
                                   ? CrashCause::timeout
                                   : CrashCause::transport_error;
            throw ConnectorError(cause, "request failed: " + httplib::to_string(result.error()));
        }
        if (result->status != 200) {
            throw ConnectorError(CrashCause::transport_error,
                                 "HTTP " + std::to_string(result->status) + ": " +
                                     result->body.substr(0, 400));
        }
        nlohmann::json payload;
        try {
            payload = nlohmann::json::parse(result->body);
        } catch (const nlohmann::json::exception& e) {
            throw ConnectorError(CrashCause::invalid_response,
                                 std::string("reply is not JSON: ") + e.what());
        }
        if (payload.contains("error")) {
            throw ConnectorError(CrashCause::remote_exception, payload["error"].dump());
        }
        if (!payload.contains("bot_message") || !payload["bot_message"].is_string()) {
            throw ConnectorError(CrashCause::invalid_response, "reply lacks bot_message");
        }
        return payload["bot_message"].get<std::string>();
    }

    HttpConnectorConfig config_;
    std::string session_id_;
    httplib::Client client_;
};

} // namespace

std::unique_ptr<ChatbotSession> HttpSessionFactory::create(const std::string& session_id) {
    return std::make_unique<HttpChatbotSession>(config_, session_id);
}

} // namespace chatprobe
