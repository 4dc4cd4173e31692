#include "chatprobe/connector.hpp"

#include "chatprobe/errors.hpp"

namespace chatprobe {

std::optional<std::string> ChatbotSession::open() {
    if (opened_) throw UsageError("session already opened");
    opened_ = true;
    try {
        auto greeting = do_open();
        if (greeting && greeting->empty()) {
            throw ConnectorError(CrashCause::invalid_response, "empty greeting");
        }
        return greeting;
    } catch (const ConnectorError&) {
        crashed_ = true;
        throw;
    }
}

std::string ChatbotSession::send(const std::string& user_text) {
    if (!opened_) throw UsageError("session not opened");
    if (crashed_) throw UsageError("session crashed; no further sends accepted");
    if (closed_) throw UsageError("session closed");
    try {
        std::string reply = do_send(user_text);
        if (reply.empty()) {
            throw ConnectorError(CrashCause::invalid_response, "empty reply");
        }
        return reply;
    } catch (const ConnectorError&) {
        crashed_ = true;
        throw;
    }
}

void ChatbotSession::close() {
    if (closed_) return;
    closed_ = true;
    do_close();
}

ScriptedChatbotSession::ScriptedChatbotSession(std::vector<Step> steps, bool speaks_first)
    : steps_(std::move(steps)), speaks_first_(speaks_first) {}

std::string ScriptedChatbotSession::take() {
    if (next_ >= steps_.size()) {
        throw ConnectorError(CrashCause::invalid_response, "script exhausted");
    }
    const Step& step = steps_[next_++];
    if (step.is_crash) throw ConnectorError(step.cause, step.text);
    return step.text;
}

std::optional<std::string> ScriptedChatbotSession::do_open() {
    if (!speaks_first_) return std::nullopt;
    return take();
}

std::string ScriptedChatbotSession::do_send(const std::string& user_text) {
    (void)user_text;
    return take();
}

ExchangeResult exchange_turn(ChatbotSession& session, const std::string& user_text,
                             int system_turn_ordinal) {
    try {
        return {session.send(user_text), std::nullopt};
    } catch (const ConnectorError& e) {
        return {std::nullopt, CrashReport{system_turn_ordinal, e.cause(), e.what()}};
    }
}

} // namespace chatprobe
