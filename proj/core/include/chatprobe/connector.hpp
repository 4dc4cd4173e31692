// Session interface to the dialogue system under test. Adapters never
// interpret or mutate message text; any transport failure, timeout, empty
// reply, or remote exception surfaces as a ConnectorError and ends the
// dialogue as a crash.

#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "chatprobe/types.hpp"

namespace chatprobe {

class ConnectorError : public std::runtime_error {
public:
    ConnectorError(CrashCause cause, const std::string& detail)
        : std::runtime_error(detail), cause_(cause) {}

    CrashCause cause() const { return cause_; }

private:
    CrashCause cause_;
};

// One conversation with the target system. Use is single-threaded:
// open() once, send() repeatedly, close() once. After a ConnectorError the
// session counts as crashed and rejects further sends.
class ChatbotSession {
public:
    virtual ~ChatbotSession() = default;

    // Returns the opening greeting when the target speaks first.
    std::optional<std::string> open();
    std::string send(const std::string& user_text);
    void close();

    bool crashed() const { return crashed_; }

protected:
    virtual std::optional<std::string> do_open() = 0;
    virtual std::string do_send(const std::string& user_text) = 0;
    virtual void do_close() {}

private:
    bool opened_ = false;
    bool crashed_ = false;
    bool closed_ = false;
};

// Deterministic adapter for tests: replays scripted steps, each either a
// reply or a forced crash. When speaks_first is set the first step is the
// greeting consumed by open().
class ScriptedChatbotSession : public ChatbotSession {
public:
    struct Step {
        std::string text;
        bool is_crash = false;
        CrashCause cause = CrashCause::remote_exception;

        static Step reply(std::string text) { return {std::move(text), false, {}}; }
        static Step crash(CrashCause cause, std::string detail = "scripted failure") {
            return {std::move(detail), true, cause};
        }
    };

    ScriptedChatbotSession(std::vector<Step> steps, bool speaks_first);

    std::size_t steps_consumed() const { return next_; }

protected:
    std::optional<std::string> do_open() override;
    std::string do_send(const std::string& user_text) override;

private:
    std::string take();

    std::vector<Step> steps_;
    bool speaks_first_;
    std::size_t next_ = 0;
};

// Opens fresh sessions, one per simulated dialogue. session_id becomes the
// wire-level conversation key where the protocol has one.
class SessionFactory {
public:
    virtual ~SessionFactory() = default;
    virtual std::unique_ptr<ChatbotSession> create(const std::string& session_id) = 0;
};

// Runs one exchange and folds a ConnectorError into a CrashReport carrying
// the ordinal of the failing system turn (greeting counts as ordinal 1).
struct ExchangeResult {
    std::optional<std::string> system_text;
    std::optional<CrashReport> crash;
};

ExchangeResult exchange_turn(ChatbotSession& session, const std::string& user_text,
                             int system_turn_ordinal);

// HTTP adapter. POSTs {"session_id", "user_message"} as JSON to endpoint_path
// and expects {"bot_message"}. A greeting is fetched by sending an empty
// user_message when the target speaks first.
struct HttpConnectorConfig {
    std::string base_url;
    std::string endpoint_path = "/chat";
    std::vector<std::pair<std::string, std::string>> headers;
    int timeout_seconds = 120;
    bool speaks_first = true;
};

class HttpSessionFactory : public SessionFactory {
public:
    explicit HttpSessionFactory(HttpConnectorConfig config) : config_(std::move(config)) {}

    std::unique_ptr<ChatbotSession> create(const std::string& session_id) override;

private:
    HttpConnectorConfig config_;
};

// Local-process adapter: spawns `command` through the shell and speaks JSON
// lines over its stdin/stdout ({"user_message"} in, {"bot_message"} out).
// When speaks_first is set the child must emit one greeting line on startup.
struct ProcessConnectorConfig {
    std::string command;
    int timeout_seconds = 120;
    bool speaks_first = false;
};

class ProcessSessionFactory : public SessionFactory {
public:
    explicit ProcessSessionFactory(ProcessConnectorConfig config) : config_(std::move(config)) {}

    std::unique_ptr<ChatbotSession> create(const std::string& session_id) override;

private:
    ProcessConnectorConfig config_;
};

// Factory over a shared script: every dialogue replays the same steps.
class ScriptedSessionFactory : public SessionFactory {
public:
    ScriptedSessionFactory(std::vector<ScriptedChatbotSession::Step> steps, bool speaks_first)
        : steps_(std::move(steps)), speaks_first_(speaks_first) {}

    std::unique_ptr<ChatbotSession> create(const std::string& session_id) override {
        (void)session_id;
        return std::make_unique<ScriptedChatbotSession>(steps_, speaks_first_);
    }

private:
    std::vector<ScriptedChatbotSession::Step> steps_;
    bool speaks_first_;
};

} // namespace chatprobe
