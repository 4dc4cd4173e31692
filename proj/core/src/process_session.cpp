// Local-process adapter. The child is spawned through /bin/sh and speaks
// newline-delimited JSON on its standard streams; reads are poll()-guarded
// so a hung child surfaces as a timeout crash instead of blocking a worker.

#include <cerrno>
#include <csignal>
#include <cstring>

#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

#include "chatprobe/connector.hpp"

namespace chatprobe {

namespace {

class ProcessChatbotSession : public ChatbotSession {
public:
    explicit ProcessChatbotSession(ProcessConnectorConfig config) : config_(std::move(config)) {}

    ~ProcessChatbotSession() override { terminate_child(); }

protected:
    std::optional<std::string> do_open() override {
        spawn();
        if (!config_.speaks_first) return std::nullopt;
        return read_bot_message();
    }

    std::string do_send(const std::string& user_text) override {
        const nlohmann::json line = {{"user_message", user_text}};
        write_line(line.dump());
        return read_bot_message();
    }

    void do_close() override { terminate_child(); }

private:
    void spawn() {
        int to_child[2];
        int from_child[2];
        if (pipe(to_child) != 0 || pipe(from_child) != 0) {
            throw ConnectorError(CrashCause::transport_error,
                                 std::string("pipe failed: ") + std::strerror(errno));
        }
        pid_ = fork();
        if (pid_ < 0) {
            throw ConnectorError(CrashCause::transport_error,
                                 std::string("fork failed: ") + std::strerror(errno));
        }
        if (pid_ == 0) {
            dup2(to_child[0], STDIN_FILENO);
            dup2(from_child[1], STDOUT_FILENO);
            ::close(to_child[0]);
            ::close(to_child[1]);
            ::close(from_child[0]);
            ::close(from_child[1]);
            execl("/bin/sh", "sh", "-c", config_.command.c_str(), static_cast<char*>(nullptr));
            _exit(127);
        }
        ::close(to_child[0]);
        ::close(from_child[1]);
        stdin_fd_ = to_child[1];
        stdout_fd_ = from_child[0];
    }

    void write_line(const std::string& line) {
        std::string payload = line + "\n";
        std::size_t written = 0;
        while (written < payload.size()) {
            ssize_t n = ::write(stdin_fd_, payload.data() + written, payload.size() - written);
            if (n < 0) {
                if (errno == EINTR) continue;
                throw ConnectorError(CrashCause::transport_error,
                                     std::string("write to child failed: ") + std::strerror(errno));
            }
            written += static_cast<std::size_t>(n);
        }
    }

    std::string read_line() {
        for (;;) {
            auto newline = buffer_.find('\n');
            if (newline != std::string::npos) {
                std::string line = buffer_.substr(0, newline);
                buffer_.erase(0, newline + 1);
                if (!line.empty() && line.back() == '\r') line.pop_back();
                return line;
            }
            struct pollfd pfd = {stdout_fd_, POLLIN, 0};
            int ready = ::poll(&pfd, 1, config_.timeout_seconds * 1000);
            if (ready == 0) {
                throw ConnectorError(CrashCause::timeout,
                                     "no reply within " + std::to_string(config_.timeout_seconds) +
                                         "s");
            }
            if (ready < 0) {
                if (errno == EINTR) continue;
                throw ConnectorError(CrashCause::transport_error,
                                     std::string("poll failed: ") + std::strerror(errno));
            }
            char chunk[4096];
            ssize_t n = ::read(stdout_fd_, chunk, sizeof(chunk));
            if (n < 0) {
                if (errno == EINTR) continue;
                throw ConnectorError(CrashCause::transport_error,
                                     std::string("read from child failed: ") + std::strerror(errno));
            }
            if (n == 0) {
                throw ConnectorError(CrashCause::remote_exception,
                                     "child process closed its output");
            }
            buffer_.append(chunk, static_cast<std::size_t>(n));
        }
    }

    std::string read_bot_message() {
        const std::string line = read_line();
        nlohmann::json payload;
        try {
            payload = nlohmann::json::parse(line);
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

    void terminate_child() {
        if (stdin_fd_ >= 0) {
            ::close(stdin_fd_);
            stdin_fd_ = -1;
        }
        if (stdout_fd_ >= 0) {
            ::close(stdout_fd_);
            stdout_fd_ = -1;
        }
        if (pid_ > 0) {
            int status = 0;
            // Give the child a moment to exit on EOF, then force it.
            for (int i = 0; i < 50; ++i) {
                pid_t done = ::waitpid(pid_, &status, WNOHANG);
                if (done == pid_ || done < 0) {
                    pid_ = -1;
                    return;
                }
                ::usleep(10000);
            }
            ::kill(pid_, SIGKILL);
            ::waitpid(pid_, &status, 0);
            pid_ = -1;
        }
    }

    ProcessConnectorConfig config_;
    pid_t pid_ = -1;
    int stdin_fd_ = -1;
    int stdout_fd_ = -1;
    std::string buffer_;
};

} // namespace

std::unique_ptr<ChatbotSession> ProcessSessionFactory::create(const std::string& session_id) {
    (void)session_id;
    return std::make_unique<ProcessChatbotSession>(config_);
}

} // namespace chatprobe
