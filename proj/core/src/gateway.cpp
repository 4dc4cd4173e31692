#include "chatprobe/gateway.hpp"

#include <algorithm>
#include <cstdint>
#include <iomanip>
#include <sstream>
#include <thread>

#include "chatprobe/schema.hpp"

namespace chatprobe {

std::string to_string(MessageRole role) {
    switch (role) {
    case MessageRole::system: return "system";
    case MessageRole::user: return "user";
    case MessageRole::assistant: return "assistant";
    }
    throw UsageError("unknown message role");
}

MessageRole message_role_from_string(const std::string& text) {
    if (text == "system") return MessageRole::system;
    if (text == "user") return MessageRole::user;
    if (text == "assistant") return MessageRole::assistant;
    throw ValidationError("role", "unknown message role \"" + text + "\"");
}

nlohmann::json request_to_json(const CompletionRequest& request) {
    nlohmann::json messages = nlohmann::json::array();
    for (const auto& message : request.messages) {
        messages.push_back({{"role", to_string(message.role)}, {"content", message.content}});
    }
    nlohmann::json value = {
        {"model", request.model},
        {"temperature", request.temperature},
        {"messages", std::move(messages)},
    };
    if (request.output_schema) {
        value["schema_name"] = request.schema_name;
        value["output_schema"] = *request.output_schema;
    }
    return value;
}

CompletionRequest request_from_json(const nlohmann::json& value) {
    CompletionRequest request;
    request.model = value.at("model").get<std::string>();
    request.temperature = value.at("temperature").get<double>();
    for (const auto& message : value.at("messages")) {
        request.messages.push_back({message_role_from_string(message.at("role").get<std::string>()),
                                    message.at("content").get<std::string>()});
    }
    if (value.contains("output_schema")) {
        request.output_schema = value.at("output_schema");
        request.schema_name = value.value("schema_name", std::string("response"));
    }
    return request;
}

std::string request_fingerprint(const CompletionRequest& request) {
    // nlohmann::json dumps object keys sorted, so the dump is canonical.
    const std::string canonical = request_to_json(request).dump();
    std::uint64_t hash = 14695981039346656037ull;
    for (unsigned char c : canonical) {
        hash ^= c;
        hash *= 1099511628211ull;
    }
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << hash;
    return out.str();
}

ScriptedBackend::ScriptedBackend(std::vector<std::string> responses) {
    for (auto& response : responses) responses_.push_back(std::move(response));
}

void ScriptedBackend::push_response(std::string response) {
    std::lock_guard<std::mutex> lock(mutex_);
    responses_.push_back(std::move(response));
}

std::string ScriptedBackend::execute(const CompletionRequest& request) {
    std::lock_guard<std::mutex> lock(mutex_);
    seen_.push_back(request);
    if (responses_.empty()) {
        throw GatewayError("scripted backend exhausted after " + std::to_string(seen_.size() - 1) +
                               " responses",
                           /*retryable=*/false);
    }
    std::string response = std::move(responses_.front());
    responses_.pop_front();
    return response;
}

std::vector<CompletionRequest> ScriptedBackend::seen_requests() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return seen_;
}

std::size_t ScriptedBackend::remaining() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return responses_.size();
}

RecordingBackend::RecordingBackend(Backend& inner, const std::string& session_path)
    : inner_(inner), out_(session_path, std::ios::app) {
    if (!out_) throw UsageError("cannot open session file for recording: " + session_path);
}

std::string RecordingBackend::execute(const CompletionRequest& request) {
    std::string response = inner_.execute(request);
    nlohmann::json line = {
        {"fingerprint", request_fingerprint(request)},
        {"request", request_to_json(request)},
        {"response", response},
    };
    std::lock_guard<std::mutex> lock(mutex_);
    out_ << line.dump() << "\n";
    out_.flush();
    return response;
}

ReplayBackend::ReplayBackend(const std::string& session_path) {
    std::ifstream in(session_path);
    if (!in) throw UsageError("cannot open session file for replay: " + session_path);
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.empty()) continue;
        nlohmann::json entry;
        try {
            entry = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(session_path, "line " + std::to_string(line_number) + ": " + e.what());
        }
        if (!entry.contains("fingerprint") || !entry.contains("response")) {
            throw ParseError(session_path,
                             "line " + std::to_string(line_number) + ": missing fingerprint/response");
        }
        responses_[entry["fingerprint"].get<std::string>()].push_back(
            entry["response"].get<std::string>());
    }
}

std::string ReplayBackend::execute(const CompletionRequest& request) {
    const std::string fingerprint = request_fingerprint(request);
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = responses_.find(fingerprint);
    if (it == responses_.end() || it->second.empty()) {
        std::string preview;
        if (!request.messages.empty()) {
            preview = request.messages.back().content.substr(0, 120);
        }
        throw GatewayError("no recorded response for request fingerprint " + fingerprint +
                               " (last message starts: \"" + preview + "\")",
                           /*retryable=*/false);
    }
    std::string response = std::move(it->second.front());
    it->second.pop_front();
    if (it->second.empty()) responses_.erase(it);
    return response;
}

std::size_t ReplayBackend::remaining() const {
    std::lock_guard<std::mutex> lock(mutex_);
    std::size_t total = 0;
    for (const auto& [fingerprint, queue] : responses_) total += queue.size();
    return total;
}

RateLimitedBackend::RateLimitedBackend(Backend& inner, int max_in_flight,
                                       std::chrono::milliseconds min_delay)
    : inner_(inner), max_in_flight_(max_in_flight), min_delay_(min_delay) {
    if (max_in_flight < 1) throw UsageError("max_in_flight must be at least 1");
}

std::string RateLimitedBackend::execute(const CompletionRequest& request) {
    {
        std::unique_lock<std::mutex> lock(mutex_);
        cv_.wait(lock, [&] { return in_flight_ < max_in_flight_; });
        ++in_flight_;
        auto now = std::chrono::steady_clock::now();
        auto earliest = last_start_ + min_delay_;
        if (last_start_.time_since_epoch().count() != 0 && now < earliest) {
            lock.unlock();
            std::this_thread::sleep_until(earliest);
            lock.lock();
            now = std::chrono::steady_clock::now();
        }
        last_start_ = now;
    }
    try {
        std::string response = inner_.execute(request);
        std::lock_guard<std::mutex> lock(mutex_);
        --in_flight_;
        cv_.notify_one();
        return response;
    } catch (...) {
        std::lock_guard<std::mutex> lock(mutex_);
        --in_flight_;
        cv_.notify_one();
        throw;
    }
}

TranscriptLog::TranscriptLog(const std::string& path) : out_(path, std::ios::app) {
    if (!out_) throw UsageError("cannot open transcript log: " + path);
}

void TranscriptLog::append(const CompletionRequest& request, const std::string& response,
                           int attempt) {
    nlohmann::json line = {
        {"attempt", attempt},
        {"request", request_to_json(request)},
        {"response", response},
    };
    std::lock_guard<std::mutex> lock(mutex_);
    out_ << line.dump() << "\n";
    out_.flush();
}

nlohmann::json parse_model_json(const std::string& raw) {
    std::string text = raw;
    // Trim whitespace, then a surrounding Markdown code fence if present.
    auto trim = [](std::string& s) {
        const char* ws = " \t\r\n";
        auto begin = s.find_first_not_of(ws);
        auto end = s.find_last_not_of(ws);
        s = (begin == std::string::npos) ? std::string() : s.substr(begin, end - begin + 1);
    };
    trim(text);
    if (text.rfind("```", 0) == 0) {
        auto first_newline = text.find('\n');
        auto closing = text.rfind("```");
        if (first_newline != std::string::npos && closing != std::string::npos &&
            closing > first_newline) {
            text = text.substr(first_newline + 1, closing - first_newline - 1);
            trim(text);
        }
    }
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw MalformedOutput(std::string("completion is not valid JSON: ") + e.what());
    }
}

StructuredCompletion complete_with_parser(const CompletionRequest& request, Backend& backend,
                                          const OutputParser& parser,
                                          const CompletionOptions& options) {
    if (options.max_attempts < 1) throw UsageError("max_attempts must be at least 1");
    std::string last_raw;
    std::string last_error;
    for (int attempt = 1; attempt <= options.max_attempts; ++attempt) {
        last_raw = backend.execute(request);
        if (options.transcript) options.transcript->append(request, last_raw, attempt);
        try {
            nlohmann::json value = parser(last_raw);
            return {std::move(value), std::move(last_raw), attempt};
        } catch (const MalformedOutput& e) {
            last_error = e.what();
        }
    }
    throw StructuredOutputError("model output stayed malformed after " +
                                    std::to_string(options.max_attempts) +
                                    " attempts: " + last_error,
                                last_raw, options.max_attempts);
}

StructuredCompletion complete_structured(const CompletionRequest& request, Backend& backend,
                                         const CompletionOptions& options) {
    return complete_with_parser(
        request, backend,
        [&request](const std::string& raw) {
            nlohmann::json value = parse_model_json(raw);
            if (request.output_schema) {
                try {
                    validate_against_schema(value, *request.output_schema);
                } catch (const SchemaViolation& e) {
                    throw MalformedOutput(std::string("schema violation: ") + e.what());
                }
            }
            return value;
        },
        options);
}

} // namespace chatprobe
