// Error hierarchy shared across the library.

#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace chatprobe {

// Invalid domain data (bad config, malformed persona, broken dialogue).
// Carries the offending field name when one can be identified.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(std::string message)
        : std::runtime_error(std::move(message)) {}

    ValidationError(std::string field, const std::string& reason)
        : std::runtime_error("invalid field \"" + field + "\": " + reason),
          field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

// Caller misuse of an operation (violated precondition, bad CLI arguments).
class UsageError : public std::runtime_error {
public:
    explicit UsageError(const std::string& message) : std::runtime_error(message) {}
};

// Transport-level failure while talking to an LLM provider. Retryable errors
// are transient (timeouts, 5xx, rate limits); non-retryable ones are not
// worth re-sending (auth failure, exhausted replay session).
class GatewayError : public std::runtime_error {
public:
    GatewayError(const std::string& message, bool retryable)
        : std::runtime_error(message), retryable_(retryable) {}

    bool retryable() const noexcept { return retryable_; }

private:
    bool retryable_;
};

// The model kept producing output that does not satisfy the requested
// structure after all retries. Keeps the last raw completion for diagnosis.
class StructuredOutputError : public std::runtime_error {
public:
    StructuredOutputError(const std::string& message, std::string last_raw, int attempts)
        : std::runtime_error(message), last_raw_(std::move(last_raw)), attempts_(attempts) {}

    const std::string& last_raw() const noexcept { return last_raw_; }
    int attempts() const noexcept { return attempts_; }

private:
    std::string last_raw_;
    int attempts_;
};

// File-format problem in persisted artifacts or external corpora.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& message) : std::runtime_error(message) {}

    ParseError(const std::string& path, const std::string& reason)
        : std::runtime_error(path + ": " + reason), path_(path) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

} // namespace chatprobe
