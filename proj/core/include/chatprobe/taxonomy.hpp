// Frozen judgment resources: the breakdown error-type registry and the
// rating-dimension catalogs. Annotations and prompt text both key off these,
// so any wording change bumps kResourceVersion.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "chatprobe/types.hpp"

namespace chatprobe {

extern const char* const kResourceVersion;

// Ordered registry: 17 conversational types followed by the nine
// task-oriented additions grouped by category.
const std::vector<ErrorType>& error_taxonomy();

const ErrorType* find_error_type(const std::string& key);
bool is_known_error_type(const std::string& key);

// "- <Display>: <description>" lines, one per registry entry, in order.
// This is the block interpolated into the detection prompt.
std::string render_taxonomy_block();

// Maps an external annotation label ("Self-contradiction", "Topic transition
// error", ...) onto a registry key; nullopt when no entry matches.
std::optional<std::string> normalize_error_category(const std::string& raw);

struct RatingDimension {
    std::string key;
    std::string display_name;
    std::string question;

    bool operator==(const RatingDimension&) const = default;
};

// Fixed per-type dimension sets; "overall" is always last.
const std::vector<RatingDimension>& rating_dimensions(ChatbotType type);

// "- <Display> (key=<key>): <question>" lines, one per dimension, in order.
std::string render_dimension_lines(const std::vector<RatingDimension>& dimensions);

} // namespace chatprobe
