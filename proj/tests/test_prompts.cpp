#include <doctest.h>

#include <cstdlib>
#include <string>

#include "chatprobe/prompts.hpp"
#include "golden_prompts.hpp"

using namespace chatprobe;

#ifndef CHATPROBE_TEST_GOLDEN_DIR
#error "CHATPROBE_TEST_GOLDEN_DIR must point at the golden prompt directory"
#endif

TEST_SUITE("interpolate") {
    TEST_CASE("substitutes each placeholder once") {
        std::string out = prompts::interpolate("Hello {name}, you are {age}.",
                                               {{"name", "Ada"}, {"age", "36"}});
        CHECK(out == "Hello Ada, you are 36.");
    }

    TEST_CASE("substituted text is never rescanned") {
        std::string out = prompts::interpolate("{a}", {{"a", "{b}"}, {"b", "nope"}});
        CHECK(out == "{b}");
    }

    TEST_CASE("missing placeholder values are an error") {
        CHECK_THROWS_AS(prompts::interpolate("Hello {name}.", {}), UsageError);
    }

    TEST_CASE("unused values are fine") {
        CHECK(prompts::interpolate("plain", {{"name", "Ada"}}) == "plain");
    }

    TEST_CASE("braces that are not placeholders pass through") {
        CHECK(prompts::interpolate("json {\"k\": 1} and {BAD} and { x }", {}) ==
              "json {\"k\": 1} and {BAD} and { x }");
        CHECK(prompts::interpolate("open { brace", {}) == "open { brace");
        CHECK(prompts::interpolate("{}", {}) == "{}");
    }

    TEST_CASE("repeated placeholders all resolve") {
        CHECK(prompts::interpolate("{x}{x}", {{"x", "ab"}}) == "abab");
    }
}

TEST_SUITE("prompt building blocks") {
    TEST_CASE("chat history numbers turns and quotes text") {
        std::vector<Turn> turns = {{1, Role::system, "Hi"}, {2, Role::user, "Hello"}};
        CHECK(prompts::render_chat_history(turns, "USER") ==
              "1. CHATBOT: \"Hi\"\n2. USER: \"Hello\"");
        CHECK(prompts::render_chat_history(turns, "YOU") ==
              "1. CHATBOT: \"Hi\"\n2. YOU: \"Hello\"");
    }

    TEST_CASE("chatbot info block lists the config fields") {
        std::string block = prompts::render_chatbot_info(golden::fixture_config());
        CHECK(block.find("# Chatbot Information") != std::string::npos);
        CHECK(block.find("Cambridge Travel Assistant") != std::string::npos);
        CHECK(block.find("Cannot process payments.") != std::string::npos);
    }

    TEST_CASE("empty list fields are omitted") {
        ChatbotConfig config = golden::fixture_config();
        config.known_limitations.clear();
        std::string block = prompts::render_chatbot_info(config);
        CHECK(block.find("known_limitations") == std::string::npos);
    }

    TEST_CASE("persona profile holds traits in canonical order") {
        std::string profile = prompts::render_persona_profile(golden::fixture_persona());
        std::size_t cursor = 0;
        for (const auto& key : big_five_keys()) {
            std::size_t at = profile.find(key, cursor);
            REQUIRE(at != std::string::npos);
            cursor = at + 1;
        }
        CHECK(profile.find("Margaret Holloway") != std::string::npos);
    }
}

TEST_SUITE("prompt snapshots") {
    // Every outbound prompt rendered from fixed inputs must match its golden
    // file byte for byte. UPDATE_GOLDEN=1 rewrites the files instead.
    TEST_CASE("rendered prompts match the golden files") {
        const std::string dir = CHATPROBE_TEST_GOLDEN_DIR;
        const bool update = std::getenv("UPDATE_GOLDEN") != nullptr;
        for (const auto& snapshot : golden::render_all()) {
            CAPTURE(snapshot.name);
            const std::string path = dir + "/" + snapshot.name;
            if (update) {
                golden::write_file(path, snapshot.text);
                continue;
            }
            std::string expected;
            REQUIRE_MESSAGE(golden::read_file(path, expected),
                            "missing golden file ", path,
                            " (run with UPDATE_GOLDEN=1 to create)");
            if (expected != snapshot.text) {
                // Locate the first differing byte to make the diff findable.
                std::size_t at = 0;
                while (at < expected.size() && at < snapshot.text.size() &&
                       expected[at] == snapshot.text[at]) {
                    ++at;
                }
                FAIL(snapshot.name, ": first difference at byte ", at, "; expected ...",
                     expected.substr(at, 60), "... got ...", snapshot.text.substr(at, 60),
                     "...");
            }
        }
    }

    TEST_CASE("template version is pinned") {
        CHECK(std::string(prompts::kTemplateVersion) == "2025.1");
    }
}
