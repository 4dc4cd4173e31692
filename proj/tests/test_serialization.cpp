#include <doctest.h>

#include <filesystem>
#include <string>

#include <json.hpp>

#include "chatprobe/serialization.hpp"
#include "golden_prompts.hpp"
#include "temp_dir.hpp"

using namespace chatprobe;
using nlohmann::json;
using testutil::TempDir;

TEST_SUITE("config yaml") {
    TEST_CASE("emit then parse is the identity") {
        ChatbotConfig config = golden::fixture_config();
        ChatbotConfig back = parse_config_yaml(config_to_yaml(config));
        CHECK(back == config);
    }

    TEST_CASE("parses the documented layout") {
        const std::string text = R"(id: movie_bot
chatbot_info:
  name: Movie Bot
  description: Recommends films.
  type: conversational
  interaction_method: text chat
  task: Chat about films the user might like.
  constraints:
    - English only.
  known_limitations: []
  available_languages:
    - English
  chatbot_speaks_first: false
user_simulation_config:
  typical_user_turn_length: "10 words"
  max_user_turn_length: "38 words"
  max_user_turns: 15
)";
        ChatbotConfig config = parse_config_yaml(text);
        CHECK(config.id == "movie_bot");
        CHECK(config.chatbot_type == ChatbotType::conversational);
        CHECK(config.constraints == std::vector<std::string>{"English only."});
        CHECK(config.known_limitations.empty());
        CHECK(config.max_user_turns == 15);
        CHECK(config.chatbot_speaks_first == false);
        CHECK(config.max_user_turn_length == "38 words");
    }

    TEST_CASE("missing blocks are reported with the origin") {
        try {
            parse_config_yaml("id: x\n", "bad.yaml");
            FAIL("expected ValidationError");
        } catch (const ValidationError& e) {
            CHECK(std::string(e.what()).find("bad.yaml") != std::string::npos);
        }
    }

    TEST_CASE("invalid values fail validation on load") {
        ChatbotConfig config = golden::fixture_config();
        config.max_user_turns = 0;
        CHECK_THROWS(parse_config_yaml(config_to_yaml(config)));
    }
}

TEST_SUITE("persona yaml") {
    TEST_CASE("emit then parse is the identity") {
        Persona persona = golden::fixture_persona();
        CHECK(parse_persona_yaml(persona_to_yaml(persona)) == persona);
    }

    TEST_CASE("trait levels parse from the documented layout") {
        Persona persona = golden::fixture_persona();
        std::string text = persona_to_yaml(persona);
        CHECK(text.find("persona_id: generated_standard_persona_01") != std::string::npos);
        CHECK(text.find("conscientiousness: high") != std::string::npos);
        Persona back = parse_persona_yaml(text);
        CHECK(back.personality.at("extraversion") == TraitLevel::low);
    }

    TEST_CASE("unknown trait levels are a parse failure") {
        Persona persona = golden::fixture_persona();
        std::string text = persona_to_yaml(persona);
        auto at = text.find(": high");
        REQUIRE(at != std::string::npos);
        text.replace(at, 6, ": extreme");
        CHECK_THROWS(parse_persona_yaml(text));
    }
}

TEST_SUITE("json round trips") {
    TEST_CASE("config and persona mirror their yaml content") {
        ChatbotConfig config = golden::fixture_config();
        CHECK(config_from_json(config_to_json(config)) == config);
        Persona persona = golden::fixture_persona();
        CHECK(persona_from_json(persona_to_json(persona)) == persona);
    }

    TEST_CASE("dialogue with crash report round trips") {
        Dialogue dialogue = golden::fixture_dialogue();
        CHECK(dialogue_from_json(dialogue_to_json(dialogue)) == dialogue);

        Dialogue crashed = golden::fixture_dialogue();
        crashed.turns.pop_back(); // ends on a user turn now
        crashed.termination = Termination::chatbot_crashed;
        crashed.crash_report = CrashReport{5, CrashCause::timeout, "no reply in 120s"};
        CHECK(dialogue_from_json(dialogue_to_json(crashed)) == crashed);
    }

    TEST_CASE("dialogue json omits absent optionals") {
        Dialogue dialogue = golden::fixture_dialogue();
        dialogue.persona_id.reset();
        json value = dialogue_to_json(dialogue);
        CHECK_FALSE(value.contains("persona_id"));
        CHECK_FALSE(value.contains("crash_report"));
        CHECK_FALSE(value.contains("error_detail"));
        CHECK(dialogue_from_json(value) == dialogue);
    }

    TEST_CASE("annotations and ratings round trip") {
        BreakdownAnnotation annotation;
        annotation.turn_index = 3;
        annotation.reasoning = "The chatbot repeats its previous turn verbatim.";
        annotation.decision = BreakdownDecision::breakdown;
        annotation.score = 0.2;
        annotation.error_types = {"repetition", "redundancy"};
        CHECK(annotation_from_json(annotation_to_json(annotation)) == annotation);

        DialogueRating rating;
        rating.entries = {{"task_success", "Booked the ticket.", 5},
                          {"overall", "Smooth conversation.", 4}};
        CHECK(rating_from_json(rating_to_json(rating)) == rating);
    }
}

TEST_SUITE("yaml scalars") {
    TEST_CASE("plain strings stay plain") {
        CHECK(yaml_scalar("travel_bot") == "travel_bot");
        CHECK(yaml_scalar("English") == "English");
    }

    TEST_CASE("ambiguous strings are quoted") {
        CHECK(yaml_scalar("10 words") == "\"10 words\"");
        CHECK(yaml_scalar("yes") == "\"yes\"");
        CHECK(yaml_scalar("") == "\"\"");
        CHECK(yaml_scalar("a: b") == "\"a: b\"");
        CHECK(yaml_scalar("- item") == "\"- item\"");
    }

    TEST_CASE("embedded quotes are escaped") {
        std::string quoted = yaml_scalar("say \"hi\"");
        CHECK(quoted.front() == '"');
        CHECK(quoted.find("\\\"hi\\\"") != std::string::npos);
    }
}

TEST_SUITE("file helpers") {
    TEST_CASE("write then read round trips") {
        TempDir dir;
        std::string path = dir.file("note.txt");
        write_file_atomic(path, "line one\nline two\n");
        CHECK(read_file(path) == "line one\nline two\n");
    }

    TEST_CASE("atomic writes leave no temp files behind") {
        TempDir dir;
        write_file_atomic(dir.file("a.json"), "{}\n");
        int entries = 0;
        for (const auto& entry : std::filesystem::directory_iterator(dir.path())) {
            (void)entry;
            ++entries;
        }
        CHECK(entries == 1);
    }

    TEST_CASE("save_json_atomic writes indented json with trailing newline") {
        TempDir dir;
        std::string path = dir.file("value.json");
        save_json_atomic(path, json{{"a", 1}});
        std::string text = read_file(path);
        CHECK(text == "{\n  \"a\": 1\n}\n");
        CHECK(load_json(path) == json{{"a", 1}});
    }

    TEST_CASE("missing files are reported by path") {
        try {
            read_file("/nonexistent/file.txt");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(std::string(e.what()).find("/nonexistent/file.txt") != std::string::npos);
        }
    }

    TEST_CASE("config files survive a disk round trip") {
        TempDir dir;
        std::string path = dir.file("config.yaml");
        ChatbotConfig config = golden::fixture_config();
        write_file_atomic(path, config_to_yaml(config));
        CHECK(load_config(path) == config);

        std::string persona_path = dir.file("persona.yaml");
        Persona persona = golden::fixture_persona();
        write_file_atomic(persona_path, persona_to_yaml(persona));
        CHECK(load_persona(persona_path) == persona);
    }
}
