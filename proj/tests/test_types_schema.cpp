#include <doctest.h>

#include <json.hpp>

#include "chatprobe/schema.hpp"
#include "chatprobe/taxonomy.hpp"
#include "chatprobe/types.hpp"

using namespace chatprobe;
using nlohmann::json;

namespace {

ChatbotConfig sample_config() {
    ChatbotConfig config;
    config.id = "travel_bot";
    config.name = "Travel Bot";
    config.description = "Books trains.";
    config.interaction_method = "text chat";
    config.chatbot_type = ChatbotType::task_oriented;
    config.task = "Find a train connection.";
    config.typical_user_turn_length = "10 words";
    config.max_user_turn_length = "38 words";
    config.max_user_turns = 12;
    return config;
}

Persona sample_persona() {
    Persona persona;
    persona.persona_id = "generated_standard_persona_01";
    persona.name = "Dana";
    persona.gender = "female";
    persona.age = 34;
    persona.background_info = {"Commutes daily."};
    for (const auto& key : big_five_keys()) persona.personality[key] = TraitLevel::medium;
    persona.interaction_style = {"short messages"};
    persona.task = "Book a train to Cambridge.";
    return persona;
}

Dialogue sample_dialogue() {
    Dialogue dialogue;
    dialogue.dialogue_id = "travel_bot_p01_1_1";
    dialogue.chatbot_id = "travel_bot";
    dialogue.persona_id = "generated_standard_persona_01";
    dialogue.turns = {
        {1, Role::system, "Hello, how can I help?"},
        {2, Role::user, "I need a train."},
        {3, Role::system, "Where to?"},
    };
    dialogue.termination = Termination::user_ended;
    return dialogue;
}

} // namespace

TEST_SUITE("enum round trips") {
    TEST_CASE("every enum survives to_string/from_string") {
        CHECK(chatbot_type_from_string(to_string(ChatbotType::task_oriented)) ==
              ChatbotType::task_oriented);
        CHECK(to_string(ChatbotType::task_oriented) == "task-oriented");
        CHECK(persona_type_from_string("challenging") == PersonaType::challenging);
        CHECK(trait_level_from_string("high") == TraitLevel::high);
        CHECK(role_from_string("system") == Role::system);
        for (auto t : {Termination::user_ended, Termination::max_turns_reached,
                       Termination::chatbot_crashed, Termination::error}) {
            CHECK(termination_from_string(to_string(t)) == t);
        }
        for (auto c : {CrashCause::transport_error, CrashCause::invalid_response,
                       CrashCause::timeout, CrashCause::remote_exception}) {
            CHECK(crash_cause_from_string(to_string(c)) == c);
        }
        CHECK(breakdown_decision_from_string("breakdown") == BreakdownDecision::breakdown);
        for (auto l : {AnnotatorLabel::NB, AnnotatorLabel::PB, AnnotatorLabel::B}) {
            CHECK(annotator_label_from_string(to_string(l)) == l);
        }
    }

    TEST_CASE("unknown names are rejected") {
        CHECK_THROWS_AS(chatbot_type_from_string("taskoriented"), ValidationError);
        CHECK_THROWS_AS(persona_type_from_string("hostile"), ValidationError);
        CHECK_THROWS_AS(trait_level_from_string("very high"), ValidationError);
        CHECK_THROWS_AS(role_from_string("assistant"), ValidationError);
        CHECK_THROWS_AS(termination_from_string("crashed"), ValidationError);
        CHECK_THROWS_AS(crash_cause_from_string("oom"), ValidationError);
        CHECK_THROWS_AS(breakdown_decision_from_string("maybe"), ValidationError);
        CHECK_THROWS_AS(annotator_label_from_string("O"), ValidationError);
    }
}

TEST_SUITE("config validation") {
    TEST_CASE("well-formed config passes") {
        CHECK_NOTHROW(validate_config(sample_config()));
    }

    TEST_CASE("each required field is enforced") {
        auto expect_field = [](ChatbotConfig config, void (*mutate)(ChatbotConfig&),
                               const std::string& field) {
            mutate(config);
            try {
                validate_config(config);
                FAIL("expected ValidationError for ", field);
            } catch (const ValidationError& e) {
                CHECK(std::string(e.what()).find(field) != std::string::npos);
            }
        };
        expect_field(sample_config(), [](ChatbotConfig& c) { c.id.clear(); }, "id");
        expect_field(sample_config(), [](ChatbotConfig& c) { c.id = "has space"; }, "id");
        expect_field(sample_config(), [](ChatbotConfig& c) { c.name.clear(); }, "name");
        expect_field(sample_config(), [](ChatbotConfig& c) { c.description.clear(); },
                     "description");
        expect_field(sample_config(), [](ChatbotConfig& c) { c.interaction_method.clear(); },
                     "interaction_method");
        expect_field(sample_config(), [](ChatbotConfig& c) { c.task.clear(); }, "task");
        expect_field(sample_config(),
                     [](ChatbotConfig& c) { c.typical_user_turn_length.clear(); },
                     "typical_user_turn_length");
        expect_field(sample_config(), [](ChatbotConfig& c) { c.max_user_turn_length.clear(); },
                     "max_user_turn_length");
        expect_field(sample_config(), [](ChatbotConfig& c) { c.max_user_turns = 0; },
                     "max_user_turns");
    }
}

TEST_SUITE("persona validation") {
    TEST_CASE("well-formed persona passes") {
        CHECK_NOTHROW(validate_persona(sample_persona()));
    }

    TEST_CASE("all Big Five traits are required") {
        for (const auto& key : big_five_keys()) {
            Persona persona = sample_persona();
            persona.personality.erase(key);
            CHECK_THROWS_AS(validate_persona(persona), ValidationError);
        }
    }

    TEST_CASE("unknown trait keys are rejected") {
        Persona persona = sample_persona();
        persona.personality["patience"] = TraitLevel::low;
        CHECK_THROWS_AS(validate_persona(persona), ValidationError);
    }

    TEST_CASE("persona_id must name a file") {
        Persona persona = sample_persona();
        persona.persona_id = "a/b";
        CHECK_THROWS_AS(validate_persona(persona), ValidationError);
    }
}

TEST_SUITE("dialogue validation") {
    TEST_CASE("either role may open the dialogue") {
        CHECK_NOTHROW(validate_dialogue(sample_dialogue()));
        Dialogue user_first = sample_dialogue();
        user_first.turns = {{1, Role::user, "Hi"}, {2, Role::system, "Hello"}};
        CHECK_NOTHROW(validate_dialogue(user_first));
    }

    TEST_CASE("turn indices must be 1-based and contiguous") {
        Dialogue dialogue = sample_dialogue();
        dialogue.turns[1].index = 5;
        CHECK_THROWS_AS(validate_dialogue(dialogue), ValidationError);
        dialogue = sample_dialogue();
        dialogue.turns[0].index = 0;
        CHECK_THROWS_AS(validate_dialogue(dialogue), ValidationError);
    }

    TEST_CASE("roles must strictly alternate") {
        Dialogue dialogue = sample_dialogue();
        dialogue.turns[2].role = Role::user;
        CHECK_THROWS_AS(validate_dialogue(dialogue), ValidationError);
    }

    TEST_CASE("empty turn text is rejected") {
        Dialogue dialogue = sample_dialogue();
        dialogue.turns[1].text.clear();
        CHECK_THROWS_AS(validate_dialogue(dialogue), ValidationError);
    }

    TEST_CASE("crash report pairs with chatbot_crashed termination") {
        Dialogue crashed = sample_dialogue();
        crashed.termination = Termination::chatbot_crashed;
        CHECK_THROWS_AS(validate_dialogue(crashed), ValidationError); // report missing
        crashed.crash_report = CrashReport{2, CrashCause::timeout, "no reply in 120s"};
        CHECK_NOTHROW(validate_dialogue(crashed));
        Dialogue healthy = sample_dialogue();
        healthy.crash_report = CrashReport{2, CrashCause::timeout, "stray"};
        CHECK_THROWS_AS(validate_dialogue(healthy), ValidationError);
    }

    TEST_CASE("validated factory returns the checked value") {
        Dialogue dialogue = Dialogue::validated(sample_dialogue());
        CHECK(dialogue.user_turn_count() == 1);
        CHECK(dialogue.system_turn_count() == 2);
    }

    TEST_CASE("budget check uses the user-turn count only") {
        ChatbotConfig config = sample_config();
        config.max_user_turns = 1;
        CHECK_NOTHROW(validate_dialogue_budget(sample_dialogue(), config));
        Dialogue dialogue = sample_dialogue();
        dialogue.turns.push_back({4, Role::user, "Cambridge"});
        CHECK_THROWS_AS(validate_dialogue_budget(dialogue, config), ValidationError);
    }
}

TEST_SUITE("annotation and rating validation") {
    TEST_CASE("score must sit in [0, 1]") {
        BreakdownAnnotation annotation;
        annotation.turn_index = 3;
        annotation.decision = BreakdownDecision::breakdown;
        annotation.error_types = {"repetition"};
        annotation.score = 0.4;
        CHECK_NOTHROW(validate_annotation(annotation));
        annotation.score = 1.2;
        CHECK_THROWS_AS(validate_annotation(annotation), ValidationError);
        annotation.score = -0.1;
        CHECK_THROWS_AS(validate_annotation(annotation), ValidationError);
    }

    TEST_CASE("non_breakdown cannot carry error types") {
        BreakdownAnnotation annotation;
        annotation.turn_index = 1;
        annotation.decision = BreakdownDecision::non_breakdown;
        annotation.error_types = {"repetition"};
        CHECK_THROWS_AS(validate_annotation(annotation), ValidationError);
    }

    TEST_CASE("error types are only mandatory for the taxonomy mode") {
        BreakdownAnnotation annotation;
        annotation.turn_index = 1;
        annotation.decision = BreakdownDecision::breakdown;
        annotation.score = 0.0;
        CHECK_THROWS_AS(validate_annotation(annotation, true), ValidationError);
        CHECK_NOTHROW(validate_annotation(annotation, false));
    }

    TEST_CASE("duplicate error types are rejected") {
        BreakdownAnnotation annotation;
        annotation.turn_index = 1;
        annotation.decision = BreakdownDecision::breakdown;
        annotation.score = 0.0;
        annotation.error_types = {"repetition", "repetition"};
        CHECK_THROWS_AS(validate_annotation(annotation), ValidationError);
    }

    TEST_CASE("ratings need the overall dimension and 1..5 values") {
        DialogueRating rating;
        rating.entries = {{"task_success", "done", 4}, {"overall", "fine", 4}};
        CHECK_NOTHROW(validate_rating(rating));
        CHECK(rating.find("overall") != nullptr);
        CHECK(rating.find("missing") == nullptr);

        DialogueRating no_overall;
        no_overall.entries = {{"task_success", "done", 4}};
        CHECK_THROWS_AS(validate_rating(no_overall), ValidationError);

        DialogueRating out_of_range;
        out_of_range.entries = {{"overall", "fine", 6}};
        CHECK_THROWS_AS(validate_rating(out_of_range), ValidationError);
        out_of_range.entries = {{"overall", "fine", 0}};
        CHECK_THROWS_AS(validate_rating(out_of_range), ValidationError);

        DialogueRating duplicated;
        duplicated.entries = {{"overall", "fine", 4}, {"overall", "again", 4}};
        CHECK_THROWS_AS(validate_rating(duplicated), ValidationError);
    }
}

TEST_SUITE("identifiers") {
    TEST_CASE("is_filesystem_safe accepts plain names only") {
        CHECK(is_filesystem_safe("travel_bot-2.1"));
        CHECK(is_filesystem_safe("A"));
        CHECK_FALSE(is_filesystem_safe(""));
        CHECK_FALSE(is_filesystem_safe("."));
        CHECK_FALSE(is_filesystem_safe(".."));
        CHECK_FALSE(is_filesystem_safe("a/b"));
        CHECK_FALSE(is_filesystem_safe("a b"));
        CHECK_FALSE(is_filesystem_safe("caf\xc3\xa9"));
    }

    TEST_CASE("dialogue ids are reproducible") {
        CHECK(make_dialogue_id("travel_bot", "p01", 2, 3) == "travel_bot_p01_2_3");
    }
}

TEST_SUITE("error taxonomy registry") {
    TEST_CASE("registry holds 17 conversational types plus nine additions") {
        const auto& registry = error_taxonomy();
        REQUIRE(registry.size() == 26);
        int conversational = 0;
        for (const auto& entry : registry) {
            if (entry.category == ErrorCategory::conversational) ++conversational;
        }
        CHECK(conversational == 17);
        // Conversational block comes first, additions after.
        for (int i = 0; i < 17; ++i) {
            CHECK(registry[i].category == ErrorCategory::conversational);
        }
        for (std::size_t i = 17; i < registry.size(); ++i) {
            CHECK(registry[i].category != ErrorCategory::conversational);
        }
    }

    TEST_CASE("keys are unique, lookup works both ways") {
        const auto& registry = error_taxonomy();
        for (const auto& entry : registry) {
            const ErrorType* found = find_error_type(entry.key);
            REQUIRE(found != nullptr);
            CHECK(found->display_name == entry.display_name);
            CHECK(is_known_error_type(entry.key));
        }
        CHECK(find_error_type("nonexistent") == nullptr);
        CHECK_FALSE(is_known_error_type("nonexistent"));
    }

    TEST_CASE("taxonomy block lists every entry in order") {
        std::string block = render_taxonomy_block();
        std::size_t cursor = 0;
        for (const auto& entry : error_taxonomy()) {
            std::size_t at = block.find("- " + entry.display_name + ":", cursor);
            REQUIRE(at != std::string::npos);
            cursor = at + 1;
        }
    }

    TEST_CASE("external labels normalize onto registry keys") {
        CHECK(normalize_error_category("Self-contradiction") == "self_contradiction");
        CHECK(normalize_error_category("Topic transition error") == "topic_transition_error");
        CHECK(normalize_error_category("Unclear intention") == "unclear_intention");
        CHECK(normalize_error_category("repetition") == "repetition");
        CHECK_FALSE(normalize_error_category("Entirely made up").has_value());
    }
}

TEST_SUITE("rating dimension catalogs") {
    TEST_CASE("overall is always the final dimension") {
        for (auto type : {ChatbotType::task_oriented, ChatbotType::conversational}) {
            const auto& dims = rating_dimensions(type);
            REQUIRE(!dims.empty());
            CHECK(dims.back().key == "overall");
        }
    }

    TEST_CASE("task-oriented and conversational sets differ") {
        const auto& task = rating_dimensions(ChatbotType::task_oriented);
        const auto& chat = rating_dimensions(ChatbotType::conversational);
        auto has = [](const std::vector<RatingDimension>& dims, const std::string& key) {
            for (const auto& d : dims) {
                if (d.key == key) return true;
            }
            return false;
        };
        CHECK(has(task, "task_success"));
        CHECK_FALSE(has(chat, "task_success"));
        CHECK(has(chat, "coherence"));
        CHECK_FALSE(has(task, "coherence"));
    }

    TEST_CASE("dimension lines carry the key markers the judge echoes back") {
        const auto& dims = rating_dimensions(ChatbotType::conversational);
        std::string lines = render_dimension_lines(dims);
        for (const auto& d : dims) {
            CHECK(lines.find("(key=" + d.key + ")") != std::string::npos);
        }
    }
}

TEST_SUITE("schema checker") {
    TEST_CASE("type mismatches name the path") {
        json schema = {{"type", "object"},
                       {"properties", {{"count", {{"type", "integer"}}}}},
                       {"required", {"count"}}};
        CHECK_NOTHROW(validate_against_schema({{"count", 3}}, schema));
        // Whole floats count as integers; providers emit 3.0 routinely.
        CHECK_NOTHROW(validate_against_schema({{"count", 3.0}}, schema));
        try {
            validate_against_schema({{"count", "three"}}, schema);
            FAIL("expected SchemaViolation");
        } catch (const SchemaViolation& e) {
            CHECK(std::string(e.what()).find("#/count") != std::string::npos);
        }
        CHECK_THROWS_AS(validate_against_schema({{"count", 3.5}}, schema), SchemaViolation);
    }

    TEST_CASE("required and additionalProperties") {
        json schema = {{"type", "object"},
                       {"properties", {{"name", {{"type", "string"}}}}},
                       {"required", {"name"}},
                       {"additionalProperties", false}};
        CHECK_NOTHROW(validate_against_schema({{"name", "x"}}, schema));
        CHECK_THROWS_AS(validate_against_schema(json::object(), schema), SchemaViolation);
        CHECK_THROWS_AS(validate_against_schema({{"name", "x"}, {"extra", 1}}, schema),
                        SchemaViolation);
    }

    TEST_CASE("enum membership") {
        json schema = {{"type", "string"}, {"enum", {"low", "medium", "high"}}};
        CHECK_NOTHROW(validate_against_schema("medium", schema));
        CHECK_THROWS_AS(validate_against_schema("very high", schema), SchemaViolation);
    }

    TEST_CASE("numeric bounds") {
        json schema = {{"type", "integer"}, {"minimum", 1}, {"maximum", 5}};
        CHECK_NOTHROW(validate_against_schema(1, schema));
        CHECK_NOTHROW(validate_against_schema(5, schema));
        CHECK_THROWS_AS(validate_against_schema(0, schema), SchemaViolation);
        CHECK_THROWS_AS(validate_against_schema(6, schema), SchemaViolation);
    }

    TEST_CASE("arrays check items and size bounds") {
        json schema = {{"type", "array"},
                       {"items", {{"type", "string"}}},
                       {"minItems", 1},
                       {"maxItems", 2}};
        CHECK_NOTHROW(validate_against_schema(json::array({"a"}), schema));
        CHECK_THROWS_AS(validate_against_schema(json::array(), schema), SchemaViolation);
        CHECK_THROWS_AS(validate_against_schema(json::array({"a", "b", "c"}), schema),
                        SchemaViolation);
        try {
            validate_against_schema(json::array({"a", 2}), schema);
            FAIL("expected SchemaViolation");
        } catch (const SchemaViolation& e) {
            CHECK(std::string(e.what()).find("#/1") != std::string::npos);
        }
    }

    TEST_CASE("nested objects report deep paths") {
        json schema = {{"type", "object"},
                       {"properties",
                        {{"inner",
                          {{"type", "object"},
                           {"properties", {{"flag", {{"type", "boolean"}}}}},
                           {"required", {"flag"}}}}}},
                       {"required", {"inner"}}};
        try {
            validate_against_schema({{"inner", {{"flag", "yes"}}}}, schema);
            FAIL("expected SchemaViolation");
        } catch (const SchemaViolation& e) {
            CHECK(std::string(e.what()).find("#/inner/flag") != std::string::npos);
        }
    }
}
