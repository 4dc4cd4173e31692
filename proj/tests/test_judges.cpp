#include <doctest.h>

#include <string>
#include <vector>

#include <json.hpp>

#include "chatprobe/detector.hpp"
#include "chatprobe/persona_generator.hpp"
#include "chatprobe/rater.hpp"
#include "golden_prompts.hpp"

using namespace chatprobe;
using nlohmann::json;

namespace {

json persona_entry(const std::string& name) {
    return {
        {"name", name},
        {"gender", "female"},
        {"age", 41},
        {"background_info", json::array({"Lives near the station."})},
        {"personality",
         {{"openness", "medium"},
          {"conscientiousness", "high"},
          {"extraversion", "low"},
          {"agreeableness", "high"},
          {"neuroticism", "medium"}}},
        {"interaction_style", json::array({"brief messages"})},
        {"task", "Book a train to Cambridge."},
    };
}

std::string persona_batch(std::vector<json> entries) {
    return json{{"personas", json(std::move(entries))}}.dump();
}

std::string extended_verdict(const std::string& decision, double score,
                             std::vector<std::string> error_types) {
    return json{{"reasoning", "because"},
                {"decision", decision},
                {"score", score},
                {"error_types", json(std::move(error_types))}}
        .dump();
}

std::string rating_verdict(ChatbotType type, int value) {
    json entries = json::array();
    for (const auto& dimension : select_dimensions(type)) {
        entries.push_back(
            {{"key", dimension.key}, {"reasoning", "steady"}, {"rating", value}});
    }
    return json{{"ratings", entries}}.dump();
}

} // namespace

TEST_SUITE("persona generator") {
    TEST_CASE("ids are assigned in sequence with two digits") {
        ScriptedBackend backend({persona_batch({persona_entry("Ada"), persona_entry("Grace")})});
        auto personas = generate_personas(golden::fixture_config(), 2, PersonaType::standard,
                                          backend);
        REQUIRE(personas.size() == 2);
        CHECK(personas[0].persona_id == "generated_standard_persona_01");
        CHECK(personas[1].persona_id == "generated_standard_persona_02");
        CHECK(personas[0].persona_type == PersonaType::standard);
        CHECK(personas[0].name == "Ada");
        CHECK(personas[1].personality.at("conscientiousness") == TraitLevel::high);

        auto seen = backend.seen_requests();
        REQUIRE(seen.size() == 1);
        CHECK(seen[0].temperature == kSimulationTemperature);
        CHECK(seen[0].output_schema.has_value());
    }

    TEST_CASE("challenging personas carry their type in the id") {
        ScriptedBackend backend({persona_batch({persona_entry("Ada")})});
        auto personas = generate_personas(golden::fixture_config(), 1,
                                          PersonaType::challenging, backend);
        CHECK(personas[0].persona_id == "generated_challenging_persona_01");
        CHECK(personas[0].persona_type == PersonaType::challenging);
    }

    TEST_CASE("first_index continues an existing set") {
        PersonaGeneratorOptions options;
        options.first_index = 3;
        ScriptedBackend backend({persona_batch({persona_entry("Ada"), persona_entry("Grace")})});
        auto personas = generate_personas(golden::fixture_config(), 2, PersonaType::standard,
                                          backend, options);
        CHECK(personas[0].persona_id == "generated_standard_persona_03");
        CHECK(personas[1].persona_id == "generated_standard_persona_04");
    }

    TEST_CASE("wrong batch size is rejected") {
        ScriptedBackend backend({persona_batch({persona_entry("Ada")})});
        CHECK_THROWS_AS(generate_personas(golden::fixture_config(), 2, PersonaType::standard,
                                          backend),
                        ValidationError);
    }

    TEST_CASE("a missing Big Five trait is rejected") {
        json entry = persona_entry("Ada");
        entry["personality"].erase("neuroticism");
        ScriptedBackend backend({persona_batch({entry})});
        CHECK_THROWS_AS(generate_personas(golden::fixture_config(), 1, PersonaType::standard,
                                          backend),
                        ValidationError);
    }

    TEST_CASE("malformed batches are retried through the gateway") {
        ScriptedBackend backend({"not json", persona_batch({persona_entry("Ada")})});
        auto personas = generate_personas(golden::fixture_config(), 1, PersonaType::standard,
                                          backend);
        CHECK(personas.size() == 1);
        CHECK(backend.seen_requests().size() == 2);
    }
}

TEST_SUITE("breakdown detector, extended mode") {
    TEST_CASE("a clean verdict maps onto the annotation") {
        ScriptedBackend backend(
            {extended_verdict("breakdown", 0.2, {"repetition", "ignore_question"})});
        auto history = golden::fixture_history();
        BreakdownAnnotation annotation = detect_breakdown(history, history.back().text, backend);
        CHECK(annotation.turn_index == 3);
        CHECK(annotation.decision == BreakdownDecision::breakdown);
        CHECK(annotation.score == doctest::Approx(0.2));
        // Keys come back sorted and de-duplicated.
        CHECK(annotation.error_types ==
              std::vector<std::string>{"ignore_question", "repetition"});

        auto seen = backend.seen_requests();
        REQUIRE(seen.size() == 1);
        CHECK(seen[0].temperature == kJudgeTemperature);
        CHECK(seen[0].output_schema.has_value());
        CHECK(seen[0].messages.size() == 2);
    }

    TEST_CASE("duplicate error types collapse") {
        ScriptedBackend backend(
            {extended_verdict("breakdown", 0.1, {"repetition", "repetition"})});
        auto history = golden::fixture_history();
        auto annotation = detect_breakdown(history, history.back().text, backend);
        CHECK(annotation.error_types == std::vector<std::string>{"repetition"});
    }

    TEST_CASE("a breakdown without error types earns one corrective retry") {
        ScriptedBackend backend({extended_verdict("breakdown", 0.2, {}),
                                 extended_verdict("breakdown", 0.2, {"repetition"})});
        auto history = golden::fixture_history();
        auto annotation = detect_breakdown(history, history.back().text, backend);
        CHECK(annotation.error_types == std::vector<std::string>{"repetition"});
        CHECK(backend.seen_requests().size() == 2);
    }

    TEST_CASE("two semantic violations fail the turn") {
        ScriptedBackend backend({extended_verdict("breakdown", 0.2, {}),
                                 extended_verdict("non_breakdown", 0.9, {"repetition"})});
        auto history = golden::fixture_history();
        CHECK_THROWS_AS(detect_breakdown(history, history.back().text, backend),
                        StructuredOutputError);
        CHECK(backend.remaining() == 0);
    }

    TEST_CASE("unknown error types are a semantic violation") {
        ScriptedBackend backend({extended_verdict("breakdown", 0.2, {"made_up_type"}),
                                 extended_verdict("breakdown", 0.2, {"repetition"})});
        auto history = golden::fixture_history();
        auto annotation = detect_breakdown(history, history.back().text, backend);
        CHECK(annotation.error_types == std::vector<std::string>{"repetition"});
    }

    TEST_CASE("scores outside [0,1] are a semantic violation") {
        ScriptedBackend backend({extended_verdict("breakdown", 1.4, {"repetition"}),
                                 extended_verdict("breakdown", 0.4, {"repetition"})});
        auto history = golden::fixture_history();
        auto annotation = detect_breakdown(history, history.back().text, backend);
        CHECK(annotation.score == doctest::Approx(0.4));
    }

    TEST_CASE("prompt preconditions are usage errors") {
        ScriptedBackend backend;
        CHECK_THROWS_AS(render_detector_prompt({}, "", nullptr,
                                               DetectorMode::extended_taxonomy),
                        UsageError);
        auto history = golden::fixture_history();
        CHECK_THROWS_AS(render_detector_prompt(history, "different text", nullptr,
                                               DetectorMode::extended_taxonomy),
                        UsageError);
        std::vector<Turn> user_last = {{1, Role::system, "Hi"}, {2, Role::user, "Hello"}};
        CHECK_THROWS_AS(render_detector_prompt(user_last, "Hello", nullptr,
                                               DetectorMode::extended_taxonomy),
                        UsageError);
    }
}

TEST_SUITE("breakdown detector, zero-shot mode") {
    TEST_CASE("BREAKDOWN and NON-BREAKDOWN decisions parse") {
        DetectorOptions options;
        options.mode = DetectorMode::ghassel_zero_shot;
        auto history = golden::fixture_history();

        ScriptedBackend yes({R"({"reasoning": "stalls", "decision": "BREAKDOWN", "score": 0.1})"});
        auto annotation = detect_breakdown(history, history.back().text, yes, options);
        CHECK(annotation.decision == BreakdownDecision::breakdown);
        CHECK(annotation.error_types.empty());

        ScriptedBackend no(
            {R"({"reasoning": "fine", "decision": "NON-BREAKDOWN", "score": 0.9})"});
        annotation = detect_breakdown(history, history.back().text, no, options);
        CHECK(annotation.decision == BreakdownDecision::non_breakdown);

        // No structured-output schema in this mode; a single user message.
        auto seen = yes.seen_requests();
        REQUIRE(seen.size() == 1);
        CHECK_FALSE(seen[0].output_schema.has_value());
        CHECK(seen[0].messages.size() == 1);
    }

    TEST_CASE("case and wrapping quirks are tolerated") {
        DetectorOptions options;
        options.mode = DetectorMode::ghassel_zero_shot;
        auto history = golden::fixture_history();

        ScriptedBackend lowercase(
            {R"({"reasoning": "r", "decision": "breakdown", "score": 0.3})"});
        CHECK(detect_breakdown(history, history.back().text, lowercase, options).decision ==
              BreakdownDecision::breakdown);

        ScriptedBackend listed(
            {R"([{"reasoning": "r", "decision": "NON-BREAKDOWN", "score": "0.8"}])"});
        auto annotation = detect_breakdown(history, history.back().text, listed, options);
        CHECK(annotation.decision == BreakdownDecision::non_breakdown);
        CHECK(annotation.score == doctest::Approx(0.8));

        ScriptedBackend fenced(
            {"```json\n{\"reasoning\": \"r\", \"decision\": \"BREAKDOWN\", \"score\": 0}\n```"});
        CHECK(detect_breakdown(history, history.back().text, fenced, options).decision ==
              BreakdownDecision::breakdown);
    }

    TEST_CASE("unrecognized decisions retry through the gateway") {
        DetectorOptions options;
        options.mode = DetectorMode::ghassel_zero_shot;
        auto history = golden::fixture_history();
        ScriptedBackend backend(
            {R"({"reasoning": "r", "decision": "MAYBE", "score": 0.5})",
             R"({"reasoning": "r", "decision": "BREAKDOWN", "score": 0.2})"});
        auto annotation = detect_breakdown(history, history.back().text, backend, options);
        CHECK(annotation.decision == BreakdownDecision::breakdown);
        CHECK(backend.seen_requests().size() == 2);
    }
}

TEST_SUITE("annotate_dialogue") {
    TEST_CASE("every system turn gets one annotation") {
        Dialogue dialogue = golden::fixture_dialogue(); // system turns at 1, 3, 5
        ScriptedBackend backend({extended_verdict("non_breakdown", 0.9, {}),
                                 extended_verdict("non_breakdown", 0.8, {}),
                                 extended_verdict("breakdown", 0.2, {"wrong_information"})});
        DialogueAnnotations result = annotate_dialogue(dialogue, backend);
        CHECK(result.dialogue_id == dialogue.dialogue_id);
        REQUIRE(result.annotations.size() == 3);
        CHECK(result.annotations[0].turn_index == 1);
        CHECK(result.annotations[1].turn_index == 3);
        CHECK(result.annotations[2].turn_index == 5);
        CHECK(result.failures.empty());
        CHECK(result.has_breakdown());
    }

    TEST_CASE("one failing turn does not abort the rest") {
        Dialogue dialogue = golden::fixture_dialogue();
        // Second system turn burns all three gateway attempts, others are fine.
        ScriptedBackend backend({extended_verdict("non_breakdown", 0.9, {}), "junk", "junk",
                                 "junk", extended_verdict("non_breakdown", 0.8, {})});
        DialogueAnnotations result = annotate_dialogue(dialogue, backend);
        REQUIRE(result.annotations.size() == 2);
        CHECK(result.annotations[0].turn_index == 1);
        CHECK(result.annotations[1].turn_index == 5);
        REQUIRE(result.failures.size() == 1);
        CHECK(result.failures[0].turn_index == 3);
        CHECK_FALSE(result.has_breakdown());
    }

    TEST_CASE("a dialogue without system turns cannot be annotated") {
        Dialogue dialogue;
        dialogue.dialogue_id = "d";
        dialogue.turns = {{1, Role::user, "hello?"}};
        ScriptedBackend backend;
        CHECK_THROWS_AS(annotate_dialogue(dialogue, backend), UsageError);
    }

    TEST_CASE("annotation sets round trip through json") {
        DialogueAnnotations annotations;
        annotations.dialogue_id = "d1";
        annotations.mode = DetectorMode::extended_taxonomy;
        annotations.model = kDefaultModel;
        annotations.annotations.push_back(
            {3, "repeats itself", BreakdownDecision::breakdown, 0.25, {"repetition"}});
        annotations.failures.push_back({5, "gateway: empty response"});
        json value = dialogue_annotations_to_json(annotations);
        DialogueAnnotations back = dialogue_annotations_from_json(value);
        CHECK(back.dialogue_id == annotations.dialogue_id);
        CHECK(back.mode == annotations.mode);
        CHECK(back.model == annotations.model);
        REQUIRE(back.annotations.size() == 1);
        CHECK(back.annotations[0] == annotations.annotations[0]);
        REQUIRE(back.failures.size() == 1);
        CHECK(back.failures[0] == annotations.failures[0]);
    }
}

TEST_SUITE("dialogue rater") {
    TEST_CASE("a complete verdict becomes a validated rating") {
        RaterOptions options;
        ChatbotConfig config = golden::fixture_config();
        options.config = &config;
        ScriptedBackend backend({rating_verdict(ChatbotType::task_oriented, 4)});
        DialogueRating rating = rate_dialogue(golden::fixture_dialogue(), backend, options);
        CHECK(rating.entries.size() ==
              select_dimensions(ChatbotType::task_oriented).size());
        REQUIRE(rating.find("overall") != nullptr);
        CHECK(rating.find("overall")->rating == 4);
        CHECK(rating.find("task_success") != nullptr);

        auto seen = backend.seen_requests();
        REQUIRE(seen.size() == 1);
        CHECK(seen[0].temperature == kJudgeTemperature);
        CHECK(seen[0].output_schema.has_value());
    }

    TEST_CASE("without a config the fallback type picks the dimensions") {
        RaterOptions options;
        options.fallback_type = ChatbotType::conversational;
        ScriptedBackend backend({rating_verdict(ChatbotType::conversational, 3)});
        DialogueRating rating = rate_dialogue(golden::fixture_dialogue(), backend, options);
        CHECK(rating.find("coherence") != nullptr);
        CHECK(rating.find("task_success") == nullptr);
    }

    TEST_CASE("missing dimensions earn one corrective retry") {
        RaterOptions options;
        options.fallback_type = ChatbotType::conversational;
        json incomplete = json::parse(rating_verdict(ChatbotType::conversational, 3));
        incomplete["ratings"].erase(0);
        ScriptedBackend backend(
            {incomplete.dump(), rating_verdict(ChatbotType::conversational, 3)});
        DialogueRating rating = rate_dialogue(golden::fixture_dialogue(), backend, options);
        CHECK(rating.entries.size() ==
              select_dimensions(ChatbotType::conversational).size());
        CHECK(backend.seen_requests().size() == 2);
    }

    TEST_CASE("out-of-range and unrequested entries are violations") {
        RaterOptions options;
        options.fallback_type = ChatbotType::conversational;

        ScriptedBackend range({rating_verdict(ChatbotType::conversational, 6),
                               rating_verdict(ChatbotType::conversational, 5)});
        DialogueRating rating = rate_dialogue(golden::fixture_dialogue(), range, options);
        CHECK(rating.find("overall")->rating == 5);

        json extra = json::parse(rating_verdict(ChatbotType::conversational, 3));
        extra["ratings"].push_back(
            {{"key", "task_success"}, {"reasoning", "n/a"}, {"rating", 3}});
        ScriptedBackend unrequested(
            {extra.dump(), rating_verdict(ChatbotType::conversational, 3)});
        rating = rate_dialogue(golden::fixture_dialogue(), unrequested, options);
        CHECK(rating.find("task_success") == nullptr);
    }

    TEST_CASE("two bad verdicts fail the dialogue") {
        RaterOptions options;
        options.fallback_type = ChatbotType::conversational;
        ScriptedBackend backend({rating_verdict(ChatbotType::conversational, 0),
                                 rating_verdict(ChatbotType::conversational, 6)});
        CHECK_THROWS_AS(rate_dialogue(golden::fixture_dialogue(), backend, options),
                        StructuredOutputError);
    }

    TEST_CASE("rating an empty dialogue is a usage error") {
        Dialogue dialogue;
        dialogue.dialogue_id = "d";
        ScriptedBackend backend;
        CHECK_THROWS_AS(rate_dialogue(dialogue, backend), UsageError);
    }
}
