// chatprobe: persona generation, user simulation, breakdown detection,
// rating and corpus evaluation against a target dialogue system.

#include <cstdlib>
#include <iostream>
#include <memory>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "chatprobe/commands.hpp"
#include "chatprobe/http_backend.hpp"
#include "chatprobe/serialization.hpp"

namespace {

using namespace chatprobe;

struct BackendBundle {
    std::unique_ptr<Backend> base;
    std::unique_ptr<Backend> recorder;
    Backend* use = nullptr;
    bool deterministic = false; // scripted or replay: single worker, no clock
};

// --backend live | scripted:<responses.json> | replay:<session.jsonl>
BackendBundle make_backend(const std::string& spec, const std::string& record_path) {
    BackendBundle bundle;
    if (spec == "live") {
        bundle.base = std::make_unique<HttpBackend>(LiveBackendConfig{});
    } else if (spec.rfind("scripted:", 0) == 0) {
        const std::string path = spec.substr(9);
        const auto doc = load_json(path);
        if (!doc.is_array()) throw UsageError("scripted backend file must be a JSON array");
        auto scripted = std::make_unique<ScriptedBackend>();
        for (const auto& response : doc) {
            scripted->push_response(response.is_string() ? response.get<std::string>()
                                                         : response.dump());
        }
        bundle.base = std::move(scripted);
        bundle.deterministic = true;
    } else if (spec.rfind("replay:", 0) == 0) {
        bundle.base = std::make_unique<ReplayBackend>(spec.substr(7));
        bundle.deterministic = true;
    } else {
        throw UsageError("unknown --backend \"" + spec +
                         "\" (expected live, scripted:<path>, or replay:<path>)");
    }
    if (!record_path.empty()) {
        if (bundle.deterministic)
            throw UsageError("--record only applies to the live backend");
        bundle.recorder = std::make_unique<RecordingBackend>(*bundle.base, record_path);
        bundle.use = bundle.recorder.get();
    } else {
        bundle.use = bundle.base.get();
    }
    return bundle;
}

// --connector http:<base_url> | process:<command> | scripted:<script.json>
std::unique_ptr<SessionFactory> make_session_factory(const std::string& spec,
                                                     const ChatbotConfig& config) {
    if (spec.rfind("http:", 0) == 0) {
        HttpConnectorConfig http;
        http.base_url = spec.substr(5);
        http.speaks_first = config.chatbot_speaks_first;
        if (http.base_url.empty()) throw UsageError("http connector needs a base URL");
        return std::make_unique<HttpSessionFactory>(http);
    }
    if (spec.rfind("process:", 0) == 0) {
        ProcessConnectorConfig process;
        process.command = spec.substr(8);
        process.speaks_first = config.chatbot_speaks_first;
        if (process.command.empty()) throw UsageError("process connector needs a command");
        return std::make_unique<ProcessSessionFactory>(process);
    }
    if (spec.rfind("scripted:", 0) == 0) {
        const auto doc = load_json(spec.substr(9));
        const bool speaks_first = doc.value("speaks_first", config.chatbot_speaks_first);
        std::vector<ScriptedChatbotSession::Step> steps;
        for (const auto& raw : doc.at("steps")) {
            if (raw.is_string()) {
                steps.push_back(ScriptedChatbotSession::Step::reply(raw.get<std::string>()));
            } else {
                steps.push_back(ScriptedChatbotSession::Step::crash(
                    crash_cause_from_string(raw.at("crash").get<std::string>()),
                    raw.value("detail", "scripted failure")));
            }
        }
        return std::make_unique<ScriptedSessionFactory>(std::move(steps), speaks_first);
    }
    throw UsageError("unknown --connector \"" + spec +
                     "\" (expected http:<url>, process:<command>, or scripted:<path>)");
}

void print_outcome(const CommandOutcome& outcome) {
    for (const auto& note : outcome.notes) std::cout << note << "\n";
    std::cout << "completed " << outcome.completed << ", reused " << outcome.reused
              << ", failed " << outcome.failed << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Black-box dialogue system testing: simulate users, detect breakdowns, rate "
                 "dialogues, evaluate detectors"};
    app.require_subcommand(1);

    std::string backend_spec = "live";
    std::string record_path;
    unsigned long seed = 0;
    bool force = false;
    app.add_option("--backend", backend_spec,
                   "live, scripted:<responses.json>, or replay:<session.jsonl>");
    app.add_option("--record", record_path, "record live sessions to this JSONL file");
    app.add_option("--seed", seed, "seed recorded in campaign manifests");
    app.add_flag("--force", force, "overwrite or recompute persisted artifacts");

    auto* generate = app.add_subcommand("generate-personas", "Generate user personas");
    GeneratePersonasParams generate_params;
    std::string persona_type = "standard";
    generate->add_option("config", generate_params.config_path, "chatbot config YAML")
        ->required();
    generate->add_option("--out", generate_params.out_dir, "output directory")->required();
    generate->add_option("--num", generate_params.num, "number of personas")->required();
    generate->add_option("--type", persona_type, "standard or challenging");
    generate->add_option("--model", generate_params.model, "generation model");

    auto* simulate = app.add_subcommand("simulate", "Run a simulation campaign");
    SimulateParams simulate_params;
    std::string connector_spec;
    simulate->add_option("config", simulate_params.config_path, "chatbot config YAML")
        ->required();
    simulate->add_option("--personas", simulate_params.personas_dir, "persona directory")
        ->required();
    simulate->add_option("--out", simulate_params.campaign_dir, "campaign directory")
        ->required();
    simulate->add_option("--runs", simulate_params.runs, "independent runs");
    simulate->add_option("--connector", connector_spec,
                         "http:<url>, process:<command>, or scripted:<path>")
        ->required();
    simulate->add_option("--model", simulate_params.model, "simulation model");
    simulate->add_option("--workers", simulate_params.workers, "concurrent dialogues");

    auto* analyze = app.add_subcommand("analyze", "Annotate, rate and report a campaign");
    AnalyzeParams analyze_params;
    std::string detector_mode = "extended_taxonomy";
    analyze->add_option("campaign", analyze_params.campaign_dir, "campaign directory")
        ->required();
    analyze->add_flag("--detect", analyze_params.detect, "run the breakdown detector");
    analyze->add_flag("--rate", analyze_params.rate, "run the dialogue rater");
    analyze->add_option("--mode", detector_mode, "extended_taxonomy or ghassel_zero_shot");
    analyze->add_option("--model", analyze_params.model, "judge model");

    auto* evaluate = app.add_subcommand("evaluate-dbdc", "Evaluate a detector over a corpus");
    EvaluateDbdcParams evaluate_params;
    std::string corpus_language = "en";
    std::string evaluate_mode = "extended_taxonomy";
    evaluate->add_option("corpus", evaluate_params.corpus_path, "corpus directory")->required();
    evaluate->add_option("--out", evaluate_params.out_dir, "output directory")->required();
    evaluate->add_option("--language", corpus_language, "en or ja");
    evaluate->add_option("--mode", evaluate_mode, "extended_taxonomy or ghassel_zero_shot");
    evaluate->add_option("--model", evaluate_params.model, "judge model");
    evaluate->add_option("--task", evaluate_params.task, "detection or error-types");
    evaluate->add_option("--timestamp", evaluate_params.timestamp,
                         "fixed report timestamp (reproducible runs)");

    auto* rate = app.add_subcommand("rate-corpus", "Rate dialogues and correlate with humans");
    RateCorpusParams rate_params;
    std::string dimension_set = "conversational";
    rate->add_option("dialogues", rate_params.dialogues_path, "dialogue directory")->required();
    rate->add_option("ratings", rate_params.human_ratings_path, "human ratings JSON")
        ->required();
    rate->add_option("--out", rate_params.out_dir, "output directory")->required();
    rate->add_option("--model", rate_params.model, "judge model");
    rate->add_option("--dimensions", dimension_set, "task_oriented or conversational");

    CLI11_PARSE(app, argc, argv);

    try {
        BackendBundle backend = make_backend(backend_spec, record_path);

        if (*generate) {
            generate_params.type = persona_type_from_string(persona_type);
            generate_params.force = force;
            auto result = cmd_generate_personas(generate_params, *backend.use);
            for (const auto& file : result.files) std::cout << file << "\n";
            print_outcome(result.outcome);
            return result.outcome.exit_code();
        }
        if (*simulate) {
            simulate_params.seed = seed;
            simulate_params.force = force;
            simulate_params.deterministic = backend.deterministic;
            simulate_params.connector_description = connector_spec;
            const ChatbotConfig config = load_config(simulate_params.config_path);
            auto sessions = make_session_factory(connector_spec, config);
            if (backend.deterministic) simulate_params.workers = 1;
            auto result = cmd_simulate(simulate_params, *backend.use, *sessions);
            std::cout << "campaign: " << result.paths.root.string() << "\n";
            print_outcome(result.outcome);
            return result.outcome.exit_code();
        }
        if (*analyze) {
            analyze_params.mode = detector_mode_from_string(detector_mode);
            analyze_params.force = force;
            auto result = cmd_analyze(analyze_params, *backend.use);
            std::cout << render_report_text(result.report);
            print_outcome(result.outcome);
            return result.outcome.exit_code();
        }
        if (*evaluate) {
            evaluate_params.language = corpus_language_from_string(corpus_language);
            evaluate_params.mode = detector_mode_from_string(evaluate_mode);
            evaluate_params.force = force;
            auto result = cmd_evaluate_dbdc(evaluate_params, *backend.use);
            std::cout << read_file(result.report_text_path);
            print_outcome(result.outcome);
            return result.outcome.exit_code();
        }
        if (*rate) {
            rate_params.dimension_set = chatbot_type_from_string(dimension_set);
            rate_params.force = force;
            auto result = cmd_rate_corpus(rate_params, *backend.use);
            std::cout << "spearman rho " << result.rho << " over " << result.pairs
                      << " dialogues\n";
            print_outcome(result.outcome);
            return result.outcome.exit_code();
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
