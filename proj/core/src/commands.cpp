#include "chatprobe/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <map>
#include <mutex>
#include <thread>

#include "chatprobe/detector.hpp"
#include "chatprobe/errors.hpp"
#include "chatprobe/persona_generator.hpp"
#include "chatprobe/rater.hpp"
#include "chatprobe/serialization.hpp"

namespace chatprobe {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::vector<fs::path> sorted_files(const fs::path& dir, const std::string& extension) {
    if (!fs::exists(dir) || !fs::is_directory(dir))
        throw UsageError("not a directory: " + dir.string());
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == extension)
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    return files;
}

} // namespace

GeneratePersonasResult cmd_generate_personas(const GeneratePersonasParams& params,
                                             Backend& backend) {
    if (params.num < 1) throw UsageError("--num must be >= 1");
    const ChatbotConfig config = load_config(params.config_path);

    GeneratePersonasResult result;
    const fs::path out_dir(params.out_dir);

    if (!params.force) {
        std::vector<std::string> existing;
        for (int i = 0; i < params.num; ++i) {
            char name[64];
            std::snprintf(name, sizeof(name), "generated_%s_persona_%02d.yaml",
                          to_string(params.type).c_str(), i + 1);
            if (fs::exists(out_dir / name)) existing.push_back((out_dir / name).string());
        }
        if (!existing.empty()) {
            std::string listing;
            for (const auto& path : existing) listing += "\n  " + path;
            throw UsageError("refusing to overwrite existing persona files (use --force):" +
                             listing);
        }
    }

    PersonaGeneratorOptions options;
    options.model = params.model;
    const auto personas = generate_personas(config, params.num, params.type, backend, options);

    for (const auto& persona : personas) {
        const fs::path path = out_dir / (persona.persona_id + ".yaml");
        write_file_atomic(path.string(), persona_to_yaml(persona));
        result.files.push_back(path.string());
        ++result.outcome.completed;
    }
    result.outcome.notes.push_back("wrote " + std::to_string(personas.size()) + " personas to " +
                                   out_dir.string());
    return result;
}

namespace {

struct SimulationJob {
    int run = 0;
    int persona_index = 0;
    std::string dialogue_id;
};

void check_same_campaign(const CampaignManifest& existing, const CampaignManifest& requested) {
    if (existing.config.id != requested.config.id)
        throw UsageError("campaign directory belongs to chatbot \"" + existing.config.id + "\"");
    if (existing.runs != requested.runs)
        throw UsageError("campaign directory was created with --runs " +
                         std::to_string(existing.runs));
    if (existing.personas.size() != requested.personas.size())
        throw UsageError("campaign directory was created with a different persona set");
    for (std::size_t i = 0; i < existing.personas.size(); ++i) {
        if (existing.personas[i].persona_id != requested.personas[i].persona_id)
            throw UsageError("campaign directory was created with a different persona set");
    }
}

} // namespace

SimulateResult cmd_simulate(const SimulateParams& params, Backend& backend,
                            SessionFactory& sessions) {
    if (params.runs < 1) throw UsageError("--runs must be >= 1");
    if (params.workers < 1) throw UsageError("--workers must be >= 1");

    const ChatbotConfig config = load_config(params.config_path);

    std::vector<Persona> personas;
    for (const auto& path : sorted_files(params.personas_dir, ".yaml"))
        personas.push_back(load_persona(path.string()));
    if (personas.empty())
        throw UsageError("no persona files (*.yaml) in " + params.personas_dir);

    SimulateResult result;
    result.paths.root = params.campaign_dir;
    const CampaignPaths& paths = result.paths;

    CampaignManifest manifest;
    manifest.config = config;
    manifest.personas = personas;
    manifest.runs = params.runs;
    manifest.seed = params.seed;
    manifest.simulation_model = params.model;
    manifest.backend = backend.descriptor();
    manifest.connector = params.connector_description;
    if (!params.deterministic) manifest.created = current_utc_timestamp();

    if (fs::exists(paths.manifest()) && !params.force) {
        check_same_campaign(load_manifest(paths), manifest);
    } else {
        fs::create_directories(paths.root);
        save_manifest(paths, manifest);
        for (const auto& persona : personas)
            write_file_atomic(paths.persona_file(persona.persona_id).string(),
                              persona_to_yaml(persona));
    }

    std::vector<SimulationJob> jobs;
    for (int run = 1; run <= params.runs; ++run) {
        for (int i = 0; i < static_cast<int>(personas.size()); ++i) {
            SimulationJob job{run, i, campaign_dialogue_id(manifest, run, i)};
            if (fs::exists(paths.transcript(run, job.dialogue_id)) && !params.force) {
                ++result.outcome.reused;
                continue;
            }
            jobs.push_back(std::move(job));
        }
    }

    std::mutex outcome_mutex;
    auto simulate_one = [&](const SimulationJob& job) {
        const fs::path dir = paths.dialogue_dir(job.run, job.dialogue_id);
        std::error_code ec;
        fs::remove_all(dir, ec); // drop partial artifacts from aborted runs
        fs::create_directories(dir);

        TranscriptLog log(paths.llm_log(job.run, job.dialogue_id).string());
        SimulatorOptions options;
        options.model = params.model;
        options.transcript = &log;

        auto session = sessions.create(job.dialogue_id);
        Dialogue dialogue = run_dialogue(config, personas[job.persona_index], *session, backend,
                                         job.dialogue_id, options);
        session->close();
        save_json_atomic(paths.transcript(job.run, job.dialogue_id).string(),
                         dialogue_to_json(dialogue));

        std::lock_guard lock(outcome_mutex);
        if (dialogue.termination == Termination::error) {
            ++result.outcome.failed;
            result.outcome.notes.push_back(
                job.dialogue_id + ": simulation error: " +
                dialogue.error_detail.value_or("unknown"));
        } else {
            ++result.outcome.completed;
        }
    };

    if (params.workers == 1 || jobs.size() <= 1) {
        for (const auto& job : jobs) simulate_one(job);
    } else {
        std::atomic<std::size_t> cursor{0};
        const int worker_count = std::min<int>(params.workers, static_cast<int>(jobs.size()));
        std::vector<std::thread> workers;
        workers.reserve(static_cast<std::size_t>(worker_count));
        for (int w = 0; w < worker_count; ++w) {
            workers.emplace_back([&] {
                for (;;) {
                    const std::size_t index = cursor.fetch_add(1);
                    if (index >= jobs.size()) return;
                    simulate_one(jobs[index]);
                }
            });
        }
        for (auto& worker : workers) worker.join();
    }

    return result;
}

AnalyzeResult cmd_analyze(const AnalyzeParams& params, Backend& backend) {
    CampaignPaths paths{params.campaign_dir};
    if (!fs::exists(paths.manifest()))
        throw UsageError("no campaign manifest in " + params.campaign_dir);
    const CampaignManifest manifest = load_manifest(paths);

    AnalyzeResult result;
    std::vector<std::vector<AnalyzedDialogue>> runs;
    runs.resize(static_cast<std::size_t>(manifest.runs));

    for (int run = 1; run <= manifest.runs; ++run) {
        for (int i = 0; i < static_cast<int>(manifest.personas.size()); ++i) {
            const std::string dialogue_id = campaign_dialogue_id(manifest, run, i);
            const fs::path transcript = paths.transcript(run, dialogue_id);
            if (!fs::exists(transcript)) {
                ++result.outcome.failed;
                result.outcome.notes.push_back(dialogue_id + ": missing transcript");
                continue;
            }

            AnalyzedDialogue analyzed;
            analyzed.dialogue = dialogue_from_json(load_json(transcript.string()));

            const fs::path annotations_path = paths.annotations(run, dialogue_id);
            if (fs::exists(annotations_path) && !params.force) {
                analyzed.annotations =
                    dialogue_annotations_from_json(load_json(annotations_path.string()));
                if (params.detect) ++result.outcome.reused;
            } else if (params.detect) {
                if (analyzed.dialogue.system_turn_count() == 0) {
                    result.outcome.notes.push_back(dialogue_id + ": no system turns to annotate");
                } else {
                    TranscriptLog log(paths.llm_log(run, dialogue_id).string());
                    DetectorOptions options;
                    options.mode = params.mode;
                    options.model = params.model;
                    options.config = &manifest.config;
                    options.transcript = &log;
                    auto annotations = annotate_dialogue(analyzed.dialogue, backend, options);
                    save_json_atomic(annotations_path.string(),
                                     dialogue_annotations_to_json(annotations));
                    ++result.outcome.completed;
                    for (const auto& failure : annotations.failures) {
                        ++result.outcome.failed;
                        result.outcome.notes.push_back(dialogue_id + " turn " +
                                                       std::to_string(failure.turn_index) + ": " +
                                                       failure.error);
                    }
                    analyzed.annotations = std::move(annotations);
                }
            }

            const fs::path rating_path = paths.rating(run, dialogue_id);
            if (fs::exists(rating_path) && !params.force) {
                analyzed.rating = rating_from_json(load_json(rating_path.string()));
                if (params.rate) ++result.outcome.reused;
            } else if (params.rate) {
                if (analyzed.dialogue.turns.empty()) {
                    result.outcome.notes.push_back(dialogue_id + ": empty dialogue, not rated");
                } else {
                    try {
                        TranscriptLog log(paths.llm_log(run, dialogue_id).string());
                        RaterOptions options;
                        options.model = params.model;
                        options.config = &manifest.config;
                        options.transcript = &log;
                        auto rating = rate_dialogue(analyzed.dialogue, backend, options);
                        save_json_atomic(rating_path.string(), rating_to_json(rating));
                        ++result.outcome.completed;
                        analyzed.rating = std::move(rating);
                    } catch (const std::exception& e) {
                        ++result.outcome.failed;
                        result.outcome.notes.push_back(dialogue_id + ": rating failed: " +
                                                       e.what());
                    }
                }
            }

            runs[static_cast<std::size_t>(run - 1)].push_back(std::move(analyzed));
        }
    }

    result.report = build_campaign_report(manifest.config.id, runs, manifest.config);
    save_json_atomic(paths.report_json().string(), report_to_json(result.report));
    write_file_atomic(paths.report_text().string(), render_report_text(result.report));
    return result;
}

EvaluateDbdcResult cmd_evaluate_dbdc(const EvaluateDbdcParams& params, Backend& backend) {
    if (params.task != "detection" && params.task != "error-types")
        throw UsageError("--task must be detection or error-types");

    const DbdcCorpus corpus = load_dbdc_corpus(params.corpus_path, params.language);

    EvaluateDbdcResult result;
    result.summary = summarize_corpus(corpus);

    const fs::path out_dir(params.out_dir);
    fs::create_directories(out_dir);
    const fs::path cache_path = out_dir / "predictions.jsonl";
    if (params.force && fs::exists(cache_path)) fs::remove(cache_path);
    PredictionCache cache(cache_path);

    EvaluateOptions options;
    options.mode = params.mode;
    options.model = params.model;
    options.cache = &cache;
    options.timestamp = params.timestamp;

    std::string stem;
    std::string text;
    if (params.task == "detection") {
        const auto evaluation = evaluate_detection(corpus, options, backend);
        result.report = detection_evaluation_to_json(evaluation);
        text = render_detection_text(evaluation);
        stem = "detection_" + to_string(params.mode) + "_" + evaluation.model;
        result.outcome.completed = evaluation.evaluated_turns - evaluation.cached_turns;
        result.outcome.reused = evaluation.cached_turns;
        result.outcome.failed = evaluation.skipped_turns;
    } else {
        bool has_gold = false;
        for (const auto& dialogue : corpus.dialogues)
            for (const auto& turn : dialogue.turns)
                if (turn.gold_error_types) has_gold = true;
        if (!has_gold)
            throw UsageError("corpus carries no gold error types; --task error-types "
                             "needs the error-type corpus");
        const auto evaluation = evaluate_error_types(corpus, options, backend);
        result.report = error_type_evaluation_to_json(evaluation);
        text = render_error_type_text(evaluation);
        stem = "error_types_" + evaluation.model;
        result.outcome.completed = evaluation.evaluated_turns - evaluation.cached_turns;
        result.outcome.reused = evaluation.cached_turns;
        result.outcome.failed = evaluation.skipped_turns;
    }
    result.report["corpus_summary"] = corpus_summary_to_json(result.summary);

    result.report_json_path = (out_dir / (stem + ".json")).string();
    result.report_text_path = (out_dir / (stem + ".txt")).string();
    save_json_atomic(result.report_json_path, result.report);
    write_file_atomic(result.report_text_path, text);
    return result;
}

RateCorpusResult cmd_rate_corpus(const RateCorpusParams& params, Backend& backend) {
    std::vector<Dialogue> dialogues;
    for (const auto& path : sorted_files(params.dialogues_path, ".json"))
        dialogues.push_back(dialogue_from_json(load_json(path.string())));
    if (dialogues.empty()) throw UsageError("no dialogues in " + params.dialogues_path);
    std::sort(dialogues.begin(), dialogues.end(),
              [](const Dialogue& a, const Dialogue& b) { return a.dialogue_id < b.dialogue_id; });

    const json human_doc = load_json(params.human_ratings_path);
    std::map<std::string, double> human;
    if (human_doc.is_object()) {
        for (const auto& [id, value] : human_doc.items()) human[id] = value.get<double>();
    } else if (human_doc.is_array()) {
        for (const auto& entry : human_doc)
            human[entry.at("dialogue_id").get<std::string>()] = entry.at("rating").get<double>();
    } else {
        throw ParseError(params.human_ratings_path, "expected an object or array");
    }

    std::vector<std::string> unrated_dialogues;
    std::map<std::string, double> unmatched = human;
    for (const auto& dialogue : dialogues) {
        if (!human.count(dialogue.dialogue_id)) unrated_dialogues.push_back(dialogue.dialogue_id);
        unmatched.erase(dialogue.dialogue_id);
    }
    if (!unrated_dialogues.empty() || !unmatched.empty()) {
        std::string message = "dialogue/rating id mismatch:";
        for (const auto& id : unrated_dialogues) message += "\n  no human rating for " + id;
        for (const auto& [id, value] : unmatched) message += "\n  no dialogue for " + id;
        throw UsageError(message);
    }

    RateCorpusResult result;
    const fs::path out_dir(params.out_dir);
    fs::create_directories(out_dir);

    std::vector<double> system_scores;
    std::vector<double> human_scores;
    json per_dialogue = json::array();

    for (const auto& dialogue : dialogues) {
        const fs::path rating_path = out_dir / (dialogue.dialogue_id + ".rating.json");
        DialogueRating rating;
        if (fs::exists(rating_path) && !params.force) {
            rating = rating_from_json(load_json(rating_path.string()));
            ++result.outcome.reused;
        } else {
            try {
                RaterOptions options;
                options.model = params.model;
                options.fallback_type = params.dimension_set;
                rating = rate_dialogue(dialogue, backend, options);
                save_json_atomic(rating_path.string(), rating_to_json(rating));
                ++result.outcome.completed;
            } catch (const std::exception& e) {
                ++result.outcome.failed;
                result.outcome.notes.push_back(dialogue.dialogue_id + ": rating failed: " +
                                               e.what());
                continue;
            }
        }
        const DimensionRating* overall = rating.find("overall");
        if (!overall) {
            ++result.outcome.failed;
            result.outcome.notes.push_back(dialogue.dialogue_id + ": rating lacks overall");
            continue;
        }
        system_scores.push_back(static_cast<double>(overall->rating));
        human_scores.push_back(human.at(dialogue.dialogue_id));
        per_dialogue.push_back(json{{"dialogue_id", dialogue.dialogue_id},
                                    {"system_overall", overall->rating},
                                    {"human_mean", human.at(dialogue.dialogue_id)}});
    }

    result.pairs = static_cast<int>(system_scores.size());
    result.rho = metrics::spearman(system_scores, human_scores);

    result.report_json_path = (out_dir / "spearman.json").string();
    save_json_atomic(result.report_json_path, json{{"model", params.model},
                                                   {"rho", result.rho},
                                                   {"pairs", result.pairs},
                                                   {"per_dialogue", std::move(per_dialogue)}});
    return result;
}

} // namespace chatprobe
