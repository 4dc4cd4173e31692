// Operator commands behind the CLI verbs. Each returns a result struct so
// the behavior is testable in-process; the CLI binary only parses arguments,
// builds backends and prints.

#pragma once

#include <string>
#include <vector>

#include "chatprobe/campaign.hpp"
#include "chatprobe/dbdc.hpp"
#include "chatprobe/report.hpp"
#include "chatprobe/user_simulator.hpp"

namespace chatprobe {

// completed counts newly produced artifacts, reused counts persisted ones
// kept by an idempotent rerun. Only failures make the exit code nonzero;
// reusing completed work is the documented rerun behavior.
struct CommandOutcome {
    int completed = 0;
    int reused = 0;
    int failed = 0;
    std::vector<std::string> notes;

    bool clean() const { return failed == 0; }
    int exit_code() const { return failed == 0 ? 0 : 1; }
};

struct GeneratePersonasParams {
    std::string config_path;
    std::string out_dir;
    int num = 1;
    PersonaType type = PersonaType::standard;
    std::string model = kDefaultModel;
    bool force = false;
};

struct GeneratePersonasResult {
    CommandOutcome outcome;
    std::vector<std::string> files;
};

// Refuses to overwrite existing persona files unless force is set; the
// refusal happens before any generation call.
GeneratePersonasResult cmd_generate_personas(const GeneratePersonasParams& params,
                                             Backend& backend);

struct SimulateParams {
    std::string config_path;
    std::string personas_dir;
    std::string campaign_dir;
    int runs = 1;
    unsigned long seed = 0;
    std::string model = kDefaultModel;
    int workers = 1;
    bool force = false;
    // Omit wall-clock fields from the manifest so repeated invocations over
    // deterministic backends produce byte-identical directories.
    bool deterministic = false;
    std::string connector_description;
};

struct SimulateResult {
    CommandOutcome outcome;
    CampaignPaths paths;
};

SimulateResult cmd_simulate(const SimulateParams& params, Backend& backend,
                            SessionFactory& sessions);

struct AnalyzeParams {
    std::string campaign_dir;
    bool detect = false;
    bool rate = false;
    DetectorMode mode = DetectorMode::extended_taxonomy;
    std::string model = kDefaultModel;
    bool force = false;
};

struct AnalyzeResult {
    CommandOutcome outcome;
    CampaignReport report;
};

// Annotates and/or rates every persisted dialogue, then rebuilds the
// aggregated report from everything persisted so far (including artifacts
// from earlier invocations with other flags).
AnalyzeResult cmd_analyze(const AnalyzeParams& params, Backend& backend);

struct EvaluateDbdcParams {
    std::string corpus_path;
    std::string out_dir;
    CorpusLanguage language = CorpusLanguage::en;
    DetectorMode mode = DetectorMode::extended_taxonomy;
    std::string model = kDefaultModel;
    std::string task = "detection"; // "detection" or "error-types"
    std::string timestamp;          // override for reproducible reports
    bool force = false;             // discard the prediction cache first
};

struct EvaluateDbdcResult {
    CommandOutcome outcome;
    CorpusSummary summary;
    nlohmann::json report;
    std::string report_json_path;
    std::string report_text_path;
};

EvaluateDbdcResult cmd_evaluate_dbdc(const EvaluateDbdcParams& params, Backend& backend);

struct RateCorpusParams {
    std::string dialogues_path;     // directory of transcript JSON documents
    std::string human_ratings_path; // {"<dialogue_id>": <mean rating>, ...}
    std::string out_dir;
    std::string model = kDefaultModel;
    ChatbotType dimension_set = ChatbotType::conversational;
    bool force = false;
};

struct RateCorpusResult {
    CommandOutcome outcome;
    double rho = 0.0;
    int pairs = 0;
    std::string report_json_path;
};

// Rates every dialogue, persists per-dialogue ratings, and reports the rank
// correlation between the model "overall" rating and the human mean.
// Dialogue/rating id mismatches abort with an error listing the orphans.
RateCorpusResult cmd_rate_corpus(const RateCorpusParams& params, Backend& backend);

} // namespace chatprobe
