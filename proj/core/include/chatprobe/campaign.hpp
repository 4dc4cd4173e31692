// Persistent campaign layout:
//
//   <root>/manifest.json
//   <root>/personas/<persona_id>.yaml
//   <root>/runs/run_<i>/<dialogue_id>/transcript.json
//   <root>/runs/run_<i>/<dialogue_id>/llm_log.jsonl
//   <root>/runs/run_<i>/<dialogue_id>/annotations.json   (after --detect)
//   <root>/runs/run_<i>/<dialogue_id>/rating.json        (after --rate)
//   <root>/report.json, <root>/report.txt
//
// Everything except the append-only llm_log is written via temp-file rename,
// so interrupted commands leave either no artifact or a complete one.

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "chatprobe/types.hpp"

namespace chatprobe {

struct CampaignPaths {
    std::filesystem::path root;

    std::filesystem::path manifest() const { return root / "manifest.json"; }
    std::filesystem::path personas_dir() const { return root / "personas"; }
    std::filesystem::path persona_file(const std::string& persona_id) const {
        return personas_dir() / (persona_id + ".yaml");
    }
    std::filesystem::path run_dir(int run) const {
        return root / "runs" / ("run_" + std::to_string(run));
    }
    std::filesystem::path dialogue_dir(int run, const std::string& dialogue_id) const {
        return run_dir(run) / dialogue_id;
    }
    std::filesystem::path transcript(int run, const std::string& dialogue_id) const {
        return dialogue_dir(run, dialogue_id) / "transcript.json";
    }
    std::filesystem::path llm_log(int run, const std::string& dialogue_id) const {
        return dialogue_dir(run, dialogue_id) / "llm_log.jsonl";
    }
    std::filesystem::path annotations(int run, const std::string& dialogue_id) const {
        return dialogue_dir(run, dialogue_id) / "annotations.json";
    }
    std::filesystem::path rating(int run, const std::string& dialogue_id) const {
        return dialogue_dir(run, dialogue_id) / "rating.json";
    }
    std::filesystem::path report_json() const { return root / "report.json"; }
    std::filesystem::path report_text() const { return root / "report.txt"; }
};

struct CampaignManifest {
    ChatbotConfig config;
    std::vector<Persona> personas;
    int runs = 1;
    unsigned long seed = 0;
    std::string simulation_model;
    std::string backend;   // backend descriptor at simulation time
    std::string connector; // connector description
    // Wall-clock creation time; empty (and omitted on disk) under
    // deterministic backends so repeated runs stay byte-identical.
    std::string created;
};

nlohmann::json manifest_to_json(const CampaignManifest& manifest);
CampaignManifest manifest_from_json(const nlohmann::json& value);

void save_manifest(const CampaignPaths& paths, const CampaignManifest& manifest);
CampaignManifest load_manifest(const CampaignPaths& paths);

// Dialogue id of (run, persona position); seq is the 1-based position of the
// persona within the manifest order.
std::string campaign_dialogue_id(const CampaignManifest& manifest, int run, int persona_index);

} // namespace chatprobe
