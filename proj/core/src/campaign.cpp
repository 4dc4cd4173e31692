#include "chatprobe/campaign.hpp"

#include "chatprobe/errors.hpp"
#include "chatprobe/serialization.hpp"

namespace chatprobe {

using nlohmann::json;

json manifest_to_json(const CampaignManifest& manifest) {
    json personas = json::array();
    for (const auto& persona : manifest.personas) personas.push_back(persona_to_json(persona));
    json value = {
        {"config", config_to_json(manifest.config)},
        {"personas", std::move(personas)},
        {"runs", manifest.runs},
        {"seed", manifest.seed},
        {"simulation_model", manifest.simulation_model},
        {"backend", manifest.backend},
        {"connector", manifest.connector},
    };
    if (!manifest.created.empty()) value["created"] = manifest.created;
    return value;
}

CampaignManifest manifest_from_json(const json& value) {
    CampaignManifest manifest;
    manifest.config = config_from_json(value.at("config"));
    for (const auto& persona : value.at("personas"))
        manifest.personas.push_back(persona_from_json(persona));
    manifest.runs = value.at("runs").get<int>();
    manifest.seed = value.at("seed").get<unsigned long>();
    manifest.simulation_model = value.at("simulation_model").get<std::string>();
    manifest.backend = value.at("backend").get<std::string>();
    manifest.connector = value.at("connector").get<std::string>();
    manifest.created = value.value("created", "");
    if (manifest.runs < 1) throw ValidationError("runs", "must be >= 1");
    if (manifest.personas.empty()) throw ValidationError("personas", "must be nonempty");
    return manifest;
}

void save_manifest(const CampaignPaths& paths, const CampaignManifest& manifest) {
    save_json_atomic(paths.manifest().string(), manifest_to_json(manifest));
}

CampaignManifest load_manifest(const CampaignPaths& paths) {
    return manifest_from_json(load_json(paths.manifest().string()));
}

std::string campaign_dialogue_id(const CampaignManifest& manifest, int run, int persona_index) {
    if (persona_index < 0 || persona_index >= static_cast<int>(manifest.personas.size()))
        throw UsageError("persona index out of range");
    return make_dialogue_id(manifest.config.id, manifest.personas[persona_index].persona_id, run,
                            persona_index + 1);
}

} // namespace chatprobe
