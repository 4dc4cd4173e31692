// Campaign report assembly: per-run statistics, cross-run aggregates and
// rendering as JSON or aligned plain-text tables.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "chatprobe/dialogue_stats.hpp"
#include "chatprobe/metrics.hpp"

namespace chatprobe {

struct RunReport {
    int run = 0; // 1-based
    int dialogue_count = 0;
    DialogueStatistics dialogue_stats;
    BreakdownStatistics breakdown_stats;
    BudgetViolations budget;
};

// mean(std) across runs for every reported column. avg_rating aggregates
// only runs that produced ratings and is absent when none did.
struct AggregateReport {
    metrics::RunAggregate st_per_d;
    metrics::RunAggregate median_utl;
    metrics::RunAggregate median_stl;
    metrics::RunAggregate user_mtld;
    metrics::RunAggregate system_mtld;
    metrics::RunAggregate d_with_b;
    metrics::RunAggregate total_b;
    metrics::RunAggregate b_per_st;
    metrics::RunAggregate unique_b;
    std::optional<metrics::RunAggregate> avg_rating;
    metrics::RunAggregate c_crash;
};

struct CampaignReport {
    std::string chatbot_id;
    // Which analyses ran; the text rendering drops columns that did not.
    bool has_annotations = false;
    bool has_ratings = false;
    std::vector<RunReport> per_run;
    AggregateReport aggregate;
};

// Runs are the per-run analyzed dialogues, outer index = run - 1.
// Throws UsageError when runs is empty.
CampaignReport build_campaign_report(const std::string& chatbot_id,
                                     const std::vector<std::vector<AnalyzedDialogue>>& runs,
                                     const ChatbotConfig& config);

nlohmann::json report_to_json(const CampaignReport& report);

// "9.20(0.45)": two decimals for both mean and sample std.
std::string format_aggregate(const metrics::RunAggregate& aggregate);

// Two aligned tables (dialogue statistics, then breakdown statistics) plus a
// budget-violation note. Ends with a newline.
std::string render_report_text(const CampaignReport& report);

} // namespace chatprobe
