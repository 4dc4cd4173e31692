#include "chatprobe/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "chatprobe/errors.hpp"

namespace chatprobe {

using nlohmann::json;

namespace {

metrics::RunAggregate aggregate_field(const std::vector<RunReport>& runs,
                                      double (*pick)(const RunReport&)) {
    std::vector<double> values;
    values.reserve(runs.size());
    for (const auto& run : runs) values.push_back(pick(run));
    return metrics::aggregate_runs(values);
}

json aggregate_to_json(const metrics::RunAggregate& aggregate) {
    return json{{"mean", aggregate.mean}, {"std", aggregate.stddev}};
}

json dialogue_stats_to_json(const DialogueStatistics& stats) {
    json out{
        {"st_per_d", stats.st_per_d},     {"median_utl", stats.median_utl},
        {"median_stl", stats.median_stl}, {"user_mtld", stats.user_mtld},
        {"system_mtld", stats.system_mtld}};
    if (stats.user_mtld_unsaturated) out["user_mtld_unsaturated"] = true;
    if (stats.system_mtld_unsaturated) out["system_mtld_unsaturated"] = true;
    return out;
}

json breakdown_stats_to_json(const BreakdownStatistics& stats) {
    json out{{"d_with_b", stats.d_with_b},
             {"total_b", stats.total_b},
             {"b_per_st", stats.b_per_st},
             {"unique_b", stats.unique_b},
             {"c_crash", stats.c_crash}};
    if (stats.avg_rating) out["avg_rating"] = *stats.avg_rating;
    return out;
}

} // namespace

CampaignReport build_campaign_report(const std::string& chatbot_id,
                                     const std::vector<std::vector<AnalyzedDialogue>>& runs,
                                     const ChatbotConfig& config) {
    if (runs.empty()) throw UsageError("cannot build a report over zero runs");

    CampaignReport report;
    report.chatbot_id = chatbot_id;
    report.per_run.reserve(runs.size());

    for (std::size_t i = 0; i < runs.size(); ++i) {
        const auto& analyzed = runs[i];
        std::vector<Dialogue> dialogues;
        dialogues.reserve(analyzed.size());
        for (const auto& entry : analyzed) {
            dialogues.push_back(entry.dialogue);
            if (entry.annotations) report.has_annotations = true;
            if (entry.rating) report.has_ratings = true;
        }

        RunReport run;
        run.run = static_cast<int>(i) + 1;
        run.dialogue_count = static_cast<int>(analyzed.size());
        run.dialogue_stats = dialogue_statistics(dialogues);
        run.breakdown_stats = breakdown_statistics(analyzed);
        run.budget = budget_violations(dialogues, config);
        report.per_run.push_back(std::move(run));
    }

    auto& agg = report.aggregate;
    const auto& per_run = report.per_run;
    agg.st_per_d = aggregate_field(per_run, [](const RunReport& r) { return r.dialogue_stats.st_per_d; });
    agg.median_utl = aggregate_field(per_run, [](const RunReport& r) { return r.dialogue_stats.median_utl; });
    agg.median_stl = aggregate_field(per_run, [](const RunReport& r) { return r.dialogue_stats.median_stl; });
    agg.user_mtld = aggregate_field(per_run, [](const RunReport& r) { return r.dialogue_stats.user_mtld; });
    agg.system_mtld = aggregate_field(per_run, [](const RunReport& r) { return r.dialogue_stats.system_mtld; });
    agg.d_with_b = aggregate_field(per_run, [](const RunReport& r) { return static_cast<double>(r.breakdown_stats.d_with_b); });
    agg.total_b = aggregate_field(per_run, [](const RunReport& r) { return static_cast<double>(r.breakdown_stats.total_b); });
    agg.b_per_st = aggregate_field(per_run, [](const RunReport& r) { return r.breakdown_stats.b_per_st; });
    agg.unique_b = aggregate_field(per_run, [](const RunReport& r) { return static_cast<double>(r.breakdown_stats.unique_b); });
    agg.c_crash = aggregate_field(per_run, [](const RunReport& r) { return static_cast<double>(r.breakdown_stats.c_crash); });

    std::vector<double> ratings;
    for (const auto& run : per_run)
        if (run.breakdown_stats.avg_rating) ratings.push_back(*run.breakdown_stats.avg_rating);
    if (!ratings.empty()) agg.avg_rating = metrics::aggregate_runs(ratings);

    return report;
}

json report_to_json(const CampaignReport& report) {
    json per_run = json::array();
    for (const auto& run : report.per_run) {
        json budget{{"over_length_user_turns", run.budget.over_length_user_turns},
                    {"longest_user_turn_words", run.budget.longest_user_turn_words}};
        per_run.push_back(json{{"run", run.run},
                               {"dialogue_count", run.dialogue_count},
                               {"dialogue_stats", dialogue_stats_to_json(run.dialogue_stats)},
                               {"breakdown_stats", breakdown_stats_to_json(run.breakdown_stats)},
                               {"budget_violations", budget}});
    }

    const auto& agg = report.aggregate;
    json aggregate{{"st_per_d", aggregate_to_json(agg.st_per_d)},
                   {"median_utl", aggregate_to_json(agg.median_utl)},
                   {"median_stl", aggregate_to_json(agg.median_stl)},
                   {"user_mtld", aggregate_to_json(agg.user_mtld)},
                   {"system_mtld", aggregate_to_json(agg.system_mtld)},
                   {"d_with_b", aggregate_to_json(agg.d_with_b)},
                   {"total_b", aggregate_to_json(agg.total_b)},
                   {"b_per_st", aggregate_to_json(agg.b_per_st)},
                   {"unique_b", aggregate_to_json(agg.unique_b)},
                   {"c_crash", aggregate_to_json(agg.c_crash)}};
    if (agg.avg_rating) aggregate["avg_rating"] = aggregate_to_json(*agg.avg_rating);

    return json{{"chatbot_id", report.chatbot_id},
                {"runs", static_cast<int>(report.per_run.size())},
                {"has_annotations", report.has_annotations},
                {"has_ratings", report.has_ratings},
                {"per_run", per_run},
                {"aggregate", aggregate}};
}

std::string format_aggregate(const metrics::RunAggregate& aggregate) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.2f(%.2f)", aggregate.mean, aggregate.stddev);
    return buffer;
}

namespace {

std::string render_table(const std::vector<std::string>& headers,
                         const std::vector<std::string>& row) {
    std::vector<std::size_t> widths(headers.size());
    for (std::size_t i = 0; i < headers.size(); ++i)
        widths[i] = std::max(headers[i].size(), row[i].size());

    auto render_line = [&](const std::vector<std::string>& cells) {
        std::string line;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            line += cells[i];
            if (i + 1 < cells.size()) line.append(widths[i] - cells[i].size() + 2, ' ');
        }
        return line;
    };

    std::string rule;
    std::size_t total = 0;
    for (std::size_t i = 0; i < widths.size(); ++i) total += widths[i] + (i + 1 < widths.size() ? 2 : 0);
    rule.assign(total, '-');

    return render_line(headers) + "\n" + rule + "\n" + render_line(row) + "\n";
}

} // namespace

std::string render_report_text(const CampaignReport& report) {
    const auto& agg = report.aggregate;
    std::ostringstream out;
    out << "Campaign report for " << report.chatbot_id << " (" << report.per_run.size()
        << " run" << (report.per_run.size() == 1 ? "" : "s") << ", mean(std))\n\n";

    out << "Dialogue statistics\n";
    out << render_table(
        {"Chatbot", "STperD", "Mdn UTL", "Mdn STL", "User MTLD", "System MTLD"},
        {report.chatbot_id, format_aggregate(agg.st_per_d), format_aggregate(agg.median_utl),
         format_aggregate(agg.median_stl), format_aggregate(agg.user_mtld),
         format_aggregate(agg.system_mtld)});

    std::vector<std::string> headers{"Chatbot"};
    std::vector<std::string> row{report.chatbot_id};
    if (report.has_annotations) {
        headers.insert(headers.end(), {"DwithB", "TotalB", "BperST", "UniqueB"});
        row.insert(row.end(),
                   {format_aggregate(agg.d_with_b), format_aggregate(agg.total_b),
                    format_aggregate(agg.b_per_st), format_aggregate(agg.unique_b)});
    }
    if (report.has_ratings) {
        headers.push_back("Avg. Rating");
        row.push_back(agg.avg_rating ? format_aggregate(*agg.avg_rating) : "-");
    }
    headers.push_back("CCrash");
    row.push_back(format_aggregate(agg.c_crash));

    out << "\nBreakdown statistics\n" << render_table(headers, row);

    long over = 0;
    int longest = 0;
    for (const auto& run : report.per_run) {
        over += run.budget.over_length_user_turns;
        longest = std::max(longest, run.budget.longest_user_turn_words);
    }
    out << "\nUser turns over the advisory length budget: " << over
        << " (longest user turn: " << longest << " words)\n";
    return out.str();
}

} // namespace chatprobe
