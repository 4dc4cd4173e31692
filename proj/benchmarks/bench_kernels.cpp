// Microbenchmarks for the hot paths of offline analysis: metric kernels that
// run once per turn or per campaign, and prompt rendering, which runs before
// every LLM call.

#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "chatprobe/detector.hpp"
#include "chatprobe/metrics.hpp"
#include "chatprobe/taxonomy.hpp"
#include "chatprobe/types.hpp"
#include "chatprobe/user_simulator.hpp"

using namespace chatprobe;

namespace {

ChatbotConfig bench_config() {
    ChatbotConfig config;
    config.id = "bench_bot";
    config.name = "Bench Bot";
    config.description = "A bot that answers questions about train schedules and station services.";
    config.interaction_method = "text-based chat interface";
    config.chatbot_type = ChatbotType::task_oriented;
    config.task = "Look up departures, platforms and ticket prices for regional trains.";
    config.constraints = {"Answers must stay within the published timetable."};
    config.known_limitations = {"No live delay data."};
    config.available_languages = {"English"};
    config.typical_user_turn_length = "10 words";
    config.max_user_turn_length = "38 words";
    config.max_user_turns = 15;
    return config;
}

Persona bench_persona() {
    Persona persona;
    persona.persona_id = "bench_persona";
    persona.persona_type = PersonaType::standard;
    persona.name = "Dana Novak";
    persona.gender = "female";
    persona.age = 41;
    persona.background_info = {"Commutes daily between two regional towns.",
                               "Prefers short, direct answers."};
    for (const auto& key : big_five_keys()) persona.personality[key] = TraitLevel::medium;
    persona.interaction_style = {"asks one question at a time"};
    persona.task = "Find the cheapest off-peak ticket for tomorrow morning.";
    return persona;
}

std::vector<Turn> bench_history(int turns) {
    std::vector<Turn> history;
    history.reserve(turns);
    for (int i = 1; i <= turns; ++i) {
        const bool system = i % 2 == 1;
        history.push_back({i, system ? Role::system : Role::user,
                           system ? "The 08:12 service departs from platform 4 and costs 12.50."
                                  : "And what about the next train after that one, same route?"});
    }
    return history;
}

std::vector<std::string> random_tokens(std::size_t count, int vocab, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> pick(0, vocab - 1);
    std::vector<std::string> tokens;
    tokens.reserve(count);
    for (std::size_t i = 0; i < count; ++i) tokens.push_back("w" + std::to_string(pick(rng)));
    return tokens;
}

void BM_Mtld(benchmark::State& state) {
    const auto tokens = random_tokens(static_cast<std::size_t>(state.range(0)), 120, 7u);
    for (auto _ : state) {
        auto result = metrics::mtld(tokens);
        benchmark::DoNotOptimize(result);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Mtld)->RangeMultiplier(4)->Range(64, 16384);

void BM_Tokenize(benchmark::State& state) {
    const std::string text =
        "Hello there! I'd like to book a table for two, ideally around 19:30 -- "
        "somewhere central, not too loud, and (if possible) with vegetarian options.";
    for (auto _ : state) {
        auto tokens = metrics::tokenize(text);
        benchmark::DoNotOptimize(tokens);
    }
}
BENCHMARK(BM_Tokenize);

void BM_DetectionMetrics(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::mt19937 rng(11);
    std::bernoulli_distribution coin(0.3);
    std::vector<metrics::ConsolidatedLabel> pred(n), gold(n);
    for (std::size_t i = 0; i < n; ++i) {
        pred[i] = coin(rng) ? metrics::ConsolidatedLabel::B_plus
                            : metrics::ConsolidatedLabel::NB_minus;
        gold[i] = coin(rng) ? metrics::ConsolidatedLabel::B_plus
                            : metrics::ConsolidatedLabel::NB_minus;
    }
    for (auto _ : state) {
        auto result = metrics::detection_metrics(pred, gold);
        benchmark::DoNotOptimize(result);
    }
}
BENCHMARK(BM_DetectionMetrics)->Arg(256)->Arg(4096);

void BM_ErrorTypeMetrics(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto& registry = error_taxonomy();
    std::mt19937 rng(23);
    std::uniform_int_distribution<std::size_t> pick(0, registry.size() - 1);
    std::uniform_int_distribution<int> size(1, 4);
    auto random_set = [&] {
        metrics::ErrorTypeSet set;
        const int k = size(rng);
        for (int i = 0; i < k; ++i) set.insert(registry[pick(rng)].key);
        return set;
    };
    std::vector<metrics::ErrorTypeSet> pred(n), gold(n);
    for (std::size_t i = 0; i < n; ++i) {
        pred[i] = random_set();
        gold[i] = random_set();
    }
    for (auto _ : state) {
        auto result = metrics::error_type_metrics(pred, gold);
        benchmark::DoNotOptimize(result);
    }
}
BENCHMARK(BM_ErrorTypeMetrics)->Arg(256)->Arg(4096);

void BM_Spearman(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::mt19937 rng(31);
    std::uniform_int_distribution<int> score(1, 5);
    std::vector<double> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = score(rng); // heavy ties, like real 1-5 ratings
        ys[i] = score(rng);
    }
    for (auto _ : state) {
        double rho = metrics::spearman(xs, ys);
        benchmark::DoNotOptimize(rho);
    }
}
BENCHMARK(BM_Spearman)->Arg(64)->Arg(1024);

void BM_MaxTurnsFromHumanData(benchmark::State& state) {
    std::mt19937 rng(43);
    std::uniform_int_distribution<int> typical(3, 30);
    std::uniform_int_distribution<int> outlier(80, 200);
    std::vector<int> counts(512);
    for (std::size_t i = 0; i < counts.size(); ++i)
        counts[i] = i % 20 == 0 ? outlier(rng) : typical(rng);
    for (auto _ : state) {
        int budget = metrics::max_turns_from_human_data(counts);
        benchmark::DoNotOptimize(budget);
    }
}
BENCHMARK(BM_MaxTurnsFromHumanData);

void BM_AggregateRuns(benchmark::State& state) {
    std::mt19937 rng(53);
    std::uniform_real_distribution<double> value(0.0, 10.0);
    std::vector<double> per_run(32);
    for (auto& v : per_run) v = value(rng);
    for (auto _ : state) {
        auto result = metrics::aggregate_runs(per_run);
        benchmark::DoNotOptimize(result);
    }
}
BENCHMARK(BM_AggregateRuns);

void BM_RenderDetectorPrompt(benchmark::State& state) {
    const ChatbotConfig config = bench_config();
    const auto history = bench_history(static_cast<int>(state.range(0)));
    const std::string last = history.back().text;
    for (auto _ : state) {
        auto messages =
            render_detector_prompt(history, last, &config, DetectorMode::extended_taxonomy);
        benchmark::DoNotOptimize(messages);
    }
}
BENCHMARK(BM_RenderDetectorPrompt)->Arg(5)->Arg(29);

void BM_RenderSimulatorPrompt(benchmark::State& state) {
    const ChatbotConfig config = bench_config();
    const Persona persona = bench_persona();
    const auto history = bench_history(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        auto messages = build_simulator_prompt(config, persona, history,
                                               static_cast<int>(history.size()) + 1);
        benchmark::DoNotOptimize(messages);
    }
}
BENCHMARK(BM_RenderSimulatorPrompt)->Arg(4)->Arg(28);

} // namespace

BENCHMARK_MAIN();
