#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "pumpscan/types.hpp"

namespace pumpscan {

// Deterministic multi-symbol scenario generator. All randomness comes from a
// counter-based generator keyed by (seed, symbol, stream), so per-symbol
// output is reproducible and independent of generation order; the same
// config always produces byte-identical files.
struct ScenarioConfig {
    std::uint64_t seed = 1;
    std::size_t symbol_count = 51;
    std::string exchange = "simex";
    std::string symbol_prefix = "SYM";

    TimestampMs base_ts = 1'725'148'800'000;  // scenario clock origin
    TimestampMs span_ms = 3 * kMsPerDay;

    // Snapshot grid: coarse cadence for early history, fine cadence inside
    // the final fine_window before the span ends (0 = coarse everywhere).
    TimestampMs fine_cadence_ms = 5 * kMsPerSecond;
    TimestampMs coarse_cadence_ms = 5 * kMsPerSecond;
    TimestampMs fine_window_ms = 0;

    // Per-symbol baseline dynamics (each symbol draws its own parameters
    // around these from its seed stream).
    double mid_price_min = 0.05;
    double mid_price_max = 5.0;
    double mean_trade_rate_per_s = 0.6;
    double mean_trade_size = 120.0;
    std::size_t depth_levels = 10;
    double step_volatility = 0.001;   // stddev of per-step mid return
    double mean_reversion = 0.02;     // pull back to the anchor mid per step
    double spread_fraction = 0.002;   // quoted spread as a fraction of mid

    // Injection: the accumulation signature of the target symbol before
    // pump_time. buy_volume_multiplier k tops the accumulation window's
    // taker-buy volume up to k x the symbol's mean window volume (k <= 1
    // disables the surge); sell_wall_multiplier scales resting ask quantities
    // inside the window (1 disables); price impact ramps the mid up linearly
    // with the injected volume fraction.
    std::size_t target_index = 0;
    TimestampMs pump_time = 0;  // 0 = span end minus 5 minutes
    TimestampMs accumulation_window_ms = 60 * kMsPerSecond;
    double buy_volume_multiplier = 5.0;
    double sell_wall_multiplier = 1.5;
    double price_impact_fraction = 0.02;

    TimestampMs effective_pump_time() const noexcept {
        return pump_time != 0 ? pump_time : base_ts + span_ms - 5 * kMsPerMinute;
    }
};

struct SymbolParams {
    std::string symbol;
    double anchor_mid = 0.0;
    double trade_rate_per_s = 0.0;
    double mean_trade_size = 0.0;
    double level_quantity = 0.0;  // mean resting size per ladder level
    double step_volatility = 0.0;
};

struct InjectionParams {
    std::string symbol;
    std::string exchange_hint;  // exchange written on injected trades
    TimestampMs window_start = 0;
    TimestampMs window_end = 0;  // half-open [start, end)
    double buy_volume_multiplier = 1.0;
    double sell_wall_multiplier = 1.0;
    double price_impact_fraction = 0.0;
    std::uint64_t seed = 0;
};

struct ScenarioResult {
    std::vector<std::filesystem::path> files;
    PumpEvent ground_truth;
    TimestampMs exact_pump_time = 0;
};

// Number of snapshot grid points for one symbol under the config's cadence
// scheme (coarse early, fine inside the final fine_window).
std::size_t cadence_step_count(const ScenarioConfig& cfg) noexcept;

// The per-symbol parameters drawn from the scenario seed.
SymbolParams scenario_symbol_params(const ScenarioConfig& cfg, std::size_t index);

// Baseline (un-injected) record stream of one symbol, time-ordered.
std::vector<EventRecord> generate_symbol_stream(const ScenarioConfig& cfg, std::size_t index);

// Applies the accumulation signature: extra taker-buy trades, an ask-side
// wall and linear price impact, all strictly inside [window_start,
// window_end) and only on records of the target symbol; every other record
// passes through untouched. Throws Error{WindowOutOfRange} when the stream
// does not cover the window.
std::vector<EventRecord> inject_pump(std::vector<EventRecord> stream,
                                     const InjectionParams& params);

// Writes <SYMBOL>_snapshots.jsonl / <SYMBOL>_trades.jsonl per symbol plus
// ground_truth.json into out_dir. jobs parallelizes across symbols without
// affecting output. Throws Error{InvalidConfig} on a bad config.
ScenarioResult generate_scenario(const ScenarioConfig& cfg,
                                 const std::filesystem::path& out_dir,
                                 std::size_t jobs = 1);

// JSON round-trip for ground_truth.json ({"config":..., "event":...,
// "pump_time":...}).
std::string encode_ground_truth(const ScenarioConfig& cfg, const PumpEvent& event);
struct GroundTruth {
    ScenarioConfig config;
    PumpEvent event;
    TimestampMs pump_time = 0;
};
GroundTruth parse_ground_truth(const std::string& text);

}  // namespace pumpscan
