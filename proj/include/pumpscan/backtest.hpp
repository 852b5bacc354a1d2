#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pumpscan/config.hpp"
#include "pumpscan/scoring.hpp"
#include "pumpscan/types.hpp"

namespace pumpscan {

// PumpEvent JSONL round-trip (events files):
//   {"symbol":str,"exchange":str,"release_time":int_ms,
//    "source_channel":str,"message_ids":[str,...]}
std::string encode_pump_event(const PumpEvent& event);
PumpEvent parse_pump_event(std::string_view line);

struct BacktestConfig {
    std::vector<int> offsets_s = {20, 40, 60};
    std::vector<int> ks = {5, 10};
    std::vector<DataMode> modes = {DataMode::Both};
    std::uint64_t seed = 1;
    std::size_t sample_size = 50;  // decoys drawn per event
    std::size_t jobs = 1;
    DetectorConfig detector;
};

struct BacktestEventInput {
    PumpEvent event;
    // Exact pump instant when the fixture supplies one (the simulator does);
    // falls back to the event's clustered hour otherwise.
    std::optional<TimestampMs> exact_pump_time;
};

struct OffsetResult {
    int offset_s = 0;
    bool skipped = false;
    std::string skip_reason;        // InsufficientHistory | UnknownTarget
    int rank = 0;                   // 1-based; scored_count+1 if target unscorable
    std::size_t candidate_count = 0;
    std::size_t scored_count = 0;
    double target_score = 0.0;
};

struct EventResult {
    PumpEvent event;
    TimestampMs pump_time = 0;
    std::vector<std::string> candidates;  // sampled set, target included, sorted
    // per_mode[i][j]: result for cfg.modes[i] at cfg.offsets_s[j]
    std::vector<std::vector<OffsetResult>> per_mode;
};

struct BacktestReport {
    std::vector<int> offsets_s;
    std::vector<int> ks;
    std::vector<DataMode> modes;
    std::uint64_t seed = 0;
    std::size_t sample_size = 0;
    std::vector<EventResult> events;

    // Ranks over non-skipped events for one mode/offset.
    std::vector<int> ranks(DataMode mode, int offset_s) const;
    std::size_t skipped_count(DataMode mode, int offset_s) const;
    // Hit rate for one mode/offset/k (throws Error{EmptyInput} if every event
    // was skipped).
    double hit_rate(DataMode mode, int offset_s, int k) const;

    // Stable JSON rendering: per-event ranks plus a rows-by-offset,
    // columns-by-(mode x TOP-k) hit-rate table. Byte-identical for identical
    // runs.
    std::string to_json() const;
};

// Scores each event's candidate set at release - offset for every requested
// offset and mode, using only data at or before that instant. The candidate
// set is the true target plus `sample_size` decoys drawn (seeded, recorded)
// from the symbols present in the data. Deterministic for a fixed seed,
// independent of cfg.jobs.
BacktestReport run_backtest(const std::vector<BacktestEventInput>& events,
                            const std::vector<EventRecord>& records,
                            const BacktestConfig& cfg);

// Convenience: loads and merges the record files in data_dir first.
BacktestReport run_backtest(const std::vector<BacktestEventInput>& events,
                            const std::filesystem::path& data_dir,
                            const BacktestConfig& cfg);

}  // namespace pumpscan
