#pragma once

#include <filesystem>

#include "pumpscan/filter.hpp"
#include "pumpscan/scoring.hpp"
#include "pumpscan/types.hpp"

namespace pumpscan {

// Detection model knobs. Defaults: three-day history, five-minute short-term
// window sampled every five seconds, thirty samples before a metric becomes
// scorable.
struct DetectorConfig {
    TimestampMs baseline_span_ms = 3 * kMsPerDay;
    TimestampMs short_window_ms = 5 * kMsPerMinute;
    TimestampMs cadence_ms = 5 * kMsPerSecond;
    std::int64_t min_samples = 30;
    double epsilon_sigma = 1e-12;
    std::size_t slope_levels = 10;
    WeightMap weights = default_weights();
    DirectionMap directions = default_directions();

    ScoringParams scoring_params() const noexcept {
        return ScoringParams{min_samples, epsilon_sigma};
    }
};

struct AppConfig {
    DetectorConfig detector;
    FilterConfig filter;
    std::size_t backtest_sample_size = 50;  // decoys drawn per event
};

// Key-value config file, one `key = value` per line, '#' comments.
//
//   baseline_span_s   = 259200
//   short_window_s    = 300
//   cadence_s         = 5
//   min_samples       = 30
//   epsilon_sigma     = 1e-12
//   slope_levels      = 10
//   weight.vwap       = 1.0            # any metric name
//   direction.imbalance = -1           # +1 or -1
//   mcap_min          = 0
//   mcap_max          = 60000000
//   include_unreported = true
//   derivative_patterns = 3L,3S,5L,5S,UP,DOWN,BULL,BEAR   # ~PAT = infix match
//   backtest_sample_size = 50
//
// Unknown keys and malformed values raise Error{InvalidConfig} with the line.
AppConfig load_config(const std::filesystem::path& path);

// Parses config text (exposed for tests).
AppConfig parse_config(std::string_view text, std::string_view origin = "<config>");

}  // namespace pumpscan
