#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pumpscan/types.hpp"

namespace pumpscan {

// Content-derived message id: "<channel>@<ts>#<fnv1a(text), 8 hex digits>".
// Ids depend only on the message itself so event clustering is invariant
// under input permutation.
std::string message_id(const LabeledMessage& message);

// Groups TargetCoinRelease messages into pump events keyed by
// (symbol, exchange, release timestamp rounded to the nearest hour); minute
// >= 30 rounds up. Non-release messages are ignored. Each event collects the
// member message ids (sorted) and uses the channel of its earliest message as
// source_channel. Output is sorted by (release_time, exchange, symbol).
// Throws Error{MissingExtraction} when a release message lacks the extracted
// symbol or exchange.
std::vector<PumpEvent> cluster_pump_events(const std::vector<LabeledMessage>& messages);

// Fraction of events whose recorded rank is <= k. Throws Error{EmptyInput}.
double topk_hit_rate(std::span<const int> ranks, int k);

// pump_day_volume / prior_day_volume. Throws Error{ZeroDenominator}.
double volume_ratio(double pump_day_volume, double prior_day_volume);

// avg_pump_day / avg_7d at full precision (round only for display).
// Throws Error{ZeroDenominator}.
double order_size_increase_ratio(double avg_7d, double avg_pump_day);

struct SpikeMetrics {
    double time_to_peak_minutes = 0.0;
    double spike_magnitude = 0.0;  // peak mid / baseline mid
};

struct PricePoint {
    TimestampMs ts = 0;
    double price = 0.0;
};

// Peak timing and magnitude of a pump's price spike. baseline = series value
// at or latest before t_pump - window; peak = maximum in
// [t_pump, t_pump + window], earliest timestamp on ties. The series must be
// time-ordered and cover [t_pump - window, t_pump + window]
// (Error{InsufficientCoverage} otherwise).
SpikeMetrics price_spike_metrics(std::span<const PricePoint> mid_series, TimestampMs t_pump,
                                 TimestampMs window_ms = 10 * kMsPerMinute);

}  // namespace pumpscan
