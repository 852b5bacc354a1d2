#include "pumpscan/events.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <map>
#include <tuple>

namespace pumpscan {

namespace {

std::uint32_t fnv1a(std::string_view s) noexcept {
    std::uint32_t h = 2166136261u;
    for (unsigned char c : s) {
        h ^= c;
        h *= 16777619u;
    }
    return h;
}

}  // namespace

std::string message_id(const LabeledMessage& message) {
    char hash[16];
    std::snprintf(hash, sizeof(hash), "%08x", fnv1a(message.text));
    return message.channel + "@" + std::to_string(message.ts) + "#" + hash;
}

std::vector<PumpEvent> cluster_pump_events(const std::vector<LabeledMessage>& messages) {
    struct Member {
        TimestampMs ts;
        std::string channel;
        std::string id;
    };
    using Key = std::tuple<TimestampMs, std::string, std::string>;  // release, exchange, symbol
    std::map<Key, std::vector<Member>> groups;

    for (const LabeledMessage& msg : messages) {
        if (msg.label != MessageLabel::TargetCoinRelease) continue;
        if (!msg.extracted_symbol || !msg.extracted_exchange) {
            throw Error(Errc::MissingExtraction,
                        "release message without extracted symbol/exchange (" +
                            message_id(msg) + ")");
        }
        const TimestampMs release = round_to_nearest_hour(msg.ts);
        groups[Key{release, *msg.extracted_exchange, *msg.extracted_symbol}].push_back(
            Member{msg.ts, msg.channel, message_id(msg)});
    }

    std::vector<PumpEvent> events;
    events.reserve(groups.size());
    for (auto& [key, members] : groups) {
        PumpEvent event;
        event.release_time = std::get<0>(key);
        event.exchange = std::get<1>(key);
        event.symbol = std::get<2>(key);
        // earliest message wins the channel attribution; ties by channel name
        const auto earliest = std::min_element(
            members.begin(), members.end(), [](const Member& a, const Member& b) {
                return std::tie(a.ts, a.channel) < std::tie(b.ts, b.channel);
            });
        event.source_channel = earliest->channel;
        for (auto& m : members) event.message_ids.push_back(std::move(m.id));
        std::sort(event.message_ids.begin(), event.message_ids.end());
        events.push_back(std::move(event));
    }
    return events;  // map iteration already yields (release, exchange, symbol) order
}

double topk_hit_rate(std::span<const int> ranks, int k) {
    if (ranks.empty()) throw Error(Errc::EmptyInput, "no ranks to evaluate");
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    std::size_t hits = 0;
    for (int rank : ranks) {
        if (rank <= k) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(ranks.size());
}

double volume_ratio(double pump_day_volume, double prior_day_volume) {
    if (!(prior_day_volume > 0.0)) {
        throw Error(Errc::ZeroDenominator, "prior-day volume must be > 0");
    }
    return pump_day_volume / prior_day_volume;
}

double order_size_increase_ratio(double avg_7d, double avg_pump_day) {
    if (!(avg_7d > 0.0)) {
        throw Error(Errc::ZeroDenominator, "7-day average order size must be > 0");
    }
    return avg_pump_day / avg_7d;
}

SpikeMetrics price_spike_metrics(std::span<const PricePoint> mid_series, TimestampMs t_pump,
                                 TimestampMs window_ms) {
    if (mid_series.empty() || mid_series.front().ts > t_pump - window_ms ||
        mid_series.back().ts < t_pump + window_ms) {
        throw Error(Errc::InsufficientCoverage,
                    "series must cover the full window around the pump");
    }
    // baseline: value at or latest before t_pump - window
    const PricePoint* baseline = nullptr;
    for (const PricePoint& p : mid_series) {
        if (p.ts > t_pump - window_ms) break;
        baseline = &p;
    }
    if (baseline == nullptr || !(baseline->price > 0.0)) {
        throw Error(Errc::InsufficientCoverage, "no positive baseline price before the window");
    }
    // peak: earliest maximum in [t_pump, t_pump + window]
    const PricePoint* peak = nullptr;
    for (const PricePoint& p : mid_series) {
        if (p.ts < t_pump) continue;
        if (p.ts > t_pump + window_ms) break;
        if (peak == nullptr || p.price > peak->price) peak = &p;
    }
    if (peak == nullptr) {
        throw Error(Errc::InsufficientCoverage, "no observations after the pump start");
    }
    SpikeMetrics out;
    out.time_to_peak_minutes =
        static_cast<double>(peak->ts - t_pump) / static_cast<double>(kMsPerMinute);
    out.spike_magnitude = peak->price / baseline->price;
    return out;
}

}  // namespace pumpscan
