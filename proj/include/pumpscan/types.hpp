#pragma once

#include <array>
#include <bitset>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pumpscan/errors.hpp"

namespace pumpscan {

// All timestamps are UTC epoch milliseconds. Integer everywhere so ordering
// across exchanges never depends on timezone handling.
using TimestampMs = std::int64_t;

constexpr TimestampMs kMsPerSecond = 1'000;
constexpr TimestampMs kMsPerMinute = 60'000;
constexpr TimestampMs kMsPerHour = 3'600'000;
constexpr TimestampMs kMsPerDay = 86'400'000;

// Rounds to the nearest hour boundary; minute >= 30 rounds up.
// Works for timestamps before the epoch as well (floor division).
TimestampMs round_to_nearest_hour(TimestampMs ts) noexcept;

enum class Side : std::uint8_t { Buy, Sell };

struct Level {
    double price = 0.0;
    double quantity = 0.0;

    bool operator==(const Level&) const = default;
};

// One exchange depth snapshot. Bids are best (highest price) first, asks are
// best (lowest price) first. Crossed books (best bid >= best ask) are
// representable; metric code decides how to treat them.
struct OrderBookSnapshot {
    TimestampMs ts = 0;
    std::string exchange;
    std::string symbol;
    std::vector<Level> bids;
    std::vector<Level> asks;

    std::size_t bid_depth() const noexcept { return bids.size(); }
    std::size_t ask_depth() const noexcept { return asks.size(); }
    // Levels per side actually present (the deeper side when unequal).
    std::size_t depth() const noexcept { return std::max(bids.size(), asks.size()); }

    bool operator==(const OrderBookSnapshot&) const = default;
};

// One executed transaction. taker_side is the aggressing side; it is optional
// at the type level because some feeds omit it, but the wire format requires
// it (see jsonl.hpp).
struct Trade {
    TimestampMs ts = 0;
    std::string exchange;
    std::string symbol;
    double price = 0.0;
    double quantity = 0.0;
    std::optional<Side> taker_side;
    std::string trade_id;

    bool operator==(const Trade&) const = default;
};

enum class TokenStandard : std::uint8_t { Erc20, Bep20, Brc20, Rune, Other };

struct CoinMetadata {
    std::string symbol;
    std::string name;
    double market_cap_usd = 0.0;  // 0 means unreported
    std::optional<TokenStandard> token_standard;

    bool operator==(const CoinMetadata&) const = default;
};

// The six message categories, in pipeline precedence order for display only;
// classification order lives in classify.cpp.
enum class MessageLabel : std::uint8_t {
    PumpAnnouncement,
    Countdown,
    TargetCoinRelease,
    PumpResults,
    DelayOrCancellation,
    Noise,
};

std::string_view message_label_name(MessageLabel label) noexcept;
std::optional<MessageLabel> message_label_from(std::string_view name) noexcept;

struct LabeledMessage {
    TimestampMs ts = 0;
    std::string channel;
    std::string text;
    std::optional<MessageLabel> label;
    std::optional<std::string> extracted_symbol;
    std::optional<std::string> extracted_exchange;

    bool operator==(const LabeledMessage&) const = default;
};

struct PumpEvent {
    std::string symbol;
    std::string exchange;
    TimestampMs release_time = 0;  // always an exact hour boundary
    std::string source_channel;
    std::vector<std::string> message_ids;

    bool operator==(const PumpEvent&) const = default;
};

// Closed set of computed metrics. Order here fixes the column order of every
// CSV/report that enumerates metrics.
enum class MetricName : std::uint8_t {
    BidAskSpread,
    AvgOrderSize,
    Imbalance,
    ImbalanceRatio,
    BookPressure,
    BookSlope,
    LiquidityConsumption,
    OrderFlowImbalance,
    MarketOrderImpact,
    RelativeImpact,
    Vwap,
    HighLowSpread,
    TradeCount,
    TakerBuyVolume,
    TakerSellVolume,
};

constexpr std::size_t kMetricCount = 15;

constexpr std::array<MetricName, kMetricCount> kAllMetrics = {
    MetricName::BidAskSpread,      MetricName::AvgOrderSize,
    MetricName::Imbalance,         MetricName::ImbalanceRatio,
    MetricName::BookPressure,      MetricName::BookSlope,
    MetricName::LiquidityConsumption, MetricName::OrderFlowImbalance,
    MetricName::MarketOrderImpact, MetricName::RelativeImpact,
    MetricName::Vwap,              MetricName::HighLowSpread,
    MetricName::TradeCount,        MetricName::TakerBuyVolume,
    MetricName::TakerSellVolume,
};

std::string_view metric_name(MetricName m) noexcept;
std::optional<MetricName> metric_from(std::string_view name) noexcept;

// Per-symbol, per-window metric values. Every key of the closed set is always
// represented; values that could not be computed are explicitly absent rather
// than silently zero.
struct MetricVector {
    std::string symbol;
    TimestampMs window_start = 0;
    TimestampMs window_end = 0;

    std::array<double, kMetricCount> values{};
    std::bitset<kMetricCount> present;

    // Diagnostics: set when the underlying book had best bid >= best ask.
    bool crossed_book = false;

    std::optional<double> get(MetricName m) const noexcept {
        const auto i = static_cast<std::size_t>(m);
        if (!present.test(i)) return std::nullopt;
        return values[i];
    }
    void set(MetricName m, double v) noexcept {
        const auto i = static_cast<std::size_t>(m);
        values[i] = v;
        present.set(i);
    }
    void clear(MetricName m) noexcept {
        const auto i = static_cast<std::size_t>(m);
        values[i] = 0.0;
        present.reset(i);
    }
};

// Time-ordered trades of one symbol inside the half-open window [start, end).
struct TradeWindow {
    std::string symbol;
    TimestampMs window_start = 0;
    TimestampMs window_end = 0;
    std::vector<Trade> trades;

    // Throws if a trade falls outside the window or timestamps regress.
    void validate() const;
};

// Two snapshots of the same symbol/exchange with strictly increasing time.
struct BookPair {
    OrderBookSnapshot before;
    OrderBookSnapshot after;
};

enum class RecordKind : std::uint8_t { Snapshot, Trade, Message };

std::string_view record_kind_name(RecordKind kind) noexcept;

// Tagged union of the three stream payloads, ordered by merge tie-break rank:
// snapshot < trade < message.
struct EventRecord {
    std::variant<OrderBookSnapshot, Trade, LabeledMessage> payload;

    RecordKind kind() const noexcept {
        return static_cast<RecordKind>(payload.index());
    }
    TimestampMs ts() const noexcept;
    // Merge keys; messages without an extracted exchange/symbol sort with "".
    std::string_view exchange_key() const noexcept;
    std::string_view symbol_key() const noexcept;

    const OrderBookSnapshot& snapshot() const { return std::get<OrderBookSnapshot>(payload); }
    const Trade& trade() const { return std::get<Trade>(payload); }
    const LabeledMessage& message() const { return std::get<LabeledMessage>(payload); }
};

// Returns its argument iff every type invariant holds; sortedness is checked,
// never repaired. Throws Error with exactly one of: UnsortedLadder,
// NonPositiveValue, EmptyBothSides.
const OrderBookSnapshot& validate_snapshot(const OrderBookSnapshot& snapshot);

// Throws Error{NonPositiveValue} on non-finite or non-positive price/quantity.
const Trade& validate_trade(const Trade& trade);

}  // namespace pumpscan
