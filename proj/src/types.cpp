#include "pumpscan/types.hpp"

#include <cmath>

namespace pumpscan {

std::string_view errc_name(Errc code) noexcept {
    switch (code) {
        case Errc::UnsortedLadder: return "UnsortedLadder";
        case Errc::NonPositiveValue: return "NonPositiveValue";
        case Errc::EmptyBothSides: return "EmptyBothSides";
        case Errc::MalformedRecord: return "MalformedRecord";
        case Errc::SchemaViolation: return "SchemaViolation";
        case Errc::OutOfOrderInput: return "OutOfOrderInput";
        case Errc::IoFailure: return "IoFailure";
        case Errc::EmptySide: return "EmptySide";
        case Errc::ZeroDenominator: return "ZeroDenominator";
        case Errc::InsufficientDepth: return "InsufficientDepth";
        case Errc::MissingSide: return "MissingSide";
        case Errc::EmptyWindow: return "EmptyWindow";
        case Errc::SymbolMismatch: return "SymbolMismatch";
        case Errc::NonMonotonicTime: return "NonMonotonicTime";
        case Errc::NoScorableMetrics: return "NoScorableMetrics";
        case Errc::EmptyInput: return "EmptyInput";
        case Errc::MissingExtraction: return "MissingExtraction";
        case Errc::InsufficientHistory: return "InsufficientHistory";
        case Errc::UnknownTarget: return "UnknownTarget";
        case Errc::InsufficientCoverage: return "InsufficientCoverage";
        case Errc::DuplicateSymbol: return "DuplicateSymbol";
        case Errc::InvalidConfig: return "InvalidConfig";
        case Errc::WindowOutOfRange: return "WindowOutOfRange";
    }
    return "UnknownError";
}

TimestampMs round_to_nearest_hour(TimestampMs ts) noexcept {
    TimestampMs q = ts / kMsPerHour;
    TimestampMs rem = ts % kMsPerHour;
    if (rem < 0) {  // floor semantics for pre-epoch timestamps
        q -= 1;
        rem += kMsPerHour;
    }
    if (rem >= kMsPerHour / 2) q += 1;
    return q * kMsPerHour;
}

std::string_view message_label_name(MessageLabel label) noexcept {
    switch (label) {
        case MessageLabel::PumpAnnouncement: return "PumpAnnouncement";
        case MessageLabel::Countdown: return "Countdown";
        case MessageLabel::TargetCoinRelease: return "TargetCoinRelease";
        case MessageLabel::PumpResults: return "PumpResults";
        case MessageLabel::DelayOrCancellation: return "DelayOrCancellation";
        case MessageLabel::Noise: return "Noise";
    }
    return "Noise";
}

std::optional<MessageLabel> message_label_from(std::string_view name) noexcept {
    for (auto label : {MessageLabel::PumpAnnouncement, MessageLabel::Countdown,
                       MessageLabel::TargetCoinRelease, MessageLabel::PumpResults,
                       MessageLabel::DelayOrCancellation, MessageLabel::Noise}) {
        if (name == message_label_name(label)) return label;
    }
    return std::nullopt;
}

std::string_view metric_name(MetricName m) noexcept {
    switch (m) {
        case MetricName::BidAskSpread: return "bid_ask_spread";
        case MetricName::AvgOrderSize: return "avg_order_size";
        case MetricName::Imbalance: return "imbalance";
        case MetricName::ImbalanceRatio: return "imbalance_ratio";
        case MetricName::BookPressure: return "book_pressure";
        case MetricName::BookSlope: return "book_slope";
        case MetricName::LiquidityConsumption: return "liquidity_consumption";
        case MetricName::OrderFlowImbalance: return "order_flow_imbalance";
        case MetricName::MarketOrderImpact: return "market_order_impact";
        case MetricName::RelativeImpact: return "relative_impact";
        case MetricName::Vwap: return "vwap";
        case MetricName::HighLowSpread: return "high_low_spread";
        case MetricName::TradeCount: return "trade_count";
        case MetricName::TakerBuyVolume: return "taker_buy_volume";
        case MetricName::TakerSellVolume: return "taker_sell_volume";
    }
    return "unknown";
}

std::optional<MetricName> metric_from(std::string_view name) noexcept {
    for (auto m : kAllMetrics) {
        if (name == metric_name(m)) return m;
    }
    return std::nullopt;
}

std::string_view record_kind_name(RecordKind kind) noexcept {
    switch (kind) {
        case RecordKind::Snapshot: return "snapshot";
        case RecordKind::Trade: return "trade";
        case RecordKind::Message: return "message";
    }
    return "unknown";
}

TimestampMs EventRecord::ts() const noexcept {
    return std::visit([](const auto& p) { return p.ts; }, payload);
}

std::string_view EventRecord::exchange_key() const noexcept {
    switch (kind()) {
        case RecordKind::Snapshot: return snapshot().exchange;
        case RecordKind::Trade: return trade().exchange;
        case RecordKind::Message:
            return message().extracted_exchange ? std::string_view(*message().extracted_exchange)
                                                : std::string_view{};
    }
    return {};
}

std::string_view EventRecord::symbol_key() const noexcept {
    switch (kind()) {
        case RecordKind::Snapshot: return snapshot().symbol;
        case RecordKind::Trade: return trade().symbol;
        case RecordKind::Message:
            return message().extracted_symbol ? std::string_view(*message().extracted_symbol)
                                              : std::string_view{};
    }
    return {};
}

namespace {

bool positive_finite(double v) noexcept { return std::isfinite(v) && v > 0.0; }

void check_ladder_values(const std::vector<Level>& ladder, const char* side) {
    for (const Level& level : ladder) {
        if (!positive_finite(level.price) || !positive_finite(level.quantity)) {
            throw Error(Errc::NonPositiveValue,
                        std::string(side) + " ladder has a non-positive or non-finite value");
        }
    }
}

}  // namespace

const OrderBookSnapshot& validate_snapshot(const OrderBookSnapshot& snapshot) {
    if (snapshot.bids.empty() && snapshot.asks.empty()) {
        throw Error(Errc::EmptyBothSides, "snapshot has no levels on either side");
    }
    check_ladder_values(snapshot.bids, "bid");
    check_ladder_values(snapshot.asks, "ask");
    for (std::size_t i = 1; i < snapshot.bids.size(); ++i) {
        if (!(snapshot.bids[i].price < snapshot.bids[i - 1].price)) {
            throw Error(Errc::UnsortedLadder, "bid prices not strictly decreasing");
        }
    }
    for (std::size_t i = 1; i < snapshot.asks.size(); ++i) {
        if (!(snapshot.asks[i].price > snapshot.asks[i - 1].price)) {
            throw Error(Errc::UnsortedLadder, "ask prices not strictly increasing");
        }
    }
    return snapshot;
}

const Trade& validate_trade(const Trade& trade) {
    if (!positive_finite(trade.price) || !positive_finite(trade.quantity)) {
        throw Error(Errc::NonPositiveValue, "trade price/quantity must be finite and > 0");
    }
    return trade;
}

void TradeWindow::validate() const {
    TimestampMs prev = window_start;
    for (const Trade& t : trades) {
        if (t.ts < window_start || t.ts >= window_end) {
            throw std::invalid_argument("trade outside window bounds");
        }
        if (t.ts < prev) throw std::invalid_argument("trade timestamps regress");
        prev = t.ts;
    }
}

}  // namespace pumpscan
