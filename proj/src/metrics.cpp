#include "pumpscan/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "pumpscan/kernels.hpp"

namespace pumpscan {

namespace {

// Scratch SoA buffers so the per-call ladder/window scatter never allocates
// after warm-up.
struct Scratch {
    std::vector<double> bid_px, bid_qty, ask_px, ask_qty;
    std::vector<double> trade_px, trade_qty;
    std::vector<std::uint8_t> trade_side;
};

thread_local Scratch tls_scratch;

void fill_side(const std::vector<Level>& ladder, std::vector<double>& px,
               std::vector<double>& qty) {
    px.resize(ladder.size());
    qty.resize(ladder.size());
    for (std::size_t i = 0; i < ladder.size(); ++i) {
        px[i] = ladder[i].price;
        qty[i] = ladder[i].quantity;
    }
}

TradeSlice fill_trades(const TradeWindow& window) {
    auto& s = tls_scratch;
    const std::size_t n = window.trades.size();
    s.trade_px.resize(n);
    s.trade_qty.resize(n);
    s.trade_side.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Trade& t = window.trades[i];
        s.trade_px[i] = t.price;
        s.trade_qty[i] = t.quantity;
        s.trade_side[i] = !t.taker_side            ? kSideMissing
                          : *t.taker_side == Side::Buy ? kSideBuy
                                                       : kSideSell;
    }
    return TradeSlice{s.trade_px, s.trade_qty, s.trade_side};
}

}  // namespace

double bid_ask_spread(const OrderBookSnapshot& book) {
    if (book.bids.empty() || book.asks.empty()) {
        throw Error(Errc::EmptySide, "bid_ask_spread needs both sides");
    }
    return book.asks.front().price - book.bids.front().price;
}

double average_order_size(const OrderBookSnapshot& book) {
    const std::size_t n = book.bids.size() + book.asks.size();
    if (n == 0) throw Error(Errc::EmptySide, "average_order_size on empty book");
    auto& s = tls_scratch;
    fill_side(book.bids, s.bid_px, s.bid_qty);
    fill_side(book.asks, s.ask_px, s.ask_qty);
    return (kernels::sum(s.bid_qty) + kernels::sum(s.ask_qty)) / static_cast<double>(n);
}

double imbalance(const OrderBookSnapshot& book) {
    if (book.asks.empty()) {
        throw Error(Errc::ZeroDenominator, "imbalance with empty ask side");
    }
    auto& s = tls_scratch;
    fill_side(book.bids, s.bid_px, s.bid_qty);
    fill_side(book.asks, s.ask_px, s.ask_qty);
    return kernels::sum(s.bid_qty) / kernels::sum(s.ask_qty);
}

double imbalance_ratio(const OrderBookSnapshot& book) {
    if (book.bids.empty() || book.asks.empty()) {
        throw Error(Errc::EmptySide, "imbalance_ratio needs both sides");
    }
    auto& s = tls_scratch;
    fill_side(book.bids, s.bid_px, s.bid_qty);
    fill_side(book.asks, s.ask_px, s.ask_qty);
    const double bid_notional = kernels::dot(s.bid_px, s.bid_qty);
    const double ask_notional = kernels::dot(s.ask_px, s.ask_qty);
    const double denom = bid_notional + ask_notional;
    if (denom == 0.0) {
        throw Error(Errc::ZeroDenominator, "imbalance_ratio with zero notional");
    }
    const double mid = (book.bids.front().price + book.asks.front().price) / 2.0;
    return (bid_notional * mid - ask_notional * mid) / denom;
}

double order_book_pressure(const OrderBookSnapshot& book) {
    auto& s = tls_scratch;
    fill_side(book.bids, s.bid_px, s.bid_qty);
    fill_side(book.asks, s.ask_px, s.ask_qty);
    const double bid_total = kernels::sum(s.bid_qty);
    const double total = bid_total + kernels::sum(s.ask_qty);
    if (total <= 0.0) {
        throw Error(Errc::ZeroDenominator, "order_book_pressure with no resting quantity");
    }
    return bid_total / total;
}

double order_book_slope(const OrderBookSnapshot& book, std::size_t levels) {
    const std::size_t usable =
        std::min({levels, book.bids.size(), book.asks.size()});
    if (usable < 2) {
        throw Error(Errc::InsufficientDepth, "order_book_slope needs >= 2 levels per side");
    }
    // consecutive-level quantity differences, best-first
    std::vector<double> diffs(usable - 1);
    for (std::size_t i = 1; i < usable; ++i) {
        const double d_bid = book.bids[i].quantity - book.bids[i - 1].quantity;
        const double d_ask = book.asks[i].quantity - book.asks[i - 1].quantity;
        diffs[i - 1] = d_bid - d_ask;
    }
    std::sort(diffs.begin(), diffs.end());
    const std::size_t n = diffs.size();
    if (n % 2 == 1) return diffs[n / 2];
    return (diffs[n / 2 - 1] + diffs[n / 2]) / 2.0;
}

double order_flow_imbalance(const OrderBookSnapshot& book) noexcept {
    auto& s = tls_scratch;
    fill_side(book.bids, s.bid_px, s.bid_qty);
    fill_side(book.asks, s.ask_px, s.ask_qty);
    return kernels::sum(s.bid_qty) - kernels::sum(s.ask_qty);
}

double liquidity_consumption(const TradeWindow& window) noexcept {
    return liquidity_consumption(fill_trades(window));
}

double liquidity_consumption(const TradeSlice& slice) noexcept {
    return kernels::sum(slice.quantity);
}

double market_orders_impact(const TradeWindow& window) {
    return market_orders_impact(fill_trades(window));
}

double market_orders_impact(const TradeSlice& slice) {
    // quantities are positive, so any missing-side trade shows up here
    if (kernels::masked_sum(slice.quantity, slice.side, kSideMissing) > 0.0) {
        throw Error(Errc::MissingSide, "trade without taker side");
    }
    return kernels::masked_sum(slice.quantity, slice.side, kSideBuy) +
           kernels::masked_sum(slice.quantity, slice.side, kSideSell);
}

double vwap(const TradeWindow& window) { return vwap(fill_trades(window)); }

double vwap(const TradeSlice& slice) {
    if (slice.empty()) throw Error(Errc::EmptyWindow, "vwap over empty window");
    const double total = kernels::sum(slice.quantity);
    if (total <= 0.0) throw Error(Errc::EmptyWindow, "vwap with zero traded quantity");
    return kernels::dot(slice.price, slice.quantity) / total;
}

TradeWindowSummary trade_window_summary(const TradeWindow& window) noexcept {
    return trade_window_summary(fill_trades(window));
}

TradeWindowSummary trade_window_summary(const TradeSlice& slice) noexcept {
    TradeWindowSummary out;
    out.trade_count = slice.size();
    if (!slice.empty()) {
        out.high_low_spread = kernels::max(slice.price) - kernels::min(slice.price);
    }
    out.taker_buy_volume = kernels::masked_sum(slice.quantity, slice.side, kSideBuy);
    out.taker_sell_volume = kernels::masked_sum(slice.quantity, slice.side, kSideSell);
    return out;
}

double mid_price(const OrderBookSnapshot& book) {
    if (book.bids.empty() || book.asks.empty()) {
        throw Error(Errc::EmptySide, "mid_price needs both sides");
    }
    return (book.bids.front().price + book.asks.front().price) / 2.0;
}

double relative_impact(const BookPair& pair) {
    if (pair.before.symbol != pair.after.symbol ||
        pair.before.exchange != pair.after.exchange) {
        throw Error(Errc::SymbolMismatch, "book pair mixes symbols or exchanges");
    }
    if (pair.before.ts >= pair.after.ts) {
        throw std::invalid_argument("book pair must be strictly increasing in time");
    }
    const double before = mid_price(pair.before);
    const double after = mid_price(pair.after);
    if (before == 0.0) throw Error(Errc::ZeroDenominator, "zero reference mid price");
    return (after - before) / before;
}

MetricVector compute_metric_vector(const OrderBookSnapshot& book, const TradeWindow& window,
                                   const OrderBookSnapshot* prior_book,
                                   const MetricOptions& opts) {
    if (book.symbol != window.symbol) {
        throw Error(Errc::SymbolMismatch, "book and window symbols differ");
    }
    if (window.window_end > book.ts + 1) {
        throw std::invalid_argument("trade window extends past the book snapshot");
    }
    return compute_metric_vector_from_parts(book.symbol, window.window_start,
                                            window.window_end, &book, fill_trades(window),
                                            prior_book, opts);
}

MetricVector compute_metric_vector_from_parts(std::string symbol, TimestampMs window_start,
                                              TimestampMs window_end,
                                              const OrderBookSnapshot* book,
                                              const TradeSlice& trades,
                                              const OrderBookSnapshot* prior_book,
                                              const MetricOptions& opts) {
    MetricVector out;
    out.symbol = std::move(symbol);
    out.window_start = window_start;
    out.window_end = window_end;

    // Anything a metric cannot produce stays an absent marker.
    auto try_set = [&out](MetricName m, auto&& fn) {
        try {
            out.set(m, fn());
        } catch (const Error&) {
            out.clear(m);
        }
    };

    if (book != nullptr) {
        const OrderBookSnapshot& b = *book;
        if (!b.bids.empty() && !b.asks.empty()) {
            out.crossed_book = b.bids.front().price >= b.asks.front().price;
        }
        try_set(MetricName::BidAskSpread, [&] { return bid_ask_spread(b); });
        try_set(MetricName::AvgOrderSize, [&] { return average_order_size(b); });
        try_set(MetricName::Imbalance, [&] { return imbalance(b); });
        try_set(MetricName::ImbalanceRatio, [&] { return imbalance_ratio(b); });
        try_set(MetricName::BookPressure, [&] { return order_book_pressure(b); });
        try_set(MetricName::BookSlope, [&] { return order_book_slope(b, opts.slope_levels); });
        out.set(MetricName::OrderFlowImbalance, order_flow_imbalance(b));
        if (prior_book != nullptr && prior_book->ts < b.ts) {
            try_set(MetricName::RelativeImpact,
                    [&] { return relative_impact(BookPair{*prior_book, b}); });
        }
    }

    out.set(MetricName::LiquidityConsumption, liquidity_consumption(trades));
    try_set(MetricName::MarketOrderImpact, [&] { return market_orders_impact(trades); });
    try_set(MetricName::Vwap, [&] { return vwap(trades); });

    const TradeWindowSummary summary = trade_window_summary(trades);
    if (summary.high_low_spread) {
        out.set(MetricName::HighLowSpread, *summary.high_low_spread);
    }
    out.set(MetricName::TradeCount, static_cast<double>(summary.trade_count));
    out.set(MetricName::TakerBuyVolume, summary.taker_buy_volume);
    out.set(MetricName::TakerSellVolume, summary.taker_sell_volume);

    return out;
}

}  // namespace pumpscan
