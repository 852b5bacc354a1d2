#pragma once

// Shared test fixtures plus an independent straight-from-formula evaluator
// used as the oracle for every metric. The oracle deliberately avoids the
// production kernels and metric code: plain sequential loops only.

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include "pumpscan/types.hpp"

namespace testsupport {

using namespace pumpscan;

inline OrderBookSnapshot make_book(std::vector<Level> bids, std::vector<Level> asks,
                                   TimestampMs ts = 1'000, std::string symbol = "COIN",
                                   std::string exchange = "testex") {
    OrderBookSnapshot book;
    book.ts = ts;
    book.exchange = std::move(exchange);
    book.symbol = std::move(symbol);
    book.bids = std::move(bids);
    book.asks = std::move(asks);
    return book;
}

inline Trade make_trade(TimestampMs ts, double price, double qty,
                        std::optional<Side> side = Side::Buy, std::string symbol = "COIN",
                        std::string id = "") {
    Trade t;
    t.ts = ts;
    t.exchange = "testex";
    t.symbol = std::move(symbol);
    t.price = price;
    t.quantity = qty;
    t.taker_side = side;
    t.trade_id = id.empty() ? "t" + std::to_string(ts) : std::move(id);
    return t;
}

inline TradeWindow make_window(std::vector<Trade> trades, TimestampMs start = 0,
                               TimestampMs end = 1'001, std::string symbol = "COIN") {
    TradeWindow w;
    w.symbol = std::move(symbol);
    w.window_start = start;
    w.window_end = end;
    w.trades = std::move(trades);
    return w;
}

// uniform double in [lo, hi) from a raw engine (bit-stable across platforms)
inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
}

inline OrderBookSnapshot random_book(std::mt19937_64& rng, std::size_t max_depth = 12) {
    const std::size_t bid_n = rng() % (max_depth + 1);
    const std::size_t ask_n = bid_n == 0 ? 1 + rng() % max_depth : rng() % (max_depth + 1);
    const double mid = uniform(rng, 0.01, 100.0);
    std::vector<Level> bids, asks;
    double price = mid * (1.0 - uniform(rng, 0.0001, 0.01));
    for (std::size_t i = 0; i < bid_n; ++i) {
        bids.push_back(Level{price, uniform(rng, 0.1, 1000.0)});
        price *= 1.0 - uniform(rng, 0.0001, 0.02);
    }
    price = mid * (1.0 + uniform(rng, 0.0001, 0.01));
    for (std::size_t i = 0; i < ask_n; ++i) {
        asks.push_back(Level{price, uniform(rng, 0.1, 1000.0)});
        price *= 1.0 + uniform(rng, 0.0001, 0.02);
    }
    return make_book(std::move(bids), std::move(asks));
}

inline TradeWindow random_window(std::mt19937_64& rng, std::size_t max_trades = 40) {
    const std::size_t n = rng() % (max_trades + 1);
    std::vector<Trade> trades;
    TimestampMs ts = 1;
    for (std::size_t i = 0; i < n; ++i) {
        ts += static_cast<TimestampMs>(rng() % 20);
        const double price = uniform(rng, 0.01, 100.0);
        const double qty = uniform(rng, 0.01, 500.0);
        trades.push_back(make_trade(ts, price, qty, rng() % 2 ? Side::Buy : Side::Sell));
    }
    return make_window(std::move(trades), 0, ts + 1);
}

// --- literal-formula oracle --------------------------------------------------

namespace oracle {

inline double bid_ask_spread(const OrderBookSnapshot& b) {
    return b.asks.front().price - b.bids.front().price;
}

inline double avg_order_size(const OrderBookSnapshot& b) {
    double sum = 0.0;
    for (const auto& l : b.bids) sum += l.quantity;
    for (const auto& l : b.asks) sum += l.quantity;
    return sum / static_cast<double>(b.bids.size() + b.asks.size());
}

inline double imbalance(const OrderBookSnapshot& b) {
    double bid = 0.0, ask = 0.0;
    for (const auto& l : b.bids) bid += l.quantity;
    for (const auto& l : b.asks) ask += l.quantity;
    return bid / ask;
}

inline double imbalance_ratio(const OrderBookSnapshot& b) {
    double bid_notional = 0.0, ask_notional = 0.0;
    for (const auto& l : b.bids) bid_notional += l.price * l.quantity;
    for (const auto& l : b.asks) ask_notional += l.price * l.quantity;
    const double p_mid = (b.bids.front().price + b.asks.front().price) / 2.0;
    return (bid_notional * p_mid - ask_notional * p_mid) / (bid_notional + ask_notional);
}

inline double book_pressure(const OrderBookSnapshot& b) {
    double bid = 0.0, ask = 0.0;
    for (const auto& l : b.bids) bid += l.quantity;
    for (const auto& l : b.asks) ask += l.quantity;
    return bid / (bid + ask);
}

inline double book_slope(const OrderBookSnapshot& b, std::size_t levels) {
    const std::size_t usable = std::min({levels, b.bids.size(), b.asks.size()});
    std::vector<double> diffs;
    for (std::size_t i = 1; i < usable; ++i) {
        diffs.push_back((b.bids[i].quantity - b.bids[i - 1].quantity) -
                        (b.asks[i].quantity - b.asks[i - 1].quantity));
    }
    std::sort(diffs.begin(), diffs.end());
    const std::size_t n = diffs.size();
    return n % 2 == 1 ? diffs[n / 2] : (diffs[n / 2 - 1] + diffs[n / 2]) / 2.0;
}

inline double order_flow_imbalance(const OrderBookSnapshot& b) {
    double bid = 0.0, ask = 0.0;
    for (const auto& l : b.bids) bid += l.quantity;
    for (const auto& l : b.asks) ask += l.quantity;
    return bid - ask;
}

inline double liquidity_consumption(const TradeWindow& w) {
    double sum = 0.0;
    for (const auto& t : w.trades) sum += t.quantity;
    return sum;
}

inline double market_orders_impact(const TradeWindow& w) {
    double buy = 0.0, sell = 0.0;
    for (const auto& t : w.trades) {
        if (t.taker_side == Side::Buy) buy += t.quantity;
        if (t.taker_side == Side::Sell) sell += t.quantity;
    }
    return buy + sell;
}

inline double vwap(const TradeWindow& w) {
    double pq = 0.0, q = 0.0;
    for (const auto& t : w.trades) {
        pq += t.price * t.quantity;
        q += t.quantity;
    }
    return pq / q;
}

inline double high_low_spread(const TradeWindow& w) {
    double hi = w.trades.front().price, lo = w.trades.front().price;
    for (const auto& t : w.trades) {
        hi = std::max(hi, t.price);
        lo = std::min(lo, t.price);
    }
    return hi - lo;
}

inline double taker_volume(const TradeWindow& w, Side side) {
    double sum = 0.0;
    for (const auto& t : w.trades) {
        if (t.taker_side == side) sum += t.quantity;
    }
    return sum;
}

inline double relative_impact(const OrderBookSnapshot& before, const OrderBookSnapshot& after) {
    const double mid_before = (before.bids.front().price + before.asks.front().price) / 2.0;
    const double mid_after = (after.bids.front().price + after.asks.front().price) / 2.0;
    return (mid_after - mid_before) / mid_before;
}

}  // namespace oracle

inline bool close_rel(double a, double b, double tol = 1e-9) {
    const double scale = std::max({std::fabs(a), std::fabs(b), 1e-300});
    return std::fabs(a - b) <= tol * scale || std::fabs(a - b) <= 1e-15;
}

}  // namespace testsupport
