#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "pumpscan/types.hpp"

namespace pumpscan {

// Side flags for the SoA trade path (see TradeSlice).
constexpr std::uint8_t kSideBuy = 0;
constexpr std::uint8_t kSideSell = 1;
constexpr std::uint8_t kSideMissing = 255;

// Column view over the trades of one window. This is the layout the
// streaming pipeline keeps per symbol so the reductions below can run over
// contiguous memory.
struct TradeSlice {
    std::span<const double> price;
    std::span<const double> quantity;
    std::span<const std::uint8_t> side;

    std::size_t size() const noexcept { return price.size(); }
    bool empty() const noexcept { return price.empty(); }
};

struct MetricOptions {
    // Depth considered by order_book_slope.
    std::size_t slope_levels = 10;
};

// --- order book metrics -----------------------------------------------------

// Best ask price minus best bid price. May be <= 0 for crossed books; the
// caller flags that in MetricVector diagnostics. Throws EmptySide.
double bid_ask_spread(const OrderBookSnapshot& book);

// Arithmetic mean of all level quantities across both sides. Throws EmptySide
// when both sides are empty.
double average_order_size(const OrderBookSnapshot& book);

// Total bid quantity divided by total ask quantity. Throws ZeroDenominator
// when the ask side is empty.
double imbalance(const OrderBookSnapshot& book);

// Notional imbalance scaled by the mid price:
//   (N_bid - N_ask) * P_mid / (N_bid + N_ask)
// with N_side the sum of price*quantity over that side's levels and
// P_mid = (best bid + best ask) / 2. Throws EmptySide / ZeroDenominator.
double imbalance_ratio(const OrderBookSnapshot& book);

// Bid quantity share of total resting quantity, in [0, 1]. Throws
// ZeroDenominator when the book holds no quantity at all.
double order_book_pressure(const OrderBookSnapshot& book);

// Median over level index i of (Q_bid[i]-Q_bid[i-1]) - (Q_ask[i]-Q_ask[i-1]),
// levels best-first, considering at most `levels` levels per side. An even
// number of differences takes the mean of the two middle values. Throws
// InsufficientDepth unless both sides have >= 2 usable levels.
double order_book_slope(const OrderBookSnapshot& book, std::size_t levels = 10);

// Total bid quantity minus total ask quantity; positive means bid-heavy.
// Empty sides contribute zero.
double order_flow_imbalance(const OrderBookSnapshot& book) noexcept;

// --- trade window metrics ---------------------------------------------------

// Sum of executed quantities; empty window yields 0.
double liquidity_consumption(const TradeWindow& window) noexcept;
double liquidity_consumption(const TradeSlice& slice) noexcept;

// Taker-buy quantity plus taker-sell quantity. Numerically equal to
// liquidity_consumption when every trade carries a side; kept as a distinct
// metric. Throws MissingSide if any trade lacks the taker side.
double market_orders_impact(const TradeWindow& window);
double market_orders_impact(const TradeSlice& slice);

// Volume-weighted average price. Throws EmptyWindow when total quantity is 0.
double vwap(const TradeWindow& window);
double vwap(const TradeSlice& slice);

struct TradeWindowSummary {
    std::optional<double> high_low_spread;  // absent for an empty window
    std::size_t trade_count = 0;
    double taker_buy_volume = 0.0;
    double taker_sell_volume = 0.0;
};

// High-low spread, trade count and per-side taker volumes. Trades without a
// taker side count toward neither side volume.
TradeWindowSummary trade_window_summary(const TradeWindow& window) noexcept;
TradeWindowSummary trade_window_summary(const TradeSlice& slice) noexcept;

// --- cross-snapshot metric --------------------------------------------------

// Relative mid-price change from pair.before to pair.after, the mid being the
// mean of best bid and best ask. Throws EmptySide when any of the four sides
// is empty, SymbolMismatch when the snapshots disagree on symbol/exchange.
double relative_impact(const BookPair& pair);

// Mid price of a snapshot; throws EmptySide when a side is missing.
double mid_price(const OrderBookSnapshot& book);

// --- composition ------------------------------------------------------------

// Populates every metric of the closed set from one book, one trade window
// and an optional prior book (for relative_impact). Metric-level failures
// (empty sides, missing taker sides, ...) degrade to absent markers so a
// single illiquid book cannot poison a whole ranking pass. Throws
// SymbolMismatch when book and window disagree, std::invalid_argument when
// the window extends past the book's timestamp.
MetricVector compute_metric_vector(const OrderBookSnapshot& book, const TradeWindow& window,
                                   const OrderBookSnapshot* prior_book = nullptr,
                                   const MetricOptions& opts = {});

// Pipeline fast path over column data; any of book/prior_book may be null
// (their metrics become absent). window bounds are recorded verbatim.
MetricVector compute_metric_vector_from_parts(std::string symbol, TimestampMs window_start,
                                              TimestampMs window_end,
                                              const OrderBookSnapshot* book,
                                              const TradeSlice& trades,
                                              const OrderBookSnapshot* prior_book,
                                              const MetricOptions& opts = {});

}  // namespace pumpscan
