#include <doctest.h>

#include <random>

#include "pumpscan/metrics.hpp"
#include "support.hpp"

using namespace pumpscan;
using namespace testsupport;

namespace {

Errc code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    throw std::logic_error("expected an Error");
}

}  // namespace

TEST_CASE("bid_ask_spread") {
    CHECK(bid_ask_spread(make_book({{10.0, 5}}, {{10.2, 4}})) ==
          doctest::Approx(0.2).epsilon(1e-9));
    CHECK(bid_ask_spread(make_book({{10.0, 5}}, {{10.0, 4}})) == 0.0);
    // crossed books return the negative spread as-is
    CHECK(bid_ask_spread(make_book({{10.5, 5}}, {{10.0, 4}})) == doctest::Approx(-0.5));
    CHECK(code_of([] { bid_ask_spread(make_book({{10.0, 5}}, {})); }) == Errc::EmptySide);
}

TEST_CASE("average_order_size") {
    CHECK(average_order_size(make_book({{10.0, 5}, {9.9, 3}}, {{10.2, 4}, {10.3, 6}})) == 4.5);
    CHECK(average_order_size(make_book({}, {{10.2, 7}})) == 7.0);
    CHECK(code_of([] { average_order_size(make_book({}, {})); }) == Errc::EmptySide);
}

TEST_CASE("imbalance") {
    CHECK(imbalance(make_book({{10.0, 5}, {9.9, 3}}, {{10.2, 4}, {10.3, 6}})) ==
          doctest::Approx(0.8));
    CHECK(imbalance(make_book({{10.0, 5}}, {{10.2, 5}})) == 1.0);
    CHECK(code_of([] { imbalance(make_book({{10.0, 5}}, {})); }) == Errc::ZeroDenominator);
}

TEST_CASE("imbalance_ratio matches the printed formula") {
    // symmetric notionals cancel
    CHECK(imbalance_ratio(make_book({{10.0, 5}}, {{10.0, 5}})) == 0.0);
    // N_bid = 50, N_ask = 51, P_mid = 10.1 -> 10.1 * (-1/101) = -0.1
    CHECK(imbalance_ratio(make_book({{10.0, 5}}, {{10.2, 5}})) ==
          doctest::Approx(-0.1).epsilon(1e-12));
    CHECK(code_of([] { imbalance_ratio(make_book({{10.0, 5}}, {})); }) == Errc::EmptySide);
}

TEST_CASE("order_book_pressure") {
    CHECK(order_book_pressure(make_book({{10.0, 5}, {9.9, 3}}, {{10.2, 4}, {10.3, 6}})) ==
          doctest::Approx(8.0 / 18.0));
    CHECK(order_book_pressure(make_book({{10.0, 8}}, {})) == 1.0);
    CHECK(order_book_pressure(make_book({{10.0, 9}}, {{10.2, 9}})) == 0.5);
    CHECK(code_of([] { order_book_pressure(make_book({}, {})); }) == Errc::ZeroDenominator);
}

TEST_CASE("order_book_slope") {
    // identical ladders cancel level by level
    CHECK(order_book_slope(make_book({{10.0, 5}, {9.9, 3}, {9.8, 7}},
                                     {{10.2, 5}, {10.3, 3}, {10.4, 7}})) == 0.0);
    // dBid = -2, dAsk = +2 -> median(-4)
    CHECK(order_book_slope(make_book({{10.0, 5}, {9.9, 3}}, {{10.2, 4}, {10.3, 6}})) == -4.0);
    CHECK(code_of([] {
              order_book_slope(make_book({{10.0, 5}}, {{10.2, 4}, {10.3, 6}}));
          }) == Errc::InsufficientDepth);
    // levels parameter truncates the ladder
    const auto book = make_book({{10.0, 1}, {9.9, 2}, {9.8, 100}},
                                {{10.2, 1}, {10.3, 2}, {10.4, 3}});
    CHECK(order_book_slope(book, 2) == 0.0);  // only the first difference survives
}

TEST_CASE("order_flow_imbalance") {
    CHECK(order_flow_imbalance(make_book({{10.0, 5}, {9.9, 3}}, {{10.2, 4}, {10.3, 6}})) ==
          doctest::Approx(-2.0));
    CHECK(order_flow_imbalance(make_book({}, {})) == 0.0);
    CHECK(order_flow_imbalance(make_book({{10.0, 8}}, {})) == 8.0);
}

TEST_CASE("liquidity_consumption") {
    CHECK(liquidity_consumption(make_window({make_trade(1, 10, 2), make_trade(2, 11, 1)})) ==
          3.0);
    CHECK(liquidity_consumption(make_window({})) == 0.0);
    CHECK(liquidity_consumption(make_window({make_trade(1, 0.012, 500)})) == 500.0);
}

TEST_CASE("market_orders_impact") {
    CHECK(market_orders_impact(make_window({make_trade(1, 10, 3, Side::Buy),
                                            make_trade(2, 11, 2, Side::Sell)})) == 5.0);
    CHECK(market_orders_impact(make_window({})) == 0.0);
    CHECK(code_of([] {
              market_orders_impact(make_window({make_trade(1, 10, 3, std::nullopt)}));
          }) == Errc::MissingSide);
}

TEST_CASE("vwap") {
    CHECK(vwap(make_window({make_trade(1, 10, 2), make_trade(2, 11, 1)})) ==
          doctest::Approx(31.0 / 3.0).epsilon(1e-12));
    CHECK(vwap(make_window({make_trade(1, 7, 123.4)})) == 7.0);
    CHECK(code_of([] { vwap(make_window({})); }) == Errc::EmptyWindow);
}

TEST_CASE("trade_window_summary") {
    const auto summary = trade_window_summary(
        make_window({make_trade(1, 10, 2, Side::Buy), make_trade(2, 11, 1, Side::Sell)}));
    CHECK(summary.high_low_spread == 1.0);
    CHECK(summary.trade_count == 2);
    CHECK(summary.taker_buy_volume == 2.0);
    CHECK(summary.taker_sell_volume == 1.0);

    const auto empty = trade_window_summary(make_window({}));
    CHECK(!empty.high_low_spread);
    CHECK(empty.trade_count == 0);
    CHECK(empty.taker_buy_volume == 0.0);
    CHECK(empty.taker_sell_volume == 0.0);

    const auto flat = trade_window_summary(
        make_window({make_trade(1, 10, 2), make_trade(2, 10, 5), make_trade(3, 10, 1)}));
    CHECK(flat.high_low_spread == 0.0);
}

TEST_CASE("relative_impact uses mid prices") {
    const auto before = make_book({{9.9, 5}}, {{10.1, 5}}, 1'000);
    const auto after = make_book({{10.4, 5}}, {{10.6, 5}}, 2'000);
    CHECK(relative_impact(BookPair{before, after}) == doctest::Approx(0.05).epsilon(1e-12));

    auto same = after;
    same.ts = 3'000;
    CHECK(relative_impact(BookPair{after, same}) == 0.0);

    CHECK(code_of([&] {
              relative_impact(BookPair{make_book({{9.9, 5}}, {}, 1000), after});
          }) == Errc::EmptySide);
    CHECK(code_of([&] {
              auto other = after;
              other.symbol = "OTHER";
              other.ts = 3'000;
              relative_impact(BookPair{after, other});
          }) == Errc::SymbolMismatch);
}

TEST_CASE("compute_metric_vector populates all fifteen keys") {
    const auto book = make_book({{10.0, 5}, {9.9, 3}}, {{10.2, 4}, {10.3, 6}}, 1'000);
    const auto prior = make_book({{9.8, 5}}, {{10.0, 5}}, 1);
    const auto window = make_window({make_trade(500, 10, 2, Side::Buy),
                                     make_trade(700, 11, 1, Side::Sell)});
    const MetricVector v = compute_metric_vector(book, window, &prior);
    for (auto m : kAllMetrics) {
        CAPTURE(metric_name(m));
        CHECK(v.get(m).has_value());
    }
    CHECK(v.get(MetricName::BidAskSpread) == doctest::Approx(0.2));
    CHECK(v.get(MetricName::TradeCount) == 2.0);
    CHECK(!v.crossed_book);
}

TEST_CASE("compute_metric_vector degrades failures to absent markers") {
    // empty trade window: trade keys zero or absent per their contracts
    const auto book = make_book({{10.0, 5}, {9.9, 3}}, {{10.2, 4}, {10.3, 6}}, 1'000);
    const MetricVector v = compute_metric_vector(book, make_window({}));
    CHECK(v.get(MetricName::LiquidityConsumption) == 0.0);
    CHECK(v.get(MetricName::MarketOrderImpact) == 0.0);
    CHECK(v.get(MetricName::TradeCount) == 0.0);
    CHECK(v.get(MetricName::TakerBuyVolume) == 0.0);
    CHECK(!v.get(MetricName::Vwap));
    CHECK(!v.get(MetricName::HighLowSpread));
    CHECK(!v.get(MetricName::RelativeImpact));  // no prior book
    CHECK(v.get(MetricName::BookPressure).has_value());

    // one-sided book: spread and ratio absent, pressure still defined
    const auto lopsided = make_book({{10.0, 5}, {9.9, 3}}, {}, 1'000);
    const MetricVector v2 = compute_metric_vector(lopsided, make_window({}));
    CHECK(!v2.get(MetricName::BidAskSpread));
    CHECK(!v2.get(MetricName::ImbalanceRatio));
    CHECK(!v2.get(MetricName::Imbalance));
    CHECK(v2.get(MetricName::BookPressure) == 1.0);
    CHECK(v2.get(MetricName::OrderFlowImbalance) == 8.0);
}

TEST_CASE("compute_metric_vector rejects mismatched symbols") {
    const auto book = make_book({{10.0, 5}}, {{10.2, 4}});
    auto window = make_window({});
    window.symbol = "OTHER";
    CHECK(code_of([&] { compute_metric_vector(book, window); }) == Errc::SymbolMismatch);
}

TEST_CASE("compute_metric_vector flags crossed books") {
    const auto crossed = make_book({{10.5, 5}}, {{10.2, 4}}, 1'000);
    const MetricVector v = compute_metric_vector(crossed, make_window({}));
    CHECK(v.crossed_book);
    CHECK(v.get(MetricName::BidAskSpread) == doctest::Approx(-0.3));
}

TEST_CASE("oracle equivalence on 1000 random books and windows") {
    std::mt19937_64 rng(20240901);
    int books_checked = 0, windows_checked = 0;
    for (int i = 0; i < 1000; ++i) {
        const auto book = random_book(rng);
        if (!book.bids.empty() && !book.asks.empty()) {
            ++books_checked;
            CHECK(close_rel(bid_ask_spread(book), oracle::bid_ask_spread(book)));
            CHECK(close_rel(imbalance(book), oracle::imbalance(book)));
            CHECK(close_rel(imbalance_ratio(book), oracle::imbalance_ratio(book)));
            CHECK(close_rel(order_book_pressure(book), oracle::book_pressure(book)));
            if (book.bids.size() >= 2 && book.asks.size() >= 2) {
                CHECK(close_rel(order_book_slope(book, 10), oracle::book_slope(book, 10)));
            }
        }
        if (!book.bids.empty() || !book.asks.empty()) {
            CHECK(close_rel(average_order_size(book), oracle::avg_order_size(book)));
        }
        CHECK(close_rel(order_flow_imbalance(book), oracle::order_flow_imbalance(book)));

        const auto window = random_window(rng);
        CHECK(close_rel(liquidity_consumption(window), oracle::liquidity_consumption(window)));
        CHECK(close_rel(market_orders_impact(window), oracle::market_orders_impact(window)));
        if (!window.trades.empty()) {
            ++windows_checked;
            CHECK(close_rel(vwap(window), oracle::vwap(window)));
            const auto summary = trade_window_summary(window);
            CHECK(close_rel(*summary.high_low_spread, oracle::high_low_spread(window)));
            CHECK(close_rel(summary.taker_buy_volume,
                            oracle::taker_volume(window, Side::Buy)));
            CHECK(close_rel(summary.taker_sell_volume,
                            oracle::taker_volume(window, Side::Sell)));
            CHECK(summary.trade_count == window.trades.size());
        }
    }
    CHECK(books_checked > 500);
    CHECK(windows_checked > 500);
}

TEST_CASE("scale covariance: quantities scaled by c") {
    std::mt19937_64 rng(31337);
    for (int i = 0; i < 50; ++i) {
        auto book = random_book(rng);
        if (book.bids.empty() || book.asks.empty()) continue;
        auto window = random_window(rng);
        if (window.trades.empty()) continue;
        const double c = uniform(rng, 0.1, 10.0);
        auto scaled_book = book;
        for (auto& l : scaled_book.bids) l.quantity *= c;
        for (auto& l : scaled_book.asks) l.quantity *= c;
        auto scaled_window = window;
        for (auto& t : scaled_window.trades) t.quantity *= c;

        CHECK(close_rel(average_order_size(scaled_book), c * average_order_size(book), 1e-9));
        CHECK(close_rel(order_flow_imbalance(scaled_book), c * order_flow_imbalance(book),
                        1e-9));
        CHECK(close_rel(liquidity_consumption(scaled_window),
                        c * liquidity_consumption(window), 1e-9));
        CHECK(close_rel(market_orders_impact(scaled_window),
                        c * market_orders_impact(window), 1e-9));
        if (book.bids.size() >= 2 && book.asks.size() >= 2) {
            CHECK(close_rel(order_book_slope(scaled_book), c * order_book_slope(book), 1e-9));
        }
        CHECK(close_rel(imbalance(scaled_book), imbalance(book), 1e-9));
        CHECK(close_rel(order_book_pressure(scaled_book), order_book_pressure(book), 1e-9));
        CHECK(close_rel(vwap(scaled_window), vwap(window), 1e-9));
    }
}

TEST_CASE("price shift moves vwap and leaves spreads unchanged") {
    std::mt19937_64 rng(4242);
    for (int i = 0; i < 50; ++i) {
        auto book = random_book(rng);
        if (book.bids.empty() || book.asks.empty()) continue;
        auto window = random_window(rng);
        if (window.trades.empty()) continue;
        const double shift = uniform(rng, 0.1, 50.0);
        auto shifted_book = book;
        for (auto& l : shifted_book.bids) l.price += shift;
        for (auto& l : shifted_book.asks) l.price += shift;
        auto shifted_window = window;
        for (auto& t : shifted_window.trades) t.price += shift;

        CHECK(close_rel(vwap(shifted_window), vwap(window) + shift, 1e-9));
        CHECK(close_rel(bid_ask_spread(shifted_book), bid_ask_spread(book), 1e-7));
        CHECK(close_rel(*trade_window_summary(shifted_window).high_low_spread,
                        *trade_window_summary(window).high_low_spread, 1e-7));
        CHECK(close_rel(mid_price(shifted_book), mid_price(book) + shift, 1e-9));
    }
}

TEST_CASE("book_pressure stays within [0,1] and imbalance positive") {
    std::mt19937_64 rng(777);
    for (int i = 0; i < 300; ++i) {
        const auto book = random_book(rng);
        if (book.bids.empty() && book.asks.empty()) continue;
        const double p = order_book_pressure(book);
        CHECK(p >= 0.0);
        CHECK(p <= 1.0);
        if (!book.asks.empty()) CHECK(imbalance(book) >= 0.0);
    }
}

TEST_CASE("market_orders_impact equals liquidity_consumption with full side coverage") {
    std::mt19937_64 rng(555);
    for (int i = 0; i < 100; ++i) {
        const auto window = random_window(rng);
        CHECK(close_rel(market_orders_impact(window), liquidity_consumption(window), 1e-12));
    }
}
