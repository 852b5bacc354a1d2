#include <doctest.h>

#include "pumpscan/types.hpp"
#include "support.hpp"

using namespace pumpscan;
using namespace testsupport;

TEST_CASE("validate_snapshot accepts a well-formed ladder") {
    const auto book = make_book({{10.0, 5}, {9.9, 3}}, {{10.2, 4}});
    CHECK(&validate_snapshot(book) == &book);
    CHECK(book.depth() == 2);
}

TEST_CASE("validate_snapshot rejects unsorted bids") {
    const auto book = make_book({{9.9, 3}, {10.0, 5}}, {{10.2, 4}});
    CHECK_THROWS_WITH_AS(validate_snapshot(book), doctest::Contains("bid"), Error);
    try {
        validate_snapshot(book);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::UnsortedLadder);
    }
}

TEST_CASE("validate_snapshot rejects unsorted asks") {
    const auto book = make_book({{10.0, 5}}, {{10.3, 4}, {10.2, 6}});
    try {
        validate_snapshot(book);
        FAIL("expected UnsortedLadder");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::UnsortedLadder);
    }
}

TEST_CASE("validate_snapshot rejects an empty book") {
    const auto book = make_book({}, {});
    try {
        validate_snapshot(book);
        FAIL("expected EmptyBothSides");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::EmptyBothSides);
    }
}

TEST_CASE("validate_snapshot rejects non-positive and non-finite values") {
    for (double bad : {0.0, -1.0, std::numeric_limits<double>::infinity(),
                       std::numeric_limits<double>::quiet_NaN()}) {
        const auto bad_price = make_book({{bad, 5}}, {{10.2, 4}});
        const auto bad_qty = make_book({{10.0, bad}}, {{10.2, 4}});
        for (const auto* book : {&bad_price, &bad_qty}) {
            try {
                validate_snapshot(*book);
                FAIL("expected NonPositiveValue");
            } catch (const Error& e) {
                CHECK(e.code() == Errc::NonPositiveValue);
            }
        }
    }
}

TEST_CASE("crossed books are representable and valid") {
    const auto book = make_book({{10.5, 5}}, {{10.2, 4}});
    CHECK_NOTHROW(validate_snapshot(book));
}

TEST_CASE("one-sided books are valid") {
    CHECK_NOTHROW(validate_snapshot(make_book({{10.0, 5}}, {})));
    CHECK_NOTHROW(validate_snapshot(make_book({}, {{10.2, 4}})));
}

TEST_CASE("validate_trade enforces positive finite values") {
    CHECK_NOTHROW(validate_trade(make_trade(1, 10.0, 5.0)));
    try {
        validate_trade(make_trade(1, 10.0, -5.0));
        FAIL("expected NonPositiveValue");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::NonPositiveValue);
    }
}

TEST_CASE("nearest-hour rounding: minute >= 30 rounds up") {
    const TimestampMs base = 1'720'000'800'000;  // 2024-07-03T10:00:00Z
    CHECK(round_to_nearest_hour(base) == base);
    CHECK(round_to_nearest_hour(base + 10 * kMsPerMinute) == base);
    CHECK(round_to_nearest_hour(base + 29 * kMsPerMinute + 59'999) == base);
    CHECK(round_to_nearest_hour(base + 30 * kMsPerMinute) == base + kMsPerHour);
    CHECK(round_to_nearest_hour(base + 59 * kMsPerMinute) == base + kMsPerHour);
    // pre-epoch timestamps keep floor semantics
    CHECK(round_to_nearest_hour(-10 * kMsPerMinute) == 0);
    CHECK(round_to_nearest_hour(-31 * kMsPerMinute) == -kMsPerHour);
}

TEST_CASE("metric names round-trip") {
    for (auto m : kAllMetrics) {
        CHECK(metric_from(metric_name(m)) == m);
    }
    CHECK(!metric_from("not_a_metric"));
    CHECK(kAllMetrics.size() == kMetricCount);
}

TEST_CASE("message labels round-trip and are exactly six") {
    int count = 0;
    for (auto label : {MessageLabel::PumpAnnouncement, MessageLabel::Countdown,
                       MessageLabel::TargetCoinRelease, MessageLabel::PumpResults,
                       MessageLabel::DelayOrCancellation, MessageLabel::Noise}) {
        CHECK(message_label_from(message_label_name(label)) == label);
        ++count;
    }
    CHECK(count == 6);
    CHECK(!message_label_from("Spam"));
}

TEST_CASE("metric vector absent markers are explicit") {
    MetricVector v;
    CHECK(!v.get(MetricName::Vwap));
    v.set(MetricName::Vwap, 10.5);
    CHECK(v.get(MetricName::Vwap) == 10.5);
    v.clear(MetricName::Vwap);
    CHECK(!v.get(MetricName::Vwap));
}

TEST_CASE("event record exposes merge keys per payload") {
    EventRecord snap{make_book({{1.0, 1}}, {{1.1, 1}}, 5, "ZZZ", "ex1")};
    CHECK(snap.kind() == RecordKind::Snapshot);
    CHECK(snap.ts() == 5);
    CHECK(snap.exchange_key() == "ex1");
    CHECK(snap.symbol_key() == "ZZZ");

    LabeledMessage msg;
    msg.ts = 9;
    msg.channel = "chan";
    msg.text = "hello";
    EventRecord rec{msg};
    CHECK(rec.kind() == RecordKind::Message);
    CHECK(rec.exchange_key() == "");
    CHECK(rec.symbol_key() == "");
}
