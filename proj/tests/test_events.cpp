#include <doctest.h>

#include <algorithm>
#include <random>

#include "pumpscan/events.hpp"
#include "support.hpp"

using namespace pumpscan;
using namespace testsupport;

namespace {

LabeledMessage release(TimestampMs ts, const std::string& symbol,
                       const std::string& exchange, const std::string& channel = "chan") {
    LabeledMessage m;
    m.ts = ts;
    m.channel = channel;
    m.text = "THE COIN IS $" + symbol;
    m.label = MessageLabel::TargetCoinRelease;
    m.extracted_symbol = symbol;
    m.extracted_exchange = exchange;
    return m;
}

LabeledMessage noise(TimestampMs ts) {
    LabeledMessage m;
    m.ts = ts;
    m.channel = "chan";
    m.text = "gm";
    m.label = MessageLabel::Noise;
    return m;
}

constexpr TimestampMs kHour14 = 1'722'000'000'000 / kMsPerHour * kMsPerHour;

}  // namespace

TEST_CASE("releases in the same half-hour band cluster to one event") {
    // 14:10 and 14:20 both round down to 14:00
    const auto events = cluster_pump_events({
        release(kHour14 + 10 * kMsPerMinute, "GFT", "poloniex"),
        release(kHour14 + 20 * kMsPerMinute, "GFT", "poloniex"),
        noise(kHour14),
    });
    REQUIRE(events.size() == 1);
    CHECK(events[0].symbol == "GFT");
    CHECK(events[0].exchange == "poloniex");
    CHECK(events[0].release_time == kHour14);
    CHECK(events[0].message_ids.size() == 2);
    CHECK(events[0].release_time % kMsPerHour == 0);
}

TEST_CASE("same symbol on different exchanges makes two events") {
    const auto events = cluster_pump_events({
        release(kHour14 + 5 * kMsPerMinute, "GFT", "poloniex"),
        release(kHour14 + 6 * kMsPerMinute, "GFT", "kucoin"),
    });
    CHECK(events.size() == 2);
}

TEST_CASE("14:40 and 15:10 both round to 15:00 and merge") {
    const auto events = cluster_pump_events({
        release(kHour14 + 40 * kMsPerMinute, "AMC", "poloniex"),
        release(kHour14 + 70 * kMsPerMinute, "AMC", "poloniex"),
    });
    REQUIRE(events.size() == 1);
    CHECK(events[0].release_time == kHour14 + kMsPerHour);
}

TEST_CASE("release without extraction raises MissingExtraction") {
    LabeledMessage bad;
    bad.ts = kHour14;
    bad.channel = "chan";
    bad.text = "THE COIN IS ???";
    bad.label = MessageLabel::TargetCoinRelease;
    try {
        cluster_pump_events({bad});
        FAIL("expected MissingExtraction");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::MissingExtraction);
    }
}

TEST_CASE("clustering is idempotent and permutation-invariant") {
    std::vector<LabeledMessage> messages;
    for (int i = 0; i < 12; ++i) {
        messages.push_back(release(kHour14 + i * 7 * kMsPerMinute,
                                   i % 3 == 0 ? "AAA" : "BBB",
                                   i % 2 == 0 ? "poloniex" : "kucoin",
                                   "chan" + std::to_string(i % 4)));
    }
    for (int i = 0; i < 6; ++i) messages.push_back(noise(kHour14 + i * kMsPerMinute));

    const auto reference = cluster_pump_events(messages);
    CHECK(cluster_pump_events(messages) == reference);  // idempotent

    std::mt19937_64 rng(42);
    for (int shuffle = 0; shuffle < 20; ++shuffle) {
        for (std::size_t i = messages.size(); i > 1; --i) {
            std::swap(messages[i - 1], messages[rng() % i]);
        }
        CHECK(cluster_pump_events(messages) == reference);
    }
}

TEST_CASE("message ids are content-derived") {
    const auto a = release(100, "AAA", "poloniex", "chanX");
    CHECK(message_id(a) == message_id(a));
    auto b = a;
    b.text += "!";
    CHECK(message_id(a) != message_id(b));
    CHECK(message_id(a).find("chanX@100#") == 0);
}

TEST_CASE("topk_hit_rate reproduces the reference fractions") {
    std::vector<int> ranks;
    for (int i = 0; i < 24; ++i) ranks.push_back(3);   // hits for k=5
    for (int i = 0; i < 8; ++i) ranks.push_back(8);    // extra hits for k=10
    for (int i = 0; i < 11; ++i) ranks.push_back(30);  // misses
    REQUIRE(ranks.size() == 43);
    CHECK(topk_hit_rate(ranks, 5) == doctest::Approx(24.0 / 43.0).epsilon(1e-12));
    CHECK(topk_hit_rate(ranks, 10) == doctest::Approx(32.0 / 43.0).epsilon(1e-12));

    std::vector<int> all_first(7, 1);
    CHECK(topk_hit_rate(all_first, 1) == 1.0);
    CHECK(topk_hit_rate(all_first, 99) == 1.0);

    CHECK_THROWS_AS((void)topk_hit_rate({}, 5), Error);
}

TEST_CASE("topk_hit_rate is monotone in k and matches a brute-force count") {
    std::mt19937_64 rng(11);
    std::vector<int> ranks;
    for (int i = 0; i < 200; ++i) ranks.push_back(1 + static_cast<int>(rng() % 51));
    double prev = 0.0;
    for (int k = 1; k <= 51; ++k) {
        std::size_t brute = 0;
        for (int r : ranks) {
            if (r <= k) ++brute;
        }
        const double rate = topk_hit_rate(ranks, k);
        CHECK(rate == doctest::Approx(static_cast<double>(brute) / 200.0));
        CHECK(rate >= prev);
        prev = rate;
    }
}

TEST_CASE("volume_ratio reproduces the reference quotients") {
    CHECK(volume_ratio(4809.0, 77.0) == doctest::Approx(62.45454545).epsilon(1e-9));
    CHECK(volume_ratio(1'867'411.0, 80'641.0) == doctest::Approx(23.157).epsilon(1e-4));
    CHECK(volume_ratio(5.0, 5.0) == 1.0);
    CHECK_THROWS_AS((void)volume_ratio(10.0, 0.0), Error);
}

TEST_CASE("order_size_increase_ratio keeps full precision") {
    CHECK(order_size_increase_ratio(1750.89, 2270.19) ==
          doctest::Approx(1.2965933).epsilon(1e-6));
    // quotient of the printed inputs; the source table's own rounded column
    // shows 9.51
    CHECK(order_size_increase_ratio(20.90, 198.87) ==
          doctest::Approx(9.5153110).epsilon(1e-6));
    CHECK(order_size_increase_ratio(7.0, 7.0) == 1.0);
    CHECK_THROWS_AS((void)order_size_increase_ratio(0.0, 5.0), Error);
}

TEST_CASE("price_spike_metrics on a flat series") {
    std::vector<PricePoint> series;
    const TimestampMs pump = 1'000'000'000;
    for (TimestampMs t = pump - 11 * kMsPerMinute; t <= pump + 11 * kMsPerMinute;
         t += 30'000) {
        series.push_back(PricePoint{t, 2.0});
    }
    const auto spike = price_spike_metrics(series, pump);
    CHECK(spike.spike_magnitude == 1.0);
    CHECK(spike.time_to_peak_minutes >= 0.0);
    CHECK(spike.time_to_peak_minutes <= 0.5);  // first sample at/after the pump
}

TEST_CASE("price_spike_metrics reproduces a sharp-spike fixture") {
    // baseline 1.0 ten minutes before; peak 10.85 at pump + 7.2 s
    const TimestampMs pump = 1'000'000'000;
    std::vector<PricePoint> series;
    series.push_back(PricePoint{pump - 10 * kMsPerMinute, 1.0});
    series.push_back(PricePoint{pump - 5 * kMsPerMinute, 1.02});
    series.push_back(PricePoint{pump, 1.05});
    series.push_back(PricePoint{pump + 7'200, 10.85});
    series.push_back(PricePoint{pump + 60'000, 6.0});
    series.push_back(PricePoint{pump + 10 * kMsPerMinute, 2.0});
    const auto spike = price_spike_metrics(series, pump);
    CHECK(spike.spike_magnitude == doctest::Approx(10.85));
    CHECK(spike.time_to_peak_minutes == doctest::Approx(0.12));
}

TEST_CASE("equal maxima resolve to the earliest timestamp") {
    const TimestampMs pump = 1'000'000'000;
    std::vector<PricePoint> series;
    series.push_back(PricePoint{pump - 10 * kMsPerMinute, 1.0});
    series.push_back(PricePoint{pump + 30'000, 5.0});
    series.push_back(PricePoint{pump + 90'000, 5.0});
    series.push_back(PricePoint{pump + 10 * kMsPerMinute, 1.0});
    const auto spike = price_spike_metrics(series, pump);
    CHECK(spike.time_to_peak_minutes == doctest::Approx(0.5));
}

TEST_CASE("insufficient coverage is rejected") {
    const TimestampMs pump = 1'000'000'000;
    std::vector<PricePoint> series = {PricePoint{pump - kMsPerMinute, 1.0},
                                      PricePoint{pump + kMsPerMinute, 2.0}};
    try {
        price_spike_metrics(series, pump);
        FAIL("expected InsufficientCoverage");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::InsufficientCoverage);
    }
}
