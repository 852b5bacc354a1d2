#pragma once

#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pumpscan/config.hpp"
#include "pumpscan/metrics.hpp"
#include "pumpscan/rolling.hpp"
#include "pumpscan/scoring.hpp"
#include "pumpscan/types.hpp"

namespace pumpscan {

// Event-time metric sampler. Feed it the merged (time-ordered) record stream;
// it samples every tracked symbol on an absolute cadence grid, folds each
// sample into the symbol's rolling baseline, and can evaluate a short-term
// vector at any instant.
//
// Windows are anchored to the book: a sample at grid time t uses the latest
// snapshot b with b.ts <= t, the trades in (b.ts - short_window, b.ts], and
// the latest prior snapshot at or before b.ts - short_window (for
// relative_impact). A symbol with no snapshot yet is sampled from trades
// alone, anchored at t.
//
// A grid tick t fires once a record with ts > t arrives (or advance_to passes
// it), so every record at exactly t is included. Baselines therefore contain
// only completed ticks, and scoring an instant T never folds the scored
// sample into its own baseline.
class MetricsPipeline {
public:
    using TickSink = std::function<void(TimestampMs tick, const MetricVector&)>;

    explicit MetricsPipeline(DetectorConfig cfg, TickSink sink = nullptr)
        : cfg_(std::move(cfg)), sink_(std::move(sink)) {}

    // Records must arrive non-decreasing in time (Error{OutOfOrderInput}).
    // Message records are ignored; the pipeline consumes market data only.
    void feed(const EventRecord& record);

    // Fires every pending grid tick strictly before t.
    void advance_to(TimestampMs t);

    // Short-term vector of one symbol evaluated at `at` (unknown symbols get
    // an all-absent vector).
    MetricVector sample(const std::string& symbol, TimestampMs at) const;

    // Direction-adjusted z-scores and aggregate score at `at`; nullopt when
    // no metric is scorable under the mode.
    struct Evaluation {
        ZVector z;
        std::optional<double> score;
    };
    Evaluation evaluate(const std::string& symbol, TimestampMs at, DataMode mode) const;

    std::vector<std::string> symbols() const;
    const BaselineState* baseline(const std::string& symbol) const;
    const DetectorConfig& config() const noexcept { return cfg_; }

private:
    struct Tracker {
        explicit Tracker(std::string symbol, TimestampMs span)
            : baseline(std::move(symbol), span) {}

        std::deque<OrderBookSnapshot> books;  // time-ordered, pruned
        // trade columns (time-ordered ring; head = first live row)
        std::vector<TimestampMs> trade_ts;
        std::vector<double> trade_price;
        std::vector<double> trade_qty;
        std::vector<std::uint8_t> trade_side;
        std::size_t head = 0;

        BaselineState baseline;
    };

    Tracker& tracker_for(const std::string& symbol);
    void fire_tick(TimestampMs tick);
    void prune(Tracker& tracker, TimestampMs now) const;
    MetricVector sample_tracker(const Tracker& tracker, const std::string& symbol,
                                TimestampMs at) const;

    DetectorConfig cfg_;
    TickSink sink_;
    std::map<std::string, Tracker> trackers_;  // ordered: deterministic iteration
    TimestampMs next_tick_ = INT64_MIN;
    TimestampMs last_ts_ = INT64_MIN;
};

}  // namespace pumpscan
