#include "pumpscan/pipeline.hpp"

#include <algorithm>

namespace pumpscan {

MetricsPipeline::Tracker& MetricsPipeline::tracker_for(const std::string& symbol) {
    auto it = trackers_.find(symbol);
    if (it == trackers_.end()) {
        it = trackers_.emplace(symbol, Tracker(symbol, cfg_.baseline_span_ms)).first;
    }
    return it->second;
}

void MetricsPipeline::feed(const EventRecord& record) {
    const TimestampMs ts = record.ts();
    if (ts < last_ts_) {
        throw Error(Errc::OutOfOrderInput, "pipeline input regressed in time");
    }
    last_ts_ = ts;
    if (next_tick_ == INT64_MIN) {
        // first tick strictly after the first record, on the absolute grid
        TimestampMs q = ts / cfg_.cadence_ms;
        if (ts < 0 && q * cfg_.cadence_ms > ts) --q;
        next_tick_ = (q + 1) * cfg_.cadence_ms;
    }
    while (next_tick_ < ts) {
        fire_tick(next_tick_);
        next_tick_ += cfg_.cadence_ms;
    }

    switch (record.kind()) {
        case RecordKind::Snapshot: {
            Tracker& tracker = tracker_for(record.snapshot().symbol);
            tracker.books.push_back(record.snapshot());
            break;
        }
        case RecordKind::Trade: {
            const Trade& t = record.trade();
            Tracker& tracker = tracker_for(t.symbol);
            tracker.trade_ts.push_back(t.ts);
            tracker.trade_price.push_back(t.price);
            tracker.trade_qty.push_back(t.quantity);
            tracker.trade_side.push_back(!t.taker_side              ? kSideMissing
                                         : *t.taker_side == Side::Buy ? kSideBuy
                                                                      : kSideSell);
            break;
        }
        case RecordKind::Message:
            break;
    }
}

void MetricsPipeline::advance_to(TimestampMs t) {
    if (next_tick_ == INT64_MIN) return;
    while (next_tick_ < t) {
        fire_tick(next_tick_);
        next_tick_ += cfg_.cadence_ms;
    }
}

void MetricsPipeline::fire_tick(TimestampMs tick) {
    for (auto& [symbol, tracker] : trackers_) {
        MetricVector v = sample_tracker(tracker, symbol, tick);
        update_baseline(tracker.baseline, v, tick);
        if (sink_) sink_(tick, v);
        prune(tracker, tick);
    }
}

void MetricsPipeline::prune(Tracker& tracker, TimestampMs now) const {
    // Keep one snapshot at or below every future prior-book boundary
    // (boundaries only move forward).
    const TimestampMs book_cutoff = now - cfg_.short_window_ms;
    while (tracker.books.size() >= 2 && tracker.books[1].ts <= book_cutoff) {
        tracker.books.pop_front();
    }
    const TimestampMs trade_cutoff = now - cfg_.short_window_ms - cfg_.cadence_ms;
    while (tracker.head < tracker.trade_ts.size() &&
           tracker.trade_ts[tracker.head] < trade_cutoff) {
        ++tracker.head;
    }
    if (tracker.head > 4096 && tracker.head * 2 > tracker.trade_ts.size()) {
        const auto drop = static_cast<std::ptrdiff_t>(tracker.head);
        tracker.trade_ts.erase(tracker.trade_ts.begin(), tracker.trade_ts.begin() + drop);
        tracker.trade_price.erase(tracker.trade_price.begin(),
                                  tracker.trade_price.begin() + drop);
        tracker.trade_qty.erase(tracker.trade_qty.begin(), tracker.trade_qty.begin() + drop);
        tracker.trade_side.erase(tracker.trade_side.begin(),
                                 tracker.trade_side.begin() + drop);
        tracker.head = 0;
    }
}

MetricVector MetricsPipeline::sample_tracker(const Tracker& tracker, const std::string& symbol,
                                             TimestampMs at) const {
    // latest snapshot at or before `at`
    const OrderBookSnapshot* book = nullptr;
    {
        auto it = std::upper_bound(
            tracker.books.begin(), tracker.books.end(), at,
            [](TimestampMs t, const OrderBookSnapshot& b) { return t < b.ts; });
        if (it != tracker.books.begin()) book = &*std::prev(it);
    }

    const TimestampMs anchor = book ? book->ts : at;
    const TimestampMs window_start = anchor - cfg_.short_window_ms + 1;
    const TimestampMs window_end = anchor + 1;

    const OrderBookSnapshot* prior = nullptr;
    if (book != nullptr) {
        const TimestampMs prior_cutoff = anchor - cfg_.short_window_ms;
        auto it = std::upper_bound(
            tracker.books.begin(), tracker.books.end(), prior_cutoff,
            [](TimestampMs t, const OrderBookSnapshot& b) { return t < b.ts; });
        if (it != tracker.books.begin()) prior = &*std::prev(it);
    }

    const auto begin_it = tracker.trade_ts.begin() + static_cast<std::ptrdiff_t>(tracker.head);
    const auto lo =
        std::lower_bound(begin_it, tracker.trade_ts.end(), window_start) -
        tracker.trade_ts.begin();
    const auto hi =
        std::upper_bound(begin_it, tracker.trade_ts.end(), window_end - 1) -
        tracker.trade_ts.begin();
    const auto n = static_cast<std::size_t>(hi - lo);
    const auto off = static_cast<std::size_t>(lo);

    TradeSlice slice{
        std::span<const double>(tracker.trade_price.data() + off, n),
        std::span<const double>(tracker.trade_qty.data() + off, n),
        std::span<const std::uint8_t>(tracker.trade_side.data() + off, n),
    };
    MetricOptions opts;
    opts.slope_levels = cfg_.slope_levels;
    return compute_metric_vector_from_parts(symbol, window_start, window_end, book, slice,
                                            prior, opts);
}

MetricVector MetricsPipeline::sample(const std::string& symbol, TimestampMs at) const {
    auto it = trackers_.find(symbol);
    if (it == trackers_.end()) {
        MetricVector empty;
        empty.symbol = symbol;
        empty.window_start = at - cfg_.short_window_ms + 1;
        empty.window_end = at + 1;
        empty.set(MetricName::LiquidityConsumption, 0.0);
        empty.set(MetricName::MarketOrderImpact, 0.0);
        empty.set(MetricName::TradeCount, 0.0);
        empty.set(MetricName::TakerBuyVolume, 0.0);
        empty.set(MetricName::TakerSellVolume, 0.0);
        return empty;
    }
    return sample_tracker(it->second, symbol, at);
}

MetricsPipeline::Evaluation MetricsPipeline::evaluate(const std::string& symbol,
                                                      TimestampMs at, DataMode mode) const {
    Evaluation out;
    auto it = trackers_.find(symbol);
    if (it == trackers_.end()) {
        out.z.symbol = symbol;
        out.z.evaluated_at = at;
        return out;
    }
    const MetricVector x = sample_tracker(it->second, symbol, at);
    out.z = score_symbol(x, it->second.baseline, cfg_.directions, cfg_.scoring_params());
    out.z.evaluated_at = at;

    WeightMap weights = cfg_.weights;
    for (auto m : kAllMetrics) {
        if (!metric_in_mode(m, mode)) weights[static_cast<std::size_t>(m)] = 0.0;
    }
    try {
        out.score = aggregate_score(out.z, weights);
    } catch (const Error&) {
        out.score = std::nullopt;
    }
    return out;
}

std::vector<std::string> MetricsPipeline::symbols() const {
    std::vector<std::string> out;
    out.reserve(trackers_.size());
    for (const auto& [symbol, tracker] : trackers_) out.push_back(symbol);
    return out;
}

const BaselineState* MetricsPipeline::baseline(const std::string& symbol) const {
    auto it = trackers_.find(symbol);
    return it == trackers_.end() ? nullptr : &it->second.baseline;
}

}  // namespace pumpscan
