#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "pumpscan/types.hpp"

namespace pumpscan {

// Mergeable count/mean/M2 aggregate (Welford form, Chan merge). M2 is the sum
// of squared deviations from the mean, so population variance = m2 / n.
struct Moments {
    std::int64_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    static Moments of(double x) noexcept { return {1, x, 0.0}; }
    static Moments merge(const Moments& a, const Moments& b) noexcept;
};

// Time-windowed running mean/standard deviation with O(1) amortized push and
// evict. Implemented as a two-stack queue of aggregates: evictions pop the
// front stack, pushes grow the back stack, and an empty front is rebuilt from
// the back with suffix aggregates. No catastrophic cancellation: M2 terms are
// combined, never subtracted.
class RollingMoments {
public:
    // Timestamps must be non-decreasing across pushes.
    void push(TimestampMs ts, double value);
    // Removes every sample with ts <= cutoff.
    void evict_until(TimestampMs cutoff);

    std::int64_t count() const noexcept { return aggregate().n; }
    double mean() const noexcept { return aggregate().mean; }
    // Population convention: variance = M2 / n.
    double variance() const noexcept;
    double stddev() const noexcept;

private:
    struct Entry {
        TimestampMs ts;
        double value;
        Moments suffix;  // aggregate of this entry and everything evicted after it
    };

    Moments aggregate() const noexcept;
    void refill_front();

    std::vector<Entry> front_;                       // top = oldest sample
    std::vector<std::pair<TimestampMs, double>> back_;  // insertion order
    Moments back_agg_;
    TimestampMs last_ts_ = INT64_MIN;
};

struct MetricStats {
    std::int64_t n = 0;
    double mean = 0.0;
    double stddev = 0.0;
};

// Rolling historical baseline of one symbol: per-metric moments over the
// trailing window span. Absent metric values are skipped and do not count
// toward n.
class BaselineState {
public:
    explicit BaselineState(std::string symbol, TimestampMs span_ms)
        : symbol_(std::move(symbol)), span_ms_(span_ms) {}

    const std::string& symbol() const noexcept { return symbol_; }
    TimestampMs span_ms() const noexcept { return span_ms_; }
    TimestampMs last_now() const noexcept { return last_now_; }

    MetricStats stats(MetricName m) const noexcept;

    friend void update_baseline(BaselineState& state, const MetricVector& vector,
                                TimestampMs now);

private:
    std::string symbol_;
    TimestampMs span_ms_;
    TimestampMs last_now_ = INT64_MIN;
    std::array<RollingMoments, kMetricCount> metrics_;
};

// Folds one sample into the baseline and evicts everything older than
// now - span. The sample's timestamp is the last instant its window covers
// (window_end - 1). Throws Error{NonMonotonicTime} when now regresses or the
// sample is in the future.
void update_baseline(BaselineState& state, const MetricVector& vector, TimestampMs now);

}  // namespace pumpscan
