#include "pumpscan/rolling.hpp"

#include <cmath>

namespace pumpscan {

Moments Moments::merge(const Moments& a, const Moments& b) noexcept {
    if (a.n == 0) return b;
    if (b.n == 0) return a;
    Moments out;
    out.n = a.n + b.n;
    const double delta = b.mean - a.mean;
    const double nb_over_n = static_cast<double>(b.n) / static_cast<double>(out.n);
    out.mean = a.mean + delta * nb_over_n;
    out.m2 = a.m2 + b.m2 + delta * delta * static_cast<double>(a.n) * nb_over_n;
    return out;
}

void RollingMoments::push(TimestampMs ts, double value) {
    if (ts < last_ts_) {
        throw Error(Errc::NonMonotonicTime, "rolling window samples must not regress in time");
    }
    last_ts_ = ts;
    back_.emplace_back(ts, value);
    back_agg_ = Moments::merge(back_agg_, Moments::of(value));
}

void RollingMoments::refill_front() {
    // Move the back stack into the front stack (reversed) carrying suffix
    // aggregates, so future evictions are single pops.
    front_.reserve(back_.size());
    Moments suffix;
    for (auto it = back_.rbegin(); it != back_.rend(); ++it) {
        suffix = Moments::merge(Moments::of(it->second), suffix);
        front_.push_back(Entry{it->first, it->second, suffix});
    }
    back_.clear();
    back_agg_ = Moments{};
}

void RollingMoments::evict_until(TimestampMs cutoff) {
    for (;;) {
        if (front_.empty()) {
            if (back_.empty() || back_.front().first > cutoff) return;
            refill_front();
        }
        if (front_.back().ts > cutoff) return;
        front_.pop_back();
    }
}

Moments RollingMoments::aggregate() const noexcept {
    if (front_.empty()) return back_agg_;
    return Moments::merge(front_.back().suffix, back_agg_);
}

double RollingMoments::variance() const noexcept {
    const Moments agg = aggregate();
    if (agg.n <= 0) return 0.0;
    const double v = agg.m2 / static_cast<double>(agg.n);
    return v > 0.0 ? v : 0.0;  // clamp tiny negative rounding residue
}

double RollingMoments::stddev() const noexcept { return std::sqrt(variance()); }

MetricStats BaselineState::stats(MetricName m) const noexcept {
    const RollingMoments& rm = metrics_[static_cast<std::size_t>(m)];
    return MetricStats{rm.count(), rm.mean(), rm.stddev()};
}

void update_baseline(BaselineState& state, const MetricVector& vector, TimestampMs now) {
    if (now < state.last_now_) {
        throw Error(Errc::NonMonotonicTime, "baseline clock went backwards");
    }
    // window_end is exclusive; the sample's instant is the last covered ms
    const TimestampMs sample_ts = vector.window_end - 1;
    if (sample_ts > now) {
        throw Error(Errc::NonMonotonicTime, "baseline sample is in the future");
    }
    state.last_now_ = now;
    const TimestampMs cutoff = now - state.span_ms_;
    for (auto m : kAllMetrics) {
        RollingMoments& rm = state.metrics_[static_cast<std::size_t>(m)];
        if (auto v = vector.get(m)) rm.push(sample_ts, *v);
        rm.evict_until(cutoff);
    }
}

}  // namespace pumpscan
