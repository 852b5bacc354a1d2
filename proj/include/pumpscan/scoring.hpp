#pragma once

#include <array>
#include <bitset>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pumpscan/rolling.hpp"
#include "pumpscan/types.hpp"

namespace pumpscan {

struct ScoringParams {
    std::int64_t min_samples = 30;   // baseline samples required per metric
    double epsilon_sigma = 1e-12;    // below this, sigma counts as degenerate
};

// +1: an anomalous increase is pump-like; -1 flips the sign for metrics where
// a decrease indicates accumulation. All +1 by default; fully configurable.
using DirectionMap = std::array<int, kMetricCount>;
// Non-negative per-metric weights for aggregation; renormalized over the
// metrics that actually produced a z.
using WeightMap = std::array<double, kMetricCount>;

constexpr DirectionMap default_directions() {
    DirectionMap d{};
    d.fill(1);
    return d;
}
constexpr WeightMap default_weights() {
    WeightMap w{};
    w.fill(1.0);
    return w;
}

// Which metrics a data-source mode may score.
enum class DataMode : std::uint8_t { Both, TradeOnly, BookOnly };

std::string_view data_mode_name(DataMode mode) noexcept;
std::optional<DataMode> data_mode_from(std::string_view name) noexcept;
bool metric_in_mode(MetricName m, DataMode mode) noexcept;

// Per-metric z-scores of one symbol at one evaluation instant. A z is present
// only where both the short-term value and a sufficiently deep baseline exist.
struct ZVector {
    std::string symbol;
    TimestampMs evaluated_at = 0;
    std::array<double, kMetricCount> z{};
    std::bitset<kMetricCount> present;

    std::optional<double> get(MetricName m) const noexcept {
        const auto i = static_cast<std::size_t>(m);
        if (!present.test(i)) return std::nullopt;
        return z[i];
    }
    void set(MetricName m, double v) noexcept {
        const auto i = static_cast<std::size_t>(m);
        z[i] = v;
        present.set(i);
    }
};

struct ScoredSymbol {
    std::string symbol;
    double score = 0.0;
    ZVector z;
};

struct RankedCandidate {
    std::string symbol;
    double score = 0.0;       // aggregate anomaly score
    double normalized = 0.0;  // min-max normalized over the candidate set
    int rank = 0;             // 1-based
    ZVector z;
};

// (x - mu) / sigma. When sigma is below epsilon the series has no usable
// variability: returns 0 if x is at the mean (within epsilon), absent
// otherwise.
std::optional<double> zscore(double x, double mu, double sigma,
                             double epsilon_sigma = 1e-12) noexcept;

// Direction-adjusted z per metric, gated on baseline depth (n >= min_samples).
// Throws Error{SymbolMismatch} when baseline and vector disagree.
ZVector score_symbol(const MetricVector& short_term, const BaselineState& baseline,
                     const DirectionMap& directions = default_directions(),
                     const ScoringParams& params = {});

// Weighted mean of the present z values; weights renormalize over present
// metrics. Throws Error{NoScorableMetrics} when nothing contributes.
double aggregate_score(const ZVector& z, const WeightMap& weights = default_weights());

// Sorts by score descending (ties: symbol ascending), assigns ranks 1..N and
// min-max normalized scores (all 1.0 when max == min). Throws
// Error{EmptyInput} for an empty candidate set.
std::vector<RankedCandidate> rank_candidates(std::vector<ScoredSymbol> scores);

}  // namespace pumpscan
