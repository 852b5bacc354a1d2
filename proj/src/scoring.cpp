#include "pumpscan/scoring.hpp"

#include <algorithm>
#include <cmath>

namespace pumpscan {

std::string_view data_mode_name(DataMode mode) noexcept {
    switch (mode) {
        case DataMode::Both: return "both";
        case DataMode::TradeOnly: return "trade_only";
        case DataMode::BookOnly: return "book_only";
    }
    return "both";
}

std::optional<DataMode> data_mode_from(std::string_view name) noexcept {
    for (auto mode : {DataMode::Both, DataMode::TradeOnly, DataMode::BookOnly}) {
        if (name == data_mode_name(mode)) return mode;
    }
    return std::nullopt;
}

bool metric_in_mode(MetricName m, DataMode mode) noexcept {
    if (mode == DataMode::Both) return true;
    bool trade_derived = false;
    switch (m) {
        case MetricName::LiquidityConsumption:
        case MetricName::MarketOrderImpact:
        case MetricName::Vwap:
        case MetricName::HighLowSpread:
        case MetricName::TradeCount:
        case MetricName::TakerBuyVolume:
        case MetricName::TakerSellVolume:
            trade_derived = true;
            break;
        default:
            break;
    }
    return mode == DataMode::TradeOnly ? trade_derived : !trade_derived;
}

std::optional<double> zscore(double x, double mu, double sigma,
                             double epsilon_sigma) noexcept {
    if (sigma < epsilon_sigma) {
        if (std::fabs(x - mu) < epsilon_sigma) return 0.0;
        return std::nullopt;  // no variability to score against
    }
    return (x - mu) / sigma;
}

ZVector score_symbol(const MetricVector& short_term, const BaselineState& baseline,
                     const DirectionMap& directions, const ScoringParams& params) {
    if (short_term.symbol != baseline.symbol()) {
        throw Error(Errc::SymbolMismatch, "short-term vector and baseline symbols differ");
    }
    ZVector out;
    out.symbol = short_term.symbol;
    out.evaluated_at = short_term.window_end;
    for (auto m : kAllMetrics) {
        const auto x = short_term.get(m);
        if (!x) continue;
        const MetricStats stats = baseline.stats(m);
        if (stats.n < params.min_samples) continue;
        const auto z = zscore(*x, stats.mean, stats.stddev, params.epsilon_sigma);
        if (!z) continue;
        out.set(m, static_cast<double>(directions[static_cast<std::size_t>(m)]) * *z);
    }
    return out;
}

double aggregate_score(const ZVector& z, const WeightMap& weights) {
    double weighted = 0.0;
    double total_weight = 0.0;
    for (auto m : kAllMetrics) {
        const auto v = z.get(m);
        if (!v) continue;
        const double w = weights[static_cast<std::size_t>(m)];
        weighted += w * *v;
        total_weight += w;
    }
    if (total_weight <= 0.0) {
        throw Error(Errc::NoScorableMetrics, "no scorable metric for " + z.symbol);
    }
    return weighted / total_weight;
}

std::vector<RankedCandidate> rank_candidates(std::vector<ScoredSymbol> scores) {
    if (scores.empty()) throw Error(Errc::EmptyInput, "nothing to rank");
    std::sort(scores.begin(), scores.end(), [](const ScoredSymbol& a, const ScoredSymbol& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.symbol < b.symbol;
    });
    const double hi = scores.front().score;
    const double lo = scores.back().score;
    const double range = hi - lo;

    std::vector<RankedCandidate> out;
    out.reserve(scores.size());
    int rank = 1;
    for (auto& s : scores) {
        RankedCandidate c;
        c.symbol = std::move(s.symbol);
        c.score = s.score;
        c.normalized = range > 0.0 ? (s.score - lo) / range : 1.0;
        c.rank = rank++;
        c.z = std::move(s.z);
        out.push_back(std::move(c));
    }
    return out;
}

}  // namespace pumpscan
