#include "pumpscan/simulator.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "pumpscan/jsonl.hpp"
#include "pumpscan/parallel.hpp"
#include "pumpscan/replay.hpp"
#include "pumpscan/rng.hpp"

namespace pumpscan {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// rng stream tags per (symbol, step)
constexpr std::uint64_t kStreamParams = 0;
constexpr std::uint64_t kStreamMid = 1;
constexpr std::uint64_t kStreamLadder = 2;
constexpr std::uint64_t kStreamTrades = 3;
constexpr std::uint64_t kStreamInject = 0xfeed;

std::uint64_t step_stream(std::uint64_t step, std::uint64_t tag) noexcept {
    return (step << 3) | tag;
}

void check_config(const ScenarioConfig& cfg) {
    if (cfg.symbol_count == 0) throw Error(Errc::InvalidConfig, "symbol_count must be >= 1");
    if (cfg.span_ms <= 0) throw Error(Errc::InvalidConfig, "span must be positive");
    if (cfg.coarse_cadence_ms <= 0 || cfg.fine_cadence_ms <= 0) {
        throw Error(Errc::InvalidConfig, "cadences must be positive");
    }
    if (cfg.fine_window_ms < 0 || cfg.fine_window_ms > cfg.span_ms) {
        throw Error(Errc::InvalidConfig, "fine_window must lie within the span");
    }
    if (cfg.target_index >= cfg.symbol_count) {
        throw Error(Errc::InvalidConfig, "target_index out of range");
    }
    if (cfg.buy_volume_multiplier <= 0.0 || cfg.sell_wall_multiplier <= 0.0) {
        throw Error(Errc::InvalidConfig, "multipliers must be positive");
    }
    const TimestampMs pump = cfg.effective_pump_time();
    if (pump < cfg.base_ts || pump >= cfg.base_ts + cfg.span_ms) {
        throw Error(Errc::InvalidConfig, "pump_time must lie within the span");
    }
    if (cfg.depth_levels < 2) throw Error(Errc::InvalidConfig, "depth_levels must be >= 2");
    if (cfg.mid_price_min <= 0.0 || cfg.mid_price_max < cfg.mid_price_min) {
        throw Error(Errc::InvalidConfig, "bad mid price range");
    }
}

TimestampMs fine_start_of(const ScenarioConfig& cfg) noexcept {
    return cfg.base_ts + cfg.span_ms - cfg.fine_window_ms;
}

}  // namespace

std::size_t cadence_step_count(const ScenarioConfig& cfg) noexcept {
    const TimestampMs fine_start = fine_start_of(cfg);
    const TimestampMs coarse_span = fine_start - cfg.base_ts;
    const TimestampMs fine_span = cfg.base_ts + cfg.span_ms - fine_start;
    const auto coarse_steps =
        static_cast<std::size_t>((coarse_span + cfg.coarse_cadence_ms - 1) / cfg.coarse_cadence_ms);
    const auto fine_steps =
        static_cast<std::size_t>((fine_span + cfg.fine_cadence_ms - 1) / cfg.fine_cadence_ms);
    return coarse_steps + fine_steps;
}

SymbolParams scenario_symbol_params(const ScenarioConfig& cfg, std::size_t index) {
    CounterRng rng(cfg.seed, index, kStreamParams);
    SymbolParams p;
    char suffix[8];
    std::snprintf(suffix, sizeof(suffix), "%03zu", index);
    p.symbol = cfg.symbol_prefix + suffix;
    p.anchor_mid = rng.next_log_uniform(cfg.mid_price_min, cfg.mid_price_max);
    p.trade_rate_per_s = cfg.mean_trade_rate_per_s * rng.next_uniform(0.6, 1.4);
    p.mean_trade_size = cfg.mean_trade_size * rng.next_log_uniform(0.5, 2.0);
    p.level_quantity = 3.0 * p.mean_trade_size;
    p.step_volatility = cfg.step_volatility * rng.next_uniform(0.5, 1.5);
    return p;
}

std::vector<EventRecord> generate_symbol_stream(const ScenarioConfig& cfg, std::size_t index) {
    check_config(cfg);
    const SymbolParams p = scenario_symbol_params(cfg, index);
    const TimestampMs span_end = cfg.base_ts + cfg.span_ms;
    const TimestampMs fine_start = fine_start_of(cfg);

    std::vector<EventRecord> out;
    out.reserve(cadence_step_count(cfg) * 4);

    double log_mid = std::log(p.anchor_mid);
    const double log_anchor = log_mid;

    std::uint64_t step = 0;
    TimestampMs t = cfg.base_ts;
    std::uint64_t trade_seq = 0;
    while (t < span_end) {
        const TimestampMs cadence =
            t >= fine_start ? cfg.fine_cadence_ms : cfg.coarse_cadence_ms;
        const TimestampMs t_next = std::min<TimestampMs>(t + cadence, span_end);

        // mean-reverting random walk in log space keeps the mid positive
        {
            CounterRng rng(cfg.seed, index, step_stream(step, kStreamMid));
            log_mid += cfg.mean_reversion * (log_anchor - log_mid) +
                       p.step_volatility * rng.next_normal();
        }
        const double mid = std::exp(log_mid);
        const double half_spread = 0.5 * cfg.spread_fraction * mid;

        OrderBookSnapshot snap;
        snap.ts = t;
        snap.exchange = cfg.exchange;
        snap.symbol = p.symbol;
        {
            CounterRng rng(cfg.seed, index, step_stream(step, kStreamLadder));
            snap.bids.reserve(cfg.depth_levels);
            snap.asks.reserve(cfg.depth_levels);
            const double best_bid = mid - half_spread;
            const double best_ask = mid + half_spread;
            for (std::size_t lvl = 0; lvl < cfg.depth_levels; ++lvl) {
                const double offset = cfg.spread_fraction * static_cast<double>(lvl);
                snap.bids.push_back(Level{best_bid * (1.0 - offset),
                                          p.level_quantity * rng.next_uniform(0.5, 1.5)});
                snap.asks.push_back(Level{best_ask * (1.0 + offset),
                                          p.level_quantity * rng.next_uniform(0.5, 1.5)});
            }
        }
        out.push_back(EventRecord{std::move(snap)});

        // taker trades over (t, t_next) as a Poisson arrival stream
        {
            CounterRng rng(cfg.seed, index, step_stream(step, kStreamTrades));
            const double mean_gap_ms = 1000.0 / p.trade_rate_per_s;
            double cursor = static_cast<double>(t) + rng.next_exponential(mean_gap_ms);
            while (cursor < static_cast<double>(t_next)) {
                Trade trade;
                trade.ts = static_cast<TimestampMs>(cursor);
                trade.exchange = cfg.exchange;
                trade.symbol = p.symbol;
                const bool buy = rng.next_u01() < 0.5;
                trade.taker_side = buy ? Side::Buy : Side::Sell;
                trade.price = buy ? mid + half_spread : mid - half_spread;
                trade.quantity = rng.next_exponential(p.mean_trade_size);
                trade.trade_id = p.symbol + "-" + std::to_string(trade_seq++);
                out.push_back(EventRecord{std::move(trade)});
                cursor += rng.next_exponential(mean_gap_ms);
            }
        }

        t = t_next;
        ++step;
    }
    return out;
}

std::vector<EventRecord> inject_pump(std::vector<EventRecord> stream,
                                     const InjectionParams& params) {
    if (params.window_start >= params.window_end) return stream;  // zero-width: no-op
    const bool surge = params.buy_volume_multiplier > 1.0;
    const bool wall = params.sell_wall_multiplier > 1.0;
    if (!surge && !wall) return stream;

    if (stream.empty() || stream.front().ts() >= params.window_start ||
        stream.back().ts() < params.window_end - 1) {
        throw Error(Errc::WindowOutOfRange,
                    "stream does not cover the accumulation window");
    }

    // Window mean of taker-buy volume, estimated from the pre-window history.
    double hist_buy_volume = 0.0;
    std::size_t hist_buy_count = 0;
    double window_buy_volume = 0.0;
    for (const EventRecord& r : stream) {
        if (r.kind() != RecordKind::Trade) continue;
        const Trade& trade = r.trade();
        if (trade.symbol != params.symbol || trade.taker_side != Side::Buy) continue;
        if (trade.ts < params.window_start) {
            hist_buy_volume += trade.quantity;
            ++hist_buy_count;
        } else if (trade.ts < params.window_end) {
            window_buy_volume += trade.quantity;
        }
    }
    const double window_ms = static_cast<double>(params.window_end - params.window_start);
    const double history_ms =
        static_cast<double>(params.window_start - stream.front().ts());
    const double mean_window_volume = hist_buy_volume * window_ms / history_ms;

    double extra = 0.0;
    if (surge) {
        extra = std::max(0.0, params.buy_volume_multiplier * mean_window_volume -
                                  window_buy_volume);
    }

    // Draw the injected trades: times uniform in the window, sizes scaled so
    // they sum to exactly `extra`.
    struct Injected {
        TimestampMs ts;
        double qty;
    };
    std::vector<Injected> injected;
    if (extra > 0.0 && hist_buy_count > 0) {
        CounterRng rng(params.seed, kStreamInject, 0);
        const double mean_size = 1.5 * hist_buy_volume / static_cast<double>(hist_buy_count);
        const auto count = static_cast<std::size_t>(
            std::max(1.0, std::ceil(extra / std::max(mean_size, 1e-12))));
        injected.reserve(count);
        double total = 0.0;
        for (std::size_t i = 0; i < count; ++i) {
            const auto offset = static_cast<TimestampMs>(rng.next_u01() * window_ms);
            const double qty = rng.next_uniform(0.5, 1.5);
            injected.push_back(Injected{params.window_start + offset, qty});
            total += qty;
        }
        for (auto& inj : injected) inj.qty *= extra / total;
        std::sort(injected.begin(), injected.end(), [](const Injected& a, const Injected& b) {
            return a.ts < b.ts;
        });
    }

    // Impact ramps with the fraction of injected volume already executed.
    double injected_so_far = 0.0;
    auto impact_at = [&](TimestampMs ts) {
        if (extra <= 0.0 || params.price_impact_fraction <= 0.0) return 1.0;
        if (ts < params.window_start) return 1.0;
        return 1.0 + params.price_impact_fraction * (injected_so_far / extra);
    };

    std::vector<EventRecord> out;
    out.reserve(stream.size() + injected.size());
    std::size_t next_inject = 0;
    std::uint64_t inject_seq = 0;

    // Reference price for injected trades: the latest un-impacted target ask.
    double last_raw_ask = 0.0;
    for (const EventRecord& r : stream) {
        if (r.ts() >= params.window_start) break;
        if (r.symbol_key() != params.symbol) continue;
        if (r.kind() == RecordKind::Snapshot && !r.snapshot().asks.empty()) {
            last_raw_ask = r.snapshot().asks.front().price;
        } else if (r.kind() == RecordKind::Trade) {
            last_raw_ask = r.trade().price;
        }
    }
    if (!injected.empty() && last_raw_ask <= 0.0) {
        throw Error(Errc::WindowOutOfRange, "no target price history before the window");
    }

    auto emit_injected_until = [&](TimestampMs ts) {
        while (next_inject < injected.size() && injected[next_inject].ts < ts) {
            const Injected& inj = injected[next_inject];
            injected_so_far += inj.qty;
            Trade trade;
            trade.ts = inj.ts;
            trade.exchange = params.exchange_hint;
            trade.symbol = params.symbol;
            trade.price = last_raw_ask * impact_at(inj.ts);
            trade.quantity = inj.qty;
            trade.taker_side = Side::Buy;
            trade.trade_id = params.symbol + "-inj-" + std::to_string(inject_seq++);
            out.push_back(EventRecord{std::move(trade)});
            ++next_inject;
        }
    };

    for (EventRecord& r : stream) {
        const bool is_target_symbol = r.symbol_key() == params.symbol;
        emit_injected_until(r.ts());
        const TimestampMs ts = r.ts();
        const bool in_window = ts >= params.window_start && ts < params.window_end;
        if (is_target_symbol && in_window) {
            const double m = impact_at(ts);
            if (r.kind() == RecordKind::Snapshot) {
                auto snap = r.snapshot();
                if (!snap.asks.empty()) last_raw_ask = snap.asks.front().price;
                for (Level& level : snap.bids) level.price *= m;
                for (Level& level : snap.asks) {
                    level.price *= m;
                    if (wall) level.quantity *= params.sell_wall_multiplier;
                }
                out.push_back(EventRecord{std::move(snap)});
                continue;
            }
            if (r.kind() == RecordKind::Trade) {
                auto trade = r.trade();
                trade.price *= m;
                out.push_back(EventRecord{std::move(trade)});
                continue;
            }
        }
        out.push_back(std::move(r));
    }
    emit_injected_until(INT64_MAX);
    return out;
}

ScenarioResult generate_scenario(const ScenarioConfig& cfg, const fs::path& out_dir,
                                 std::size_t jobs) {
    check_config(cfg);
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw Error(Errc::IoFailure, "cannot create " + out_dir.string());

    const TimestampMs pump = cfg.effective_pump_time();
    const SymbolParams target = scenario_symbol_params(cfg, cfg.target_index);

    std::vector<std::vector<fs::path>> files_per_symbol(cfg.symbol_count);
    parallel_for(cfg.symbol_count, jobs, [&](std::size_t idx) {
        std::vector<EventRecord> stream = generate_symbol_stream(cfg, idx);
        if (idx == cfg.target_index) {
            InjectionParams inj;
            inj.symbol = target.symbol;
            inj.exchange_hint = cfg.exchange;
            inj.window_start = pump - cfg.accumulation_window_ms;
            inj.window_end = pump;
            inj.buy_volume_multiplier = cfg.buy_volume_multiplier;
            inj.sell_wall_multiplier = cfg.sell_wall_multiplier;
            inj.price_impact_fraction = cfg.price_impact_fraction;
            inj.seed = cfg.seed;
            stream = inject_pump(std::move(stream), inj);
        }
        std::string snapshots;
        std::string trades;
        for (const EventRecord& r : stream) {
            if (r.kind() == RecordKind::Snapshot) {
                snapshots += encode_snapshot(r.snapshot());
                snapshots.push_back('\n');
            } else if (r.kind() == RecordKind::Trade) {
                trades += encode_trade(r.trade());
                trades.push_back('\n');
            }
        }
        const SymbolParams p = scenario_symbol_params(cfg, idx);
        const fs::path snap_path = out_dir / (p.symbol + "_snapshots.jsonl");
        const fs::path trade_path = out_dir / (p.symbol + "_trades.jsonl");
        write_file_atomic(snap_path, snapshots);
        write_file_atomic(trade_path, trades);
        files_per_symbol[idx] = {snap_path, trade_path};
    });

    ScenarioResult result;
    for (auto& files : files_per_symbol) {
        result.files.insert(result.files.end(), files.begin(), files.end());
    }
    result.exact_pump_time = pump;
    result.ground_truth.symbol = target.symbol;
    result.ground_truth.exchange = cfg.exchange;
    result.ground_truth.release_time = round_to_nearest_hour(pump);
    result.ground_truth.source_channel = "simulator";

    write_file_atomic(out_dir / "ground_truth.json",
                      encode_ground_truth(cfg, result.ground_truth));
    result.files.push_back(out_dir / "ground_truth.json");
    return result;
}

std::string encode_ground_truth(const ScenarioConfig& cfg, const PumpEvent& event) {
    json j;
    j["config"] = {
        {"seed", cfg.seed},
        {"symbol_count", cfg.symbol_count},
        {"exchange", cfg.exchange},
        {"symbol_prefix", cfg.symbol_prefix},
        {"base_ts", cfg.base_ts},
        {"span_ms", cfg.span_ms},
        {"fine_cadence_ms", cfg.fine_cadence_ms},
        {"coarse_cadence_ms", cfg.coarse_cadence_ms},
        {"fine_window_ms", cfg.fine_window_ms},
        {"mid_price_min", cfg.mid_price_min},
        {"mid_price_max", cfg.mid_price_max},
        {"mean_trade_rate_per_s", cfg.mean_trade_rate_per_s},
        {"mean_trade_size", cfg.mean_trade_size},
        {"depth_levels", cfg.depth_levels},
        {"step_volatility", cfg.step_volatility},
        {"mean_reversion", cfg.mean_reversion},
        {"spread_fraction", cfg.spread_fraction},
        {"target_index", cfg.target_index},
        {"pump_time", cfg.pump_time},
        {"accumulation_window_ms", cfg.accumulation_window_ms},
        {"buy_volume_multiplier", cfg.buy_volume_multiplier},
        {"sell_wall_multiplier", cfg.sell_wall_multiplier},
        {"price_impact_fraction", cfg.price_impact_fraction},
    };
    j["event"] = {
        {"symbol", event.symbol},
        {"exchange", event.exchange},
        {"release_time", event.release_time},
        {"source_channel", event.source_channel},
        {"message_ids", event.message_ids},
    };
    j["pump_time"] = cfg.effective_pump_time();
    return j.dump(2) + "\n";
}

GroundTruth parse_ground_truth(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(Errc::MalformedRecord, std::string("ground truth: ") + e.what());
    }
    GroundTruth out;
    try {
        const json& c = j.at("config");
        out.config.seed = c.at("seed").get<std::uint64_t>();
        out.config.symbol_count = c.at("symbol_count").get<std::size_t>();
        out.config.exchange = c.at("exchange").get<std::string>();
        out.config.symbol_prefix = c.at("symbol_prefix").get<std::string>();
        out.config.base_ts = c.at("base_ts").get<TimestampMs>();
        out.config.span_ms = c.at("span_ms").get<TimestampMs>();
        out.config.fine_cadence_ms = c.at("fine_cadence_ms").get<TimestampMs>();
        out.config.coarse_cadence_ms = c.at("coarse_cadence_ms").get<TimestampMs>();
        out.config.fine_window_ms = c.at("fine_window_ms").get<TimestampMs>();
        out.config.mid_price_min = c.at("mid_price_min").get<double>();
        out.config.mid_price_max = c.at("mid_price_max").get<double>();
        out.config.mean_trade_rate_per_s = c.at("mean_trade_rate_per_s").get<double>();
        out.config.mean_trade_size = c.at("mean_trade_size").get<double>();
        out.config.depth_levels = c.at("depth_levels").get<std::size_t>();
        out.config.step_volatility = c.at("step_volatility").get<double>();
        out.config.mean_reversion = c.at("mean_reversion").get<double>();
        out.config.spread_fraction = c.at("spread_fraction").get<double>();
        out.config.target_index = c.at("target_index").get<std::size_t>();
        out.config.pump_time = c.at("pump_time").get<TimestampMs>();
        out.config.accumulation_window_ms = c.at("accumulation_window_ms").get<TimestampMs>();
        out.config.buy_volume_multiplier = c.at("buy_volume_multiplier").get<double>();
        out.config.sell_wall_multiplier = c.at("sell_wall_multiplier").get<double>();
        out.config.price_impact_fraction = c.at("price_impact_fraction").get<double>();
        const json& e = j.at("event");
        out.event.symbol = e.at("symbol").get<std::string>();
        out.event.exchange = e.at("exchange").get<std::string>();
        out.event.release_time = e.at("release_time").get<TimestampMs>();
        out.event.source_channel = e.at("source_channel").get<std::string>();
        out.event.message_ids = e.at("message_ids").get<std::vector<std::string>>();
        out.pump_time = j.at("pump_time").get<TimestampMs>();
    } catch (const json::exception& e) {
        throw Error(Errc::SchemaViolation, std::string("ground truth: ") + e.what());
    }
    return out;
}

}  // namespace pumpscan
