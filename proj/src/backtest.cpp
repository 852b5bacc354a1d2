#include "pumpscan/backtest.hpp"

#include <algorithm>
#include <set>

#include <json.hpp>

#include "pumpscan/events.hpp"
#include "pumpscan/parallel.hpp"
#include "pumpscan/pipeline.hpp"
#include "pumpscan/replay.hpp"
#include "pumpscan/rng.hpp"

namespace pumpscan {

using nlohmann::json;

std::string encode_pump_event(const PumpEvent& event) {
    json j{{"symbol", event.symbol},
           {"exchange", event.exchange},
           {"release_time", event.release_time},
           {"source_channel", event.source_channel},
           {"message_ids", event.message_ids}};
    return j.dump();
}

PumpEvent parse_pump_event(std::string_view line) {
    json j;
    try {
        j = json::parse(line);
    } catch (const json::parse_error& e) {
        throw Error(Errc::MalformedRecord, std::string("event record: ") + e.what());
    }
    PumpEvent out;
    try {
        out.symbol = j.at("symbol").get<std::string>();
        out.exchange = j.at("exchange").get<std::string>();
        out.release_time = j.at("release_time").get<TimestampMs>();
        out.source_channel = j.value("source_channel", std::string{});
        if (j.contains("message_ids")) {
            out.message_ids = j.at("message_ids").get<std::vector<std::string>>();
        }
    } catch (const json::exception& e) {
        throw Error(Errc::SchemaViolation, std::string("event record: ") + e.what());
    }
    return out;
}

namespace {

std::vector<std::string> data_universe(const std::vector<EventRecord>& records) {
    std::set<std::string> symbols;
    for (const EventRecord& r : records) {
        if (r.kind() == RecordKind::Message) continue;
        symbols.insert(std::string(r.symbol_key()));
    }
    return {symbols.begin(), symbols.end()};
}

// target + sample_size decoys drawn without replacement from the universe
std::vector<std::string> sample_candidates(const std::vector<std::string>& universe,
                                           const std::string& target, std::uint64_t seed,
                                           std::size_t event_index, std::size_t sample_size) {
    std::vector<std::string> others;
    others.reserve(universe.size());
    for (const std::string& s : universe) {
        if (s != target) others.push_back(s);
    }
    CounterRng rng(seed, 0x5a3b7e, event_index);
    std::vector<std::uint64_t> picks;
    sample_indices(others.size(), sample_size, rng, std::back_inserter(picks));
    std::vector<std::string> candidates;
    candidates.reserve(picks.size() + 1);
    candidates.push_back(target);
    for (auto i : picks) candidates.push_back(others[i]);
    std::sort(candidates.begin(), candidates.end());
    return candidates;
}

}  // namespace

BacktestReport run_backtest(const std::vector<BacktestEventInput>& events,
                            const std::vector<EventRecord>& records,
                            const BacktestConfig& cfg) {
    BacktestReport report;
    report.offsets_s = cfg.offsets_s;
    report.ks = cfg.ks;
    report.modes = cfg.modes;
    report.seed = cfg.seed;
    report.sample_size = cfg.sample_size;
    report.events.resize(events.size());

    const std::vector<std::string> universe = data_universe(records);
    const TimestampMs stream_start = records.empty() ? 0 : records.front().ts();
    // Enough history for a metric to become scorable at all.
    const TimestampMs min_history_ms =
        cfg.detector.min_samples * cfg.detector.cadence_ms + cfg.detector.short_window_ms;

    // Pre-fill event frames (candidate sampling is per event, not per offset).
    for (std::size_t e = 0; e < events.size(); ++e) {
        EventResult& frame = report.events[e];
        frame.event = events[e].event;
        frame.pump_time = events[e].exact_pump_time.value_or(events[e].event.release_time);
        const bool known =
            std::binary_search(universe.begin(), universe.end(), frame.event.symbol);
        if (known) {
            frame.candidates = sample_candidates(universe, frame.event.symbol, cfg.seed, e,
                                                 cfg.sample_size);
        }
        frame.per_mode.assign(cfg.modes.size(),
                              std::vector<OffsetResult>(cfg.offsets_s.size()));
    }

    // One pipeline walk per (event, offset); all modes share it.
    const std::size_t total_units = events.size() * cfg.offsets_s.size();
    parallel_for(total_units, cfg.jobs, [&](std::size_t unit) {
        const std::size_t e = unit / cfg.offsets_s.size();
        const std::size_t o = unit % cfg.offsets_s.size();
        EventResult& frame = report.events[e];
        const int offset_s = cfg.offsets_s[o];
        const TimestampMs eval_at = frame.pump_time - offset_s * kMsPerSecond;

        auto fill = [&](bool skipped, const std::string& reason) {
            for (std::size_t m = 0; m < cfg.modes.size(); ++m) {
                OffsetResult& r = frame.per_mode[m][o];
                r.offset_s = offset_s;
                r.skipped = skipped;
                r.skip_reason = reason;
                r.candidate_count = frame.candidates.size();
            }
        };

        if (frame.candidates.empty()) {
            fill(true, "UnknownTarget");
            return;
        }
        if (records.empty() || stream_start > eval_at - min_history_ms) {
            fill(true, "InsufficientHistory");
            return;
        }
        fill(false, "");

        MetricsPipeline pipeline(cfg.detector);
        for (const EventRecord& r : records) {
            if (r.ts() > eval_at) break;
            pipeline.feed(r);
        }
        pipeline.advance_to(eval_at);

        for (std::size_t m = 0; m < cfg.modes.size(); ++m) {
            const DataMode mode = cfg.modes[m];
            std::vector<ScoredSymbol> scored;
            scored.reserve(frame.candidates.size());
            std::optional<double> target_score;
            for (const std::string& symbol : frame.candidates) {
                auto eval = pipeline.evaluate(symbol, eval_at, mode);
                if (symbol == frame.event.symbol && eval.score) target_score = *eval.score;
                if (eval.score) {
                    scored.push_back(ScoredSymbol{symbol, *eval.score, std::move(eval.z)});
                }
            }
            OffsetResult& r = frame.per_mode[m][o];
            r.scored_count = scored.size();
            if (!target_score) {
                // unscorable target ranks strictly after every scored candidate
                r.rank = static_cast<int>(scored.size()) + 1;
                continue;
            }
            const auto ranked = rank_candidates(std::move(scored));
            for (const RankedCandidate& c : ranked) {
                if (c.symbol == frame.event.symbol) {
                    r.rank = c.rank;
                    r.target_score = c.score;
                    break;
                }
            }
        }
    });

    return report;
}

BacktestReport run_backtest(const std::vector<BacktestEventInput>& events,
                            const std::filesystem::path& data_dir,
                            const BacktestConfig& cfg) {
    return run_backtest(events, load_records(data_dir), cfg);
}

std::vector<int> BacktestReport::ranks(DataMode mode, int offset_s) const {
    const auto m_it = std::find(modes.begin(), modes.end(), mode);
    const auto o_it = std::find(offsets_s.begin(), offsets_s.end(), offset_s);
    if (m_it == modes.end() || o_it == offsets_s.end()) {
        throw std::invalid_argument("mode/offset not part of this report");
    }
    const auto m = static_cast<std::size_t>(m_it - modes.begin());
    const auto o = static_cast<std::size_t>(o_it - offsets_s.begin());
    std::vector<int> out;
    out.reserve(events.size());
    for (const EventResult& frame : events) {
        const OffsetResult& r = frame.per_mode[m][o];
        if (!r.skipped) out.push_back(r.rank);
    }
    return out;
}

std::size_t BacktestReport::skipped_count(DataMode mode, int offset_s) const {
    return events.size() - ranks(mode, offset_s).size();
}

double BacktestReport::hit_rate(DataMode mode, int offset_s, int k) const {
    return topk_hit_rate(ranks(mode, offset_s), k);
}

std::string BacktestReport::to_json() const {
    json j;
    j["seed"] = seed;
    j["sample_size"] = sample_size;
    j["offsets_s"] = offsets_s;
    j["k"] = ks;
    {
        json names = json::array();
        for (auto mode : modes) names.push_back(std::string(data_mode_name(mode)));
        j["modes"] = names;
    }

    json jevents = json::array();
    for (const EventResult& frame : events) {
        json je;
        je["symbol"] = frame.event.symbol;
        je["exchange"] = frame.event.exchange;
        je["release_time"] = frame.event.release_time;
        je["pump_time"] = frame.pump_time;
        je["candidates"] = frame.candidates;
        json per_mode;
        for (std::size_t m = 0; m < modes.size(); ++m) {
            json rows = json::array();
            for (const OffsetResult& r : frame.per_mode[m]) {
                json row;
                row["offset_s"] = r.offset_s;
                row["skipped"] = r.skipped;
                if (r.skipped) {
                    row["skip_reason"] = r.skip_reason;
                } else {
                    row["rank"] = r.rank;
                    row["candidate_count"] = r.candidate_count;
                    row["scored_count"] = r.scored_count;
                    row["target_score"] = r.target_score;
                }
                rows.push_back(std::move(row));
            }
            per_mode[std::string(data_mode_name(modes[m]))] = std::move(rows);
        }
        je["results"] = std::move(per_mode);
        jevents.push_back(std::move(je));
    }
    j["events"] = std::move(jevents);

    // hit-rate table: rows = offsets, columns = mode x TOP-k
    json table = json::array();
    for (int offset : offsets_s) {
        json row;
        row["offset_s"] = offset;
        for (auto mode : modes) {
            json cell;
            const auto rs = ranks(mode, offset);
            cell["events"] = rs.size();
            cell["skipped"] = skipped_count(mode, offset);
            for (int k : ks) {
                cell["top" + std::to_string(k)] =
                    rs.empty() ? json() : json(topk_hit_rate(rs, k));
            }
            row[std::string(data_mode_name(mode))] = std::move(cell);
        }
        table.push_back(std::move(row));
    }
    j["hit_rate_table"] = std::move(table);
    return j.dump(2) + "\n";
}

}  // namespace pumpscan
