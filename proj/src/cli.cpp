#include "pumpscan/cli.hpp"

#include <cstdio>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "pumpscan/backtest.hpp"
#include "pumpscan/classify.hpp"
#include "pumpscan/config.hpp"
#include "pumpscan/csvio.hpp"
#include "pumpscan/events.hpp"
#include "pumpscan/filter.hpp"
#include "pumpscan/jsonl.hpp"
#include "pumpscan/pipeline.hpp"
#include "pumpscan/replay.hpp"
#include "pumpscan/simulator.hpp"

namespace pumpscan::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct GlobalOpts {
    std::string config_path;
    bool verbose = false;
};

void log_info(const GlobalOpts& g, const std::string& msg) {
    if (g.verbose) std::fprintf(stderr, "pumpscan: %s\n", msg.c_str());
}

AppConfig effective_config(const GlobalOpts& g) {
    if (g.config_path.empty()) return AppConfig{};
    return load_config(g.config_path);
}

std::string read_text_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::IoFailure, "cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<int> parse_int_list(const std::string& csv, const char* what) {
    std::vector<int> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            out.push_back(std::stoi(item));
        } catch (const std::exception&) {
            throw CLI::ValidationError(std::string(what) + ": bad integer '" + item + "'");
        }
    }
    if (out.empty()) throw CLI::ValidationError(std::string(what) + ": empty list");
    return out;
}

std::vector<DataMode> parse_modes(const std::string& csv) {
    if (csv == "all") return {DataMode::Both, DataMode::TradeOnly, DataMode::BookOnly};
    std::vector<DataMode> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        const auto mode = data_mode_from(item);
        if (!mode) {
            throw CLI::ValidationError("--mode: expected both|trade_only|book_only|all");
        }
        out.push_back(*mode);
    }
    if (out.empty()) throw CLI::ValidationError("--mode: empty list");
    return out;
}

// Events file: either a simulator ground_truth.json (object with an "event"
// key, carrying the exact pump second) or a JSONL file of pump events.
std::vector<BacktestEventInput> load_events_file(const fs::path& path) {
    const std::string text = read_text_file(path);
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) {
        throw Error(Errc::EmptyInput, "events file is empty: " + path.string());
    }
    if (text.find("\"config\"") != std::string::npos &&
        text.find("\"event\"") != std::string::npos) {
        const GroundTruth gt = parse_ground_truth(text);
        return {BacktestEventInput{gt.event, gt.pump_time}};
    }
    std::vector<BacktestEventInput> out;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        if (line.empty()) continue;
        out.push_back(BacktestEventInput{parse_pump_event(line), std::nullopt});
    }
    if (out.empty()) throw Error(Errc::EmptyInput, "no events in " + path.string());
    return out;
}

std::vector<LabeledMessage> load_messages_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::IoFailure, "cannot open " + path.string());
    std::vector<LabeledMessage> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            out.push_back(parse_record(line, RecordKind::Message).message());
        } catch (const Error& e) {
            throw Error(e.code(),
                        path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

// --- subcommand runners -----------------------------------------------------

struct SimulateOpts {
    ScenarioConfig scenario;
    std::string out_dir;
    double span_s = 0.0;
    double fine_window_s = 0.0;
    double coarse_cadence_s = 0.0;
    double cadence_s = 0.0;
    double accum_window_s = 0.0;
    std::size_t jobs = 0;
};

int run_simulate(const GlobalOpts& g, SimulateOpts& opt) {
    if (opt.span_s > 0) opt.scenario.span_ms = static_cast<TimestampMs>(opt.span_s * 1000);
    if (opt.cadence_s > 0) {
        opt.scenario.fine_cadence_ms = static_cast<TimestampMs>(opt.cadence_s * 1000);
        opt.scenario.coarse_cadence_ms = opt.scenario.fine_cadence_ms;
    }
    if (opt.coarse_cadence_s > 0) {
        opt.scenario.coarse_cadence_ms = static_cast<TimestampMs>(opt.coarse_cadence_s * 1000);
    }
    if (opt.fine_window_s > 0) {
        opt.scenario.fine_window_ms = static_cast<TimestampMs>(opt.fine_window_s * 1000);
    }
    if (opt.accum_window_s > 0) {
        opt.scenario.accumulation_window_ms =
            static_cast<TimestampMs>(opt.accum_window_s * 1000);
    }
    const std::size_t jobs = opt.jobs > 0 ? opt.jobs : std::thread::hardware_concurrency();
    const ScenarioResult result = generate_scenario(opt.scenario, opt.out_dir, jobs);
    log_info(g, "scenario written: " + std::to_string(result.files.size()) + " files, target " +
                    result.ground_truth.symbol + ", pump at " +
                    std::to_string(result.exact_pump_time));
    return 0;
}

struct ReplayOpts {
    std::string data_dir;
    std::string speed = "fast";
    std::string out_path;
    std::string metrics_csv_path;
};

int run_replay(const GlobalOpts& g, const ReplayOpts& opt) {
    ReplaySpeed speed = ReplaySpeed::as_fast_as_possible();
    if (opt.speed == "real") {
        speed = ReplaySpeed::real_time();
    } else if (opt.speed.rfind('x', 0) == 0) {
        try {
            speed = ReplaySpeed::fixed(std::stod(opt.speed.substr(1)));
        } catch (const std::exception&) {
            throw CLI::ValidationError("--speed: expected fast, real or x<multiplier>");
        }
        if (speed.multiplier <= 0) throw CLI::ValidationError("--speed: multiplier must be > 0");
    } else if (opt.speed != "fast") {
        throw CLI::ValidationError("--speed: expected fast, real or x<multiplier>");
    }

    const AppConfig cfg = effective_config(g);
    std::string merged;
    std::string metrics_csv = metrics_csv_header();
    std::optional<MetricsPipeline> pipeline;
    if (!opt.metrics_csv_path.empty()) {
        pipeline.emplace(cfg.detector, [&metrics_csv](TimestampMs tick, const MetricVector& v) {
            append_metrics_csv_row(metrics_csv, tick, v);
        });
    }

    const auto sources = discover_sources(opt.data_dir);
    const std::size_t count = replay(sources, speed, [&](const EventRecord& r) {
        if (!opt.out_path.empty()) {
            merged += encode_record(r);
            merged.push_back('\n');
        }
        if (pipeline) pipeline->feed(r);
    });

    if (!opt.out_path.empty()) write_file_atomic(opt.out_path, merged);
    if (!opt.metrics_csv_path.empty()) write_file_atomic(opt.metrics_csv_path, metrics_csv);
    log_info(g, "replayed " + std::to_string(count) + " records from " +
                    std::to_string(sources.size()) + " files");
    return 0;
}

struct RankOpts {
    std::string data_dir;
    TimestampMs at = 0;
    std::string coins_csv;
    std::string out_path = "ranking.csv";
    std::string mode = "both";
};

int run_rank(const GlobalOpts& g, const RankOpts& opt) {
    const AppConfig cfg = effective_config(g);
    const auto mode = data_mode_from(opt.mode);
    if (!mode) throw CLI::ValidationError("--mode: expected both|trade_only|book_only");

    MetricsPipeline pipeline(cfg.detector);
    const auto records = load_records(fs::path(opt.data_dir));
    for (const EventRecord& r : records) {
        if (r.ts() > opt.at) break;
        pipeline.feed(r);
    }
    pipeline.advance_to(opt.at);

    std::vector<std::string> universe = pipeline.symbols();
    if (!opt.coins_csv.empty()) {
        const auto coins = read_coin_csv(opt.coins_csv);
        const FilterResult filtered = filter_universe(coins, cfg.filter);
        std::set<std::string> kept;
        for (const CoinMetadata& c : filtered.kept) kept.insert(c.symbol);
        std::erase_if(universe, [&kept](const std::string& s) { return !kept.contains(s); });
        log_info(g, "filter kept " + std::to_string(universe.size()) + " tracked symbols");
    }

    std::vector<ScoredSymbol> scored;
    for (const std::string& symbol : universe) {
        auto eval = pipeline.evaluate(symbol, opt.at, *mode);
        if (eval.score) scored.push_back(ScoredSymbol{symbol, *eval.score, std::move(eval.z)});
    }
    const auto ranked = rank_candidates(std::move(scored));  // throws EmptyInput if none
    const std::size_t rows = persist_rankings(ranked, opt.out_path);
    log_info(g, "wrote " + std::to_string(rows) + " ranked candidates to " + opt.out_path);
    return 0;
}

struct BacktestOpts {
    std::string events_path;
    std::string data_dir;
    std::string offsets = "20,40,60";
    std::string ks = "5,10";
    std::string modes = "both";
    std::uint64_t seed = 1;
    std::size_t sample = 0;
    std::size_t jobs = 0;
    std::string out_path = "backtest_report.json";
};

int run_backtest_cmd(const GlobalOpts& g, const BacktestOpts& opt) {
    const AppConfig app = effective_config(g);
    BacktestConfig cfg;
    cfg.offsets_s = parse_int_list(opt.offsets, "--offsets");
    cfg.ks = parse_int_list(opt.ks, "--k");
    cfg.modes = parse_modes(opt.modes);
    cfg.seed = opt.seed;
    cfg.sample_size = opt.sample > 0 ? opt.sample : app.backtest_sample_size;
    cfg.jobs = opt.jobs > 0 ? opt.jobs : std::thread::hardware_concurrency();
    cfg.detector = app.detector;

    const auto events = load_events_file(opt.events_path);
    const BacktestReport report = run_backtest(events, fs::path(opt.data_dir), cfg);
    write_file_atomic(opt.out_path, report.to_json());
    log_info(g, "backtest over " + std::to_string(events.size()) + " events written to " +
                    opt.out_path);
    return 0;
}

struct FilterOpts {
    std::string coins_csv;
    std::string out_path = "kept.csv";
    std::string rejected_path = "rejected.csv";
};

int run_filter(const GlobalOpts& g, const FilterOpts& opt) {
    const AppConfig cfg = effective_config(g);
    const auto coins = read_coin_csv(opt.coins_csv);
    const FilterResult result = filter_universe(coins, cfg.filter);
    write_file_atomic(opt.out_path, render_coin_csv(result.kept));
    persist_rejections(result.rejected, opt.rejected_path);
    log_info(g, "kept " + std::to_string(result.kept.size()) + ", rejected " +
                    std::to_string(result.rejected.size()));
    return 0;
}

struct ClusterOpts {
    std::string messages_path;
    std::string out_path = "events.jsonl";
};

int run_cluster(const GlobalOpts& g, const ClusterOpts& opt) {
    const auto messages = load_messages_file(opt.messages_path);
    const auto events = cluster_pump_events(messages);
    std::string out;
    for (const PumpEvent& e : events) {
        out += encode_pump_event(e);
        out.push_back('\n');
    }
    write_file_atomic(opt.out_path, out);
    log_info(g, std::to_string(events.size()) + " events from " +
                    std::to_string(messages.size()) + " messages");
    return 0;
}

struct ClassifyOpts {
    std::string messages_path;
    std::string out_path = "labeled.jsonl";
    bool relabel = false;
};

int run_classify(const GlobalOpts& g, const ClassifyOpts& opt) {
    auto messages = load_messages_file(opt.messages_path);
    std::size_t labeled = 0;
    std::string out;
    for (LabeledMessage& msg : messages) {
        if (!msg.label || opt.relabel) {
            msg.label = classify_message_baseline(msg.text);
            ++labeled;
        }
        out += encode_message(msg);
        out.push_back('\n');
    }
    write_file_atomic(opt.out_path, out);
    log_info(g, "labeled " + std::to_string(labeled) + " of " +
                    std::to_string(messages.size()) + " messages");
    return 0;
}

struct AnalyzeOpts {
    std::string events_path;
    std::string data_dir;
    std::string out_path = "analytics.json";
    double window_s = 86'400.0;   // volume / order-size comparison window
    double spike_window_s = 600.0;
};

int run_analyze(const GlobalOpts& g, const AnalyzeOpts& opt) {
    const auto events = load_events_file(opt.events_path);
    const auto records = load_records(fs::path(opt.data_dir));
    const auto window_ms = static_cast<TimestampMs>(opt.window_s * 1000);
    const auto spike_ms = static_cast<TimestampMs>(opt.spike_window_s * 1000);

    json out;
    out["window_s"] = opt.window_s;
    out["spike_window_s"] = opt.spike_window_s;
    json jevents = json::array();
    for (const auto& input : events) {
        const TimestampMs pump = input.exact_pump_time.value_or(input.event.release_time);
        const std::string& symbol = input.event.symbol;

        double pump_volume = 0.0, prior_volume = 0.0;
        double pump_qty_sum = 0.0, prior_qty_sum = 0.0;
        std::size_t pump_trades = 0, prior_trades = 0;
        std::vector<PricePoint> mids;
        for (const EventRecord& r : records) {
            if (r.symbol_key() != symbol) continue;
            if (r.kind() == RecordKind::Trade) {
                const Trade& t = r.trade();
                if (t.ts >= pump - window_ms && t.ts < pump) {
                    pump_volume += t.quantity;
                    pump_qty_sum += t.quantity;
                    ++pump_trades;
                } else if (t.ts >= pump - 8 * window_ms && t.ts < pump - window_ms) {
                    prior_volume += t.quantity;
                    prior_qty_sum += t.quantity;
                    ++prior_trades;
                }
            } else if (r.kind() == RecordKind::Snapshot) {
                const OrderBookSnapshot& b = r.snapshot();
                if (!b.bids.empty() && !b.asks.empty()) {
                    mids.push_back(
                        PricePoint{b.ts, (b.bids.front().price + b.asks.front().price) / 2.0});
                }
            }
        }

        json je;
        je["symbol"] = symbol;
        je["exchange"] = input.event.exchange;
        je["pump_time"] = pump;
        // volume ratio: last window before the pump vs the window before it
        const double prior_one = [&] {
            double v = 0.0;
            for (const EventRecord& r : records) {
                if (r.kind() != RecordKind::Trade || r.symbol_key() != symbol) continue;
                const Trade& t = r.trade();
                if (t.ts >= pump - 2 * window_ms && t.ts < pump - window_ms) v += t.quantity;
            }
            return v;
        }();
        je["volume_ratio"] =
            prior_one > 0.0 ? json(volume_ratio(pump_volume, prior_one)) : json();
        // order-size ratio: mean trade size, pump window vs prior 7 windows
        const double prior_avg =
            prior_trades > 0 ? prior_qty_sum / static_cast<double>(prior_trades) : 0.0;
        const double pump_avg =
            pump_trades > 0 ? pump_qty_sum / static_cast<double>(pump_trades) : 0.0;
        je["order_size_increase_ratio"] =
            (prior_avg > 0.0 && pump_trades > 0)
                ? json(order_size_increase_ratio(prior_avg, pump_avg))
                : json();
        try {
            const SpikeMetrics spike = price_spike_metrics(mids, pump, spike_ms);
            je["spike"] = {{"time_to_peak_minutes", spike.time_to_peak_minutes},
                           {"magnitude", spike.spike_magnitude}};
        } catch (const Error&) {
            je["spike"] = json();
        }
        jevents.push_back(std::move(je));
    }
    out["events"] = std::move(jevents);
    write_file_atomic(opt.out_path, out.dump(2) + "\n");
    log_info(g, "analytics for " + std::to_string(events.size()) + " events written to " +
                    opt.out_path);
    return 0;
}

}  // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"Streaming pump-and-dump target-coin detection engine"};
    app.require_subcommand(1);

    GlobalOpts global;
    app.add_option("--config", global.config_path, "key=value config file");
    app.add_flag("--verbose", global.verbose, "log progress to stderr");

    SimulateOpts sim;
    auto* c_sim = app.add_subcommand("simulate", "generate a synthetic scenario");
    c_sim->add_option("--seed", sim.scenario.seed, "scenario seed");
    c_sim->add_option("--coins", sim.scenario.symbol_count, "number of symbols");
    c_sim->add_option("--out", sim.out_dir, "output directory")->required();
    c_sim->add_option("--span-s", sim.span_s, "history span in seconds");
    c_sim->add_option("--base-ts", sim.scenario.base_ts, "scenario start (epoch ms)");
    c_sim->add_option("--cadence-s", sim.cadence_s, "snapshot cadence in seconds");
    c_sim->add_option("--coarse-cadence-s", sim.coarse_cadence_s,
                      "coarse cadence for early history");
    c_sim->add_option("--fine-window-s", sim.fine_window_s,
                      "length of the fine-cadence tail");
    c_sim->add_option("--pump-at", sim.scenario.pump_time, "pump instant (epoch ms)");
    c_sim->add_option("--accum-window-s", sim.accum_window_s, "accumulation window");
    c_sim->add_option("--buy-mult", sim.scenario.buy_volume_multiplier,
                      "taker-buy volume multiplier (<=1 disables)");
    c_sim->add_option("--wall-mult", sim.scenario.sell_wall_multiplier,
                      "ask-side wall multiplier (<=1 disables)");
    c_sim->add_option("--impact", sim.scenario.price_impact_fraction,
                      "peak price impact fraction");
    c_sim->add_option("--rate", sim.scenario.mean_trade_rate_per_s, "mean trades per second");
    c_sim->add_option("--trade-size", sim.scenario.mean_trade_size, "mean trade size");
    c_sim->add_option("--depth", sim.scenario.depth_levels, "ladder depth per side");
    c_sim->add_option("--target", sim.scenario.target_index, "target symbol index");
    c_sim->add_option("--jobs", sim.jobs, "worker threads");

    ReplayOpts rep;
    auto* c_rep = app.add_subcommand("replay", "merge and replay record files");
    c_rep->add_option("--data", rep.data_dir, "record directory")->required();
    c_rep->add_option("--speed", rep.speed, "fast, real or x<multiplier>");
    c_rep->add_option("--out", rep.out_path, "write the merged stream here");
    c_rep->add_option("--metrics-csv", rep.metrics_csv_path, "write metric samples here");

    RankOpts rank;
    auto* c_rank = app.add_subcommand("rank", "rank tracked symbols at an instant");
    c_rank->add_option("--data", rank.data_dir, "record directory")->required();
    c_rank->add_option("--at", rank.at, "evaluation instant (epoch ms)")->required();
    c_rank->add_option("--filter", rank.coins_csv, "coin metadata CSV to filter the universe");
    c_rank->add_option("--out", rank.out_path, "ranking CSV path");
    c_rank->add_option("--mode", rank.mode, "both, trade_only or book_only");

    BacktestOpts bt;
    auto* c_bt = app.add_subcommand("backtest", "evaluate ranking against known events");
    c_bt->add_option("--events", bt.events_path, "ground_truth.json or events JSONL")
        ->required();
    c_bt->add_option("--data", bt.data_dir, "record directory")->required();
    c_bt->add_option("--offsets", bt.offsets, "seconds before the pump, comma list");
    c_bt->add_option("--k", bt.ks, "TOP-k list");
    c_bt->add_option("--mode", bt.modes, "both|trade_only|book_only, comma list, or all");
    c_bt->add_option("--seed", bt.seed, "decoy sampling seed");
    c_bt->add_option("--sample", bt.sample, "decoys per event");
    c_bt->add_option("--jobs", bt.jobs, "worker threads");
    c_bt->add_option("--out", bt.out_path, "report path");

    FilterOpts flt;
    auto* c_flt = app.add_subcommand("filter", "apply the candidate filter to a coin list");
    c_flt->add_option("--coins", flt.coins_csv, "coin metadata CSV")->required();
    c_flt->add_option("--out", flt.out_path, "kept coins CSV");
    c_flt->add_option("--rejected", flt.rejected_path, "rejection report CSV");

    ClusterOpts clu;
    auto* c_clu = app.add_subcommand("cluster-events", "group release messages into events");
    c_clu->add_option("--messages", clu.messages_path, "labeled messages JSONL")->required();
    c_clu->add_option("--out", clu.out_path, "events JSONL path");

    ClassifyOpts cls;
    auto* c_cls = app.add_subcommand("classify", "label messages with the baseline classifier");
    c_cls->add_option("--messages", cls.messages_path, "messages JSONL")->required();
    c_cls->add_option("--out", cls.out_path, "labeled output path");
    c_cls->add_flag("--relabel", cls.relabel, "overwrite existing labels");

    AnalyzeOpts ana;
    auto* c_ana = app.add_subcommand("analyze", "per-event volume/spike/order-size analytics");
    c_ana->add_option("--events", ana.events_path, "ground_truth.json or events JSONL")
        ->required();
    c_ana->add_option("--data", ana.data_dir, "record directory")->required();
    c_ana->add_option("--out", ana.out_path, "analytics JSON path");
    c_ana->add_option("--window-s", ana.window_s, "comparison window seconds");
    c_ana->add_option("--spike-window-s", ana.spike_window_s, "spike window seconds");

    try {
        app.parse(argc, argv);
        if (c_sim->parsed()) return run_simulate(global, sim);
        if (c_rep->parsed()) return run_replay(global, rep);
        if (c_rank->parsed()) return run_rank(global, rank);
        if (c_bt->parsed()) return run_backtest_cmd(global, bt);
        if (c_flt->parsed()) return run_filter(global, flt);
        if (c_clu->parsed()) return run_cluster(global, clu);
        if (c_cls->parsed()) return run_classify(global, cls);
        if (c_ana->parsed()) return run_analyze(global, ana);
        return 2;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const Error& e) {
        std::fprintf(stderr, "pumpscan: error [%s] %s\n",
                     std::string(errc_name(e.code())).c_str(), e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "pumpscan: error [Internal] %s\n", e.what());
        return 1;
    }
}

}  // namespace pumpscan::cli
