#include "pumpscan/replay.hpp"

#include <algorithm>
#include <chrono>
#include <thread>
#include <tuple>

#include "pumpscan/jsonl.hpp"

namespace pumpscan {

namespace fs = std::filesystem;

std::optional<RecordKind> record_kind_from_filename(const fs::path& path) {
    const std::string name = path.filename().string();
    auto ends_with = [&name](std::string_view suffix) {
        return name.size() >= suffix.size() &&
               name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0;
    };
    if (ends_with("snapshots.jsonl")) return RecordKind::Snapshot;
    if (ends_with("trades.jsonl")) return RecordKind::Trade;
    if (ends_with("messages.jsonl")) return RecordKind::Message;
    return std::nullopt;
}

std::vector<RecordSource> discover_sources(const fs::path& dir) {
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) {
        throw Error(Errc::IoFailure, "not a directory: " + dir.string());
    }
    std::vector<RecordSource> out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        if (auto kind = record_kind_from_filename(entry.path())) {
            out.push_back(RecordSource{entry.path(), *kind});
        }
    }
    std::sort(out.begin(), out.end(),
              [](const RecordSource& a, const RecordSource& b) { return a.path < b.path; });
    return out;
}

namespace {

// Merge ordering: ts, then exchange, symbol, kind rank, then input order
// (stream index, line number). Snapshots precede trades at the same instant
// so book state is current before trades are attributed.
struct MergeKey {
    TimestampMs ts;
    std::string_view exchange;
    std::string_view symbol;
    std::uint8_t kind;
    std::size_t stream;
    std::size_t line;

    bool operator<(const MergeKey& other) const {
        return std::tie(ts, exchange, symbol, kind, stream, line) <
               std::tie(other.ts, other.exchange, other.symbol, other.kind, other.stream,
                        other.line);
    }
};

MergeKey key_of(const EventRecord& r, std::size_t stream, std::size_t line) {
    return MergeKey{r.ts(),   r.exchange_key(),  r.symbol_key(),
                    static_cast<std::uint8_t>(r.kind()), stream, line};
}

}  // namespace

ReplayMerger::ReplayMerger(std::vector<RecordSource> sources) {
    streams_.reserve(sources.size());
    for (auto& src : sources) {
        auto stream = std::make_unique<Stream>();
        stream->source = std::move(src);
        stream->file.open(stream->source.path);
        if (!stream->file) {
            throw Error(Errc::IoFailure, "cannot open " + stream->source.path.string());
        }
        streams_.push_back(std::move(stream));
        advance(streams_.size() - 1);
    }
}

void ReplayMerger::advance(std::size_t idx) {
    Stream& s = *streams_[idx];
    s.head.reset();
    std::string line;
    while (std::getline(s.file, line)) {
        ++s.line_no;
        if (line.empty()) continue;
        EventRecord record;
        try {
            record = parse_record(line, s.source.kind);
        } catch (const Error& e) {
            throw Error(e.code(), s.source.path.string() + ":" + std::to_string(s.line_no) +
                                      ": " + e.what());
        }
        if (record.ts() < s.last_ts) {
            throw Error(Errc::OutOfOrderInput,
                        s.source.path.string() + ":" + std::to_string(s.line_no) +
                            ": timestamp regressed");
        }
        s.last_ts = record.ts();
        s.head = std::move(record);
        return;
    }
}

std::optional<EventRecord> ReplayMerger::next() {
    std::size_t best = streams_.size();
    MergeKey best_key{};
    for (std::size_t i = 0; i < streams_.size(); ++i) {
        if (!streams_[i]->head) continue;
        MergeKey k = key_of(*streams_[i]->head, i, streams_[i]->line_no);
        if (best == streams_.size() || k < best_key) {
            best = i;
            best_key = k;
        }
    }
    if (best == streams_.size()) return std::nullopt;
    EventRecord out = std::move(*streams_[best]->head);
    advance(best);
    return out;
}

std::vector<EventRecord> merge_streams(std::vector<std::vector<EventRecord>> streams) {
    struct Cursor {
        std::size_t stream;
        std::size_t pos;
    };
    std::vector<Cursor> cursors;
    std::size_t total = 0;
    for (std::size_t i = 0; i < streams.size(); ++i) {
        TimestampMs last = INT64_MIN;
        for (const auto& r : streams[i]) {
            if (r.ts() < last) {
                throw Error(Errc::OutOfOrderInput,
                            "in-memory stream " + std::to_string(i) + " regressed");
            }
            last = r.ts();
        }
        total += streams[i].size();
        if (!streams[i].empty()) cursors.push_back(Cursor{i, 0});
    }
    std::vector<EventRecord> out;
    out.reserve(total);
    while (!cursors.empty()) {
        std::size_t best = cursors.size();
        MergeKey best_key{};
        for (std::size_t c = 0; c < cursors.size(); ++c) {
            const auto& cur = cursors[c];
            MergeKey k = key_of(streams[cur.stream][cur.pos], cur.stream, cur.pos);
            if (best == cursors.size() || k < best_key) {
                best = c;
                best_key = k;
            }
        }
        auto& cur = cursors[best];
        out.push_back(std::move(streams[cur.stream][cur.pos]));
        if (++cur.pos >= streams[cur.stream].size()) {
            cursors.erase(cursors.begin() + static_cast<std::ptrdiff_t>(best));
        }
    }
    return out;
}

std::vector<EventRecord> load_records(const std::vector<RecordSource>& sources) {
    ReplayMerger merger(sources);
    std::vector<EventRecord> out;
    while (auto record = merger.next()) {
        out.push_back(std::move(*record));
    }
    return out;
}

std::vector<EventRecord> load_records(const fs::path& dir) {
    return load_records(discover_sources(dir));
}

std::size_t replay(const std::vector<RecordSource>& sources, ReplaySpeed speed,
                   const std::function<void(const EventRecord&)>& sink) {
    ReplayMerger merger(sources);
    std::size_t count = 0;
    std::optional<TimestampMs> prev_ts;
    while (auto record = merger.next()) {
        if (speed.kind != ReplaySpeed::Kind::AsFastAsPossible && prev_ts) {
            const double k =
                speed.kind == ReplaySpeed::Kind::RealTime ? 1.0 : speed.multiplier;
            const double wall_ms = static_cast<double>(record->ts() - *prev_ts) / k;
            if (wall_ms > 0.0) {
                std::this_thread::sleep_for(
                    std::chrono::duration<double, std::milli>(wall_ms));
            }
        }
        prev_ts = record->ts();
        sink(*record);
        ++count;
    }
    return count;
}

void write_file_atomic(const fs::path& path, const std::string& content) {
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(Errc::IoFailure, "cannot open " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw Error(Errc::IoFailure, "short write to " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) throw Error(Errc::IoFailure, "rename failed: " + ec.message());
}

}  // namespace pumpscan
