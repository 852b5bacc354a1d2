#pragma once

#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pumpscan/types.hpp"

namespace pumpscan {

struct RecordSource {
    std::filesystem::path path;
    RecordKind kind;
};

// Filename convention: *_snapshots.jsonl, *_trades.jsonl, *_messages.jsonl
// (also accepts snapshots.jsonl etc. verbatim).
std::optional<RecordKind> record_kind_from_filename(const std::filesystem::path& path);

// Scans a directory (non-recursive) for record files by the convention above,
// sorted by path for determinism. Throws Error{IoFailure} if dir is missing.
std::vector<RecordSource> discover_sources(const std::filesystem::path& dir);

struct ReplaySpeed {
    enum class Kind { AsFastAsPossible, RealTime, FixedMultiplier };
    Kind kind = Kind::AsFastAsPossible;
    double multiplier = 1.0;  // wall seconds per data second = 1 / multiplier

    static ReplaySpeed as_fast_as_possible() { return {}; }
    static ReplaySpeed real_time() { return {Kind::RealTime, 1.0}; }
    static ReplaySpeed fixed(double k) { return {Kind::FixedMultiplier, k}; }
};

// Streaming k-way merge over per-file record streams. Each input file must be
// individually non-decreasing in timestamp (Error{OutOfOrderInput} with file
// and line otherwise). The merged stream is globally non-decreasing; ties
// break by (exchange, symbol, kind: snapshot < trade < message, input order),
// so identical inputs always produce the identical sequence.
class ReplayMerger {
public:
    explicit ReplayMerger(std::vector<RecordSource> sources);

    // Next record in merge order, or nullopt at end of all streams.
    std::optional<EventRecord> next();

private:
    struct Stream {
        RecordSource source;
        std::ifstream file;
        std::size_t line_no = 0;
        TimestampMs last_ts = INT64_MIN;
        std::optional<EventRecord> head;
    };

    void advance(std::size_t idx);

    std::vector<std::unique_ptr<Stream>> streams_;
};

// Merges already-loaded per-stream record vectors under the same ordering.
// Streams must individually be non-decreasing (checked).
std::vector<EventRecord> merge_streams(std::vector<std::vector<EventRecord>> streams);

// Reads and merges everything into memory.
std::vector<EventRecord> load_records(const std::vector<RecordSource>& sources);
std::vector<EventRecord> load_records(const std::filesystem::path& dir);

// Drives a full replay, pacing emission per `speed`, handing each record to
// the sink. Returns the number of records emitted.
std::size_t replay(const std::vector<RecordSource>& sources, ReplaySpeed speed,
                   const std::function<void(const EventRecord&)>& sink);

// Writes content to path via a temp file + rename so partial output is never
// observable. Throws Error{IoFailure}.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace pumpscan
