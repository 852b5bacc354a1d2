#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pumpscan {

// Machine-readable error codes. The CLI prints these verbatim on stderr so
// callers can dispatch on them without parsing prose.
enum class Errc {
    // record validation
    UnsortedLadder,
    NonPositiveValue,
    EmptyBothSides,
    // ingestion
    MalformedRecord,
    SchemaViolation,
    OutOfOrderInput,
    IoFailure,
    // metrics
    EmptySide,
    ZeroDenominator,
    InsufficientDepth,
    MissingSide,
    EmptyWindow,
    SymbolMismatch,
    // baselines / scoring
    NonMonotonicTime,
    NoScorableMetrics,
    EmptyInput,
    // events / backtest
    MissingExtraction,
    InsufficientHistory,
    UnknownTarget,
    InsufficientCoverage,
    // filter
    DuplicateSymbol,
    // simulator
    InvalidConfig,
    WindowOutOfRange,
};

std::string_view errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace pumpscan
