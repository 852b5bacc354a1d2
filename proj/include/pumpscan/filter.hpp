#pragma once

#include <string>
#include <vector>

#include "pumpscan/csvio.hpp"
#include "pumpscan/types.hpp"

namespace pumpscan {

// Symbol pattern for derivative-token exclusion. Matching is case-insensitive
// on the base symbol only.
struct DerivativePattern {
    std::string text;
    bool infix = false;  // default: suffix match

    bool operator==(const DerivativePattern&) const = default;
};

struct FilterConfig {
    double mcap_min = 0.0;
    double mcap_max = 60'000'000.0;
    // A market cap of exactly 0 means "unreported" and is never range-checked.
    bool include_unreported = true;
    std::vector<DerivativePattern> derivative_patterns = {
        {"3L"}, {"3S"}, {"5L"}, {"5S"}, {"UP"}, {"DOWN"}, {"BULL"}, {"BEAR"},
    };
};

// True iff the coin's market cap is unreported (and unreported coins are
// included) or lies in [mcap_min, mcap_max], bounds inclusive.
bool market_cap_pass(const CoinMetadata& coin, const FilterConfig& cfg) noexcept;

// True iff any configured pattern matches at its position (suffix by default).
bool is_derivative_symbol(std::string_view symbol, const FilterConfig& cfg) noexcept;

struct FilterResult {
    std::vector<CoinMetadata> kept;
    std::vector<RejectedCoin> rejected;
};

// Partitions the universe, preserving input order on both sides. Rejection
// reasons: mcap_out_of_range, derivative_pattern (derivative checked first).
// Throws Error{DuplicateSymbol} on repeated symbols.
FilterResult filter_universe(const std::vector<CoinMetadata>& coins, const FilterConfig& cfg);

}  // namespace pumpscan
