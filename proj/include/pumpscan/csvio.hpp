#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "pumpscan/scoring.hpp"
#include "pumpscan/types.hpp"

namespace pumpscan {

// Ranking output schema: rank,symbol,score,z_<metric>... with one z column
// per metric in MetricName order; absent z values are empty fields. Repeated
// runs on identical input produce byte-identical files (atomic write).
// `rankings` must already be sorted by rank ascending. Returns data rows
// written. Throws Error{IoFailure}.
std::size_t persist_rankings(const std::vector<RankedCandidate>& rankings,
                             const std::filesystem::path& path);

std::string render_rankings_csv(const std::vector<RankedCandidate>& rankings);

// Coin metadata schema: symbol,name,market_cap_usd,token_standard
std::vector<CoinMetadata> read_coin_csv(const std::filesystem::path& path);
std::string render_coin_csv(const std::vector<CoinMetadata>& coins);

struct RejectedCoin {
    std::string symbol;
    std::string reason;  // mcap_out_of_range | derivative_pattern
};

// Rejection report schema: symbol,reason
std::size_t persist_rejections(const std::vector<RejectedCoin>& rejected,
                               const std::filesystem::path& path);

// Metrics dump schema: ts,symbol,<metric columns in MetricName order>;
// absent metrics render as empty fields.
std::string metrics_csv_header();
void append_metrics_csv_row(std::string& out, TimestampMs ts, const MetricVector& vector);

// CSV plumbing shared by readers/writers (RFC 4180 quoting).
std::string csv_escape(std::string_view field);
std::vector<std::string> csv_split(const std::string& line);

}  // namespace pumpscan
