#include "pumpscan/csvio.hpp"

#include <cmath>
#include <fstream>

#include "pumpscan/jsonl.hpp"
#include "pumpscan/replay.hpp"

namespace pumpscan {

std::string csv_escape(std::string_view field) {
    const bool needs_quotes =
        field.find_first_of(",\"\r\n") != std::string_view::npos;
    if (!needs_quotes) return std::string(field);
    std::string out;
    out.reserve(field.size() + 2);
    out.push_back('"');
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::vector<std::string> csv_split(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else if (c == '\r' && i + 1 == line.size()) {
            // tolerate CRLF line endings
        } else {
            cur.push_back(c);
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

std::string render_rankings_csv(const std::vector<RankedCandidate>& rankings) {
    for (std::size_t i = 0; i < rankings.size(); ++i) {
        if (rankings[i].rank != static_cast<int>(i) + 1) {
            throw std::invalid_argument("rankings must be sorted by rank ascending");
        }
    }
    std::string out = "rank,symbol,score";
    for (auto m : kAllMetrics) {
        out += ",z_";
        out += metric_name(m);
    }
    out.push_back('\n');
    for (const RankedCandidate& c : rankings) {
        out += std::to_string(c.rank);
        out.push_back(',');
        out += csv_escape(c.symbol);
        out.push_back(',');
        out += format_double(c.score);
        for (auto m : kAllMetrics) {
            out.push_back(',');
            if (auto z = c.z.get(m)) out += format_double(*z);
        }
        out.push_back('\n');
    }
    return out;
}

std::size_t persist_rankings(const std::vector<RankedCandidate>& rankings,
                             const std::filesystem::path& path) {
    write_file_atomic(path, render_rankings_csv(rankings));
    return rankings.size();
}

namespace {

std::string_view token_standard_name(TokenStandard standard) {
    switch (standard) {
        case TokenStandard::Erc20: return "ERC20";
        case TokenStandard::Bep20: return "BEP20";
        case TokenStandard::Brc20: return "BRC20";
        case TokenStandard::Rune: return "Rune";
        case TokenStandard::Other: return "other";
    }
    return "other";
}

std::optional<TokenStandard> token_standard_from(std::string_view name) {
    if (name == "ERC20" || name == "ERC-20") return TokenStandard::Erc20;
    if (name == "BEP20" || name == "BEP-20") return TokenStandard::Bep20;
    if (name == "BRC20" || name == "BRC-20") return TokenStandard::Brc20;
    if (name == "Rune" || name == "Runes") return TokenStandard::Rune;
    if (name == "other") return TokenStandard::Other;
    return std::nullopt;
}

}  // namespace

std::vector<CoinMetadata> read_coin_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::IoFailure, "cannot open " + path.string());
    std::vector<CoinMetadata> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (line_no == 1 && line.rfind("symbol,", 0) == 0) continue;  // header
        auto fields = csv_split(line);
        if (fields.size() != 4) {
            throw Error(Errc::SchemaViolation, path.string() + ":" + std::to_string(line_no) +
                                                   ": expected 4 fields");
        }
        CoinMetadata coin;
        coin.symbol = fields[0];
        coin.name = fields[1];
        try {
            coin.market_cap_usd = std::stod(fields[2]);
        } catch (const std::exception&) {
            throw Error(Errc::SchemaViolation, path.string() + ":" + std::to_string(line_no) +
                                                   ": bad market_cap_usd");
        }
        if (!(coin.market_cap_usd >= 0.0) || !std::isfinite(coin.market_cap_usd)) {
            throw Error(Errc::SchemaViolation, path.string() + ":" + std::to_string(line_no) +
                                                   ": market_cap_usd must be >= 0");
        }
        if (!fields[3].empty()) {
            coin.token_standard = token_standard_from(fields[3]);
            if (!coin.token_standard) {
                throw Error(Errc::SchemaViolation, path.string() + ":" +
                                                       std::to_string(line_no) +
                                                       ": unknown token_standard");
            }
        }
        out.push_back(std::move(coin));
    }
    return out;
}

std::string render_coin_csv(const std::vector<CoinMetadata>& coins) {
    std::string out = "symbol,name,market_cap_usd,token_standard\n";
    for (const CoinMetadata& c : coins) {
        out += csv_escape(c.symbol);
        out.push_back(',');
        out += csv_escape(c.name);
        out.push_back(',');
        out += format_double(c.market_cap_usd);
        out.push_back(',');
        if (c.token_standard) out += token_standard_name(*c.token_standard);
        out.push_back('\n');
    }
    return out;
}

std::size_t persist_rejections(const std::vector<RejectedCoin>& rejected,
                               const std::filesystem::path& path) {
    std::string out = "symbol,reason\n";
    for (const RejectedCoin& r : rejected) {
        out += csv_escape(r.symbol);
        out.push_back(',');
        out += r.reason;
        out.push_back('\n');
    }
    write_file_atomic(path, out);
    return rejected.size();
}

std::string metrics_csv_header() {
    std::string out = "ts,symbol";
    for (auto m : kAllMetrics) {
        out.push_back(',');
        out += metric_name(m);
    }
    out.push_back('\n');
    return out;
}

void append_metrics_csv_row(std::string& out, TimestampMs ts, const MetricVector& vector) {
    out += std::to_string(ts);
    out.push_back(',');
    out += csv_escape(vector.symbol);
    for (auto m : kAllMetrics) {
        out.push_back(',');
        if (auto v = vector.get(m)) out += format_double(*v);
    }
    out.push_back('\n');
}

}  // namespace pumpscan
