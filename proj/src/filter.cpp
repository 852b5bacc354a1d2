#include "pumpscan/filter.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_set>

namespace pumpscan {

namespace {

char upper(char c) noexcept {
    return static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
}

bool iequals(std::string_view a, std::string_view b) noexcept {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (upper(a[i]) != upper(b[i])) return false;
    }
    return true;
}

bool icontains(std::string_view haystack, std::string_view needle) noexcept {
    if (needle.empty() || needle.size() > haystack.size()) return false;
    for (std::size_t i = 0; i + needle.size() <= haystack.size(); ++i) {
        if (iequals(haystack.substr(i, needle.size()), needle)) return true;
    }
    return false;
}

}  // namespace

bool market_cap_pass(const CoinMetadata& coin, const FilterConfig& cfg) noexcept {
    if (coin.market_cap_usd == 0.0) return cfg.include_unreported;
    return coin.market_cap_usd >= cfg.mcap_min && coin.market_cap_usd <= cfg.mcap_max;
}

bool is_derivative_symbol(std::string_view symbol, const FilterConfig& cfg) noexcept {
    for (const DerivativePattern& pat : cfg.derivative_patterns) {
        if (pat.text.empty() || pat.text.size() > symbol.size()) continue;
        if (pat.infix) {
            if (icontains(symbol, pat.text)) return true;
        } else {
            if (iequals(symbol.substr(symbol.size() - pat.text.size()), pat.text)) return true;
        }
    }
    return false;
}

FilterResult filter_universe(const std::vector<CoinMetadata>& coins, const FilterConfig& cfg) {
    std::unordered_set<std::string_view> seen;
    seen.reserve(coins.size());
    for (const CoinMetadata& coin : coins) {
        if (!seen.insert(coin.symbol).second) {
            throw Error(Errc::DuplicateSymbol, "duplicate symbol " + coin.symbol);
        }
    }
    FilterResult result;
    for (const CoinMetadata& coin : coins) {
        if (is_derivative_symbol(coin.symbol, cfg)) {
            result.rejected.push_back(RejectedCoin{coin.symbol, "derivative_pattern"});
        } else if (!market_cap_pass(coin, cfg)) {
            result.rejected.push_back(RejectedCoin{coin.symbol, "mcap_out_of_range"});
        } else {
            result.kept.push_back(coin);
        }
    }
    return result;
}

}  // namespace pumpscan
