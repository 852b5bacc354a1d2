#include "pumpscan/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace pumpscan {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

[[noreturn]] void bad(std::string_view origin, std::size_t line_no, const std::string& what) {
    throw Error(Errc::InvalidConfig,
                std::string(origin) + ":" + std::to_string(line_no) + ": " + what);
}

double parse_number(std::string_view value, std::string_view origin, std::size_t line_no) {
    try {
        std::size_t used = 0;
        const double d = std::stod(std::string(value), &used);
        if (used != value.size()) throw std::invalid_argument("trailing junk");
        return d;
    } catch (const std::exception&) {
        bad(origin, line_no, "expected a number, got '" + std::string(value) + "'");
    }
}

bool parse_bool(std::string_view value, std::string_view origin, std::size_t line_no) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    bad(origin, line_no, "expected true/false, got '" + std::string(value) + "'");
}

std::vector<DerivativePattern> parse_patterns(std::string_view value) {
    std::vector<DerivativePattern> out;
    std::size_t start = 0;
    while (start <= value.size()) {
        std::size_t end = value.find(',', start);
        if (end == std::string_view::npos) end = value.size();
        std::string_view item = trim(value.substr(start, end - start));
        if (!item.empty()) {
            DerivativePattern pat;
            if (item.front() == '~') {
                pat.infix = true;
                item.remove_prefix(1);
            }
            pat.text = std::string(item);
            out.push_back(std::move(pat));
        }
        start = end + 1;
    }
    return out;
}

}  // namespace

AppConfig parse_config(std::string_view text, std::string_view origin) {
    AppConfig cfg;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view raw = text.substr(start, end - start);
        start = end + 1;
        ++line_no;

        std::string_view line = raw;
        if (auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) bad(origin, line_no, "expected 'key = value'");
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) bad(origin, line_no, "empty key or value");

        auto number = [&] { return parse_number(value, origin, line_no); };

        if (key == "baseline_span_s") {
            cfg.detector.baseline_span_ms = static_cast<TimestampMs>(number() * 1000.0);
        } else if (key == "short_window_s") {
            cfg.detector.short_window_ms = static_cast<TimestampMs>(number() * 1000.0);
        } else if (key == "cadence_s") {
            cfg.detector.cadence_ms = static_cast<TimestampMs>(number() * 1000.0);
        } else if (key == "min_samples") {
            cfg.detector.min_samples = static_cast<std::int64_t>(number());
        } else if (key == "epsilon_sigma") {
            cfg.detector.epsilon_sigma = number();
        } else if (key == "slope_levels") {
            cfg.detector.slope_levels = static_cast<std::size_t>(number());
        } else if (key == "mcap_min") {
            cfg.filter.mcap_min = number();
        } else if (key == "mcap_max") {
            cfg.filter.mcap_max = number();
        } else if (key == "include_unreported") {
            cfg.filter.include_unreported = parse_bool(value, origin, line_no);
        } else if (key == "derivative_patterns") {
            cfg.filter.derivative_patterns = parse_patterns(value);
        } else if (key == "backtest_sample_size") {
            cfg.backtest_sample_size = static_cast<std::size_t>(number());
        } else if (key.rfind("weight.", 0) == 0) {
            const auto metric = metric_from(key.substr(7));
            if (!metric) bad(origin, line_no, "unknown metric '" + key.substr(7) + "'");
            const double w = number();
            if (w < 0.0) bad(origin, line_no, "weights must be non-negative");
            cfg.detector.weights[static_cast<std::size_t>(*metric)] = w;
        } else if (key.rfind("direction.", 0) == 0) {
            const auto metric = metric_from(key.substr(10));
            if (!metric) bad(origin, line_no, "unknown metric '" + key.substr(10) + "'");
            const double d = number();
            if (d != 1.0 && d != -1.0) bad(origin, line_no, "directions must be +1 or -1");
            cfg.detector.directions[static_cast<std::size_t>(*metric)] = static_cast<int>(d);
        } else {
            bad(origin, line_no, "unknown key '" + key + "'");
        }
    }
    if (cfg.filter.mcap_min > cfg.filter.mcap_max) {
        throw Error(Errc::InvalidConfig, std::string(origin) + ": mcap_min > mcap_max");
    }
    if (cfg.detector.cadence_ms <= 0 || cfg.detector.short_window_ms <= 0 ||
        cfg.detector.baseline_span_ms <= 0) {
        throw Error(Errc::InvalidConfig, std::string(origin) + ": durations must be positive");
    }
    return cfg;
}

AppConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::IoFailure, "cannot open config " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path.string());
}

}  // namespace pumpscan
