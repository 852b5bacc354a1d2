#include "pumpscan/jsonl.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

#include <json.hpp>

namespace pumpscan {

using nlohmann::json;

std::string format_double(double value) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    (void)ec;
    return std::string(buf, end);
}

void append_json_string(std::string& out, std::string_view s) {
    out.push_back('"');
    for (unsigned char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\b': out += "\\b"; break;
            case '\f': out += "\\f"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (c < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out.push_back(static_cast<char>(c));
                }
        }
    }
    out.push_back('"');
}

namespace {

void append_number(std::string& out, double v) { out += format_double(v); }

[[noreturn]] void schema_error(const std::string& what) {
    throw Error(Errc::SchemaViolation, what);
}

const json& require_field(const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end()) schema_error(std::string("missing field '") + key + "'");
    return *it;
}

TimestampMs get_ts(const json& obj, const char* key = "ts") {
    const json& v = require_field(obj, key);
    if (v.is_number_integer()) return v.get<std::int64_t>();
    if (v.is_number_float()) {
        const double d = v.get<double>();
        if (std::nearbyint(d) == d) return static_cast<std::int64_t>(d);
    }
    schema_error(std::string("field '") + key + "' must be an integer millisecond timestamp");
}

std::string get_string(const json& obj, const char* key) {
    const json& v = require_field(obj, key);
    if (!v.is_string()) schema_error(std::string("field '") + key + "' must be a string");
    return v.get<std::string>();
}

double get_positive_number(const json& obj, const char* key) {
    const json& v = require_field(obj, key);
    if (!v.is_number()) schema_error(std::string("field '") + key + "' must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d) || d <= 0.0) {
        schema_error(std::string("field '") + key + "' must be finite and > 0");
    }
    return d;
}

std::vector<Level> get_ladder(const json& obj, const char* key) {
    const json& v = require_field(obj, key);
    if (!v.is_array()) schema_error(std::string("field '") + key + "' must be an array");
    std::vector<Level> out;
    out.reserve(v.size());
    for (const json& pair : v) {
        if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() ||
            !pair[1].is_number()) {
            schema_error(std::string("levels in '") + key + "' must be [price, qty] pairs");
        }
        out.push_back(Level{pair[0].get<double>(), pair[1].get<double>()});
    }
    return out;
}

EventRecord parse_snapshot(const json& obj) {
    OrderBookSnapshot snap;
    snap.ts = get_ts(obj);
    snap.exchange = get_string(obj, "exchange");
    snap.symbol = get_string(obj, "symbol");
    snap.bids = get_ladder(obj, "bids");
    snap.asks = get_ladder(obj, "asks");
    try {
        validate_snapshot(snap);
    } catch (const Error& e) {
        schema_error(e.what());
    }
    return EventRecord{std::move(snap)};
}

EventRecord parse_trade(const json& obj) {
    Trade trade;
    trade.ts = get_ts(obj);
    trade.exchange = get_string(obj, "exchange");
    trade.symbol = get_string(obj, "symbol");
    trade.price = get_positive_number(obj, "price");
    trade.quantity = get_positive_number(obj, "qty");
    const std::string side = get_string(obj, "side");
    if (side == "buy") {
        trade.taker_side = Side::Buy;
    } else if (side == "sell") {
        trade.taker_side = Side::Sell;
    } else {
        schema_error("field 'side' must be \"buy\" or \"sell\"");
    }
    trade.trade_id = get_string(obj, "id");
    return EventRecord{std::move(trade)};
}

EventRecord parse_message(const json& obj) {
    LabeledMessage msg;
    msg.ts = get_ts(obj);
    msg.channel = get_string(obj, "channel");
    msg.text = get_string(obj, "text");
    if (auto it = obj.find("label"); it != obj.end() && !it->is_null()) {
        if (!it->is_string()) schema_error("field 'label' must be a string");
        const auto label = message_label_from(it->get<std::string>());
        if (!label) schema_error("unknown label '" + it->get<std::string>() + "'");
        msg.label = *label;
    }
    if (auto it = obj.find("symbol"); it != obj.end() && !it->is_null()) {
        if (!it->is_string()) schema_error("field 'symbol' must be a string");
        msg.extracted_symbol = it->get<std::string>();
    }
    if (auto it = obj.find("exchange"); it != obj.end() && !it->is_null()) {
        if (!it->is_string()) schema_error("field 'exchange' must be a string");
        msg.extracted_exchange = it->get<std::string>();
    }
    return EventRecord{std::move(msg)};
}

}  // namespace

EventRecord parse_record(std::string_view line, RecordKind kind) {
    json obj;
    try {
        obj = json::parse(line);
    } catch (const json::parse_error& e) {
        throw Error(Errc::MalformedRecord,
                    "invalid JSON at byte " + std::to_string(e.byte) + ": " + e.what());
    }
    if (!obj.is_object()) {
        throw Error(Errc::MalformedRecord, "record line is not a JSON object");
    }
    switch (kind) {
        case RecordKind::Snapshot: return parse_snapshot(obj);
        case RecordKind::Trade: return parse_trade(obj);
        case RecordKind::Message: return parse_message(obj);
    }
    throw Error(Errc::MalformedRecord, "unknown record kind");
}

std::string encode_snapshot(const OrderBookSnapshot& snapshot) {
    std::string out;
    out.reserve(64 + 24 * (snapshot.bids.size() + snapshot.asks.size()));
    out += "{\"ts\":";
    out += std::to_string(snapshot.ts);
    out += ",\"exchange\":";
    append_json_string(out, snapshot.exchange);
    out += ",\"symbol\":";
    append_json_string(out, snapshot.symbol);
    auto append_ladder = [&out](const std::vector<Level>& ladder) {
        out.push_back('[');
        for (std::size_t i = 0; i < ladder.size(); ++i) {
            if (i > 0) out.push_back(',');
            out.push_back('[');
            append_number(out, ladder[i].price);
            out.push_back(',');
            append_number(out, ladder[i].quantity);
            out.push_back(']');
        }
        out.push_back(']');
    };
    out += ",\"bids\":";
    append_ladder(snapshot.bids);
    out += ",\"asks\":";
    append_ladder(snapshot.asks);
    out.push_back('}');
    return out;
}

std::string encode_trade(const Trade& trade) {
    std::string out;
    out.reserve(96);
    out += "{\"ts\":";
    out += std::to_string(trade.ts);
    out += ",\"exchange\":";
    append_json_string(out, trade.exchange);
    out += ",\"symbol\":";
    append_json_string(out, trade.symbol);
    out += ",\"price\":";
    append_number(out, trade.price);
    out += ",\"qty\":";
    append_number(out, trade.quantity);
    if (trade.taker_side) {
        out += ",\"side\":";
        out += (*trade.taker_side == Side::Buy) ? "\"buy\"" : "\"sell\"";
    }
    out += ",\"id\":";
    append_json_string(out, trade.trade_id);
    out.push_back('}');
    return out;
}

std::string encode_message(const LabeledMessage& message) {
    std::string out;
    out.reserve(64 + message.text.size());
    out += "{\"ts\":";
    out += std::to_string(message.ts);
    out += ",\"channel\":";
    append_json_string(out, message.channel);
    out += ",\"text\":";
    append_json_string(out, message.text);
    if (message.label) {
        out += ",\"label\":";
        append_json_string(out, message_label_name(*message.label));
    }
    if (message.extracted_symbol) {
        out += ",\"symbol\":";
        append_json_string(out, *message.extracted_symbol);
    }
    if (message.extracted_exchange) {
        out += ",\"exchange\":";
        append_json_string(out, *message.extracted_exchange);
    }
    out.push_back('}');
    return out;
}

std::string encode_record(const EventRecord& record) {
    switch (record.kind()) {
        case RecordKind::Snapshot: return encode_snapshot(record.snapshot());
        case RecordKind::Trade: return encode_trade(record.trade());
        case RecordKind::Message: return encode_message(record.message());
    }
    return {};
}

}  // namespace pumpscan
