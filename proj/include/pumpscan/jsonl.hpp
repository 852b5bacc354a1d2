#pragma once

#include <string>
#include <string_view>

#include "pumpscan/types.hpp"

namespace pumpscan {

// Line-delimited JSON record formats.
//
//   snapshot: {"ts":int_ms,"exchange":str,"symbol":str,
//              "bids":[[price,qty],...],"asks":[[price,qty],...]}
//             bids best-first descending, asks best-first ascending
//   trade:    {"ts":int_ms,"exchange":str,"symbol":str,"price":num,"qty":num,
//              "side":"buy"|"sell","id":str}        (side = taker side)
//   message:  {"ts":int_ms,"channel":str,"text":str,
//              "label":str?,"symbol":str?,"exchange":str?}
//
// Parsing accepts fields in any order. Encoding writes the documented order
// with shortest-round-trip number formatting, so encode -> decode is the
// identity on values and repeated encodes are byte-identical.

// Parses one line into a validated record. Throws Error{MalformedRecord} for
// bad JSON (message includes the byte offset) and Error{SchemaViolation} for
// missing, mistyped or invalid fields.
EventRecord parse_record(std::string_view line, RecordKind kind);

std::string encode_record(const EventRecord& record);
std::string encode_snapshot(const OrderBookSnapshot& snapshot);
std::string encode_trade(const Trade& trade);
std::string encode_message(const LabeledMessage& message);

// Shortest decimal form that parses back to exactly the same double.
std::string format_double(double value);
// Appends a JSON string literal (quotes + escapes) to out.
void append_json_string(std::string& out, std::string_view s);

}  // namespace pumpscan
