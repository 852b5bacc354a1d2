#pragma once

#include <string_view>

#include "pumpscan/types.hpp"

namespace pumpscan {

// Deterministic keyword/regex baseline classifier. Rules are evaluated in a
// fixed order, first match wins, and anything unmatched is Noise, so the
// function is total over non-empty text. Matching is case-insensitive.
//
//   1. DelayOrCancellation  cancel / cancellation / postponed / delayed /
//                           rescheduled / called off
//   2. Countdown            "<n> minutes|hours|seconds until|left|to go|
//                           remaining", countdown, t-minus, get/be ready,
//                           starting soon, final call
//   3. TargetCoinRelease    coin is / token is / coin: / coin name / buy now /
//                           go go go
//   4. PumpResults          result / profit / peaked / gain / congrat /
//                           well done / success
//   5. PumpAnnouncement     next pump / pump will / pump scheduled / pump on /
//                           announcement / will be held / date: / time:
//   6. Noise                everything else
//
// Countdown precedes the announcement rules so schedule reminders that repeat
// the word "pump" ("1 HOUR UNTIL THE PUMP") stay countdowns.
//
// Throws std::invalid_argument on empty text.
MessageLabel classify_message_baseline(std::string_view text);

}  // namespace pumpscan
