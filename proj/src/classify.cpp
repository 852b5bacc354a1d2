#include "pumpscan/classify.hpp"

#include <regex>

namespace pumpscan {

namespace {

struct Rule {
    MessageLabel label;
    std::regex pattern;
};

const std::vector<Rule>& rules() {
    static const std::vector<Rule> table = [] {
        const auto flags = std::regex::icase | std::regex::ECMAScript | std::regex::optimize;
        std::vector<Rule> t;
        t.push_back({MessageLabel::DelayOrCancellation,
                     std::regex(R"(cancel(l?ed|lation)?|postponed?|delay(ed)?|rescheduled|called\s+off)",
                                flags)});
        t.push_back({MessageLabel::Countdown,
                     std::regex(R"(\d+\s*(minutes?|mins?|hours?|hrs?|seconds?|secs?)\s*(until|left|before|to\s+go|remaining)|countdown|t-minus|(get|be)\s+ready|starting\s+soon|final\s+call)",
                                flags)});
        t.push_back({MessageLabel::TargetCoinRelease,
                     std::regex(R"((coin|token)\s+is\b|coin\s*:|coin\s+name|buy\s+now|go\s+go\s+go)",
                                flags)});
        t.push_back({MessageLabel::PumpResults,
                     std::regex(R"(results?|profits?|peaked|gains?|congrat|well\s+done|success)",
                                flags)});
        t.push_back({MessageLabel::PumpAnnouncement,
                     std::regex(R"(next\s+pump|pump\s+(will|scheduled|on|at)|announcement|will\s+be\s+held|date\s*:|time\s*:)",
                                flags)});
        return t;
    }();
    return table;
}

}  // namespace

MessageLabel classify_message_baseline(std::string_view text) {
    if (text.empty()) throw std::invalid_argument("cannot classify empty text");
    const std::string s(text);
    for (const Rule& rule : rules()) {
        if (std::regex_search(s, rule.pattern)) return rule.label;
    }
    return MessageLabel::Noise;
}

}  // namespace pumpscan
