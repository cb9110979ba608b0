#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "lhb/canonical.hpp"

namespace lhb {

enum class Decision { APPROVE, DENY, PAY, PARTIAL_PAY };

inline std::string to_string(Decision d) {
    switch (d) {
        case Decision::APPROVE: return "APPROVE";
        case Decision::DENY: return "DENY";
        case Decision::PAY: return "PAY";
        case Decision::PARTIAL_PAY: return "PARTIAL_PAY";
    }
    return {};
}

inline std::optional<Decision> decision_from_string(const std::string& s) {
    if (s == "APPROVE") return Decision::APPROVE;
    if (s == "DENY") return Decision::DENY;
    if (s == "PAY") return Decision::PAY;
    if (s == "PARTIAL_PAY") return Decision::PARTIAL_PAY;
    return std::nullopt;
}

inline bool is_denial(Decision d) { return d == Decision::DENY; }

// The committed output of one decision pass. committed=false means the agent
// abstained and carries no decision label.
struct DecisionRecord {
    std::string case_id;
    bool committed = true;
    std::optional<Decision> decision;
    std::optional<std::int64_t> amount_cents;
    std::string rationale;
    std::optional<std::string> notice;
    std::map<std::string, Canonical> referenced_values;
};

// What a compliance auditor is allowed to see: output only, no architecture
// identity, no ground truth. Built from a DecisionRecord at the call site.
struct OutputBundle {
    Decision decision;
    std::string rationale;
    std::string notice;
};

}  // namespace lhb
