#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lhb/canonical.hpp"
#include "lhb/corpus.hpp"
#include "lhb/record.hpp"
#include "lhb/textscan.hpp"

namespace lhb {

enum class BackendKind { REFERENCE, REMOTE };

// Transport-level failure (network, HTTP error, unparseable reply). Distinct
// from a negative verdict: callers abort and log, never substitute a score.
struct BackendTransportError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BackendProfile {
    BackendKind kind = BackendKind::REFERENCE;
    std::string model_id;        // remote only
    double temperature = 0.0;    // judge/auditor calls are always temperature 0
    std::string endpoint_env = "LHB_ENDPOINT";
    std::string api_key_env = "LHB_API_KEY";
    std::string prompt_dir = "prompts";
    std::string prompt_version = "v1";
};

struct JudgeVerdict {
    bool entailed = false;
    std::string rationale_note;  // diagnostic only; metrics consume `entailed`
};

enum class Gate { COMMIT, ABSTAIN };

enum class Strictness { STRICT, MODERATE, PERMISSIVE };

inline std::string to_string(Strictness s) {
    switch (s) {
        case Strictness::STRICT: return "STRICT";
        case Strictness::MODERATE: return "MODERATE";
        case Strictness::PERMISSIVE: return "PERMISSIVE";
    }
    return {};
}

inline std::optional<Strictness> strictness_from_string(const std::string& s) {
    if (s == "STRICT") return Strictness::STRICT;
    if (s == "MODERATE") return Strictness::MODERATE;
    if (s == "PERMISSIVE") return Strictness::PERMISSIVE;
    return std::nullopt;
}

// Commit thresholds on required-key coverage, strictly decreasing so that a
// commit at one strictness implies a commit at every more permissive one.
inline double strictness_threshold(Strictness s) {
    switch (s) {
        case Strictness::STRICT: return 0.9;
        case Strictness::MODERATE: return 0.7;
        case Strictness::PERMISSIVE: return 0.5;
    }
    return 1.0;
}

// A key kind the completeness check looks for: domain-schema knowledge only,
// never per-case ground truth.
struct KeyRequirement {
    std::string key;
    Canonical::Kind kind = Canonical::Kind::Money;
};

inline std::vector<KeyRequirement> required_keys_for(Domain domain) {
    if (domain == Domain::LOAN) {
        return {{"income_2025", Canonical::Kind::Money},
                {"fico_score", Canonical::Kind::Text},
                {"appraised_value", Canonical::Kind::Money},
                {"loan_amount", Canonical::Kind::Money},
                {"dti", Canonical::Kind::Percent},
                {"locked_rate", Canonical::Kind::Percent}};
    }
    return {{"policy_number", Canonical::Kind::Text},
            {"dwelling_limit", Canonical::Kind::Money},
            {"repair_estimate", Canonical::Kind::Money},
            {"deductible", Canonical::Kind::Money},
            {"date_of_loss", Canonical::Kind::Date},
            {"net_payment", Canonical::Kind::Money}};
}

// The four model roles. Remote and reference implementations satisfy the same
// contracts, so any harness run is backend-swappable.
class Backend {
  public:
    virtual ~Backend() = default;

    virtual std::string summarize(const std::string& prior_summary, const std::string& new_text,
                                  std::int64_t char_budget) = 0;
    virtual DecisionRecord decide(const std::string& context, Domain task) = 0;
    virtual JudgeVerdict judge_entailment(const std::string& rationale,
                                          const ReasoningPoint& point) = 0;
    virtual bool audit_compliance(const OutputBundle& bundle,
                                  const RegulatoryStandard& standard) = 0;
    virtual Gate completeness_check(const std::string& context,
                                    const std::vector<KeyRequirement>& required_keys,
                                    Strictness strictness) = 0;

    virtual std::string name() const = 0;
};

namespace detail {

inline bool has_discourse_marker(std::string_view sentence) {
    static const char* markers[] = {"because",    "explained", "resolved",  "consistent with",
                                    "attributes", "reflects",  "rather than", "exceeds"};
    for (const char* m : markers) {
        if (contains_ci(sentence, m)) return true;
    }
    return false;
}

}  // namespace detail

// Deterministic offline implementation. Pure function of its text inputs: no
// randomness, no time dependence.
class ReferenceBackend : public Backend {
  public:
    std::string name() const override { return "reference"; }

    // Extractive: sentences carrying canonicalizable values, dates, and
    // identifiers first, then discourse-marked sentences, then the rest, each
    // class most-recent-first, truncating at sentence boundaries.
    std::string summarize(const std::string& prior_summary, const std::string& new_text,
                          std::int64_t char_budget) override {
        if (char_budget <= 0) throw std::invalid_argument("char_budget must be positive");
        std::vector<std::string> pool = split_sentences(prior_summary);
        for (auto& s : split_sentences(new_text)) pool.push_back(std::move(s));

        // Dedupe exact repeats, keeping the most recent occurrence.
        std::map<std::string, std::size_t> last_pos;
        for (std::size_t i = 0; i < pool.size(); ++i) last_pos[pool[i]] = i;

        struct Entry {
            std::size_t pos;
            int priority;
        };
        std::vector<Entry> entries;
        for (const auto& [sentence, pos] : last_pos) {
            int priority = !scan_values(sentence).empty()              ? 0
                           : detail::has_discourse_marker(sentence) ? 1
                                                                    : 2;
            entries.push_back({pos, priority});
        }
        std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
            if (a.priority != b.priority) return a.priority < b.priority;
            return a.pos > b.pos;  // recency within a class
        });

        std::vector<std::size_t> selected;
        std::int64_t used = 0;
        for (const auto& e : entries) {
            std::int64_t cost = static_cast<std::int64_t>(pool[e.pos].size()) +
                                (selected.empty() ? 0 : 1);
            if (used + cost > char_budget) continue;
            selected.push_back(e.pos);
            used += cost;
        }
        std::sort(selected.begin(), selected.end());
        std::string out;
        for (std::size_t pos : selected) {
            if (!out.empty()) out += ' ';
            out += pool[pos];
        }
        return out;
    }

    DecisionRecord decide(const std::string& context, Domain task) override {
        return task == Domain::LOAN ? decide_loan(context) : decide_claim(context);
    }

    // Entailed iff at least half (rounded up) of the point's evidence phrases
    // occur in the rationale.
    JudgeVerdict judge_entailment(const std::string& rationale,
                                  const ReasoningPoint& point) override {
        std::size_t present = 0;
        for (const auto& phrase : point.evidence_phrases) {
            if (contains_ci(rationale, phrase)) ++present;
        }
        std::size_t needed = (point.evidence_phrases.size() + 1) / 2;
        JudgeVerdict v;
        v.entailed = present >= needed && !point.evidence_phrases.empty();
        v.rationale_note = std::to_string(present) + "/" +
                           std::to_string(point.evidence_phrases.size()) + " evidence phrases";
        return v;
    }

    // Blinded: sees only the output bundle and the standard. Compliant iff
    // every required provision appears in the notice and the notice carries at
    // least one concrete canonicalizable value.
    bool audit_compliance(const OutputBundle& bundle,
                          const RegulatoryStandard& standard) override {
        if (!is_denial(bundle.decision)) {
            throw std::invalid_argument("standard not applicable");
        }
        for (const auto& provision : standard.required_provisions) {
            if (!contains_ci(bundle.notice, provision)) return false;
        }
        // Specificity: at least one concrete value beyond the provision
        // identifiers themselves.
        auto provisions = scan_provision_tokens(bundle.notice);
        for (const auto& tok : scan_values(bundle.notice)) {
            bool inside = false;
            for (const auto& p : provisions) {
                if (tok.pos >= p.pos && tok.pos < p.pos + p.surface.size()) inside = true;
            }
            if (!inside) return true;
        }
        return false;
    }

    Gate completeness_check(const std::string& context,
                            const std::vector<KeyRequirement>& required_keys,
                            Strictness strictness) override {
        if (required_keys.empty()) return Gate::COMMIT;
        std::size_t found = 0;
        for (const auto& req : required_keys) {
            if (value_near_cue(context, cues_for_key(req.key), req.kind)) ++found;
        }
        double coverage =
            static_cast<double>(found) / static_cast<double>(required_keys.size());
        return coverage >= strictness_threshold(strictness) ? Gate::COMMIT : Gate::ABSTAIN;
    }

  private:
    struct Found {
        std::string key;
        ValueToken token;
    };

    static std::vector<Found> parse_keys(const std::string& context, Domain domain) {
        std::vector<Found> found;
        for (const auto& req : required_keys_for(domain)) {
            if (auto tok = value_near_cue(context, cues_for_key(req.key), req.kind)) {
                found.push_back({req.key, *tok});
            }
        }
        return found;
    }

    static void render_found(DecisionRecord& r, const std::vector<Found>& found) {
        for (const auto& f : found) {
            r.rationale += " " + label_for_key(f.key) + " " + f.token.surface + ".";
            r.referenced_values[f.key] = f.token.value;
        }
    }

    // Fixed rule table: approve iff DTI <= 43% and score >= 660 and no
    // unresolved-condition marker. Missing facts fall back to defaults; the
    // resulting misbehavior is exactly what FRP and CRR exist to detect.
    DecisionRecord decide_loan(const std::string& context) {
        auto found = parse_keys(context, Domain::LOAN);
        std::int64_t dti_bp = 0;
        std::int64_t score = 700;
        for (const auto& f : found) {
            if (f.key == "dti" && f.token.value.kind == Canonical::Kind::Percent) {
                dti_bp = f.token.value.number;
            }
            if (f.key == "fico_score" && f.token.form == ValueToken::Form::Integer) {
                score = std::stoll(f.token.surface);
            }
        }
        bool unresolved = contains_ci(context, "UNRESOLVED CONDITION");
        bool approve = dti_bp <= 4300 && score >= 660 && !unresolved;

        DecisionRecord r;
        r.decision = approve ? Decision::APPROVE : Decision::DENY;
        r.rationale = "Loan decision: " + to_string(*r.decision) + ".";
        render_found(r, found);
        if (!approve) {
            std::string notice = "Adverse action notice: the application is denied.";
            if (dti_bp > 4300) {
                notice += " The debt-to-income ratio exceeds the underwriting guideline.";
            }
            if (score < 660) notice += " The credit score is below the underwriting minimum.";
            for (const auto& f : found) {
                if (f.key == "dti" || f.key == "fico_score") {
                    notice += " " + label_for_key(f.key) + " " + f.token.surface + ".";
                }
            }
            for (const auto& provision : find_provisions(context)) {
                if (provision.rfind("Reg B", 0) == 0) {
                    notice += " Cited provision: " + provision + ".";
                }
            }
            r.notice = notice;
        }
        return r;
    }

    // Decision keyed on applied provision markers; otherwise pay in full or in
    // part depending on a withheld-depreciation marker.
    DecisionRecord decide_claim(const std::string& context) {
        auto found = parse_keys(context, Domain::CLAIM);
        auto exclusions = find_applied_exclusions(context);

        DecisionRecord r;
        if (!exclusions.empty()) {
            r.decision = Decision::DENY;
            r.amount_cents = 0;
        } else {
            bool partial = contains_ci(context, "recoverable depreciation");
            r.decision = partial ? Decision::PARTIAL_PAY : Decision::PAY;
            r.amount_cents = 0;
            for (const auto& f : found) {
                if (f.key == "net_payment" && f.token.value.kind == Canonical::Kind::Money) {
                    r.amount_cents = f.token.value.number;
                }
            }
        }
        r.rationale = "Claim decision: " + to_string(*r.decision) + ".";
        render_found(r, found);
        if (r.decision == Decision::DENY) {
            std::string notice = "Denial letter: the claim is denied in full.";
            for (const auto& provision : exclusions) {
                notice += " Cited provision: " + provision + ".";
            }
            for (const auto& f : found) {
                if (f.key == "repair_estimate" || f.key == "net_payment") {
                    notice += " " + label_for_key(f.key) + " " + f.token.surface + ".";
                }
            }
            r.notice = notice;
        }
        return r;
    }
};

// Reference judge with the phrase threshold tightened from majority to all.
// Used by the judge-split diagnostic as a deterministic second judge.
class AllPhraseJudge : public ReferenceBackend {
  public:
    std::string name() const override { return "reference-all-phrase"; }

    JudgeVerdict judge_entailment(const std::string& rationale,
                                  const ReasoningPoint& point) override {
        std::size_t present = 0;
        for (const auto& phrase : point.evidence_phrases) {
            if (contains_ci(rationale, phrase)) ++present;
        }
        JudgeVerdict v;
        v.entailed = !point.evidence_phrases.empty() && present == point.evidence_phrases.size();
        v.rationale_note = std::to_string(present) + "/" +
                           std::to_string(point.evidence_phrases.size()) + " evidence phrases";
        return v;
    }
};

}  // namespace lhb
