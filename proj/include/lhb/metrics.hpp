#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lhb/backend.hpp"
#include "lhb/corpus.hpp"
#include "lhb/record.hpp"
#include "lhb/textscan.hpp"

namespace lhb {

// Per-case axis readings. Abstained records carry no committed-axis scores;
// crr is nullopt when the standard does not apply (non-denial ground truth)
// or the record abstained.
struct AxisScores {
    std::optional<double> frp;
    std::optional<double> rcs;
    std::optional<int> eda;
    std::optional<int> crr;
    bool committed = true;
};

struct CarReading {
    double commit_rate = 0.0;
    std::optional<double> cond_accuracy;  // undefined when nothing committed
    double commit_all_acc = 0.0;
    std::size_t n = 0;
    std::size_t commits = 0;
    std::size_t correct = 0;
    std::size_t abstentions = 0;
};

// Scans rationale + notice for a value of each key's kind within a window of
// the key's lexical cues. A missing key is ABSENT (omission); a present but
// different value stays as extracted (distortion).
inline std::map<std::string, std::optional<Canonical>> extract_referenced_values(
    const DecisionRecord& record, const std::vector<FactAnchor>& keys) {
    std::string text = record.rationale;
    if (record.notice) {
        text += '\n';
        text += *record.notice;
    }
    std::map<std::string, std::optional<Canonical>> out;
    for (const auto& anchor : keys) {
        auto tok = value_near_cue(text, cues_for_key(anchor.key), anchor.value.kind);
        out[anchor.key] = tok ? std::optional<Canonical>(tok->value) : std::nullopt;
    }
    return out;
}

// Mean of exact canonical-equality indicators; paraphrase and omission both
// score zero per anchor.
inline double score_frp(const DecisionRecord& record, const std::vector<FactAnchor>& facts) {
    if (!record.committed) throw std::invalid_argument("FRP undefined on abstention");
    if (facts.empty()) throw std::invalid_argument("FRP requires at least one anchor");
    auto extracted = extract_referenced_values(record, facts);
    std::size_t hits = 0;
    for (const auto& anchor : facts) {
        const auto& got = extracted.at(anchor.key);
        if (got && *got == anchor.value) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(facts.size());
}

inline double score_rcs(const DecisionRecord& record, const std::vector<ReasoningPoint>& points,
                        Backend& judge) {
    if (!record.committed) throw std::invalid_argument("RCS undefined on abstention");
    if (points.empty()) throw std::invalid_argument("RCS requires at least one reasoning point");
    std::size_t entailed = 0;
    for (const auto& point : points) {
        if (judge.judge_entailment(record.rationale, point).entailed) ++entailed;
    }
    return static_cast<double>(entailed) / static_cast<double>(points.size());
}

// Exact decision-label match; PARTIAL_PAY additionally requires exact
// canonical amount equality.
inline int score_eda(const DecisionRecord& record, const GroundTruth& truth) {
    if (!record.committed) throw std::invalid_argument("EDA undefined on abstention");
    if (!record.decision || *record.decision != truth.decision) return 0;
    if (truth.decision == Decision::PARTIAL_PAY) {
        if (!record.amount_cents || !truth.amount_cents ||
            *record.amount_cents != *truth.amount_cents) {
            return 0;
        }
    }
    return 1;
}

// Denial-class ground truth: blinded auditor verdict on the output bundle.
// Non-denial ground truth: not applicable (nullopt). An agent that failed to
// deny a denial case produced no auditable notice and scores zero.
inline std::optional<int> score_crr(const DecisionRecord& record,
                                    const RegulatoryStandard& standard, Backend& auditor) {
    bool standard_applies = !standard.required_provisions.empty();
    if (!record.committed || !standard_applies) return std::nullopt;
    if (!record.decision || !is_denial(*record.decision)) return 0;
    OutputBundle bundle{*record.decision, record.rationale, record.notice.value_or("")};
    return auditor.audit_compliance(bundle, standard) ? 1 : 0;
}

inline AxisScores score_axes(const DecisionRecord& record, const Case& c, Backend& backend) {
    AxisScores s;
    s.committed = record.committed;
    if (!record.committed) return s;
    s.frp = score_frp(record, c.ground_truth.facts);
    s.rcs = score_rcs(record, c.ground_truth.reasoning, backend);
    s.eda = score_eda(record, c.ground_truth);
    s.crr = score_crr(record, c.ground_truth.standard, backend);
    return s;
}

// Secondary all-case CRR aggregate: non-denial cases count as trivially
// compliant 1.0. The primary aggregate averages over denial cases only.
struct CrrAggregates {
    std::optional<double> denial_only;
    std::optional<double> all_case;
};

inline CrrAggregates aggregate_crr(const std::vector<AxisScores>& scores) {
    std::size_t denial_n = 0, denial_hits = 0, all_n = 0, all_hits = 0;
    for (const auto& s : scores) {
        if (!s.committed) continue;
        ++all_n;
        if (s.crr) {
            ++denial_n;
            denial_hits += static_cast<std::size_t>(*s.crr);
            all_hits += static_cast<std::size_t>(*s.crr);
        } else {
            ++all_hits;  // approval trivially compliant
        }
    }
    CrrAggregates agg;
    if (denial_n > 0) {
        agg.denial_only = static_cast<double>(denial_hits) / static_cast<double>(denial_n);
    }
    if (all_n > 0) agg.all_case = static_cast<double>(all_hits) / static_cast<double>(all_n);
    return agg;
}

inline CarReading score_car(const std::vector<DecisionRecord>& records,
                            const std::vector<const GroundTruth*>& truths) {
    if (records.empty() || records.size() != truths.size()) {
        throw std::invalid_argument("score_car requires n >= 1 case-aligned records");
    }
    CarReading r;
    r.n = records.size();
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (!records[i].committed) continue;
        ++r.commits;
        r.correct += static_cast<std::size_t>(score_eda(records[i], *truths[i]));
    }
    r.abstentions = r.n - r.commits;
    r.commit_rate = static_cast<double>(r.commits) / static_cast<double>(r.n);
    if (r.commits > 0) {
        r.cond_accuracy = static_cast<double>(r.correct) / static_cast<double>(r.commits);
        // Defined as the product so the CAR identity holds exactly.
        r.commit_all_acc = r.commit_rate * *r.cond_accuracy;
    } else {
        r.commit_all_acc = 0.0;
    }
    return r;
}

}  // namespace lhb
