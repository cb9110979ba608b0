#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "lhb/backend.hpp"
#include "lhb/bm25.hpp"
#include "lhb/corpus.hpp"
#include "lhb/textscan.hpp"

namespace lhb {

enum class StrategyId {
    SUMM_ONLY,
    RETR_ONLY,
    TYPED_TOPK,
    TYPED_FULL,
    MISROUTED,
    SAM,
    DPM,
    VM
};

inline std::string to_string(StrategyId id) {
    switch (id) {
        case StrategyId::SUMM_ONLY: return "SUMM_ONLY";
        case StrategyId::RETR_ONLY: return "RETR_ONLY";
        case StrategyId::TYPED_TOPK: return "TYPED_TOPK";
        case StrategyId::TYPED_FULL: return "TYPED_FULL";
        case StrategyId::MISROUTED: return "MISROUTED";
        case StrategyId::SAM: return "SAM";
        case StrategyId::DPM: return "DPM";
        case StrategyId::VM: return "VM";
    }
    return {};
}

inline std::optional<StrategyId> strategy_from_string(const std::string& s) {
    for (int i = 0; i <= static_cast<int>(StrategyId::VM); ++i) {
        if (to_string(static_cast<StrategyId>(i)) == s) return static_cast<StrategyId>(i);
    }
    return std::nullopt;
}

inline const std::vector<StrategyId>& all_strategies() {
    static const std::vector<StrategyId> v = {
        StrategyId::SUMM_ONLY, StrategyId::RETR_ONLY, StrategyId::TYPED_TOPK,
        StrategyId::TYPED_FULL, StrategyId::MISROUTED, StrategyId::SAM,
        StrategyId::DPM,       StrategyId::VM};
    return v;
}

struct StrategyConfig {
    std::size_t k = 5;
    Strictness vm_strictness = Strictness::STRICT;
};

// Fixed per-domain decision-time query.
inline std::string task_query(Domain domain) {
    return domain == Domain::LOAN
               ? "loan qualification decision income credit appraisal rate amount"
               : "claim coverage decision policy estimate deductible payment loss";
}

// Deterministic content-typing rule: value-dense chunks are FACT, chunks
// dominated by discourse markers are REASONING, everything else MIXED.
inline ContentClass classify_chunk(const std::string& text) {
    std::vector<std::string> sentences = split_sentences(text);
    if (sentences.empty()) return ContentClass::MIXED;
    std::size_t values = scan_values(text).size();
    std::size_t marked = 0;
    for (const auto& s : sentences) {
        if (detail::has_discourse_marker(s)) ++marked;
    }
    double value_density = static_cast<double>(values) / static_cast<double>(sentences.size());
    bool marker_dominant = 2 * marked >= sentences.size();
    if (value_density >= 1.0 && !marker_dominant) return ContentClass::FACT;
    if (marker_dominant) return ContentClass::REASONING;
    return ContentClass::MIXED;
}

// One consolidation pathway. An instance is bound to one case; ingestion
// order is semantic and enforced.
class Strategy {
  public:
    Strategy(StrategyId id, BudgetTier budget, Backend& backend, StrategyConfig config)
        : id_(id), budget_(budget), backend_(&backend), config_(config) {}
    virtual ~Strategy() = default;

    StrategyId id() const { return id_; }
    const BudgetTier& budget() const { return budget_; }
    const StrategyConfig& config() const { return config_; }

    void begin_case(const std::string& case_id, std::size_t n_chunks) {
        case_id_ = case_id;
        expected_ = n_chunks;
        ingested_ = 0;
        reset();
    }

    void ingest(const DocumentChunk& chunk) {
        if (static_cast<std::size_t>(chunk.index) != ingested_) {
            throw std::runtime_error("out-of-order ingestion: expected chunk " +
                                     std::to_string(ingested_) + ", got " +
                                     std::to_string(chunk.index));
        }
        do_ingest(chunk);
        ++ingested_;
    }

    std::string decision_view(Domain task) {
        if (ingested_ < expected_) {
            throw std::runtime_error("decision_view before ingestion completes (" +
                                     std::to_string(ingested_) + "/" +
                                     std::to_string(expected_) + ")");
        }
        std::string view = build_view(task);
        if (static_cast<std::int64_t>(view.size()) > budget_.char_budget) {
            view.resize(static_cast<std::size_t>(budget_.char_budget));
        }
        return view;
    }

    const std::string& case_id() const { return case_id_; }

  protected:
    virtual void reset() = 0;
    virtual void do_ingest(const DocumentChunk& chunk) = 0;
    virtual std::string build_view(Domain task) = 0;

    Backend& backend() { return *backend_; }
    std::int64_t char_budget() const { return budget_.char_budget; }
    std::size_t k() const { return config_.k; }

  private:
    StrategyId id_;
    BudgetTier budget_;
    Backend* backend_;
    StrategyConfig config_;
    std::string case_id_;
    std::size_t expected_ = 0;
    std::size_t ingested_ = 0;
};

class SummOnlyStrategy : public Strategy {
  public:
    using Strategy::Strategy;

    const std::string& summary() const { return summary_; }

  protected:
    void reset() override { summary_.clear(); }

    void do_ingest(const DocumentChunk& chunk) override {
        summary_ = backend().summarize(summary_, chunk.text, char_budget());
    }

    std::string build_view(Domain) override { return summary_; }

  private:
    std::string summary_;
};

class RetrOnlyStrategy : public Strategy {
  public:
    using Strategy::Strategy;

  protected:
    void reset() override {
        chunks_.clear();
        index_ = Bm25Index();
    }

    void do_ingest(const DocumentChunk& chunk) override {
        index_.add_document(chunk.index, chunk.text);
        chunks_.push_back(chunk.text);
    }

    // Top-k raw chunks; no paraphrase, so every loss is an omission.
    std::string build_view(Domain task) override {
        std::vector<std::string> query = tokenize_terms(task_query(task));
        std::string out;
        for (int doc_id : index_.top_k(query, k())) {
            const std::string& text = chunks_[static_cast<std::size_t>(doc_id)];
            std::int64_t cost =
                static_cast<std::int64_t>(text.size()) + (out.empty() ? 0 : 1);
            if (static_cast<std::int64_t>(out.size()) + cost > char_budget()) continue;
            if (!out.empty()) out += '\n';
            out += text;
        }
        return out;
    }

  private:
    std::vector<std::string> chunks_;
    Bm25Index index_;
};

// Typed routing: classifier sends chunks to an append-only fact store or a
// reasoning summarizer. `swap_routes` turns it into the misrouted ablation;
// the two share this code bit-for-bit apart from the swap.
class TypedStrategy : public Strategy {
  public:
    TypedStrategy(StrategyId id, BudgetTier budget, Backend& backend, StrategyConfig config,
                  bool full_store_at_decision, bool swap_routes)
        : Strategy(id, budget, backend, config),
          full_store_(full_store_at_decision),
          swap_routes_(swap_routes) {}

    const std::vector<std::string>& fact_store() const { return facts_; }
    const std::string& reasoning_summary() const { return reasoning_summary_; }

  protected:
    void reset() override {
        facts_.clear();
        index_ = Bm25Index();
        reasoning_summary_.clear();
    }

    void do_ingest(const DocumentChunk& chunk) override {
        ContentClass cls = classify_chunk(chunk.text);
        bool to_store = cls == ContentClass::FACT || cls == ContentClass::MIXED;
        bool to_summary = cls == ContentClass::REASONING || cls == ContentClass::MIXED;
        if (swap_routes_) std::swap(to_store, to_summary);
        if (to_store) {
            index_.add_document(static_cast<int>(facts_.size()), chunk.text);
            facts_.push_back(chunk.text);
        }
        if (to_summary) {
            reasoning_summary_ =
                backend().summarize(reasoning_summary_, chunk.text, char_budget() / 2);
        }
    }

    std::string build_view(Domain task) override {
        std::int64_t store_budget =
            char_budget() - static_cast<std::int64_t>(reasoning_summary_.size()) -
            (reasoning_summary_.empty() ? 0 : 1);
        std::string store_part;
        if (full_store_) {
            // Over budget the oldest entries are dropped first.
            std::vector<std::string> kept;
            std::int64_t used = 0;
            for (auto it = facts_.rbegin(); it != facts_.rend(); ++it) {
                std::int64_t cost =
                    static_cast<std::int64_t>(it->size()) + (kept.empty() ? 0 : 1);
                if (used + cost > store_budget) break;
                kept.push_back(*it);
                used += cost;
            }
            for (auto it = kept.rbegin(); it != kept.rend(); ++it) {
                if (!store_part.empty()) store_part += '\n';
                store_part += *it;
            }
        } else {
            std::vector<std::string> query = tokenize_terms(task_query(task));
            for (int doc_id : index_.top_k(query, k())) {
                const std::string& text = facts_[static_cast<std::size_t>(doc_id)];
                std::int64_t cost =
                    static_cast<std::int64_t>(text.size()) + (store_part.empty() ? 0 : 1);
                if (static_cast<std::int64_t>(store_part.size()) + cost > store_budget) continue;
                if (!store_part.empty()) store_part += '\n';
                store_part += text;
            }
        }
        if (reasoning_summary_.empty()) return store_part;
        if (store_part.empty()) return reasoning_summary_;
        return store_part + "\n" + reasoning_summary_;
    }

  private:
    bool full_store_;
    bool swap_routes_;
    std::vector<std::string> facts_;
    Bm25Index index_;
    std::string reasoning_summary_;
};

// Schema-anchored store: typed slots serialized as JSON, holistic
// re-synthesis through the summarizer when the serialization overflows.
class SamStrategy : public Strategy {
  public:
    using Strategy::Strategy;

    std::int64_t serialized_size() const {
        return static_cast<std::int64_t>(serialize().size());
    }

    std::string serialize() const {
        nlohmann::ordered_json j;
        nlohmann::ordered_json facts = nlohmann::ordered_json::object();
        for (const auto& [key, surface] : facts_) facts[key] = surface;
        j["facts"] = std::move(facts);
        j["reasoning_chain"] = reasoning_chain_;
        j["pending_questions"] = pending_questions_;
        j["decision_context"] = decision_context_;
        return j.dump();
    }

  protected:
    void reset() override {
        facts_.clear();
        reasoning_chain_.clear();
        pending_questions_.clear();
        decision_context_.clear();
        domain_hint_ = Domain::LOAN;
        domain_set_ = false;
    }

    void do_ingest(const DocumentChunk& chunk) override {
        if (!domain_set_) {
            domain_set_ = true;
            domain_hint_ = chunk.doc_kind == DocKind::POLICY || chunk.doc_kind == DocKind::FNOL ||
                                   chunk.doc_kind == DocKind::ADJUSTER_NOTE ||
                                   chunk.doc_kind == DocKind::ESTIMATE
                               ? Domain::CLAIM
                               : Domain::LOAN;
        }
        absorb(chunk.text);
        std::vector<std::string> sentences = split_sentences(chunk.text);
        if (!sentences.empty()) decision_context_ = sentences.front();
        while (serialized_size() > char_budget()) resynthesize();
    }

    std::string build_view(Domain) override { return serialize(); }

  private:
    void absorb(const std::string& text) {
        for (const auto& req : required_keys_for(domain_hint_)) {
            if (auto tok = value_near_cue(text, cues_for_key(req.key), req.kind)) {
                facts_[req.key] = tok->surface;
            }
        }
        for (const auto& s : split_sentences(text)) {
            if (detail::has_discourse_marker(s)) reasoning_chain_.push_back(s);
            if (contains_ci(s, "pending")) pending_questions_.push_back(s);
        }
    }

    void resynthesize() {
        std::string compressed =
            backend().summarize(serialize(), "", std::max<std::int64_t>(char_budget() * 3 / 4, 16));
        facts_.clear();
        reasoning_chain_.clear();
        pending_questions_.clear();
        decision_context_.clear();
        absorb(compressed);
        // JSON framing overhead can still spill; shed oldest reasoning first.
        while (serialized_size() > char_budget() && !reasoning_chain_.empty()) {
            reasoning_chain_.erase(reasoning_chain_.begin());
        }
        while (serialized_size() > char_budget() && !pending_questions_.empty()) {
            pending_questions_.erase(pending_questions_.begin());
        }
        while (serialized_size() > char_budget() && !facts_.empty()) {
            facts_.erase(facts_.begin());
        }
    }

    std::map<std::string, std::string> facts_;
    std::vector<std::string> reasoning_chain_;
    std::vector<std::string> pending_questions_;
    std::string decision_context_;
    Domain domain_hint_ = Domain::LOAN;
    bool domain_set_ = false;
};

// Append-only event log; the budget applies only at projection time, and the
// projection is a pure function of (log, task, budget).
class DpmStrategy : public Strategy {
  public:
    using Strategy::Strategy;

    const std::vector<std::pair<int, std::string>>& events() const { return events_; }

  protected:
    void reset() override { events_.clear(); }

    void do_ingest(const DocumentChunk& chunk) override {
        events_.push_back({chunk.index, chunk.text});
    }

    std::string build_view(Domain task) override {
        std::string log = "Task: " + task_query(task) + "\n";
        for (const auto& [ordinal, text] : events_) {
            log += text;
            log += '\n';
        }
        return backend().summarize(log, "", char_budget());
    }

  private:
    std::vector<std::pair<int, std::string>> events_;
};

// Summ-only storage plus a decision-time completeness gate.
class VmStrategy : public SummOnlyStrategy {
  public:
    using SummOnlyStrategy::SummOnlyStrategy;

    Strictness strictness() const { return config().vm_strictness; }
};

inline std::unique_ptr<Strategy> make_strategy(StrategyId id, BudgetTier budget, Backend& backend,
                                               StrategyConfig config = {}) {
    bool retrieval_bearing = id == StrategyId::RETR_ONLY || id == StrategyId::TYPED_TOPK ||
                             id == StrategyId::MISROUTED;
    if (retrieval_bearing && config.k < 1) {
        throw std::invalid_argument("k must be >= 1 for retrieval-bearing strategies");
    }
    switch (id) {
        case StrategyId::SUMM_ONLY:
            return std::make_unique<SummOnlyStrategy>(id, budget, backend, config);
        case StrategyId::RETR_ONLY:
            return std::make_unique<RetrOnlyStrategy>(id, budget, backend, config);
        case StrategyId::TYPED_TOPK:
            return std::make_unique<TypedStrategy>(id, budget, backend, config, false, false);
        case StrategyId::TYPED_FULL:
            return std::make_unique<TypedStrategy>(id, budget, backend, config, true, false);
        case StrategyId::MISROUTED:
            return std::make_unique<TypedStrategy>(id, budget, backend, config, false, true);
        case StrategyId::SAM:
            return std::make_unique<SamStrategy>(id, budget, backend, config);
        case StrategyId::DPM:
            return std::make_unique<DpmStrategy>(id, budget, backend, config);
        case StrategyId::VM:
            return std::make_unique<VmStrategy>(id, budget, backend, config);
    }
    throw std::invalid_argument("unknown strategy id");
}

// Completeness gate over the decision view: commit delegates to the decider,
// abstain carries no decision label.
inline DecisionRecord vm_gate(Strategy& strategy, Domain task, Backend& backend) {
    auto* vm = dynamic_cast<VmStrategy*>(&strategy);
    if (vm == nullptr) throw std::invalid_argument("vm_gate requires a VM strategy");
    std::string view = vm->decision_view(task);
    Gate gate = backend.completeness_check(view, required_keys_for(task), vm->strictness());
    if (gate == Gate::COMMIT) {
        DecisionRecord r = backend.decide(view, task);
        r.case_id = vm->case_id();
        return r;
    }
    DecisionRecord r;
    r.case_id = vm->case_id();
    r.committed = false;
    r.rationale = "Flagged for human review: completeness check below the " +
                  to_string(vm->strictness()) + " threshold.";
    return r;
}

}  // namespace lhb
