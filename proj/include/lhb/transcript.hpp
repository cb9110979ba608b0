#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "lhb/backend.hpp"
#include "lhb/record.hpp"
#include "lhb/rng.hpp"

namespace lhb {

inline json record_to_json(const DecisionRecord& r) {
    json j;
    j["case_id"] = r.case_id;
    j["committed"] = r.committed;
    if (r.decision) j["decision"] = to_string(*r.decision);
    else j["decision"] = nullptr;
    if (r.amount_cents) j["amount_cents"] = *r.amount_cents;
    else j["amount_cents"] = nullptr;
    j["rationale"] = r.rationale;
    if (r.notice) j["notice"] = *r.notice;
    else j["notice"] = nullptr;
    json refs = json::object();
    for (const auto& [key, value] : r.referenced_values) refs[key] = to_json(value);
    j["referenced_values"] = std::move(refs);
    return j;
}

inline DecisionRecord record_from_json(const json& j) {
    DecisionRecord r;
    r.case_id = j.at("case_id");
    r.committed = j.at("committed");
    if (!j.at("decision").is_null()) r.decision = decision_from_string(j.at("decision"));
    if (!j.at("amount_cents").is_null()) r.amount_cents = j.at("amount_cents");
    r.rationale = j.at("rationale");
    if (!j.at("notice").is_null()) r.notice = j.at("notice");
    for (const auto& [key, value] : j.at("referenced_values").items()) {
        r.referenced_values[key] = canonical_from_json(value);
    }
    return r;
}

struct TranscriptEntry {
    std::string request_hash;
    json request;
    json response;
};

inline std::string request_hash(const json& request) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(request.dump())));
    return buf;
}

// Wraps any backend and logs every (request, response) pair, keyed by a hash
// of the serialized request. The log replays byte-identically offline.
class RecordingBackend : public Backend {
  public:
    explicit RecordingBackend(Backend& inner) : inner_(&inner) {}

    std::string name() const override { return inner_->name(); }

    const std::vector<TranscriptEntry>& entries() const { return entries_; }

    void save(const std::string& path) const {
        std::ofstream f(path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open for write: " + path);
        // Hash order, not arrival order: the file is byte-stable no matter
        // how many workers recorded into it.
        std::vector<TranscriptEntry> entries = entries_;
        std::stable_sort(entries.begin(), entries.end(),
                         [](const TranscriptEntry& a, const TranscriptEntry& b) {
                             return a.request_hash < b.request_hash;
                         });
        for (const auto& e : entries) {
            json j;
            j["request_hash"] = e.request_hash;
            j["request"] = e.request;
            j["response"] = e.response;
            f << j.dump() << '\n';
        }
    }

    std::string summarize(const std::string& prior_summary, const std::string& new_text,
                          std::int64_t char_budget) override {
        json req;
        req["op"] = "summarize";
        req["prior_summary"] = prior_summary;
        req["new_text"] = new_text;
        req["char_budget"] = char_budget;
        std::string out = inner_->summarize(prior_summary, new_text, char_budget);
        log(req, json(out));
        return out;
    }

    DecisionRecord decide(const std::string& context, Domain task) override {
        json req;
        req["op"] = "decide";
        req["context"] = context;
        req["task"] = to_string(task);
        DecisionRecord r = inner_->decide(context, task);
        log(req, record_to_json(r));
        return r;
    }

    JudgeVerdict judge_entailment(const std::string& rationale,
                                  const ReasoningPoint& point) override {
        json req;
        req["op"] = "judge_entailment";
        req["rationale"] = rationale;
        req["point_id"] = point.id;
        req["statement"] = point.statement;
        req["evidence_phrases"] = point.evidence_phrases;
        JudgeVerdict v = inner_->judge_entailment(rationale, point);
        json resp;
        resp["entailed"] = v.entailed;
        resp["rationale_note"] = v.rationale_note;
        log(req, resp);
        return v;
    }

    bool audit_compliance(const OutputBundle& bundle, const RegulatoryStandard& standard) override {
        json req;
        req["op"] = "audit_compliance";
        req["decision"] = to_string(bundle.decision);
        req["rationale"] = bundle.rationale;
        req["notice"] = bundle.notice;
        req["standard"] = to_string(standard.id);
        req["required_provisions"] = standard.required_provisions;
        bool ok = inner_->audit_compliance(bundle, standard);
        log(req, json(ok));
        return ok;
    }

    Gate completeness_check(const std::string& context,
                            const std::vector<KeyRequirement>& required_keys,
                            Strictness strictness) override {
        json req;
        req["op"] = "completeness_check";
        req["context"] = context;
        json keys = json::array();
        for (const auto& k : required_keys) keys.push_back(k.key);
        req["required_keys"] = std::move(keys);
        req["strictness"] = to_string(strictness);
        Gate g = inner_->completeness_check(context, required_keys, strictness);
        log(req, json(g == Gate::COMMIT ? "COMMIT" : "ABSTAIN"));
        return g;
    }

  private:
    void log(const json& req, json resp) {
        TranscriptEntry e;
        e.request_hash = request_hash(req);
        e.request = req;
        e.response = std::move(resp);
        std::lock_guard<std::mutex> guard(mutex_);
        entries_.push_back(std::move(e));
    }

    Backend* inner_;
    mutable std::mutex mutex_;
    std::vector<TranscriptEntry> entries_;
};

// Serves recorded responses by request hash; never touches the network. A
// request outside the transcript is an error, not a guess.
class ReplayBackend : public Backend {
  public:
    explicit ReplayBackend(const std::string& path) {
        std::ifstream f(path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open transcript: " + path);
        std::string line;
        while (std::getline(f, line)) {
            if (line.empty()) continue;
            json j = json::parse(line);
            responses_[j.at("request_hash")] = j.at("response");
        }
    }

    std::string name() const override { return "replay"; }

    std::string summarize(const std::string& prior_summary, const std::string& new_text,
                          std::int64_t char_budget) override {
        json req;
        req["op"] = "summarize";
        req["prior_summary"] = prior_summary;
        req["new_text"] = new_text;
        req["char_budget"] = char_budget;
        return lookup(req);
    }

    DecisionRecord decide(const std::string& context, Domain task) override {
        json req;
        req["op"] = "decide";
        req["context"] = context;
        req["task"] = to_string(task);
        return record_from_json(lookup(req));
    }

    JudgeVerdict judge_entailment(const std::string& rationale,
                                  const ReasoningPoint& point) override {
        json req;
        req["op"] = "judge_entailment";
        req["rationale"] = rationale;
        req["point_id"] = point.id;
        req["statement"] = point.statement;
        req["evidence_phrases"] = point.evidence_phrases;
        json resp = lookup(req);
        return {resp.at("entailed"), resp.at("rationale_note")};
    }

    bool audit_compliance(const OutputBundle& bundle, const RegulatoryStandard& standard) override {
        json req;
        req["op"] = "audit_compliance";
        req["decision"] = to_string(bundle.decision);
        req["rationale"] = bundle.rationale;
        req["notice"] = bundle.notice;
        req["standard"] = to_string(standard.id);
        req["required_provisions"] = standard.required_provisions;
        return lookup(req);
    }

    Gate completeness_check(const std::string& context,
                            const std::vector<KeyRequirement>& required_keys,
                            Strictness strictness) override {
        json req;
        req["op"] = "completeness_check";
        req["context"] = context;
        json keys = json::array();
        for (const auto& k : required_keys) keys.push_back(k.key);
        req["required_keys"] = std::move(keys);
        req["strictness"] = to_string(strictness);
        return lookup(req) == "COMMIT" ? Gate::COMMIT : Gate::ABSTAIN;
    }

  private:
    json lookup(const json& req) const {
        auto it = responses_.find(request_hash(req));
        if (it == responses_.end()) {
            throw std::runtime_error("transcript miss for op " +
                                     req.at("op").get<std::string>());
        }
        return it->second;
    }

    std::map<std::string, json> responses_;
};

}  // namespace lhb
