#pragma once

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "lhb/backend.hpp"
#include "lhb/record.hpp"

namespace lhb {

namespace detail {

inline std::string load_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open prompt asset: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

inline std::string replace_all(std::string text, const std::string& from, const std::string& to) {
    std::size_t pos = 0;
    while ((pos = text.find(from, pos)) != std::string::npos) {
        text.replace(pos, from.size(), to);
        pos += to.size();
    }
    return text;
}

// Models often fence JSON replies; strip the fence before parsing.
inline std::string strip_code_fence(const std::string& text) {
    std::string s = trim(text);
    if (s.rfind("```", 0) == 0) {
        std::size_t first_nl = s.find('\n');
        std::size_t last_fence = s.rfind("```");
        if (first_nl != std::string::npos && last_fence > first_nl) {
            return trim(s.substr(first_nl + 1, last_fence - first_nl - 1));
        }
    }
    return s;
}

}  // namespace detail

// Chat-completion client implementing the same operation contracts as the
// reference backend. Endpoint and key come from the environment, never from
// config files; judge and auditor calls are pinned to temperature 0.
class RemoteBackend : public Backend {
  public:
    explicit RemoteBackend(BackendProfile profile) : profile_(std::move(profile)) {
        const char* endpoint = std::getenv(profile_.endpoint_env.c_str());
        if (endpoint == nullptr || *endpoint == '\0') {
            throw std::runtime_error("environment variable " + profile_.endpoint_env + " not set");
        }
        endpoint_ = endpoint;
        const char* key = std::getenv(profile_.api_key_env.c_str());
        if (key != nullptr) api_key_ = key;
    }

    std::string name() const override { return "remote:" + profile_.model_id; }

    std::string summarize(const std::string& prior_summary, const std::string& new_text,
                          std::int64_t char_budget) override {
        if (char_budget <= 0) throw std::invalid_argument("char_budget must be positive");
        std::string prompt = prompt_for("summarizer");
        prompt = detail::replace_all(prompt, "{{PRIOR}}", prior_summary);
        prompt = detail::replace_all(prompt, "{{NEW}}", new_text);
        prompt = detail::replace_all(prompt, "{{BUDGET}}", std::to_string(char_budget));
        std::string out = chat(prompt, profile_.temperature);
        // The budget is a hard contract regardless of model cooperation.
        if (static_cast<std::int64_t>(out.size()) > char_budget) {
            out.resize(static_cast<std::size_t>(char_budget));
        }
        return out;
    }

    DecisionRecord decide(const std::string& context, Domain task) override {
        std::string prompt = prompt_for("decider");
        prompt = detail::replace_all(prompt, "{{CONTEXT}}", context);
        prompt = detail::replace_all(prompt, "{{TASK}}", to_string(task));
        std::string reply = chat(prompt, profile_.temperature);
        nlohmann::ordered_json j;
        try {
            j = nlohmann::ordered_json::parse(detail::strip_code_fence(reply));
        } catch (const nlohmann::json::exception&) {
            throw BackendTransportError("unparseable decider reply");
        }
        DecisionRecord r;
        auto decision = decision_from_string(j.value("decision", ""));
        if (!decision) throw BackendTransportError("decider reply missing decision label");
        r.decision = decision;
        if (j.contains("amount_cents") && !j["amount_cents"].is_null()) {
            r.amount_cents = j["amount_cents"].get<std::int64_t>();
        }
        r.rationale = j.value("rationale", "");
        if (j.contains("notice") && !j["notice"].is_null()) {
            r.notice = j["notice"].get<std::string>();
        }
        return r;
    }

    JudgeVerdict judge_entailment(const std::string& rationale,
                                  const ReasoningPoint& point) override {
        std::string prompt = prompt_for("judge");
        prompt = detail::replace_all(prompt, "{{RATIONALE}}", rationale);
        prompt = detail::replace_all(prompt, "{{STATEMENT}}", point.statement);
        std::string reply = chat(prompt, 0.0);
        JudgeVerdict v;
        v.entailed = contains_ci(reply, "YES") && !contains_ci(reply, "NO");
        v.rationale_note = detail::trim(reply);
        return v;
    }

    bool audit_compliance(const OutputBundle& bundle, const RegulatoryStandard& standard) override {
        if (!is_denial(bundle.decision)) throw std::invalid_argument("standard not applicable");
        std::string provisions;
        for (const auto& p : standard.required_provisions) {
            if (!provisions.empty()) provisions += ", ";
            provisions += p;
        }
        std::string prompt = prompt_for("auditor");
        prompt = detail::replace_all(prompt, "{{RATIONALE}}", bundle.rationale);
        prompt = detail::replace_all(prompt, "{{NOTICE}}", bundle.notice);
        prompt = detail::replace_all(prompt, "{{PROVISIONS}}", provisions);
        std::string reply = chat(prompt, 0.0);
        return contains_ci(reply, "COMPLIANT") && !contains_ci(reply, "NON-COMPLIANT") &&
               !contains_ci(reply, "NONCOMPLIANT");
    }

    Gate completeness_check(const std::string& context,
                            const std::vector<KeyRequirement>& required_keys,
                            Strictness strictness) override {
        std::string keys;
        for (const auto& k : required_keys) {
            if (!keys.empty()) keys += ", ";
            keys += k.key;
        }
        std::string prompt = prompt_for("completeness");
        prompt = detail::replace_all(prompt, "{{CONTEXT}}", context);
        prompt = detail::replace_all(prompt, "{{KEYS}}", keys);
        prompt = detail::replace_all(prompt, "{{STRICTNESS}}", to_string(strictness));
        std::string reply = chat(prompt, 0.0);
        return contains_ci(reply, "COMMIT") ? Gate::COMMIT : Gate::ABSTAIN;
    }

  private:
    std::string prompt_for(const std::string& role) const {
        return detail::load_text_file(profile_.prompt_dir + "/" + role + "_" +
                                      profile_.prompt_version + ".txt");
    }

    std::string chat(const std::string& prompt, double temperature) {
        nlohmann::ordered_json body;
        body["model"] = profile_.model_id;
        body["temperature"] = temperature;
        body["messages"] = nlohmann::ordered_json::array(
            {nlohmann::ordered_json{{"role", "user"}, {"content", prompt}}});
        std::string payload = body.dump();

        httplib::Client client(endpoint_);
        client.set_read_timeout(120, 0);
        httplib::Headers headers;
        if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);

        std::string last_error;
        for (int attempt = 0; attempt < 3; ++attempt) {
            if (attempt > 0) {
                std::this_thread::sleep_for(std::chrono::milliseconds(250 << attempt));
            }
            auto res = client.Post("/v1/chat/completions", headers, payload, "application/json");
            if (!res) {
                last_error = "transport error: " + httplib::to_string(res.error());
                continue;
            }
            if (res->status == 429 || res->status >= 500) {
                last_error = "HTTP " + std::to_string(res->status);
                continue;
            }
            if (res->status != 200) {
                throw BackendTransportError("HTTP " + std::to_string(res->status) + ": " +
                                            res->body);
            }
            try {
                auto j = nlohmann::ordered_json::parse(res->body);
                return j.at("choices").at(0).at("message").at("content").get<std::string>();
            } catch (const nlohmann::json::exception&) {
                last_error = "malformed completion body";
            }
        }
        throw BackendTransportError("chat failed after retries: " + last_error);
    }

    BackendProfile profile_;
    std::string endpoint_;
    std::string api_key_;
};

}  // namespace lhb
