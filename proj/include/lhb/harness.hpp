#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "lhb/backend.hpp"
#include "lhb/corpus.hpp"
#include "lhb/memory.hpp"
#include "lhb/metrics.hpp"
#include "lhb/stats.hpp"
#include "lhb/transcript.hpp"

namespace lhb {

constexpr std::size_t kRationalePreviewChars = 220;

struct RunConfig {
    std::string corpus_path;
    std::string corpus_hash;  // recorded at run start
    std::vector<StrategyId> strategies;
    std::vector<Tier> tiers;
    BackendProfile backend;
    std::size_t k = 5;
    std::uint64_t seed = kDefaultSeed;
    std::vector<Strictness> vm_strictness = {Strictness::STRICT};
    std::string output_dir = "out";
    std::size_t workers = 1;  // execution knob only; results do not depend on it
};

inline json to_json(const RunConfig& c) {
    json j;
    j["corpus"] = c.corpus_path;
    j["corpus_hash"] = c.corpus_hash;
    json strategies = json::array();
    for (auto s : c.strategies) strategies.push_back(to_string(s));
    j["strategies"] = std::move(strategies);
    json tiers = json::array();
    for (auto t : c.tiers) tiers.push_back(to_string(t));
    j["tiers"] = std::move(tiers);
    json backend;
    backend["kind"] = c.backend.kind == BackendKind::REFERENCE ? "REFERENCE" : "REMOTE";
    backend["model_id"] = c.backend.model_id;
    backend["temperature"] = c.backend.temperature;
    backend["prompt_dir"] = c.backend.prompt_dir;
    backend["prompt_version"] = c.backend.prompt_version;
    j["backend"] = std::move(backend);
    j["k"] = c.k;
    j["seed"] = c.seed;
    json strictness = json::array();
    for (auto s : c.vm_strictness) strictness.push_back(to_string(s));
    j["vm_strictness"] = std::move(strictness);
    j["output_dir"] = c.output_dir;
    j["workers"] = c.workers;
    return j;
}

inline RunConfig run_config_from_json(const json& j) {
    RunConfig c;
    c.corpus_path = j.value("corpus", "");
    c.corpus_hash = j.value("corpus_hash", "");
    for (const auto& s : j.value("strategies", json::array())) {
        auto id = strategy_from_string(s);
        if (!id) throw std::invalid_argument("unknown strategy: " + s.get<std::string>());
        c.strategies.push_back(*id);
    }
    for (const auto& t : j.value("tiers", json::array())) {
        auto tier = tier_from_string(t);
        if (!tier) throw std::invalid_argument("unknown tier: " + t.get<std::string>());
        c.tiers.push_back(*tier);
    }
    if (j.contains("backend")) {
        const json& b = j["backend"];
        c.backend.kind = b.value("kind", "REFERENCE") == "REMOTE" ? BackendKind::REMOTE
                                                                  : BackendKind::REFERENCE;
        c.backend.model_id = b.value("model_id", "");
        c.backend.temperature = b.value("temperature", 0.0);
        c.backend.prompt_dir = b.value("prompt_dir", "prompts");
        c.backend.prompt_version = b.value("prompt_version", "v1");
    }
    c.k = j.value("k", std::size_t{5});
    c.seed = j.value("seed", kDefaultSeed);
    if (j.contains("vm_strictness")) {
        c.vm_strictness.clear();
        for (const auto& s : j["vm_strictness"]) {
            auto level = strictness_from_string(s);
            if (!level) throw std::invalid_argument("unknown strictness: " + s.get<std::string>());
            c.vm_strictness.push_back(*level);
        }
    }
    c.output_dir = j.value("output_dir", "out");
    c.workers = j.value("workers", std::size_t{1});
    return c;
}

inline RunConfig load_run_config(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open config: " + path);
    return run_config_from_json(json::parse(f));
}

inline std::string config_fingerprint(const RunConfig& c) {
    json j = to_json(c);
    j.erase("workers");  // worker count never changes what a run produces
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(j.dump())));
    return buf;
}

struct ResultRow {
    std::string config_fingerprint;
    std::string case_id;
    StrategyId strategy = StrategyId::SUMM_ONLY;
    Tier tier = Tier::MODERATE;
    bool committed = false;
    std::optional<Decision> decision;
    std::optional<std::int64_t> amount_cents;
    std::optional<double> frp;
    std::optional<double> rcs;
    std::optional<int> eda;
    std::optional<int> crr;
    std::string rationale_preview;  // always prefix(full_rationale, 220)
    std::string full_rationale;
    std::optional<std::string> notice;
    std::string error;  // non-empty iff the backend failed on this case
    std::int64_t view_chars = 0;
    std::int64_t rationale_chars = 0;
    // Wall-clock only; kept out of the canonical serialization so reruns stay
    // byte-identical (written to a separate timing log instead).
    std::int64_t elapsed_us = 0;
};

inline json to_json(const ResultRow& r) {
    json j;
    j["config_fingerprint"] = r.config_fingerprint;
    j["case_id"] = r.case_id;
    j["strategy"] = to_string(r.strategy);
    j["tier"] = to_string(r.tier);
    j["committed"] = r.committed;
    j["decision"] = r.decision ? json(to_string(*r.decision)) : json(nullptr);
    j["amount_cents"] = r.amount_cents ? json(*r.amount_cents) : json(nullptr);
    j["frp"] = r.frp ? json(*r.frp) : json(nullptr);
    j["rcs"] = r.rcs ? json(*r.rcs) : json(nullptr);
    j["eda"] = r.eda ? json(*r.eda) : json(nullptr);
    j["crr"] = r.crr ? json(*r.crr) : json(nullptr);
    j["rationale_preview"] = r.rationale_preview;
    j["full_rationale"] = r.full_rationale;
    j["notice"] = r.notice ? json(*r.notice) : json(nullptr);
    j["error"] = r.error;
    j["view_chars"] = r.view_chars;
    j["rationale_chars"] = r.rationale_chars;
    return j;
}

inline ResultRow result_row_from_json(const json& j) {
    ResultRow r;
    r.config_fingerprint = j.at("config_fingerprint");
    r.case_id = j.at("case_id");
    r.strategy = *strategy_from_string(j.at("strategy"));
    r.tier = *tier_from_string(j.at("tier"));
    r.committed = j.at("committed");
    if (!j.at("decision").is_null()) r.decision = decision_from_string(j.at("decision"));
    if (!j.at("amount_cents").is_null()) r.amount_cents = j.at("amount_cents");
    if (!j.at("frp").is_null()) r.frp = j.at("frp");
    if (!j.at("rcs").is_null()) r.rcs = j.at("rcs");
    if (!j.at("eda").is_null()) r.eda = j.at("eda");
    if (!j.at("crr").is_null()) r.crr = j.at("crr");
    r.rationale_preview = j.at("rationale_preview");
    r.full_rationale = j.at("full_rationale");
    if (!j.at("notice").is_null()) r.notice = j.at("notice");
    r.error = j.at("error");
    r.view_chars = j.at("view_chars");
    r.rationale_chars = j.at("rationale_chars");
    return r;
}

// Runs one (strategy, tier) condition over the corpus: fresh strategy per
// case, in-order ingestion, decision (gated for VM), then axis scoring. A
// transport failure yields a logged error row, never a fabricated score.
inline std::vector<ResultRow> run_condition(const std::vector<Case>& corpus, StrategyId strategy_id,
                                            const BudgetTier& budget, Backend& backend,
                                            const StrategyConfig& strategy_config,
                                            const std::string& fingerprint,
                                            std::size_t workers = 1) {
    auto run_case = [&](const Case& c) {
        auto t0 = std::chrono::steady_clock::now();
        ResultRow row;
        row.config_fingerprint = fingerprint;
        row.case_id = c.case_id;
        row.strategy = strategy_id;
        row.tier = budget.name;
        try {
            auto strategy = make_strategy(strategy_id, budget, backend, strategy_config);
            strategy->begin_case(c.case_id, c.chunks.size());
            for (const auto& chunk : c.chunks) strategy->ingest(chunk);

            DecisionRecord record;
            if (strategy_id == StrategyId::VM) {
                record = vm_gate(*strategy, c.domain, backend);
                row.view_chars = static_cast<std::int64_t>(strategy->decision_view(c.domain).size());
            } else {
                std::string view = strategy->decision_view(c.domain);
                row.view_chars = static_cast<std::int64_t>(view.size());
                record = backend.decide(view, c.domain);
                record.case_id = c.case_id;
            }

            row.committed = record.committed;
            row.decision = record.decision;
            row.amount_cents = record.amount_cents;
            row.full_rationale = record.rationale;
            row.rationale_preview = record.rationale.substr(
                0, std::min(record.rationale.size(), kRationalePreviewChars));
            row.notice = record.notice;
            row.rationale_chars = static_cast<std::int64_t>(record.rationale.size());

            AxisScores axes = score_axes(record, c, backend);
            row.frp = axes.frp;
            row.rcs = axes.rcs;
            row.eda = axes.eda;
            row.crr = axes.crr;
        } catch (const BackendTransportError& e) {
            row.committed = false;
            row.error = e.what();
        }
        row.elapsed_us = std::chrono::duration_cast<std::chrono::microseconds>(
                             std::chrono::steady_clock::now() - t0)
                             .count();
        return row;
    };

    std::vector<ResultRow> rows(corpus.size());
    std::size_t n_workers = std::max<std::size_t>(1, std::min(workers, corpus.size()));
    if (n_workers == 1) {
        for (std::size_t i = 0; i < corpus.size(); ++i) rows[i] = run_case(corpus[i]);
    } else {
        // Case-level parallelism: each slot is written once by one worker,
        // so the sorted output is identical at any worker count.
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < n_workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < corpus.size();
                     i = next.fetch_add(1)) {
                    rows[i] = run_case(corpus[i]);
                }
            });
        }
        for (auto& t : pool) t.join();
    }
    std::sort(rows.begin(), rows.end(),
              [](const ResultRow& a, const ResultRow& b) { return a.case_id < b.case_id; });
    return rows;
}

struct MetricComparison {
    std::string comparison_id;
    MetricKind metric = MetricKind::FRP;
    bool defined = false;  // false when no pair has the metric on both sides
    PairedStats stats;
};

// Paired comparison of two case-matched row sets. Pairs where either side
// lacks a metric (abstention, non-denial CRR, error row) are dropped from
// that metric, so n varies per metric.
inline std::vector<MetricComparison> compare(const std::vector<ResultRow>& rows_a,
                                             const std::vector<ResultRow>& rows_b,
                                             const std::string& comparison_id,
                                             std::uint64_t seed = kDefaultSeed) {
    std::map<std::string, const ResultRow*> by_id_b;
    for (const auto& r : rows_b) by_id_b[r.case_id] = &r;
    if (rows_a.size() != rows_b.size() || by_id_b.size() != rows_b.size()) {
        throw std::invalid_argument("compare: mismatched case sets");
    }
    for (const auto& r : rows_a) {
        if (!by_id_b.count(r.case_id)) {
            throw std::invalid_argument("compare: case " + r.case_id + " missing from B");
        }
    }

    std::uint64_t comparison_seed = seed ^ (fnv1a64(comparison_id) | 1ULL);
    std::vector<MetricComparison> out;
    std::vector<double> family_p;
    for (MetricKind metric : all_metrics()) {
        PairedSample sample;
        for (const auto& ra : rows_a) {
            const ResultRow& rb = *by_id_b.at(ra.case_id);
            auto value = [metric](const ResultRow& r) -> std::optional<double> {
                switch (metric) {
                    case MetricKind::FRP: return r.frp;
                    case MetricKind::RCS: return r.rcs;
                    case MetricKind::EDA:
                        return r.eda ? std::optional<double>(*r.eda) : std::nullopt;
                    case MetricKind::CRR:
                        return r.crr ? std::optional<double>(*r.crr) : std::nullopt;
                }
                return std::nullopt;
            };
            auto va = value(ra);
            auto vb = value(rb);
            if (!va || !vb) continue;
            sample.case_ids.push_back(ra.case_id);
            sample.a_scores.push_back(*va);
            sample.b_scores.push_back(*vb);
        }
        MetricComparison mc;
        mc.comparison_id = comparison_id;
        mc.metric = metric;
        if (!sample.a_scores.empty()) {
            mc.defined = true;
            mc.stats = compute_paired_stats(sample, metric, comparison_seed);
        }
        family_p.push_back(mc.defined ? mc.stats.perm_p : 1.0);
        out.push_back(std::move(mc));
    }
    std::vector<bool> pass = bonferroni_gate(family_p);
    for (std::size_t i = 0; i < out.size(); ++i) out[i].stats.bonferroni_pass = pass[i];
    return out;
}

struct SweepRow {
    std::string label;  // strictness name or "SUMM_ONLY"
    CarReading car;
};

// Runs VM at each strictness plus the Summ-only baseline over the same slice,
// case-matched by construction.
inline std::vector<SweepRow> vm_sweep(const std::vector<Case>& corpus, const BudgetTier& budget,
                                      const std::vector<Strictness>& strictness_levels,
                                      Backend& backend, std::size_t k = 5) {
    if (strictness_levels.empty()) throw std::invalid_argument("strictness list is empty");

    auto run_records = [&](StrategyId id, Strictness strictness) {
        std::vector<DecisionRecord> records;
        std::vector<const GroundTruth*> truths;
        for (const auto& c : corpus) {
            StrategyConfig config;
            config.k = k;
            config.vm_strictness = strictness;
            auto strategy = make_strategy(id, budget, backend, config);
            strategy->begin_case(c.case_id, c.chunks.size());
            for (const auto& chunk : c.chunks) strategy->ingest(chunk);
            DecisionRecord record;
            if (id == StrategyId::VM) {
                record = vm_gate(*strategy, c.domain, backend);
            } else {
                record = backend.decide(strategy->decision_view(c.domain), c.domain);
                record.case_id = c.case_id;
            }
            records.push_back(std::move(record));
            truths.push_back(&c.ground_truth);
        }
        return score_car(records, truths);
    };

    std::vector<SweepRow> rows;
    for (Strictness s : strictness_levels) {
        rows.push_back({to_string(s), run_records(StrategyId::VM, s)});
    }
    rows.push_back({"SUMM_ONLY", run_records(StrategyId::SUMM_ONLY, Strictness::STRICT)});
    return rows;
}

enum class TextTarget { PREVIEW, FULL };

struct JudgeSplitReport {
    std::optional<AgreementReport> rcs;
    std::optional<AgreementReport> crr;
    std::size_t rcs_n = 0;
    std::size_t crr_n = 0;
    std::size_t excluded = 0;  // rows dropped on judge transport failure
};

// Re-scores RCS and CRR per committed row under two judges over the chosen
// text field (FULL by default: previews truncate evidence). When the rows
// span exactly two conditions, agreement is computed on per-case deltas so
// direction_preservation measures the headline comparison.
inline JudgeSplitReport judge_split(const std::vector<Case>& corpus,
                                    const std::vector<ResultRow>& rows, Backend& judge_a,
                                    Backend& judge_b, TextTarget target = TextTarget::FULL) {
    std::map<std::string, const Case*> cases;
    for (const auto& c : corpus) cases[c.case_id] = &c;

    struct Scored {
        std::string case_id;
        std::string condition;
        std::optional<double> rcs_a, rcs_b;
        std::optional<double> crr_a, crr_b;
    };
    std::vector<Scored> scored;
    JudgeSplitReport report;

    for (const auto& row : rows) {
        if (!row.committed) continue;
        auto it = cases.find(row.case_id);
        if (it == cases.end()) throw std::invalid_argument("row case not in corpus: " + row.case_id);
        const Case& c = *it->second;

        DecisionRecord record;
        record.case_id = row.case_id;
        record.committed = true;
        record.decision = row.decision;
        record.amount_cents = row.amount_cents;
        record.rationale = target == TextTarget::FULL ? row.full_rationale : row.rationale_preview;
        record.notice = row.notice;

        Scored s;
        s.case_id = row.case_id;
        s.condition = to_string(row.strategy) + "/" + to_string(row.tier);
        try {
            s.rcs_a = score_rcs(record, c.ground_truth.reasoning, judge_a);
            s.rcs_b = score_rcs(record, c.ground_truth.reasoning, judge_b);
            if (auto v = score_crr(record, c.ground_truth.standard, judge_a)) s.crr_a = *v;
            if (auto v = score_crr(record, c.ground_truth.standard, judge_b)) s.crr_b = *v;
        } catch (const BackendTransportError&) {
            ++report.excluded;
            continue;
        }
        scored.push_back(std::move(s));
    }

    std::set<std::string> conditions;
    for (const auto& s : scored) conditions.insert(s.condition);

    auto collect = [&](auto get_a, auto get_b) {
        std::pair<std::vector<double>, std::vector<double>> v;
        if (conditions.size() == 2) {
            // Per-case deltas between the two conditions, one pair per case.
            std::map<std::string, std::map<std::string, const Scored*>> by_case;
            for (const auto& s : scored) by_case[s.case_id][s.condition] = &s;
            auto first = *conditions.begin();
            auto second = *std::next(conditions.begin());
            for (const auto& [case_id, sides] : by_case) {
                auto f = sides.find(first);
                auto g = sides.find(second);
                if (f == sides.end() || g == sides.end()) continue;
                auto fa = get_a(*f->second), fb = get_b(*f->second);
                auto ga = get_a(*g->second), gb = get_b(*g->second);
                if (!fa || !fb || !ga || !gb) continue;
                v.first.push_back(*fa - *ga);
                v.second.push_back(*fb - *gb);
            }
        } else {
            for (const auto& s : scored) {
                auto a = get_a(s);
                auto b = get_b(s);
                if (!a || !b) continue;
                v.first.push_back(*a);
                v.second.push_back(*b);
            }
        }
        return v;
    };

    auto [rcs_a, rcs_b] = collect([](const Scored& s) { return s.rcs_a; },
                                  [](const Scored& s) { return s.rcs_b; });
    auto [crr_a, crr_b] = collect([](const Scored& s) { return s.crr_a; },
                                  [](const Scored& s) { return s.crr_b; });
    report.rcs_n = rcs_a.size();
    report.crr_n = crr_a.size();
    if (rcs_a.size() >= 2) report.rcs = judge_agreement(rcs_a, rcs_b);
    if (crr_a.size() >= 2) report.crr = judge_agreement(crr_a, crr_b);
    return report;
}

// ---- persistence ------------------------------------------------------------

inline void write_rows(const std::vector<ResultRow>& rows, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for write: " + path);
    for (const auto& r : rows) f << to_json(r).dump() << '\n';
}

inline std::vector<ResultRow> load_rows(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open results: " + path);
    std::vector<ResultRow> rows;
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        rows.push_back(result_row_from_json(json::parse(line)));
    }
    return rows;
}

inline void write_timing_log(const std::vector<ResultRow>& rows, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for write: " + path);
    for (const auto& r : rows) {
        f << r.case_id << '\t' << to_string(r.strategy) << '\t' << to_string(r.tier) << '\t'
          << r.elapsed_us << "us\n";
    }
}

inline json stats_record(const MetricComparison& mc, const json& provenance) {
    json j;
    j["comparison_id"] = mc.comparison_id;
    j["metric"] = to_string(mc.metric);
    j["defined"] = mc.defined;
    j["mean_diff"] = mc.stats.mean_diff;
    j["ci_lo"] = mc.stats.ci_lo;
    j["ci_hi"] = mc.stats.ci_hi;
    j["perm_p"] = mc.stats.perm_p;
    j["mcnemar_p"] = mc.stats.mcnemar_p;
    j["cohens_h"] = mc.stats.cohens_h;
    j["n"] = mc.stats.n;
    j["seed"] = mc.stats.seed;
    j["bonferroni_pass"] = mc.stats.bonferroni_pass;
    j["provenance"] = provenance;
    return j;
}

inline void write_stats(const std::vector<MetricComparison>& comparisons, const json& provenance,
                        const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for write: " + path);
    for (const auto& mc : comparisons) f << stats_record(mc, provenance).dump() << '\n';
}

// Full grid run: every configured strategy at every configured tier, one
// results file, statistics strictly afterwards.
inline std::vector<ResultRow> run_all(const std::vector<Case>& corpus, const RunConfig& config,
                                      Backend& backend) {
    std::string fingerprint = config_fingerprint(config);
    std::vector<ResultRow> all_rows;
    for (Tier tier : config.tiers) {
        BudgetTier budget = budget_for(tier, corpus);
        for (StrategyId id : config.strategies) {
            StrategyConfig sc;
            sc.k = config.k;
            sc.vm_strictness = config.vm_strictness.empty() ? Strictness::STRICT
                                                            : config.vm_strictness.front();
            auto rows = run_condition(corpus, id, budget, backend, sc, fingerprint,
                                      config.workers);
            for (auto& r : rows) all_rows.push_back(std::move(r));
        }
    }
    return all_rows;
}

// ---- reporting --------------------------------------------------------------

namespace detail {

inline std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

}  // namespace detail

struct ConditionMean {
    std::string strategy;
    std::string tier;
    std::size_t rows = 0;
    double commit_rate = 0.0;
    std::optional<double> frp, rcs, eda, crr;
};

inline std::vector<ConditionMean> condition_means(const std::vector<ResultRow>& rows) {
    std::map<std::pair<std::string, std::string>, std::vector<const ResultRow*>> groups;
    for (const auto& r : rows) {
        groups[{to_string(r.strategy), to_string(r.tier)}].push_back(&r);
    }
    std::vector<ConditionMean> out;
    for (const auto& [key, members] : groups) {
        ConditionMean m;
        m.strategy = key.first;
        m.tier = key.second;
        m.rows = members.size();
        std::size_t commits = 0;
        auto mean_opt = [&members](auto getter) -> std::optional<double> {
            double sum = 0.0;
            std::size_t n = 0;
            for (const auto* r : members) {
                if (auto v = getter(*r)) {
                    sum += *v;
                    ++n;
                }
            }
            if (n == 0) return std::nullopt;
            return sum / static_cast<double>(n);
        };
        for (const auto* r : members) {
            if (r->committed) ++commits;
        }
        m.commit_rate = static_cast<double>(commits) / static_cast<double>(members.size());
        m.frp = mean_opt([](const ResultRow& r) { return r.frp; });
        m.rcs = mean_opt([](const ResultRow& r) { return r.rcs; });
        m.eda = mean_opt([](const ResultRow& r) {
            return r.eda ? std::optional<double>(*r.eda) : std::nullopt;
        });
        m.crr = mean_opt([](const ResultRow& r) {
            return r.crr ? std::optional<double>(*r.crr) : std::nullopt;
        });
        out.push_back(std::move(m));
    }
    return out;
}

struct GateRow {
    std::string metric;
    double candidate = 0.0;
    double baseline = 0.0;
    double delta = 0.0;
    double slack = 0.0;
    GateOutcome outcome = GateOutcome::FAIL;
};

inline std::vector<GateRow> gate_table(const std::map<std::string, double>& candidate_means,
                                       const std::map<std::string, double>& baseline_means,
                                       double slack) {
    auto outcomes = gate_check(candidate_means, baseline_means, slack);
    std::vector<GateRow> rows;
    for (const auto& [metric, cand] : candidate_means) {
        GateRow g;
        g.metric = metric;
        g.candidate = cand;
        g.baseline = baseline_means.at(metric);
        g.delta = cand - g.baseline;
        g.slack = slack;
        g.outcome = outcomes.at(metric);
        rows.push_back(std::move(g));
    }
    return rows;
}

// Emits the tabular artifacts behind the summary tables and plots: condition
// means, per-comparison statistics, CAR sweeps, and gate outcomes, all as
// tab-delimited text. Returns a short human-readable digest.
inline std::string report(const std::string& results_dir) {
    namespace fs = std::filesystem;
    fs::path dir(results_dir);
    fs::path results_path = dir / "results.jsonl";
    if (!fs::exists(results_path)) {
        throw std::runtime_error("no results.jsonl in " + results_dir);
    }
    std::vector<ResultRow> rows = load_rows(results_path.string());
    if (rows.empty()) throw std::runtime_error("empty results in " + results_dir);

    std::ostringstream digest;
    {
        std::ofstream f(dir / "condition_means.tsv");
        f << "strategy\ttier\trows\tcommit_rate\tFRP\tRCS\tEDA\tCRR\n";
        auto cell = [](const std::optional<double>& v) {
            return v ? detail::fmt(*v) : std::string("NA");
        };
        for (const auto& m : condition_means(rows)) {
            f << m.strategy << '\t' << m.tier << '\t' << m.rows << '\t'
              << detail::fmt(m.commit_rate) << '\t' << cell(m.frp) << '\t' << cell(m.rcs) << '\t'
              << cell(m.eda) << '\t' << cell(m.crr) << '\n';
        }
    }
    digest << rows.size() << " rows across " << condition_means(rows).size() << " conditions\n";

    fs::path stats_path = dir / "stats.jsonl";
    if (fs::exists(stats_path)) {
        std::ifstream in(stats_path);
        std::ofstream f(dir / "stats.tsv");
        f << "comparison\tmetric\tn\tmean_diff\tci_lo\tci_hi\tperm_p\tmcnemar_p\tcohens_h\t"
             "bonferroni\n";
        std::string line;
        std::size_t n = 0;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            json j = json::parse(line);
            f << j.at("comparison_id").get<std::string>() << '\t'
              << j.at("metric").get<std::string>() << '\t' << j.at("n").get<std::size_t>() << '\t'
              << detail::fmt(j.at("mean_diff")) << '\t' << detail::fmt(j.at("ci_lo")) << '\t'
              << detail::fmt(j.at("ci_hi")) << '\t' << detail::fmt(j.at("perm_p")) << '\t'
              << detail::fmt(j.at("mcnemar_p")) << '\t' << detail::fmt(j.at("cohens_h")) << '\t'
              << (j.at("bonferroni_pass").get<bool>() ? "pass" : "fail") << '\n';
            ++n;
        }
        digest << n << " comparison statistics\n";
    }

    fs::path sweep_path = dir / "sweep.jsonl";
    if (fs::exists(sweep_path)) {
        std::ifstream in(sweep_path);
        std::ofstream f(dir / "car.tsv");
        f << "condition\tn\tcommit_rate\tcond_accuracy\tcommit_all_acc\n";
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            json j = json::parse(line);
            f << j.at("label").get<std::string>() << '\t' << j.at("n").get<std::size_t>() << '\t'
              << detail::fmt(j.at("commit_rate"));
            if (j.at("cond_accuracy").is_null()) f << "\tNA";
            else f << '\t' << detail::fmt(j.at("cond_accuracy"));
            f << '\t' << detail::fmt(j.at("commit_all_acc")) << '\n';
        }
        digest << "CAR sweep table written\n";
    }

    fs::path gate_path = dir / "gate.jsonl";
    if (fs::exists(gate_path)) {
        std::ifstream in(gate_path);
        std::ofstream f(dir / "gate.tsv");
        f << "metric\tcandidate\tbaseline\tdelta\tslack\toutcome\n";
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            json j = json::parse(line);
            f << j.at("metric").get<std::string>() << '\t' << detail::fmt(j.at("candidate"))
              << '\t' << detail::fmt(j.at("baseline")) << '\t' << detail::fmt(j.at("delta"))
              << '\t' << detail::fmt(j.at("slack")) << '\t' << j.at("outcome").get<std::string>()
              << '\n';
        }
        digest << "gate table written\n";
    }
    return digest.str();
}

inline void write_sweep(const std::vector<SweepRow>& rows, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for write: " + path);
    for (const auto& r : rows) {
        json j;
        j["label"] = r.label;
        j["n"] = r.car.n;
        j["commits"] = r.car.commits;
        j["correct"] = r.car.correct;
        j["abstentions"] = r.car.abstentions;
        j["commit_rate"] = r.car.commit_rate;
        j["cond_accuracy"] = r.car.cond_accuracy ? json(*r.car.cond_accuracy) : json(nullptr);
        j["commit_all_acc"] = r.car.commit_all_acc;
        f << j.dump() << '\n';
    }
}

inline void write_gate(const std::vector<GateRow>& rows, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for write: " + path);
    for (const auto& g : rows) {
        json j;
        j["metric"] = g.metric;
        j["candidate"] = g.candidate;
        j["baseline"] = g.baseline;
        j["delta"] = g.delta;
        j["slack"] = g.slack;
        j["outcome"] = to_string(g.outcome);
        f << j.dump() << '\n';
    }
}

}  // namespace lhb
